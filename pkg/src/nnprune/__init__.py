"""nnprune: train small feedforward classifiers and simplify them.

The package trains one-hidden-layer tanh/logistic networks with a
penalty-regularized cross-entropy objective, removes redundant connections
by magnitude-product weight elimination, prunes dead input and hidden
nodes, and reproduces three classic benchmark experiments end to end.
"""

from .data import (
    CANCER1,
    DIABETES,
    GLASS,
    SPECS,
    DatasetBundle,
    DatasetSpec,
    Split,
    load_bundle,
    load_raw,
    one_hot,
    prepare,
)
from .errors import (
    ConfigurationError,
    DatasetError,
    DivergenceError,
    NoRemovableWeightError,
    ParseError,
    ShapeError,
)
from .harness import (
    ExperimentConfig,
    ExperimentReport,
    export_dot,
    load_config,
    run_experiment,
)
from .network import (
    ForwardTrace,
    Network,
    NetworkConfig,
    classify,
    deserialize,
    forward,
    forward_batch,
    init_network,
    serialize,
)
from .objective import (
    Gradients,
    PenaltyParams,
    cross_entropy,
    finite_diff_check,
    gradients,
    objective,
    penalty,
)
from .pruning import (
    GrowPruneReport,
    PruneParams,
    PruneTrace,
    RemovalEvent,
    condition_candidates,
    eliminate_weights,
    grow_and_prune,
    prune_dead_hidden,
    prune_dead_inputs,
    smallest_product,
)
from .training import TrainParams, TrainRecord, accuracy, retrain, train

__version__ = "0.1.0"

__all__ = [
    "CANCER1",
    "DIABETES",
    "GLASS",
    "SPECS",
    "ConfigurationError",
    "DatasetBundle",
    "DatasetError",
    "DatasetSpec",
    "DivergenceError",
    "ExperimentConfig",
    "ExperimentReport",
    "ForwardTrace",
    "Gradients",
    "GrowPruneReport",
    "Network",
    "NetworkConfig",
    "NoRemovableWeightError",
    "ParseError",
    "PenaltyParams",
    "PruneParams",
    "PruneTrace",
    "RemovalEvent",
    "ShapeError",
    "Split",
    "TrainParams",
    "TrainRecord",
    "accuracy",
    "classify",
    "condition_candidates",
    "cross_entropy",
    "deserialize",
    "eliminate_weights",
    "export_dot",
    "finite_diff_check",
    "forward",
    "forward_batch",
    "gradients",
    "grow_and_prune",
    "init_network",
    "load_bundle",
    "load_config",
    "load_raw",
    "objective",
    "one_hot",
    "penalty",
    "prepare",
    "prune_dead_hidden",
    "prune_dead_inputs",
    "retrain",
    "run_experiment",
    "serialize",
    "smallest_product",
    "train",
]
