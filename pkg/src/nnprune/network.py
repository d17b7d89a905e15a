"""Masked single-hidden-layer feedforward classifier.

The network maps an input vector x through a tanh hidden layer and a
logistic output layer, with no bias terms on either layer.  Every weight
carries a boolean mask flag; a masked weight is pinned to exactly 0.0 and
stays zero through training and pruning.  Node-level activity flags record
inputs and hidden units whose connections have all been removed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, ParseError, ShapeError


@dataclass(frozen=True)
class NetworkConfig:
    """Architecture and initialization settings for a fresh network."""

    n_inputs: int
    n_hidden: int
    n_outputs: int
    init_range: float = 1.0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n_inputs < 1 or self.n_hidden < 1 or self.n_outputs < 1:
            raise ConfigurationError(
                f"layer sizes must all be >= 1, got "
                f"{self.n_inputs}-{self.n_hidden}-{self.n_outputs}"
            )
        if not self.init_range > 0:
            raise ConfigurationError(f"init_range must be > 0, got {self.init_range}")


@dataclass
class ForwardTrace:
    """Per-example activations kept for backprop and inspection."""

    hidden: np.ndarray  # tanh activations, shape [h], each in (-1, 1)
    output: np.ndarray  # logistic outputs, shape [o], each in (0, 1)


@dataclass
class Network:
    """Weights, masks, and node activity flags of a 1-hidden-layer net.

    ``w[m, l]`` connects input l to hidden unit m; ``v[p, m]`` connects
    hidden unit m to output p.  Invariants:

    * mask false => weight exactly 0.0,
    * ``input_active[l]`` false => column l of ``w_mask`` all false,
    * ``hidden_active[m]`` false => row m of ``w_mask`` and column m of
      ``v_mask`` all false.
    """

    w: np.ndarray              # float64 [h, n]
    v: np.ndarray              # float64 [o, h]
    w_mask: np.ndarray         # bool [h, n]
    v_mask: np.ndarray         # bool [o, h]
    input_active: np.ndarray   # bool [n]
    hidden_active: np.ndarray  # bool [h]

    @property
    def n_inputs(self) -> int:
        return self.w.shape[1]

    @property
    def n_hidden(self) -> int:
        return self.w.shape[0]

    @property
    def n_outputs(self) -> int:
        return self.v.shape[0]

    @property
    def n_active_inputs(self) -> int:
        return int(self.input_active.sum())

    @property
    def n_active_hidden(self) -> int:
        return int(self.hidden_active.sum())

    def architecture(self, active_only: bool = False) -> str:
        if active_only:
            return f"{self.n_active_inputs}-{self.n_active_hidden}-{self.n_outputs}"
        return f"{self.n_inputs}-{self.n_hidden}-{self.n_outputs}"

    def n_unmasked(self) -> int:
        """Number of connections still present (w and v together)."""
        return int(self.w_mask.sum()) + int(self.v_mask.sum())

    def copy(self) -> "Network":
        return Network(
            w=self.w.copy(),
            v=self.v.copy(),
            w_mask=self.w_mask.copy(),
            v_mask=self.v_mask.copy(),
            input_active=self.input_active.copy(),
            hidden_active=self.hidden_active.copy(),
        )

    def apply_masks(self) -> None:
        """Pin masked-out weights back to exactly 0.0."""
        self.w[~self.w_mask] = 0.0
        self.v[~self.v_mask] = 0.0

    def validate(self) -> None:
        """Check shapes and the mask/activity invariants; raise on violation."""
        h, n = self.w.shape
        o, h2 = self.v.shape
        if h2 != h:
            raise ShapeError(f"v has {h2} hidden columns but w has {h} hidden rows")
        if self.w_mask.shape != (h, n) or self.v_mask.shape != (o, h):
            raise ShapeError("mask shapes do not match weight shapes")
        if self.input_active.shape != (n,) or self.hidden_active.shape != (h,):
            raise ShapeError("activity flag shapes do not match the architecture")
        if np.any(self.w[~self.w_mask] != 0.0) or np.any(self.v[~self.v_mask] != 0.0):
            raise ParseError("masked-out weight has a nonzero value")
        dead_in = ~self.input_active
        if np.any(self.w_mask[:, dead_in]):
            raise ParseError("inactive input still has unmasked outgoing weights")
        dead_hid = ~self.hidden_active
        if np.any(self.w_mask[dead_hid, :]) or np.any(self.v_mask[:, dead_hid]):
            raise ParseError("inactive hidden unit still has unmasked weights")


def init_network(config: NetworkConfig) -> Network:
    """Create a fully connected network with uniform random weights.

    Every weight is drawn from [-init_range, +init_range] with a generator
    seeded by ``config.seed``; the draw order (w then v) is fixed, so equal
    configs give bit-identical networks.
    """
    rng = np.random.default_rng(config.seed)
    r = config.init_range
    w = rng.uniform(-r, r, size=(config.n_hidden, config.n_inputs))
    v = rng.uniform(-r, r, size=(config.n_outputs, config.n_hidden))
    return Network(
        w=w,
        v=v,
        w_mask=np.ones(w.shape, dtype=bool),
        v_mask=np.ones(v.shape, dtype=bool),
        input_active=np.ones(config.n_inputs, dtype=bool),
        hidden_active=np.ones(config.n_hidden, dtype=bool),
    )


def logistic(z: np.ndarray) -> np.ndarray:
    """Numerically stable logistic 1 / (1 + exp(-z))."""
    z = np.asarray(z, dtype=np.float64)
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def forward(net: Network, x: np.ndarray) -> ForwardTrace:
    """Run one input vector through the network.

    hidden[m] = tanh(sum_l x[l] * w[m, l]);
    output[p] = logistic(sum_m hidden[m] * v[p, m]).

    Delegates to the batched path so single and batched evaluation are
    bit-identical.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (net.n_inputs,):
        raise ShapeError(f"input has shape {x.shape}, expected ({net.n_inputs},)")
    hidden, output = forward_batch(net, x[np.newaxis, :])
    return ForwardTrace(hidden=hidden[0], output=output[0])


def forward_batch(net: Network, inputs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized forward pass: returns (hidden [k, h], output [k, o])."""
    inputs = np.asarray(inputs, dtype=np.float64)
    if inputs.ndim != 2 or inputs.shape[1] != net.n_inputs:
        raise ShapeError(
            f"batch has shape {inputs.shape}, expected (k, {net.n_inputs})"
        )
    hidden = np.tanh(inputs @ net.w.T)
    output = logistic(hidden @ net.v.T)
    return hidden, output


def classify(net: Network, x: np.ndarray) -> int:
    """Predicted class: index of the largest output, lowest index on ties."""
    return int(np.argmax(forward(net, x).output))


def classify_batch(net: Network, inputs: np.ndarray) -> np.ndarray:
    """Predicted class per row of ``inputs``."""
    _, output = forward_batch(net, inputs)
    return np.argmax(output, axis=1)


def serialize(net: Network) -> str:
    """Encode the network as a JSON document (weights row-major).

    Uses the default repr-based float encoding, so deserialize(serialize(n))
    restores every weight bit-exactly.
    """
    doc = {
        "n": net.n_inputs,
        "h": net.n_hidden,
        "o": net.n_outputs,
        "w": [float(x) for x in net.w.ravel()],
        "v": [float(x) for x in net.v.ravel()],
        "w_mask": [bool(b) for b in net.w_mask.ravel()],
        "v_mask": [bool(b) for b in net.v_mask.ravel()],
        "input_active": [bool(b) for b in net.input_active],
        "hidden_active": [bool(b) for b in net.hidden_active],
    }
    return json.dumps(doc, sort_keys=True)


def _field(doc: dict, key: str, length: int) -> list:
    if key not in doc:
        raise ParseError(f"missing field {key!r}")
    value = doc[key]
    if not isinstance(value, list) or len(value) != length:
        raise ParseError(f"field {key!r} must be a list of length {length}")
    return value


def deserialize(text: str) -> Network:
    """Parse a JSON document produced by :func:`serialize`.

    Rejects malformed documents, dimension mismatches, and invariant
    violations (nonzero masked weights, inconsistent activity flags).
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError("top-level JSON value must be an object")
    try:
        n, h, o = int(doc["n"]), int(doc["h"]), int(doc["o"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError("fields n, h, o must be integers") from exc
    if n < 1 or h < 1 or o < 1:
        raise ParseError(f"layer sizes must all be >= 1, got {n}-{h}-{o}")
    net = Network(
        w=np.array(_field(doc, "w", h * n), dtype=np.float64).reshape(h, n),
        v=np.array(_field(doc, "v", o * h), dtype=np.float64).reshape(o, h),
        w_mask=np.array(_field(doc, "w_mask", h * n), dtype=bool).reshape(h, n),
        v_mask=np.array(_field(doc, "v_mask", o * h), dtype=bool).reshape(o, h),
        input_active=np.array(_field(doc, "input_active", n), dtype=bool),
        hidden_active=np.array(_field(doc, "hidden_active", h), dtype=bool),
    )
    net.validate()
    return net
