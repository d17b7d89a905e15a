"""Training objective: cross-entropy loss plus a two-part weight penalty.

The objective minimized during training is

    theta = F + P

where F is the summed cross-entropy of the logistic outputs over the batch
and P combines a saturating term  eps1 * beta*w^2 / (1 + beta*w^2)  with a
quadratic term  eps2 * w^2  over every connection.  The saturating term
pulls small weights toward zero while leaving large weights nearly alone,
which is what makes magnitude-based weight elimination effective after
training.

Analytic gradients are provided together with a central finite-difference
checker that serves as an independent oracle for them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, ShapeError
from .network import Network, forward_batch

# Outputs are clamped to [LOG_CLAMP, 1 - LOG_CLAMP] before taking logs so the
# loss stays finite at saturated outputs.
LOG_CLAMP = 1e-12


@dataclass(frozen=True)
class PenaltyParams:
    """Strengths of the two penalty terms and the saturation scale."""

    eps1: float = 0.1
    eps2: float = 1e-5
    beta: float = 10.0

    def __post_init__(self) -> None:
        if self.eps1 < 0 or self.eps2 < 0:
            raise ConfigurationError("eps1 and eps2 must be >= 0")
        if not self.beta > 0:
            raise ConfigurationError(f"beta must be > 0, got {self.beta}")


@dataclass
class Gradients:
    """Gradient of the objective wrt every weight; masked entries are 0.0."""

    d_w: np.ndarray  # [h, n]
    d_v: np.ndarray  # [o, h]


def _check_batch(net: Network, inputs: np.ndarray, targets: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    inputs = np.asarray(inputs, dtype=np.float64)
    targets = np.asarray(targets, dtype=np.float64)
    if inputs.ndim != 2 or inputs.shape[1] != net.n_inputs:
        raise ShapeError(f"inputs shape {inputs.shape}, expected (k, {net.n_inputs})")
    if targets.shape != (inputs.shape[0], net.n_outputs):
        raise ShapeError(
            f"targets shape {targets.shape}, expected ({inputs.shape[0]}, {net.n_outputs})"
        )
    return inputs, targets


def cross_entropy(preds: np.ndarray, targets: np.ndarray) -> float:
    """Summed cross-entropy of predictions in (0,1) against one-hot targets.

    F = -sum_i sum_p [ t*log(S) + (1-t)*log(1-S) ], with S clamped to
    [1e-12, 1-1e-12] before the logs.
    """
    preds = np.asarray(preds, dtype=np.float64)
    targets = np.asarray(targets, dtype=np.float64)
    if preds.shape != targets.shape:
        raise ShapeError(f"preds shape {preds.shape} != targets shape {targets.shape}")
    s = np.clip(preds, LOG_CLAMP, 1.0 - LOG_CLAMP)
    return float(-(targets * np.log(s) + (1.0 - targets) * np.log(1.0 - s)).sum())


def penalty(net: Network, params: PenaltyParams) -> float:
    """Two-part weight penalty over the unmasked connections.

    Masked weights are exactly zero, so both terms vanish for them and the
    sums can run over the dense arrays.
    """
    # non-finite intermediate values are possible for diverged weights and
    # are caught by the trainer's divergence guard; keep the math quiet here
    with np.errstate(over="ignore", invalid="ignore"):
        w2 = net.w ** 2
        v2 = net.v ** 2
        saturating = (params.beta * w2 / (1.0 + params.beta * w2)).sum() + (
            params.beta * v2 / (1.0 + params.beta * v2)
        ).sum()
        quadratic = w2.sum() + v2.sum()
        return float(params.eps1 * saturating + params.eps2 * quadratic)


def objective(
    net: Network,
    inputs: np.ndarray,
    targets: np.ndarray,
    params: PenaltyParams,
) -> float:
    """theta = cross-entropy over the batch + weight penalty."""
    inputs, targets = _check_batch(net, inputs, targets)
    if inputs.shape[0] == 0:
        raise ShapeError("batch must be nonempty")
    _, preds = forward_batch(net, inputs)
    return cross_entropy(preds, targets) + penalty(net, params)


def data_gradients(net: Network, inputs: np.ndarray, targets: np.ndarray) -> Gradients:
    """Gradient of the summed cross-entropy alone, masked entries zeroed."""
    inputs, targets = _check_batch(net, inputs, targets)
    if inputs.shape[0] == 0:
        raise ShapeError("batch must be nonempty")
    hidden, preds = forward_batch(net, inputs)
    d_out = preds - targets                      # dF/d(pre-logistic), [k, o]
    d_v = d_out.T @ hidden                       # [o, h]
    d_hidden = (d_out @ net.v) * (1.0 - hidden ** 2)
    d_w = d_hidden.T @ inputs                    # [h, n]
    d_w[~net.w_mask] = 0.0
    d_v[~net.v_mask] = 0.0
    return Gradients(d_w=d_w, d_v=d_v)


def _penalty_grad(weights: np.ndarray, params: PenaltyParams) -> np.ndarray:
    with np.errstate(over="ignore", invalid="ignore"):
        w2 = weights ** 2
        return (
            params.eps1 * 2.0 * params.beta * weights / (1.0 + params.beta * w2) ** 2
            + 2.0 * params.eps2 * weights
        )


def penalty_gradients(net: Network, params: PenaltyParams) -> Gradients:
    """Gradient of the penalty alone, masked entries zeroed."""
    d_w = _penalty_grad(net.w, params)
    d_v = _penalty_grad(net.v, params)
    d_w[~net.w_mask] = 0.0
    d_v[~net.v_mask] = 0.0
    return Gradients(d_w=d_w, d_v=d_v)


def gradients(
    net: Network,
    inputs: np.ndarray,
    targets: np.ndarray,
    params: PenaltyParams,
) -> Gradients:
    """Analytic gradient of the full objective wrt every unmasked weight."""
    data = data_gradients(net, inputs, targets)
    pen = penalty_gradients(net, params)
    return Gradients(d_w=data.d_w + pen.d_w, d_v=data.d_v + pen.d_v)


def finite_diff_check(
    net: Network,
    inputs: np.ndarray,
    targets: np.ndarray,
    params: PenaltyParams,
    step: float = 1e-6,
) -> float:
    """Worst relative disagreement between analytic and numeric gradients.

    Each unmasked weight is perturbed by +/-step and the central difference
    (theta(w+step) - theta(w-step)) / (2*step) is compared against the
    analytic entry; the relative error uses the denominator
    max(|analytic|, |numeric|, 1e-8).  Returns the maximum over all
    unmasked weights.  Steps around 1e-6 balance truncation against
    rounding; a large step (say 0.5) inflates truncation error and can
    push the reported error past any sensible tolerance.
    """
    if not step > 0:
        raise ConfigurationError(f"step must be > 0, got {step}")
    analytic = gradients(net, inputs, targets, params)
    work = net.copy()
    worst = 0.0
    for matrix, mask, grad in (
        (work.w, work.w_mask, analytic.d_w),
        (work.v, work.v_mask, analytic.d_v),
    ):
        for idx in np.argwhere(mask):
            i, j = idx
            saved = matrix[i, j]
            matrix[i, j] = saved + step
            plus = objective(work, inputs, targets, params)
            matrix[i, j] = saved - step
            minus = objective(work, inputs, targets, params)
            matrix[i, j] = saved
            numeric = (plus - minus) / (2.0 * step)
            a = grad[i, j]
            rel = abs(a - numeric) / max(abs(a), abs(numeric), 1e-8)
            worst = max(worst, rel)
    return worst
