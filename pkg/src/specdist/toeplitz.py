"""Brute-force finite-horizon cross-check of the spectral distance.

Stacking ``i+1`` consecutive samples of a stationary process gives a
Gaussian-style vector with a block-Toeplitz covariance built from the
autocovariance sequence.  The per-step squared transport cost between two
such vectors, divided by ``i+1``, converges to the squared spectral
distance as the horizon grows.  This module builds those matrices
explicitly, evaluates the per-step costs with dense eigendecompositions,
and fits the tail of the sequence to estimate its limit.  It is
deliberately naive: no fast Toeplitz algebra, every claim is recomputed
from scratch, so it can serve as an independent check on the spectral
code path.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, FitDegenerateWarning, NotPositiveDefinite
from .hermitian import DEFAULT_POLICY, PsdPolicy, bures_w2_squared, trace_sqrt_product
from .spectra import Autocovariance

__all__ = [
    "BlockToeplitzCovariance",
    "ConvergenceDiagnostic",
    "build_block_toeplitz",
    "convergence_diagnostic",
    "finite_horizon_w2_sq_per_step",
    "trace_sqrt_product_per_step",
]

#: Largest stacked dimension (i+1)*m the dense eigensolvers are asked for.
DENSE_CAP = 4096

#: Default horizon schedule for convergence runs.
DEFAULT_HORIZONS = (16, 32, 64, 128, 256, 512, 1024)


@dataclass(frozen=True)
class BlockToeplitzCovariance:
    """Covariance of ``i+1`` stacked samples; block (r, s) holds ``R(s-r)``."""

    dim: int
    horizon: int
    matrix: np.ndarray
    min_eigenvalue: float


def build_block_toeplitz(
    acov: Autocovariance,
    horizon: int,
    policy: PsdPolicy = DEFAULT_POLICY,
) -> BlockToeplitzCovariance:
    """Assemble and validate the stacked covariance for one horizon.

    Lags beyond the sequence's ``max_lag`` enter as zero blocks, so a
    truncated autocovariance yields the covariance of the truncated
    process.  Definiteness is checked by a full eigendecomposition and the
    minimum eigenvalue is kept on the result.

    Raises
    ------
    DimensionMismatch
        If ``(horizon+1) * dim`` exceeds the dense budget of 4096.
    NotPositiveDefinite
        If the assembled matrix is indefinite beyond the policy band,
        which signals an invalid or over-truncated autocovariance.
    """
    if horizon < 0:
        raise ValueError(f"horizon must be nonnegative, got {horizon}")
    m = acov.dim
    n = horizon + 1
    if n * m > DENSE_CAP:
        raise DimensionMismatch(
            f"stacked dimension {n * m} exceeds the dense budget {DENSE_CAP}"
        )

    # Lay out R(-i..i) in one table, then gather by offset; exact symmetry
    # and block-Toeplitz structure come for free.
    table = np.zeros((2 * horizon + 1, m, m))
    table[horizon] = acov.lags[0]
    for k in range(1, min(acov.max_lag, horizon) + 1):
        table[horizon + k] = acov.lags[k]
        table[horizon - k] = acov.lags[k].T
    offsets = np.arange(n)[None, :] - np.arange(n)[:, None] + horizon
    matrix = table[offsets].transpose(0, 2, 1, 3).reshape(n * m, n * m)

    w = np.linalg.eigvalsh(matrix)
    lo = float(w[0])
    bound = policy.negativity_tol * float(np.max(np.abs(w), initial=0.0))
    if lo < -bound:
        raise NotPositiveDefinite(
            f"stacked covariance at horizon {horizon} has minimum eigenvalue "
            f"{lo:.6e}; the autocovariance is invalid or truncated too hard"
        )
    return BlockToeplitzCovariance(
        dim=m, horizon=horizon, matrix=matrix, min_eigenvalue=lo
    )


def _check_pair(acx: Autocovariance, acy: Autocovariance) -> None:
    if acx.dim != acy.dim:
        raise DimensionMismatch(
            f"autocovariances have different dims: {acx.dim} vs {acy.dim}"
        )


def finite_horizon_w2_sq_per_step(
    acx: Autocovariance,
    acy: Autocovariance,
    horizon: int,
    policy: PsdPolicy = DEFAULT_POLICY,
) -> float:
    """Squared transport cost between the stacked vectors, per step.

    Returns ``bures_w2_squared(Sx, Sy) / (horizon + 1)`` on the two
    block-Toeplitz covariances; the horizon-0 case reduces to the static
    cost on (R_x(0), R_y(0)).
    """
    _check_pair(acx, acy)
    covx = build_block_toeplitz(acx, horizon, policy)
    covy = build_block_toeplitz(acy, horizon, policy)
    if np.array_equal(covx.matrix, covy.matrix):
        return 0.0
    return bures_w2_squared(covx.matrix, covy.matrix, policy) / (horizon + 1)


def trace_sqrt_product_per_step(
    acx: Autocovariance,
    acy: Autocovariance,
    horizon: int,
    policy: PsdPolicy = DEFAULT_POLICY,
    method: str = "sandwich",
) -> float:
    """Coupling trace ``tr[(Sx Sy)^{1/2}] / (horizon + 1)`` on the stacks.

    Both evaluation paths of :func:`~specdist.hermitian.trace_sqrt_product`
    are available; they must agree at every horizon, which the test suite
    checks explicitly.
    """
    _check_pair(acx, acy)
    covx = build_block_toeplitz(acx, horizon, policy)
    covy = build_block_toeplitz(acy, horizon, policy)
    value = trace_sqrt_product(covx.matrix, covy.matrix, policy, method=method)
    return value / (horizon + 1)


@dataclass(frozen=True)
class ConvergenceDiagnostic:
    """Per-horizon costs, their extrapolated limit, and the verdict.

    The trace rows record ``tr(S)/(i+1)`` for each side against the exact
    limit ``tr R(0)``; they are the cheap sanity half of the convergence
    argument and are emitted alongside the transport sequence.
    """

    horizons: tuple
    per_step_values: tuple
    spectral_target: float
    extrapolated_limit: float
    converged: bool
    min_eigenvalues: tuple
    trace_per_step_x: tuple
    trace_per_step_y: tuple
    trace_target_x: float
    trace_target_y: float
    fit_degenerate: bool

    def as_dict(self) -> dict:
        return {
            "horizons": [int(h) for h in self.horizons],
            "per_step_values": [float(v) for v in self.per_step_values],
            "spectral_target": self.spectral_target,
            "extrapolated_limit": self.extrapolated_limit,
            "converged": self.converged,
            "min_eigenvalues": [[float(a), float(b)] for a, b in self.min_eigenvalues],
            "trace_per_step_x": [float(v) for v in self.trace_per_step_x],
            "trace_per_step_y": [float(v) for v in self.trace_per_step_y],
            "trace_target_x": self.trace_target_x,
            "trace_target_y": self.trace_target_y,
            "fit_degenerate": self.fit_degenerate,
        }


def _fit_tail(horizons, values) -> float:
    """Extrapolate the sequence with the model ``v = L + c / (i + 1)``.

    Least squares on the last three points (fewer if fewer exist); with the
    Cesaro structure of the per-step average, 1/(i+1) is the natural decay
    variable.  The returned L is an estimate, not a certified limit.
    """
    tail_h = np.asarray(horizons[-3:], dtype=float)
    tail_v = np.asarray(values[-3:], dtype=float)
    if tail_v.size == 1:
        return float(tail_v[0])
    t = 1.0 / (tail_h + 1.0)
    n = t.size
    st, st2 = float(t.sum()), float((t * t).sum())
    sv, stv = float(tail_v.sum()), float((t * tail_v).sum())
    det = n * st2 - st * st
    if det <= 0.0:
        return float(tail_v[-1])
    return (st2 * sv - st * stv) / det


def convergence_diagnostic(
    acx: Autocovariance,
    acy: Autocovariance,
    horizons=DEFAULT_HORIZONS,
    spectral_target: float = 0.0,
    policy: PsdPolicy = DEFAULT_POLICY,
) -> ConvergenceDiagnostic:
    """Run the finite-horizon sequence and judge convergence to a target.

    Parameters
    ----------
    horizons : sequence of int, strictly increasing
        Horizons to evaluate; each must respect the dense budget.
    spectral_target : float
        Squared spectral distance the sequence should approach, computed
        by the independent grid path.

    Notes
    -----
    ``converged`` is true when the extrapolated limit and the target differ
    by at most ``max(1e-3 * target, 1e-8)``.  A non-monotone tail (beyond
    round-off) flags the fit as degenerate and emits
    :class:`~specdist.errors.FitDegenerateWarning`; the run still completes.
    """
    _check_pair(acx, acy)
    horizons = [int(h) for h in horizons]
    if not horizons:
        raise ValueError("need at least one horizon")
    if any(b <= a for a, b in zip(horizons, horizons[1:])):
        raise ValueError(f"horizons must be strictly increasing, got {horizons}")

    per_step = []
    min_eigs = []
    trace_x = []
    trace_y = []
    for h in horizons:
        covx = build_block_toeplitz(acx, h, policy)
        covy = build_block_toeplitz(acy, h, policy)
        if np.array_equal(covx.matrix, covy.matrix):
            value = 0.0
        else:
            value = bures_w2_squared(covx.matrix, covy.matrix, policy) / (h + 1)
        per_step.append(value)
        min_eigs.append((covx.min_eigenvalue, covy.min_eigenvalue))
        trace_x.append(float(np.trace(covx.matrix)) / (h + 1))
        trace_y.append(float(np.trace(covy.matrix)) / (h + 1))
    if not np.all(np.isfinite(per_step)):
        raise NotPositiveDefinite("finite-horizon sequence contains non-finite values")

    degenerate = False
    if len(per_step) >= 3:
        v1, v2, v3 = per_step[-3:]
        s1, s2 = v2 - v1, v3 - v2
        noise = 1e-12 * max(abs(v1), abs(v2), abs(v3), 1e-300)
        if s1 * s2 < 0.0 and min(abs(s1), abs(s2)) > noise:
            degenerate = True
            warnings.warn(
                "finite-horizon tail is non-monotone; the 1/(i+1) "
                "extrapolation may be unreliable",
                FitDegenerateWarning,
            )

    limit = _fit_tail(horizons, per_step)
    tol = max(1e-3 * abs(spectral_target), 1e-8)
    converged = abs(limit - spectral_target) <= tol
    return ConvergenceDiagnostic(
        horizons=tuple(horizons),
        per_step_values=tuple(per_step),
        spectral_target=float(spectral_target),
        extrapolated_limit=float(limit),
        converged=bool(converged),
        min_eigenvalues=tuple(min_eigs),
        trace_per_step_x=tuple(trace_x),
        trace_per_step_y=tuple(trace_y),
        trace_target_x=float(np.trace(acx.lags[0])),
        trace_target_y=float(np.trace(acy.lags[0])),
        fit_degenerate=degenerate,
    )
