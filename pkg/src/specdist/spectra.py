"""Power spectrum representations and transforms.

Three interchangeable descriptions of a zero-mean stationary process are
supported: a rational (vector ARMA) model with closed-form spectrum
``H(e^{jw}) Q H(e^{jw})*``, a truncated autocovariance sequence, and a
spectrum sampled on the uniform frequency grid ``w_l = 2 pi l / N``.
Conversions between them go through the FFT; a Welch estimator produces
grid spectra from raw time series.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionMismatch,
    GridTooCoarse,
    LagTooLarge,
    NonHermitianInput,
    NonRealResidue,
    NotPositiveDefinite,
    SingularAr,
    TooFewSegments,
    UnstableModel,
)
from .hermitian import DEFAULT_POLICY, PsdPolicy, hermitian_part, hermitian_residual

__all__ = [
    "Autocovariance",
    "GridSpectrum",
    "RationalSpectrum",
    "autocov_to_spectrum",
    "check_real_symmetry",
    "estimate_welch",
    "eval_rational",
    "rational_grid",
    "rational_to_autocov",
    "spectrum_to_autocov",
    "stability_radius",
]

#: Relative residual above which grid values are rejected as non-Hermitian.
GRID_HERMITIAN_TOL = 1e-8

#: Residual threshold under which a grid is flagged as coming from a
#: real-valued process (conjugate symmetry across the Nyquist point).
REAL_SYMMETRY_TOL = 1e-10

#: Condition number above which the AR polynomial is treated as singular.
AR_COND_LIMIT = 1e12

_WINDOWS = {
    "hann": np.hanning,
    "hamming": np.hamming,
    "rectangular": np.ones,
}


def default_omegas(n_freq: int) -> np.ndarray:
    """Uniform frequency grid ``2 pi l / N`` for ``l = 0..N-1``."""
    return 2.0 * np.pi * np.arange(n_freq) / n_freq


def _symmetry_residual(values: np.ndarray) -> float:
    # Real-process symmetry: value at index N-l equals the transpose of the
    # value at index l (both are Hermitian, so transpose == conjugate).
    flipped = np.roll(values[::-1], 1, axis=0)
    num = float(np.max(np.abs(flipped - np.swapaxes(values, -1, -2).conj())))
    den = float(np.max(np.abs(values)))
    if den == 0.0:
        return 0.0
    return num / den


@dataclass(frozen=True)
class GridSpectrum:
    """A spectrum sampled on the uniform grid, floored to positive definite.

    Attributes
    ----------
    values : ndarray of shape (n_freq, m, m), complex
        Hermitian PD matrices at ``w_l = 2 pi l / n_freq``.
    real_symmetry : bool
        True when the grid satisfies the real-process symmetry
        ``value(N-l) = value(l)^T`` within ``REAL_SYMMETRY_TOL``.
    flooring_count : int
        Number of frequencies whose eigenvalues were lifted to the policy
        floor during construction.  Zero for healthy PD input.
    """

    values: np.ndarray
    real_symmetry: bool
    flooring_count: int = 0

    @property
    def dim(self) -> int:
        return self.values.shape[-1]

    @property
    def n_freq(self) -> int:
        return self.values.shape[0]

    @property
    def omegas(self) -> np.ndarray:
        return default_omegas(self.n_freq)

    @classmethod
    def build(
        cls,
        values,
        policy: PsdPolicy = DEFAULT_POLICY,
        name: str = "spectrum",
    ) -> "GridSpectrum":
        """Validate and floor raw per-frequency matrices into a spectrum.

        The eigenvalue floor is relative to the largest eigenvalue found
        anywhere on the grid, so isolated spectral zeros are lifted to a
        uniform small level and counted rather than left singular.

        Raises
        ------
        NonHermitianInput
            If any value deviates from Hermitian symmetry beyond
            ``GRID_HERMITIAN_TOL`` (relative).
        NotPositiveDefinite
            If any eigenvalue is negative beyond the policy band, or the
            whole grid has no positive mass to floor against.
        """
        values = np.asarray(values, dtype=complex)
        if values.ndim != 3 or values.shape[1] != values.shape[2]:
            raise DimensionMismatch(
                f"{name} must have shape (n_freq, m, m), got {values.shape}"
            )
        res = hermitian_residual(values)
        if res > GRID_HERMITIAN_TOL:
            raise NonHermitianInput(
                f"{name} values have Hermitian residual {res:.3e} "
                f"(tolerance {GRID_HERMITIAN_TOL:.1e})"
            )
        values = hermitian_part(values)

        w, v = np.linalg.eigh(values)
        scale = float(w.max())
        if scale <= 0.0:
            raise NotPositiveDefinite(
                f"{name} has no positive eigenvalue mass; cannot floor"
            )
        neg_bound = policy.negativity_tol * scale
        worst = float(w.min())
        if worst < -neg_bound:
            idx = int(np.argmin(w.min(axis=-1)))
            raise NotPositiveDefinite(
                f"{name} is indefinite at frequency index {idx}: eigenvalue "
                f"{worst:.6e} below the tolerated band -{neg_bound:.3e}"
            )
        floor = policy.floor_eps * scale
        needs = w.min(axis=-1) < floor
        count = int(np.count_nonzero(needs))
        if count:
            wf = np.maximum(w[needs], floor)
            vb = v[needs]
            fixed = (vb * wf[:, None, :]) @ np.conj(np.swapaxes(vb, -1, -2))
            values = values.copy()
            values[needs] = hermitian_part(fixed)

        sym = _symmetry_residual(values) <= REAL_SYMMETRY_TOL
        return cls(values=values, real_symmetry=sym, flooring_count=count)


def check_real_symmetry(spec: GridSpectrum) -> float:
    """Max relative residual ``|value(N-l) - value(l)^T|`` over the grid."""
    return _symmetry_residual(spec.values)


@dataclass(frozen=True)
class Autocovariance:
    """Truncated autocovariance sequence ``R(0..K)`` of a real process.

    ``lags`` has shape (K+1, m, m); negative lags are implied by
    ``R(-k) = R(k)^T``.  ``imag_residual`` records the relative imaginary
    part discarded when the sequence came from a sampled spectrum.
    """

    lags: np.ndarray
    imag_residual: float = 0.0

    def __post_init__(self):
        lags = np.asarray(self.lags, dtype=float)
        if lags.ndim != 3 or lags.shape[1] != lags.shape[2]:
            raise DimensionMismatch(
                f"autocovariance lags must have shape (K+1, m, m), got {lags.shape}"
            )
        r0 = lags[0]
        scale = float(np.max(np.abs(r0)))
        if scale > 0.0 and float(np.max(np.abs(r0 - r0.T))) > 1e-8 * scale:
            raise NotPositiveDefinite("R(0) is not symmetric")
        w = np.linalg.eigvalsh(0.5 * (r0 + r0.T))
        if float(w[0]) < -1e-10 * max(float(np.abs(w).max()), 1e-300):
            raise NotPositiveDefinite(
                f"R(0) has negative eigenvalue {float(w[0]):.6e}"
            )
        object.__setattr__(self, "lags", lags)

    @property
    def dim(self) -> int:
        return self.lags.shape[-1]

    @property
    def max_lag(self) -> int:
        return self.lags.shape[0] - 1


@dataclass(frozen=True)
class RationalSpectrum:
    """Vector ARMA model with spectrum ``H(e^{jw}) Q H(e^{jw})*`` where
    ``H = (I - sum_r A_r e^{-jwr})^{-1} (sum_s B_s e^{-jws})``.

    ``ar`` holds A_1..A_p (shape (p, m, m), possibly p = 0), ``ma`` holds
    B_0..B_q (shape (q+1, m, m)), and ``noise_cov`` is the SPD innovation
    covariance Q.  Stability (spectral radius of the AR companion matrix
    strictly below one) is enforced at construction.
    """

    ar: np.ndarray
    ma: np.ndarray
    noise_cov: np.ndarray

    def __post_init__(self):
        ar = np.asarray(self.ar, dtype=float)
        ma = np.asarray(self.ma, dtype=float)
        q = np.asarray(self.noise_cov, dtype=float)
        if q.ndim != 2 or q.shape[0] != q.shape[1]:
            raise DimensionMismatch(f"noise_cov must be square, got {q.shape}")
        m = q.shape[0]
        if ar.size == 0:
            ar = ar.reshape(0, m, m)
        if ar.ndim != 3 or ar.shape[1:] != (m, m):
            raise DimensionMismatch(
                f"ar coefficients must have shape (p, {m}, {m}), got {ar.shape}"
            )
        if ma.ndim != 3 or ma.shape[0] < 1 or ma.shape[1:] != (m, m):
            raise DimensionMismatch(
                f"ma coefficients must have shape (q+1, {m}, {m}), got {ma.shape}"
            )
        if float(np.max(np.abs(q - q.T))) > 1e-8 * max(float(np.abs(q).max()), 1e-300):
            raise NotPositiveDefinite("noise_cov is not symmetric")
        w = np.linalg.eigvalsh(0.5 * (q + q.T))
        if float(w[0]) <= 1e-12 * float(np.abs(w).max()):
            raise NotPositiveDefinite(
                f"noise_cov must be positive definite; min eigenvalue {float(w[0]):.6e}"
            )
        radius = stability_radius(ar)
        if radius >= 1.0:
            raise UnstableModel(
                f"AR companion spectral radius {radius:.6f} is not below 1"
            )
        object.__setattr__(self, "ar", ar)
        object.__setattr__(self, "ma", ma)
        object.__setattr__(self, "noise_cov", q)

    @property
    def dim(self) -> int:
        return self.noise_cov.shape[0]


def stability_radius(ar: np.ndarray) -> float:
    """Spectral radius of the companion matrix of ``I - sum A_r z^r``.

    Zero for a pure moving-average model (p = 0); the model is stable iff
    the radius is strictly below one.
    """
    ar = np.asarray(ar, dtype=float)
    if ar.size == 0:
        return 0.0
    p, m, _ = ar.shape
    companion = np.zeros((p * m, p * m))
    companion[:m] = ar.transpose(1, 0, 2).reshape(m, p * m)
    if p > 1:
        companion[m:, :-m] = np.eye((p - 1) * m)
    return float(np.max(np.abs(np.linalg.eigvals(companion))))


def _transfer(model: RationalSpectrum, omegas: np.ndarray) -> np.ndarray:
    """Transfer function H at each frequency, shape (n, m, m)."""
    m = model.dim
    p = model.ar.shape[0]
    q1 = model.ma.shape[0]
    eye = np.eye(m)

    phases_ar = np.exp(-1j * np.outer(omegas, np.arange(1, p + 1)))
    a = eye - np.einsum("wr,rij->wij", phases_ar, model.ar)

    cond = np.linalg.cond(a)
    if float(np.max(cond)) > AR_COND_LIMIT:
        idx = int(np.argmax(cond))
        raise SingularAr(
            f"AR polynomial is numerically singular at frequency index {idx} "
            f"(condition {float(cond[idx]):.3e})"
        )

    phases_ma = np.exp(-1j * np.outer(omegas, np.arange(q1)))
    b = np.einsum("ws,sij->wij", phases_ma, model.ma)
    return np.linalg.solve(a, b)


def eval_rational(model: RationalSpectrum, omega: float) -> np.ndarray:
    """Spectrum value ``H Q H*`` of a rational model at one frequency.

    The result is Hermitian PSD by construction and positive definite
    whenever the MA polynomial has no zero at ``omega``.

    Raises
    ------
    SingularAr
        If the AR polynomial is numerically singular at ``omega``
        (condition number above ``AR_COND_LIMIT``).
    """
    h = _transfer(model, np.atleast_1d(float(omega)))[0]
    return hermitian_part(h @ model.noise_cov @ np.conj(h.T))


def rational_grid(
    model: RationalSpectrum,
    n_freq: int,
    policy: PsdPolicy = DEFAULT_POLICY,
) -> GridSpectrum:
    """Sample a rational model's spectrum on the uniform grid."""
    h = _transfer(model, default_omegas(n_freq))
    values = h @ model.noise_cov @ np.conj(np.swapaxes(h, -1, -2))
    return GridSpectrum.build(values, policy, name="rational spectrum")


def autocov_to_spectrum(
    acov: Autocovariance,
    n_freq: int,
    policy: PsdPolicy = DEFAULT_POLICY,
) -> GridSpectrum:
    """Spectrum ``sum_{|k|<=K} R(k) e^{-jwk}`` on the uniform grid.

    The two-sided lag sequence is laid out in FFT order and transformed in
    one pass, so the result is Hermitian to round-off and exactly matches
    the truncated Fourier sum at every grid point.

    Raises
    ------
    GridTooCoarse
        If ``n_freq < 2 K + 1`` so the grid cannot hold the band.
    NotPositiveDefinite
        If the truncated spectrum is negative beyond the policy band at
        some frequency (flooring within the band is applied and counted).
    """
    k = acov.max_lag
    m = acov.dim
    if n_freq < 2 * k + 1:
        raise GridTooCoarse(
            f"grid of {n_freq} frequencies cannot resolve lags up to {k} "
            f"(need at least {2 * k + 1})"
        )
    seq = np.zeros((n_freq, m, m))
    seq[0] = acov.lags[0]
    for j in range(1, k + 1):
        seq[j] = acov.lags[j]
        seq[n_freq - j] = acov.lags[j].T
    values = np.fft.fft(seq, axis=0)
    return GridSpectrum.build(values, policy, name="truncated spectrum")


def spectrum_to_autocov(spec: GridSpectrum, max_lag: int) -> Autocovariance:
    """Autocovariances ``R(k) = (1/N) sum_l value(w_l) e^{jw_l k}``.

    The imaginary part left over after the inverse transform is discarded;
    its relative size is recorded on the result as ``imag_residual``.

    Raises
    ------
    LagTooLarge
        If ``max_lag >= n_freq / 2`` (lags beyond the grid's bandwidth).
    NonRealResidue
        If the discarded imaginary part exceeds 1e-6 relative, meaning the
        grid does not describe a real-valued process.
    """
    if max_lag < 0:
        raise ValueError("max_lag must be nonnegative")
    if 2 * max_lag >= spec.n_freq:
        raise LagTooLarge(
            f"max_lag {max_lag} out of range for a {spec.n_freq}-point grid "
            f"(must be below {spec.n_freq / 2:g})"
        )
    seq = np.fft.ifft(spec.values, axis=0)[: max_lag + 1]
    scale = max(float(np.max(np.abs(seq.real))), 1e-300)
    residual = float(np.max(np.abs(seq.imag))) / scale
    if residual > 1e-6:
        raise NonRealResidue(
            f"imaginary residue {residual:.3e} relative; grid is not the "
            "spectrum of a real process"
        )
    return Autocovariance(lags=seq.real, imag_residual=residual)


def rational_to_autocov(
    model: RationalSpectrum,
    n_freq: int = 4096,
    max_lag: int | None = None,
    decay_tol: float = 1e-12,
) -> Autocovariance:
    """Autocovariance sequence of a rational model via its sampled spectrum.

    Parameters
    ----------
    n_freq : int
        Grid resolution used for the inverse transform; must comfortably
        exceed the model's effective memory.
    max_lag : int, optional
        Forced truncation point.  By default the sequence is cut at the
        first lag where ``|R(k)|_F < decay_tol * |R(0)|_F``, which is a
        controlled approximation for stable models (geometric decay).
    """
    spec = rational_grid(model, n_freq)
    hard_cap = n_freq // 2 - 1
    if max_lag is not None:
        return spectrum_to_autocov(spec, min(max_lag, hard_cap))
    full = spectrum_to_autocov(spec, hard_cap)
    norms = np.linalg.norm(full.lags, axis=(1, 2))
    cut = norms >= decay_tol * norms[0]
    k = int(np.max(np.nonzero(cut)[0])) if np.any(cut) else 0
    return Autocovariance(lags=full.lags[: k + 1], imag_residual=full.imag_residual)


def estimate_welch(
    samples,
    segment_len: int,
    overlap: float = 0.5,
    window: str = "hann",
    policy: PsdPolicy = DEFAULT_POLICY,
) -> GridSpectrum:
    """Averaged-periodogram spectrum estimate from a zero-mean time series.

    Parameters
    ----------
    samples : array_like of shape (T,) or (T, m)
        Raw samples, one row per time step.
    segment_len : int
        Segment length, a power of two; the output grid has this many
        frequencies.
    overlap : float in [0, 1)
        Fractional overlap between consecutive segments.
    window : {"hann", "hamming", "rectangular"}
        Taper applied to each segment.

    Notes
    -----
    Each segment is windowed, transformed, and its per-frequency outer
    product accumulated; the sum is divided by
    ``n_segments * sum(window**2)`` so unit-variance white noise yields a
    spectrum near the identity.

    Raises
    ------
    TooFewSegments
        If the series yields fewer than 4 segments.
    NotPositiveDefinite
        If the estimate has no positive mass (all-zero input).
    """
    x = np.asarray(samples, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    if x.ndim != 2:
        raise DimensionMismatch(f"samples must be 1-D or 2-D, got shape {x.shape}")
    n, m = x.shape
    if segment_len < 2 or segment_len & (segment_len - 1):
        raise ValueError(f"segment_len must be a power of two, got {segment_len}")
    if not 0.0 <= overlap < 1.0:
        raise ValueError(f"overlap must lie in [0, 1), got {overlap}")
    try:
        win = _WINDOWS[window](segment_len)
    except KeyError:
        raise ValueError(f"unknown window {window!r}") from None

    step = max(int(segment_len * (1.0 - overlap)), 1)
    n_seg = (n - segment_len) // step + 1 if n >= segment_len else 0
    if n_seg < 4:
        raise TooFewSegments(
            f"{n} samples give {n_seg} segments of length {segment_len} "
            f"at {overlap:.0%} overlap; need at least 4"
        )

    acc = np.zeros((segment_len, m, m), dtype=complex)
    for s in range(n_seg):
        seg = x[s * step : s * step + segment_len]
        spec = np.fft.fft(win[:, None] * seg, axis=0)
        acc += spec[:, :, None] * np.conj(spec[:, None, :])
    acc /= n_seg * float(np.sum(win**2))
    return GridSpectrum.build(acc, policy, name="Welch estimate")
