"""Shared generators for the test suite.

Random spectra are built from short random autocovariance sequences, which
makes them Hermitian positive definite on the whole grid by construction.
Commuting pairs share a fixed eigenbasis and differ only in their positive
eigenvalue curves.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from specdist.spectra import GridSpectrum, default_omegas

DATA_DIR = Path(__file__).parent / "data"
GOLDEN_DIR = Path(__file__).parent / "golden"


def random_pd(m, rng, complex_=False, spread=4.0):
    """Random positive definite matrix with eigenvalues in [1/spread, spread]."""
    if complex_:
        g = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
    else:
        g = rng.standard_normal((m, m))
    q, _ = np.linalg.qr(g)
    eig = np.exp(rng.uniform(-np.log(spread), np.log(spread), size=m))
    return (q * eig) @ q.conj().T


def random_grid_spectrum(m, rng, n_freq=64):
    """Random spectrum from a two-lag autocovariance, PD at every frequency.

    The lag terms are scaled well inside the smallest eigenvalue of the lag-0
    block, so positivity never depends on luck.
    """
    r0 = random_pd(m, rng, spread=3.0)
    margin = float(np.linalg.eigvalsh(r0)[0])
    omegas = default_omegas(n_freq)
    values = np.broadcast_to(r0, (n_freq, m, m)).astype(complex).copy()
    for k in (1, 2):
        g = rng.standard_normal((m, m))
        rk = (0.15 * margin / k) * g / np.linalg.norm(g, 2)
        phase = np.exp(-1j * k * omegas)
        values += phase[:, None, None] * rk + np.conj(phase)[:, None, None] * rk.T
    return GridSpectrum.build(values)


def commuting_pair(m, rng, n_freq=64):
    """Two spectra sharing one eigenbasis, eigenvalue curves bounded below."""
    g = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
    q, _ = np.linalg.qr(g)
    omegas = default_omegas(n_freq)

    def curves():
        a = rng.uniform(1.0, 3.0, size=m)
        b = rng.uniform(0.1, 0.8, size=m)
        phi = rng.uniform(0.0, 2.0 * np.pi, size=m)
        return a[None, :] + b[None, :] * np.cos(omegas[:, None] + phi[None, :])

    vx = np.einsum("ij,fj,kj->fik", q, curves(), q.conj())
    vy = np.einsum("ij,fj,kj->fik", q, curves(), q.conj())
    return GridSpectrum.build(vx), GridSpectrum.build(vy)


def tsp_reference(a, b):
    """Coupling trace via eigenvalues of the raw product, no symmetrization."""
    lam = np.linalg.eigvals(a @ b)
    return float(np.sum(np.sqrt(np.clip(lam.real, 0.0, None))))
