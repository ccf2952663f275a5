"""Parzen window density estimation with a Gaussian kernel.

Estimates are direct sums over the full reference set (no tree or FFT
shortcuts, no leave-one-out), evaluated in query chunks so memory stays
bounded at roughly chunk x reference-count floats.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInput

_CHUNK = 1024
_SQRT_2PI = float(np.sqrt(2.0 * np.pi))


def default_bandwidth(t_count: int) -> float:
    """Rule-of-thumb bandwidth 1.06 * T^(-1/5) for T reference samples."""
    t_count = int(t_count)
    if t_count < 1:
        raise InvalidInput("bandwidth needs a positive sample count")
    return 1.06 * float(t_count) ** -0.2


@dataclass(frozen=True)
class ParzenModel:
    """A reference sample block (channels x T) plus one shared bandwidth."""

    samples: np.ndarray
    bandwidth: float

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=float)
        if s.ndim != 2:
            raise InvalidInput(f"samples must be channels x T, got shape {s.shape}")
        if s.shape[1] < 2:
            raise InvalidInput("need at least 2 reference samples")
        if not np.all(np.isfinite(s)):
            raise InvalidInput("samples contain non-finite entries")
        if not float(self.bandwidth) > 0.0:
            raise InvalidInput("bandwidth must be positive")
        object.__setattr__(self, "samples", s)
        object.__setattr__(self, "bandwidth", float(self.bandwidth))

    @classmethod
    def from_samples(cls, samples) -> "ParzenModel":
        samples = np.asarray(samples, dtype=float)
        if samples.ndim != 2:
            raise InvalidInput(f"samples must be channels x T, got shape {samples.shape}")
        return cls(samples=samples, bandwidth=default_bandwidth(samples.shape[1]))


def _check_row(model: ParzenModel, row: int) -> np.ndarray:
    if not 0 <= row < model.samples.shape[0]:
        raise InvalidInput(f"row {row} out of range for {model.samples.shape[0]} channels")
    return model.samples[row]


def kde_univariate(model: ParzenModel, row: int, queries):
    """Density of one channel at the query points."""
    refs = _check_row(model, row)
    return gaussian_density_1d(refs, queries, model.bandwidth)


def kde_univariate_grad(model: ParzenModel, row: int, queries):
    """Derivative of the univariate density estimate in the query point."""
    refs = _check_row(model, row)
    return gaussian_density_grad_1d(refs, queries, model.bandwidth)


def kde_multivariate(model: ParzenModel, queries):
    """Joint density of all channels at query column vectors."""
    return gaussian_density_nd(model.samples, queries, model.bandwidth)


# ---------------------------------------------------------------------------
# array-level workers, shared with the contrast module


def gaussian_density_1d(refs, queries, h: float):
    refs = np.asarray(refs, dtype=float).ravel()
    q = np.asarray(queries, dtype=float)
    scalar = q.ndim == 0
    qf = np.atleast_1d(q).astype(float).ravel()
    n = refs.size
    out = np.empty(qf.size)
    norm = 1.0 / (n * h * _SQRT_2PI)
    for lo in range(0, qf.size, _CHUNK):
        hi = min(lo + _CHUNK, qf.size)
        u = (qf[lo:hi, None] - refs[None, :]) / h
        out[lo:hi] = np.exp(-0.5 * u * u).sum(axis=1)
    out *= norm
    return float(out[0]) if scalar else out.reshape(np.shape(q))


def gaussian_density_grad_1d(refs, queries, h: float):
    refs = np.asarray(refs, dtype=float).ravel()
    q = np.asarray(queries, dtype=float)
    scalar = q.ndim == 0
    qf = np.atleast_1d(q).astype(float).ravel()
    n = refs.size
    out = np.empty(qf.size)
    norm = -1.0 / (n * h * h * _SQRT_2PI)
    for lo in range(0, qf.size, _CHUNK):
        hi = min(lo + _CHUNK, qf.size)
        u = (qf[lo:hi, None] - refs[None, :]) / h
        out[lo:hi] = (u * np.exp(-0.5 * u * u)).sum(axis=1)
    out *= norm
    return float(out[0]) if scalar else out.reshape(np.shape(q))


def gaussian_density_nd(refs, queries, h: float):
    """Joint Gaussian-kernel density; refs is M x N, queries M x K or a length-M vector."""
    refs = np.asarray(refs, dtype=float)
    if refs.ndim != 2:
        raise InvalidInput("reference block must be channels x T")
    m, n = refs.shape
    q = np.asarray(queries, dtype=float)
    scalar = q.ndim == 1
    if scalar:
        q = q[:, None]
    if q.shape[0] != m:
        raise InvalidInput(f"query channel count {q.shape[0]} does not match references ({m})")
    k = q.shape[1]
    norm = (2.0 * np.pi) ** (-m / 2.0) / (n * h**m)
    ref_sq = np.einsum("ij,ij->j", refs, refs)
    q_sq = np.einsum("ij,ij->j", q, q)
    out = np.empty(k)
    inv = -0.5 / (h * h)
    for lo in range(0, k, _CHUNK):
        hi = min(lo + _CHUNK, k)
        d2 = q_sq[lo:hi, None] + ref_sq[None, :] - 2.0 * (q[:, lo:hi].T @ refs)
        np.maximum(d2, 0.0, out=d2)
        out[lo:hi] = np.exp(inv * d2).sum(axis=1)
    out *= norm
    return float(out[0]) if scalar else out
