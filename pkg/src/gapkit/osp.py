"""Oblivious state preparation.

A random state x = D H z -- Rademacher vector z, normalized Hadamard
transform H, independent random sign diagonal D -- overlaps any fixed unit
vector y with |<x|y>| > 1/(2N) with probability at least 3/5 once N is
large enough.  The transform flattens y first (H D y has near-uniform entry
magnitudes with high probability), which is what makes the overlap bound
target-independent.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .rng import as_generator


def _check_pow2(n: int) -> int:
    if n < 2 or (n & (n - 1)) != 0:
        raise ParameterError(f"dimension must be a power of two >= 2, got {n}")
    return int(n.bit_length() - 1)


def fwht(v: np.ndarray) -> np.ndarray:
    """Normalized fast Walsh-Hadamard transform along the last axis.

    O(N log N) butterfly; the transform is orthogonal and involutive
    (fwht(fwht(v)) == v).  Accepts batched input of shape (..., N).
    """
    v = np.array(v, dtype=complex if np.iscomplexobj(v) else float)
    n = v.shape[-1]
    _check_pow2(n)
    shape = v.shape
    v = v.reshape(-1, n)
    half = 1
    inv_sqrt2 = 1.0 / np.sqrt(2.0)
    while half < n:
        v = v.reshape(-1, n // (2 * half), 2, half)
        a = v[:, :, 0, :].copy()
        b = v[:, :, 1, :]
        v[:, :, 0, :] = (a + b) * inv_sqrt2
        v[:, :, 1, :] = (a - b) * inv_sqrt2
        v = v.reshape(-1, n)
        half *= 2
    return v.reshape(shape)


@dataclass(frozen=True)
class OspSample:
    """One prepared state together with the randomness that produced it.

    ``state == sign_diag * fwht(rademacher)`` exactly, so samples are
    reconstructible.  ``seed`` is the integer seed when the caller supplied
    one, else -1.
    """

    state: np.ndarray
    sign_diag: np.ndarray
    rademacher: np.ndarray
    seed: int


def osp_sample(n: int, rng=None, *, seed: int | None = None) -> OspSample:
    """Draw x = D H z with fresh Rademacher z and sign diagonal D."""
    _check_pow2(n)
    g = as_generator(seed if seed is not None else rng)
    z = (2.0 * g.integers(0, 2, size=n) - 1.0) / np.sqrt(n)
    d = 2.0 * g.integers(0, 2, size=n) - 1.0
    x = d * fwht(z)
    return OspSample(state=x, sign_diag=d, rademacher=z, seed=-1 if seed is None else int(seed))


def flatten_check(y: np.ndarray, rng=None) -> tuple[np.ndarray, float]:
    """Apply a fresh random sign diagonal then the Hadamard transform.

    Returns (v, ||v||_inf) with v = H D y.  Unitarity preserves the norm;
    the interesting quantity is how small the largest entry is.
    """
    y = np.asarray(y)
    _check_pow2(y.shape[-1])
    g = as_generator(rng)
    d = 2.0 * g.integers(0, 2, size=y.shape[-1]) - 1.0
    v = fwht(d * y)
    return v, float(np.max(np.abs(v)))


@dataclass(frozen=True)
class OspSource:
    """A distribution of initial states with a nominal overlap contract.

    ``gamma``/``delta_osp`` are the advertised constants used for budgeting
    by callers (run counts, failure accounting); the actual distribution may
    do better.  ``kind`` is "hadamard" for the D H z ensemble (power-of-two
    dimensions) or "gaussian" for Haar-like unit vectors.
    """

    dim: int
    gamma: float
    delta_osp: float
    kind: str

    def sample_batch(self, count: int, rng) -> np.ndarray:
        """(count, dim) array of unit-norm states; row i is trial i."""
        g = as_generator(rng)
        if self.kind == "hadamard":
            z = (2.0 * g.integers(0, 2, size=(count, self.dim)) - 1.0) / np.sqrt(self.dim)
            d = 2.0 * g.integers(0, 2, size=(count, self.dim)) - 1.0
            return d * fwht(z)
        if self.kind == "gaussian":
            v = g.standard_normal((count, self.dim)) + 1j * g.standard_normal((count, self.dim))
            return v / np.linalg.norm(v, axis=1, keepdims=True)
        raise ParameterError(f"unknown OSP kind {self.kind!r}")

    def sample(self, rng) -> np.ndarray:
        return self.sample_batch(1, rng)[0]


def default_osp_source(n: int) -> OspSource:
    """Hadamard-Rademacher ensemble when the dimension allows it (power of
    two, at least 4), Gaussian states otherwise.

    At n = 2 the Hadamard ensemble misses basis-vector targets exactly half
    the time, which stalls median boosting downstream, and the 3/5 overlap
    bound only holds for large n anyway; Gaussian states keep the same nominal
    contract with plenty of slack.
    """
    is_pow2 = n >= 2 and (n & (n - 1)) == 0
    kind = "hadamard" if (is_pow2 and n >= 4) else "gaussian"
    return OspSource(dim=n, gamma=1.0 / (2 * n), delta_osp=2.0 / 5.0, kind=kind)
