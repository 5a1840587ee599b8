"""Dense Hermitian operators, the trusted eigendecomposition oracle, and
planted-gap test instances.

Everything downstream treats the eigendecomposition computed here as ground
truth; it is validated by its own residuals (reconstruction and
orthonormality), not by any other code path.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError, ParameterError
from .rng import as_generator

# Smallest spacing the planted-gap generator will place between
# non-planted neighbours; keeps eigenvalues resolvable at oracle accuracy.
MIN_SPACING = 1e-4


class HermitianMatrix:
    """An N x N complex Hermitian operator.

    Hermitian symmetry is enforced at construction (the input is averaged
    with its conjugate transpose), never merely checked.
    """

    __slots__ = ("mat",)

    def __init__(self, entries):
        m = np.asarray(entries, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise InputError(f"expected a square matrix, got shape {m.shape}")
        if m.shape[0] < 1:
            raise InputError("matrix must be at least 1x1")
        if not np.all(np.isfinite(m.view(float))):
            raise InputError("matrix entries must be finite")
        self.mat = (m + m.conj().T) / 2.0
        self.mat.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def __repr__(self):
        return f"HermitianMatrix(dim={self.dim})"


def as_matrix(h) -> np.ndarray:
    """Accept HermitianMatrix or array-like, return the ndarray view."""
    if isinstance(h, HermitianMatrix):
        return h.mat
    m = np.asarray(h, dtype=complex)
    if not np.all(np.isfinite(m.view(float))):
        raise InputError("matrix entries must be finite")
    return m


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues sorted descending; column j of ``eigenvectors`` pairs with
    ``eigenvalues[j]``."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def gap(self, k: int) -> float:
        """Spacing between the k-th and (k+1)-th eigenvalue (1-based k)."""
        return float(self.eigenvalues[k - 1] - self.eigenvalues[k])

    def midpoint(self, k: int) -> float:
        return float((self.eigenvalues[k - 1] + self.eigenvalues[k]) / 2.0)

    def count_below(self, h: float) -> int:
        """Number of eigenvalues strictly below ``h``."""
        return int(np.sum(self.eigenvalues < h))


@dataclass(frozen=True)
class GapGroundTruth:
    k: int
    gap: float
    midpoint: float


def eig_reference(h) -> SpectralDecomposition:
    """Trusted full eigendecomposition of a Hermitian matrix.

    Backed by LAPACK's dense Hermitian solver; deterministic for a fixed
    input.  Output satisfies the reconstruction and orthonormality
    residual bounds asserted in the test suite.
    """
    m = as_matrix(h)
    w, v = np.linalg.eigh(m)
    order = np.argsort(-w, kind="stable")
    return SpectralDecomposition(eigenvalues=w[order], eigenvectors=v[:, order])


def random_unitary(n: int, rng) -> np.ndarray:
    """Haar-distributed unitary via QR of a complex Gaussian matrix."""
    g = as_generator(rng)
    z = g.standard_normal((n, n)) + 1j * g.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    # fix the phase ambiguity so the distribution is Haar
    d = np.diagonal(r)
    q = q * (d / np.abs(d))
    return q


def hermitian_from_spectrum(eigenvalues, rng) -> HermitianMatrix:
    """Q diag(eigenvalues) Q^dagger for a seeded Haar-random Q."""
    lam = np.asarray(eigenvalues, dtype=float)
    q = random_unitary(lam.size, rng)
    return HermitianMatrix((q * lam) @ q.conj().T)


def gen_planted_gap(n: int, k: int, gap: float, seed: int):
    """Random Hermitian matrix with a known k-th spectral gap.

    Eigenvalues live in [-1/2, 1/2], the k-th consecutive spacing equals
    ``gap`` exactly, and every other spacing is strictly smaller, so the
    planted (k, gap, midpoint) triple is unambiguous ground truth.

    Returns (HermitianMatrix, GapGroundTruth).
    """
    if n < 2:
        raise ParameterError("n must be >= 2")
    if not 1 <= k <= n - 1:
        raise ParameterError(f"k must be in [1, {n - 1}], got {k}")
    if not 0 < gap < 1:
        raise ParameterError("gap must lie in (0, 1)")
    if gap + (n - 2) * MIN_SPACING >= 1.0:
        raise ParameterError(
            f"infeasible spacing budget: gap={gap} with {n - 2} extra spacings "
            f"of at least {MIN_SPACING} exceeds the unit spectral range"
        )
    if gap <= 4 * MIN_SPACING:
        raise ParameterError(f"gap must exceed {4 * MIN_SPACING} to dominate the floor spacing")

    g = as_generator(seed)
    n_other = n - 2
    # Each non-planted spacing is capped both by a fraction of the planted
    # gap (strict uniqueness) and by an equal share of the leftover range.
    cap = min(0.9 * gap, (1.0 - gap - n_other * MIN_SPACING) / max(n_other, 1))
    spacings = np.full(n - 1, gap)
    if n_other:
        other = MIN_SPACING + g.uniform(0.2, 1.0, size=n_other) * max(cap - MIN_SPACING, 0.0)
        idx = np.delete(np.arange(n - 1), k - 1)
        spacings[idx] = other
    span = float(np.sum(spacings))
    top = 0.5 - g.uniform(0.0, 1.0 - span)
    lam = top - np.concatenate(([0.0], np.cumsum(spacings)))
    h = hermitian_from_spectrum(lam, g)
    truth = GapGroundTruth(k=k, gap=float(gap), midpoint=float((lam[k - 1] + lam[k]) / 2.0))
    return h, truth


# ---------------------------------------------------------------------------
# HMAT v1 file format: "HMAT <N>" header, then "<i> <j> <re> <im>" lines for
# the upper triangle (j >= i); missing entries are zero and the lower
# triangle is implied by Hermitian completion.
# ---------------------------------------------------------------------------


def write_hmat(path, h) -> None:
    m = as_matrix(h)
    n = m.shape[0]
    lines = [f"HMAT {n}"]
    for i in range(n):
        for j in range(i, n):
            z = m[i, j]
            if z != 0:
                lines.append(f"{i} {j} {z.real:.17g} {z.imag:.17g}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_hmat(path) -> HermitianMatrix:
    with open(path) as fh:
        tokens = fh.read().split()
    if len(tokens) < 2 or tokens[0] != "HMAT":
        raise InputError(f"{path}: missing 'HMAT <N>' header")
    try:
        n = int(tokens[1])
    except ValueError as exc:
        raise InputError(f"{path}: bad dimension {tokens[1]!r}") from exc
    if n < 1:
        raise InputError(f"{path}: dimension must be positive")
    body = tokens[2:]
    if len(body) % 4 != 0:
        raise InputError(f"{path}: entry lines must have 4 fields '<i> <j> <re> <im>'")
    m = np.zeros((n, n), dtype=complex)
    for t in range(0, len(body), 4):
        try:
            i, j = int(body[t]), int(body[t + 1])
            re, im = float(body[t + 2]), float(body[t + 3])
        except ValueError as exc:
            raise InputError(f"{path}: malformed entry near field {t}") from exc
        if not (0 <= i <= j < n):
            raise InputError(f"{path}: indices ({i},{j}) outside the stored upper triangle")
        m[i, j] = re + 1j * im
        m[j, i] = re - 1j * im
    return HermitianMatrix(m)
