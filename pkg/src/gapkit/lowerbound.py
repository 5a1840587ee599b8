"""Constructive hard instances for gap decision on binary matrices.

Builds the disjoint union of two bipartite gadget graphs: one whose
source->target edges encode an input bit string, one with a fixed number of
edges placed round-robin.  The cube of the adjacency matrix has exactly six
nonzero eigenvalues {a, a, a, sigma, sigma, sigma}, so comparing the top of
the spectrum decides whether the bit count equals the reference value.

These adjacency matrices are intentionally non-symmetric; they are
test/fixture material only and are never fed to the gap-search pipeline.
"""

from __future__ import annotations

import numpy as np

from .errors import ParameterError


def gen_lowerbound_instance(bits, a: int) -> np.ndarray:
    """Adjacency matrix (size 4N+2) of the two-gadget union graph.

    ``bits`` is a flat 0/1 sequence of length N*N; bit i*N+j inserts the
    edge source_i -> target_j in the first gadget.  The second gadget gets
    exactly ``a`` source->target edges: edge c joins source (c mod N) to
    target (floor(c/N) mod N), which keeps per-source out-degrees within
    ceil(a/N).
    """
    x = np.asarray(bits, dtype=int).ravel()
    nsq = x.size
    n = int(round(np.sqrt(nsq)))
    if n * n != nsq or n < 1:
        raise ParameterError(f"bit sequence length {nsq} is not a perfect square")
    if np.any((x != 0) & (x != 1)):
        raise ParameterError("bits must be 0/1")
    if not 0 <= a <= nsq:
        raise ParameterError(f"a must lie in [0, {nsq}], got {a}")

    size = 4 * n + 2
    adj = np.zeros((size, size), dtype=float)

    def fill_gadget(base, edges):
        v = base              # utility node
        s = base + 1          # sources s_0..s_{n-1}
        t = base + 1 + n      # targets t_0..t_{n-1}
        adj[v, s : s + n] = 1.0
        adj[t : t + n, v] = 1.0
        for i, j in edges:
            adj[s + i, t + j] = 1.0

    fill_gadget(0, [(i, j) for i in range(n) for j in range(n) if x[i * n + j]])
    fill_gadget(2 * n + 1, [(c % n, (c // n) % n) for c in range(a)])
    return adj


def _top6(eigs: np.ndarray, tol: float) -> np.ndarray:
    """The six largest-modulus eigenvalues, sorted by descending real part
    with ties (real parts equal within tol) broken by descending imaginary
    part."""
    lam = eigs[np.argsort(-np.abs(eigs), kind="stable")][:6]
    lam = lam[np.argsort(-lam.real, kind="stable")]
    out = []
    i = 0
    while i < len(lam):
        j = i
        while j + 1 < len(lam) and lam[j + 1].real >= lam[i].real - tol:
            j += 1
        cluster = lam[i : j + 1]
        out.extend(cluster[np.argsort(-cluster.imag, kind="stable")])
        i = j + 1
    return np.array(out)


def decide_equal_counts(eigs, tol: float) -> bool:
    """Three-case rule on the sorted top-6 eigenvalues: True iff the two
    gadget weights coincide."""
    lam = _top6(np.asarray(eigs, dtype=complex), tol)
    eq = lambda u, v: abs(u - v) <= tol
    consecutive = all(eq(lam[i], lam[i + 1]) for i in range(5))
    four_block = (
        eq(lam[0], lam[1]) and eq(lam[1], lam[2]) and eq(lam[2], lam[3])
        and not eq(lam[3], lam[4]) and not eq(lam[4], lam[5])
    )
    three_pairs = (
        eq(lam[0], lam[1]) and not eq(lam[1], lam[2])
        and eq(lam[2], lam[3]) and not eq(lam[3], lam[4])
        and eq(lam[4], lam[5])
    )
    return consecutive or four_block or three_pairs


def verify_lowerbound_spectrum(adj: np.ndarray, a: int, sigma: int) -> bool:
    """Check the instance's spectral signature.

    True iff (1) the nonzero spectrum of adj^3 is {a, a, a, sigma, sigma,
    sigma} within absolute tolerance 1e-8 * (matrix size), and (2) the
    three-case rule on the eigenvalues of adj decides a == sigma correctly.
    """
    adj = np.asarray(adj, dtype=float)
    size = adj.shape[0]
    tol = 1e-8 * size

    cube_eigs = np.linalg.eigvals(adj @ adj @ adj)
    expected = sorted([float(a)] * 3 + [float(sigma)] * 3 + [0.0] * (size - 6), reverse=True)
    got = np.sort(cube_eigs.real)[::-1]
    if np.any(np.abs(cube_eigs.imag) > tol):
        return False
    if np.any(np.abs(got - np.asarray(expected)) > tol):
        return False

    decided_equal = decide_equal_counts(np.linalg.eigvals(adj), tol)
    return decided_equal == (a == sigma)
