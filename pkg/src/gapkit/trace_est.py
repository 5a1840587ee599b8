"""Trace estimation against the maximally mixed state.

The quantum routine prepares a purification of I/N, runs a Hadamard test
against the block-encoding, and amplifies; classically we emulate the
statistics faithfully: each shot is a +-1 Bernoulli with mean
tr(encoded)/N, and a Hoeffding-sized batch of shots yields the advertised
(eps, delta) guarantee.  The ledger is charged with the quantum cost
formula (linear in 1/eps); the classical shot count (quadratic in 1/eps) is
recorded under its own key so the two never mix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, ContractError, ParameterError
from .ledger import log1
from .qube import Qube
from .rng import as_generator

MAX_PURIFICATION_QUBITS = 10


def max_entangled_reduced_density(n: int) -> np.ndarray:
    """Reduced density of the maximally entangled state on n+n qubits.

    Builds the 4**n amplitude vector of (1/sqrt(2^n)) sum_i |i>|i>
    explicitly, reshapes it to a (2^n, 2^n) amplitude matrix M, and traces
    out the second register as M M^dagger.
    """
    if n < 1:
        raise ParameterError("n must be >= 1")
    if n > MAX_PURIFICATION_QUBITS:
        raise CapacityError(f"purification above {MAX_PURIFICATION_QUBITS} qubits not supported")
    dim = 2**n
    psi = np.zeros(dim * dim)
    psi[np.arange(dim) * dim + np.arange(dim)] = 1.0 / math.sqrt(dim)
    m = psi.reshape(dim, dim)
    return m @ m.conj().T


@dataclass(frozen=True)
class TraceEstimate:
    value: float
    eps: float
    delta: float
    samples_used: int


def purified_trace(
    u: Qube,
    eps_tr: float,
    delta: float,
    rng=None,
    *,
    deterministic: bool = False,
    charge_gates: bool = True,
) -> TraceEstimate:
    """Estimate tr(A) for the nominal matrix of a block-encoding.

    Requires u.err <= eps_tr/(2N); the encoding half of the budget is spent
    on ||a*encoded - A||, the sampling half on Monte Carlo noise, giving
    |estimate - tr(A)| <= eps_tr with probability at least 1 - delta.

    ``deterministic`` switches to the delta->0 limit: the exact value
    a * tr(encoded), still charged at the scheduled formulas so ledger
    totals match the sampling backend.
    """
    if not 0.0 < eps_tr < 1.0:
        raise ParameterError(f"eps_tr must lie in (0, 1), got {eps_tr}")
    if not 0.0 < delta < 1.0:
        raise ParameterError(f"delta must lie in (0, 1), got {delta}")
    n = u.dim
    if u.err > eps_tr / (2.0 * n) + 1e-15:
        raise ContractError(
            f"encoding error {u.err:g} exceeds the trace budget eps_tr/(2N) = "
            f"{eps_tr / (2 * n):g}"
        )

    mean = float(np.trace(u.encoded).real) / n
    m = int(math.ceil(2.0 * math.log(2.0 / delta) / (eps_tr / (u.scale * n)) ** 2))

    if deterministic:
        value = u.scale * n * mean
        samples = 1
    else:
        g = as_generator(rng)
        # one +-1 shot has success probability (1+mean)/2; m shots reduce
        # to a single binomial draw with the same sample-mean law
        p = min(max((1.0 + mean) / 2.0, 0.0), 1.0)
        hits = g.binomial(m, p)
        value = u.scale * n * (2.0 * hits / m - 1.0)
        samples = m

    if charge_gates:
        gate_cost = (math.log(max(n, 2)) + u.unit_cost) * (u.scale * n / eps_tr) * log1(1.0 / delta)
        u.ledger.charge("elementary_gates", gate_cost)
    runs = (u.scale * n / eps_tr) * log1(1.0 / delta)
    u.ledger.charge("queries_uh", runs * u.queries_per_use)
    u.ledger.charge("classical_samples", 0 if deterministic else m)
    u.ledger.charge("max_qubits", 2 * math.ceil(math.log2(max(n, 2))) + u.ancillas)
    return TraceEstimate(value=float(value), eps=eps_tr, delta=delta, samples_used=samples)
