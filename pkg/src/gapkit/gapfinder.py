"""Two-stage spectral gap and midpoint search.

Stage one (constant factor): scan a halving sequence of uniform grids over
[-1/2, 1/2]; at each point a minimum-singular-value test certifies the
point is safely inside some gap before any counting query runs, and the
count identifies whether it is the k-th gap.  The first hit yields a
midpoint within 7/16 of the true one (in units of the gap) and a width
estimate inside [gap/2, 4*gap].

Stage two (refinement): a fine grid around the coarse midpoint with step
eps_k/4 = eps * width_hat / 16 repeats the certify-then-count pattern; the
extreme detected in-gap points bracket the two eigenvalues to eps*gap/2.

Grid points inside one sweep are independent; iteration j+1 of stage one
never starts before iteration j finished (early exit on detection).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DetectionFailed, GapNotFound, ParameterError
from .hermitian import as_matrix
from .ledger import CostLedger
from .osp import OspSource, default_osp_source
from .qcount import qcount
from .qsmin import qsmin
from .qube import C_SGN, qenc, qshift
from .rng import as_generator

DEFAULT_GAP_MIN = 2.0**-40

# Stage-two grid halfwidth in units of the coarse width estimate.  The
# coarse midpoint can sit 7/16 of a gap off-center while the width estimate
# is only gap/2, so a halfwidth of width_hat/2 (the bare grid budget) can
# fail to reach the upper eigenvalue; 2*width_hat always brackets both.
REFINE_SPAN_FACTOR = 4


@dataclass(frozen=True)
class BackendConfig:
    """Execution flavor for the search pipeline.

    sampling=False is the deterministic backend: no injected encoding
    noise, exact traces, idealized ground-energy answers.  Ledger charges
    follow the scheduled formulas either way.
    """

    sampling: bool = True
    encoding: str = "frobenius"
    osp_kind: str = "auto"

    def make_osp(self, n: int) -> OspSource:
        src = default_osp_source(n)
        if self.osp_kind != "auto":
            src = OspSource(dim=n, gamma=src.gamma, delta_osp=src.delta_osp, kind=self.osp_kind)
        return src


@dataclass
class GapConstResult:
    mu_hat: float
    gap_hat: float
    iterations: int  # final j; gap_hat == 2**-iterations
    ledger: CostLedger
    stats: dict = field(default_factory=dict)


@dataclass
class EigResult:
    lambda_k: float
    lambda_k1: float
    mu: float
    gap: float
    ledger: CostLedger
    coarse: GapConstResult | None = None
    stats: dict = field(default_factory=dict)


def _validate_common(h, k: int, delta: float):
    mat = as_matrix(h)
    n = mat.shape[0]
    if not 1 <= k <= n - 1:
        raise ParameterError(f"k must lie in [1, {n - 1}] for an {n}x{n} matrix, got {k}")
    if not 0.0 < delta < 0.5:
        raise ParameterError(f"delta must lie in (0, 1/2), got {delta}")
    return mat, n


def qgap_const(
    h,
    k: int,
    delta: float,
    gap_min: float | None = None,
    config: BackendConfig | None = None,
    rng=None,
    ledger: CostLedger | None = None,
) -> GapConstResult:
    """Constant-factor approximation of the k-th gap and midpoint.

    Returns a GapConstResult whose midpoint is within (7/16)*gap of the
    true midpoint and whose width estimate lies in [gap/2, 4*gap], with
    probability at least 1-delta.  Raises GapNotFound if every grid down to
    gap_min fails to certify a k-th-gap point.
    """
    mat, n = _validate_common(h, k, delta)
    config = config or BackendConfig()
    gap_min = DEFAULT_GAP_MIN if gap_min is None else float(gap_min)
    ledger = ledger if ledger is not None else CostLedger()
    root = as_generator(rng)
    osp = config.make_osp(n)
    a_enc = float(np.linalg.norm(mat)) if config.encoding == "frobenius" else 1.0
    a_enc = a_enc if a_enc > 0 else 1.0
    a_worst = a_enc + 0.5  # scale after the worst grid shift

    stats = {"qsmin_calls": 0, "qcount_calls": 0, "budget_spent": 0.0}
    j = 2
    while 2.0**-j > gap_min:
        width = 2.0**-j
        delta_j = delta * width / 2 ** (j + 1)
        eps_enc = (width / 8.0) ** 2 / (4.0 * a_worst)
        eps_enc_count = (width / 8.0) ** 2 / (32.0 * a_worst**2 * C_SGN * n)
        enc_rng = root.spawn(2)
        u_h = qenc(mat, config.encoding, eps_enc, enc_rng[0],
                   ledger=ledger, inject_noise=config.sampling)
        u_hc = qenc(mat, config.encoding, eps_enc_count, enc_rng[1],
                    ledger=ledger, inject_noise=config.sampling)
        u_h.eigensystem()  # one dense solve; everything downstream is analytic
        u_hc.eigensystem()
        u_hc.nominal_eigensystem()

        eps_sigma = width**2 / 64.0
        for i in range(2 ** (j + 1) + 1):
            point = -0.5 + i * width / 2.0
            point_rng = None if not config.sampling else root.spawn(1)[0]
            sig = qsmin(
                qshift(u_h, point), eps_sigma, delta_j / 2.0, osp, point_rng,
                idealized=not config.sampling,
            )
            stats["qsmin_calls"] += 1
            stats["budget_spent"] += delta_j / 2.0
            if sig.value >= width**2 / 32.0:
                count = qcount(
                    qshift(u_hc, point), width / 8.0, delta_j / 2.0, point_rng,
                    idealized=not config.sampling, certified=True,
                )
                stats["qcount_calls"] += 1
                stats["budget_spent"] += delta_j / 2.0
                if count.z == n - k:
                    stats["iterations_run"] = j - 1
                    return GapConstResult(
                        mu_hat=point, gap_hat=width, iterations=j, ledger=ledger, stats=stats
                    )
        j += 1

    raise GapNotFound(
        f"no width-{gap_min:g} grid certified a point inside gap {k}",
        ledger=ledger,
        diagnostics=stats,
    )


def qeig(
    h,
    k: int,
    delta: float,
    eps: float,
    config: BackendConfig | None = None,
    rng=None,
    gap_min: float | None = None,
) -> EigResult:
    """eps-accurate eigenvalue pair, gap, and midpoint around the k-th gap.

    Guarantees (probability >= 1-delta): lambda_k within [true - eps*gap/2,
    true], lambda_{k+1} within [true, true + eps*gap/2], midpoint within
    eps*gap/2, gap within (1 +- eps) of the truth.
    """
    mat, n = _validate_common(h, k, delta)
    if not 0.0 < eps < 1.0:
        raise ParameterError(f"eps must lie in (0, 1), got {eps}")
    config = config or BackendConfig()
    root = as_generator(rng)

    coarse = qgap_const(h, k, delta / 2.0, gap_min, config, root.spawn(1)[0])
    ledger = coarse.ledger
    gap_hat, mu_hat = coarse.gap_hat, coarse.mu_hat

    eps_k = eps * gap_hat / 4.0
    m_budget = math.ceil(2.0 * gap_hat / eps_k)
    delta_sig = delta / m_budget
    a_enc = float(np.linalg.norm(mat)) if config.encoding == "frobenius" else 1.0
    a_enc = a_enc if a_enc > 0 else 1.0
    a_worst = a_enc + 0.5
    eps_enc = 3.0 * eps_k**2 / (256.0 * a_worst)
    eps_enc_count = eps_k**2 / (64.0 * 32.0 * a_worst**2 * C_SGN * n)

    enc_rng = root.spawn(2)
    u_h = qenc(mat, config.encoding, eps_enc, enc_rng[0],
               ledger=ledger, inject_noise=config.sampling)
    u_hc = qenc(mat, config.encoding, eps_enc_count, enc_rng[1],
                ledger=ledger, inject_noise=config.sampling)
    u_h.eigensystem()
    u_hc.eigensystem()
    u_hc.nominal_eigensystem()
    osp = config.make_osp(n)

    eps_sigma = 3.0 * eps_k**2 / 64.0
    m_grid = REFINE_SPAN_FACTOR * m_budget
    detected = []
    stats = {"qsmin_calls": 0, "qcount_calls": 0, "grid_points": 0,
             "eps_k": eps_k, "delta_sigma": delta_sig}
    for i in range(-m_grid, m_grid + 1):
        point = mu_hat + i * eps_k / 4.0
        if abs(point) > 0.5:
            continue
        stats["grid_points"] += 1
        point_rng = None if not config.sampling else root.spawn(1)[0]
        sig = qsmin(
            qshift(u_h, point), eps_sigma, delta_sig, osp, point_rng,
            idealized=not config.sampling,
        )
        stats["qsmin_calls"] += 1
        if sig.value >= eps_k**2 / 32.0:
            count = qcount(
                qshift(u_hc, point), eps_k / 8.0, delta_sig, point_rng,
                idealized=not config.sampling, certified=True,
            )
            stats["qcount_calls"] += 1
            if count.z == n - k:
                detected.append(point)
        # points failing the certificate stay undetected (sentinel z = -1)

    if not detected:
        raise DetectionFailed(
            f"no refinement point reproduced count {n - k} inside the coarse bracket",
            ledger=ledger,
            diagnostics={**stats, "mu_hat": mu_hat, "gap_hat": gap_hat},
        )
    lam_hi = max(detected)
    lam_lo = min(detected)
    return EigResult(
        lambda_k=lam_hi,
        lambda_k1=lam_lo,
        mu=(lam_hi + lam_lo) / 2.0,
        gap=lam_hi - lam_lo,
        ledger=ledger,
        coarse=coarse,
        stats=stats,
    )
