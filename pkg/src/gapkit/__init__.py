"""gapkit: classical emulation of a block-encoded spectral-gap pipeline.

Library layout:

* ``hermitian``  -- matrix types, trusted eigendecomposition oracle,
                    planted-gap instance generator, HMAT file format
* ``lowerbound`` -- hard-instance graphs for binary gap decision and their
                    spectrum verifier
* ``osp``        -- oblivious state preparation (Rademacher + Hadamard)
* ``signpoly``   -- certified odd Chebyshev sign approximations
* ``qube``       -- emulated block-encodings and their calculus
* ``trace_est``  -- purified maximally-mixed trace estimation
* ``qsmin``      -- minimum singular value via ground-energy contract
* ``qcount``     -- below-threshold eigenvalue counting
* ``gapfinder``  -- the two-stage gap/midpoint search
* ``cli``        -- command-line driver (run / validate / bench)
"""

from .errors import (
    CapacityError,
    ContractError,
    DetectionFailed,
    GapNotFound,
    InputError,
    ParameterError,
)
from .gapfinder import BackendConfig, EigResult, GapConstResult, qeig, qgap_const
from .hermitian import (
    GapGroundTruth,
    HermitianMatrix,
    SpectralDecomposition,
    eig_reference,
    gen_planted_gap,
    read_hmat,
    write_hmat,
)
from .ledger import CostLedger
from .lowerbound import gen_lowerbound_instance, verify_lowerbound_spectrum
from .osp import OspSample, OspSource, default_osp_source, flatten_check, fwht, osp_sample
from .qcount import CountResult, qcount
from .qsmin import GroundEnergyContract, SigmaEstimate, ground_energy_emulate, qsmin
from .qube import Qube, apply_qet, gram, qenc, qshift
from .signpoly import ChebPoly, dump_chebpoly, load_chebpoly, sign_poly
from .trace_est import TraceEstimate, max_entangled_reduced_density, purified_trace

__version__ = "0.1.0"

__all__ = [
    "BackendConfig",
    "CapacityError",
    "ChebPoly",
    "ContractError",
    "CostLedger",
    "CountResult",
    "DetectionFailed",
    "EigResult",
    "GapConstResult",
    "GapGroundTruth",
    "GapNotFound",
    "GroundEnergyContract",
    "HermitianMatrix",
    "InputError",
    "OspSample",
    "OspSource",
    "ParameterError",
    "Qube",
    "SigmaEstimate",
    "SpectralDecomposition",
    "TraceEstimate",
    "apply_qet",
    "default_osp_source",
    "dump_chebpoly",
    "eig_reference",
    "flatten_check",
    "fwht",
    "gen_lowerbound_instance",
    "gen_planted_gap",
    "gram",
    "ground_energy_emulate",
    "load_chebpoly",
    "max_entangled_reduced_density",
    "osp_sample",
    "purified_trace",
    "qcount",
    "qeig",
    "qenc",
    "qgap_const",
    "qshift",
    "qsmin",
    "read_hmat",
    "sign_poly",
    "verify_lowerbound_spectrum",
    "write_hmat",
]
