"""
Quantum ramp secret sharing over qudits with advance sharing.

Two (k, L, n) schemes with n = 2k - L are provided: a coefficient-embedding
scheme (``"ogawa"``) and a strongly secure evaluation-embedding scheme
(``"zm"``).  Both encoders are exact maps on sparse state vectors with
rational amplitudes, and both support handing out up to k-L shares before
the secret exists.
"""

from .gf import FieldElement, FieldError, FieldSpec, make_field, parse_field
from .poly import PointSet, Polynomial, ev_map, evaluate, lagrange_basis, lagrange_interpolate
from .qstate import (BasisMap, CapExceeded, ComplexRational, DensityMatrix, SparseState,
                     apply_basis_map, basis_state, dm_equal, dumps_state, loads_state,
                     partial_trace, states_equal, tensor)
from .schemes import (OGAWA, ZM, AdvanceError, AdvanceSession, ReconstructionError, SchemeError,
                      SchemeParams, advance_complete, advance_setup, encode, encode_ogawa,
                      encode_zm, g_poly, h_poly, make_params, reconstruct)

__version__ = "0.1.0"

__all__ = [
    "FieldElement", "FieldError", "FieldSpec", "make_field", "parse_field",
    "PointSet", "Polynomial", "ev_map", "evaluate", "lagrange_basis", "lagrange_interpolate",
    "BasisMap", "CapExceeded", "ComplexRational", "DensityMatrix", "SparseState",
    "apply_basis_map", "basis_state", "dm_equal", "dumps_state", "loads_state",
    "partial_trace", "states_equal", "tensor",
    "OGAWA", "ZM", "AdvanceError", "AdvanceSession", "ReconstructionError", "SchemeError",
    "SchemeParams", "advance_complete", "advance_setup", "encode", "encode_ogawa", "encode_zm",
    "g_poly", "h_poly", "make_params", "reconstruct",
]
