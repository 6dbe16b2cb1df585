"""Truncated Novikov-ring arithmetic, based chain complexes and torsion logs."""

from .chargroup import MINUS_INFINITY, Character, GroupSpec, Scalar
from .series import (EXACT, NovikovRing, NovikovSeries, geom_inv, lognorm,
                     parse_series, recognize_unit, truncate, unit_inverse)
from .matrix import (AddLeftMultiple, AddRightMultiple, Destabilize, MoveLog,
                     NovMatrix, ScaleByUnit, Stabilize, SwapPair, apply_move,
                     invert, matnorm, neumann_inv, replay, schur_complement,
                     schur_eliminate, simple_decompose, stability_radius)
from .complexes import (BasedComplex, ChainMap, Homotopy, cancel_pair, chan2iso,
                        change_basis, conjugate_by_near_identity, direct_sum,
                        dualize, is_chain_map, isoinv, minimize, n_equiv,
                        replay_complex, stabilize, torsion_complex, validate,
                        verify_homotopy)
from .torsion import (TorsionCertificate, latour_obstruction, normal_form_Z,
                      realize_torsion, torsion_of_log)
from .corpus import corpus
from .fileformat import load, store

__version__ = "0.1.0"
