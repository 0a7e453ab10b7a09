"""Exact semilinear algebra over A = F_q[t]: motives, isogenies, torsion
structure, Tate modules with Frobenius data, and valuation/period kernels."""

from .errors import (CapExhausted, CharacteristicViolation,
                     DegenerateInseparable, NotRestricted, NotTorsion,
                     TMotivesError, ValidationError)
from .fields import FFElem, FieldTower, TowerLevel
from .poly import FracField, Poly, PolyRing, QuotElem, QuotRing, RatFunc
from .linalg import Mat, char_ideal, smith_form
from .solve import semilinear_kernel, solve_additive
from .bold import BoldModule, BoldRing, den, in_scalar_extension, lcm_den
from .motive import (Base, EffectiveMotive, Motive, MotiveHom,
                     TorsionBoldModule, carlitz, compose_homs,
                     factor_sep_insep, hom_motives, identity_hom,
                     invert_isogeny, is_isogeny, motive_to_bold,
                     scalar_isogeny, torsion_filtration, unit_effective)
from .galois import (TateApproximation, TorsionGaloisRep, dq,
                     dq_rq_roundtrip, frobenius_charpoly, frobenius_minpoly,
                     rq, rq_dq_roundtrip, semisimplicity_report,
                     tate_conjecture_check, tate_modules_agree, tate_module,
                     tate_reduce, tate_via_bold)
from .periods import (LaurentApprox, Place, PlaceSet, bplus_membership,
                      eps_floor_check, fixpoint_bound_check, s_membership,
                      sigma_quotient_solve, verify_sigma_quotient, vx)

__version__ = "0.1.0"
