"""Prime-characteristic invariants of hypersurfaces.

Levels via chains of Frobenius root ideals, Hartshorne-Speiser-Lyubeznik
numbers, F-pure-threshold bounds, Calabi-Yau ordinarity, and differential
operators that witness the level.
"""

from .diffop import (
    DiffOp,
    DProduct,
    OperatorCertificate,
    Projection,
    fermat_delta_j,
    fermat_level2,
    fermat_poly,
    fermat_psi1,
    synthesize,
    verify_level_operator,
)
from .errors import FlevelError
from .field import PrimeField, lucas_binomial, lucas_multinomial
from .frobenius import bracket_power, chain_ideal, frobenius_root_ideal, phi_decompose
from .homideal import HomIdeal, express
from .invariants import (
    fpt_bounds,
    hasse_witt_scalar,
    hsl_number,
    invariant_report,
    is_ordinary_cy,
    largest_grid_jump,
    level,
    level_from_exponent,
    nu,
)
from .parse import format_operator, parse_operator, parse_poly
from .poly import Polynomial, coefficient_of, frobenius_twist, poly_add, poly_mul, poly_pow

__version__ = "0.1.0"
