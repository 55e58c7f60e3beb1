"""ffzeta: a workbench for positive-characteristic multizeta arithmetic.

Exact and truncated-Laurent evaluation of infinity-adic multizeta values,
alternating multizeta values and Carlitz multiple polylogarithms over
F_q(theta), plus the combinatorics and F_q[theta]-linear relation hunting
built on top of them.
"""

__version__ = "0.1.0"

from .scalar import (  # noqa: F401
    BiPoly,
    Field,
    Poly,
    RatFunc,
    bracket_D,
    bracket_L,
    carlitz_gamma,
    field,
    frobenius_twist,
    inverse_twist,
    poly_eval_at_theta_power,
)
from .laurent import Laurent  # noqa: F401
from .indices import Index  # noqa: F401
