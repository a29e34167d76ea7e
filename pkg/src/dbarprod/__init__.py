"""Numerical dbar on product domains and the Hartogs triangle."""
from .cauchy import cauchy_transform, exact_antiholo, exact_holo, transform_expr
from .errors import *  # noqa: F401,F403
from .forms import (FormExpr, OneForm, SampledFunction, banach_norm, dbar_defect,
                    inner_product, is_closed, lp_norm, script_D, wirtinger_dbar)
from .geometry import HartogsDomain, PlanarDomain, ProductDomain, build_singular_rule, phi, phi_inv
from .hartogs import (HartogsForm, canonical_pair, extra_condition_holds, hartogs_canonical,
                      hartogs_report, pullback, solve_hartogs)
from .product_solver import SolutionField, dbar_residual, solve_T, solve_T_boundary

__version__ = "0.1.0"
