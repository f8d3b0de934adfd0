"""Exact computation with iterative (Hasse-Schmidt) derivations on F_p(s)."""

from .arith import (PrimeField, Polynomial, RationalFunction, lucas_binomial, pth_root_ratfun,
                    ratfun_arith)
from .derivation import (CONSTANT, IterativeDerivation, Report, apply, composition_constant,
                         global_level, level, standard_derivation, verify_iterativity)
from .equivalence import (Substitution, apply_substitution, check_equivalence_condition, compress,
                          decompress, frobenius_twist, normalize_at, recover_substitution)
from .errors import *  # noqa: F401,F403
from .idmodule import (IDModuleMatrix, apply_module, is_constant_vector, transform_module,
                       verify_module_iterativity)
from .parsing import parse_ratfun
from .series import (DEFAULT_ORDER, TruncBiSeries, TruncSeries, map_coefficients, parse_biseries,
                     parse_series, series_compose, series_reversion, substitute_u_plus_t)

__version__ = "0.1.0"
