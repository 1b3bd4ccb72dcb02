"""Exact and numerical experiments on large sums of real quadratic characters."""

from .arith import (FundamentalDiscriminant, enumerate_fundamental, is_fundamental, kronecker,
                    largest_prime_factor, mobius, squarefree_decompose)
from .charsums import SearchResult, SearchWindow, char_prefix_sum, search_max, target_sum
from .errors import DataError, DegenerateFitError, EmptyWindowError, NotFundamentalError
from .discriminant_avg import discriminant_char_average, error_exponent_fit, error_factors, main_term
from .polya import (PolyaParams, PolyaReport, choose_z, cosine_sum, gauss_sum, polya_truncated,
                    reconstruct_bound, sine_sum)
from .resonance import (MomentReport, ResonatorSpec, RmrnReport, build_resonator, moment1, moment2,
                        predicted_lower_bound, ratio_bound, resonator_value, rmrn_lhs)

__version__ = "0.1.0"
