from .field import QQ, GF, Field, FieldError, FpElem, parse_field
from .series import (DEFAULT_PREC, InsufficientPrecision, LaurentTrunc, QElem, RingElem,
                     TruncSeries, ZeroDivisor, as_laurent, as_trunc, const, q_invert,
                     ring_mul, ypow)
from .matrix import (SNF, NoSolution, SeriesMatrix, SolutionFamily, constant_terms, f_row_echelon,
                     hstack, inverse, is_unimodular, smith_normal_form, solve_linear, sum_series, vstack)
