from .dsl import ParseError, parse_pp, parse_relem
from .realize import (CMFormula, FiniteSub, NotInInterval, amalgam, cmify, equivalent, evaluate,
                      formula_meet, formula_sum, leq, node_formula, realize, trace_generators)
from .pattern import (BOTTOM, TOP, AntichainFormula, BoundExceeded, IntervalReport, N, OrderType,
                      PatternNode, ac_join, ac_leq, ac_meet, antichain_of, evaluate_antichain,
                      interval_elements, interval_report, is_chain, is_minimal_pair, node_geq,
                      node_leq, node_meet, node_value, pattern_dot, pattern_poset, window_nodes)
