"""Quivers, mutation schedules, and restricted T/Y-systems for tamely
laced generalized Cartan matrices."""

from .cartan import (CartanData, Decomposable, NoValidColoring, NotCartan,
                     NotSymmetrizable, SignColoring, analyze_blocks,
                     doubled_set, dynkin_graph, extend_diagram, is_tamely_laced,
                     sign_color, validate_cartan)
from .poly import (DivisionByZero, Polynomial, RationalFunction,
                   SemifieldElement, arith, is_laurent, parse_polynomial,
                   parse_rational, poly_gcd, substitute)
from .quiver import (AnnotatedQuiver, InvalidPermutation, NonCommutingSet,
                     UnknownVertex, composite_mutate, mutate_matrix, transform)
from .builder import (Embedding, InvalidColoring, InvalidParams,
                      ParityMismatch, Schedule, build_quiver, build_schedule,
                      default_sign_coloring, embed, rank2_cartan,
                      rank2_flatten, rank2_quiver, rank2_schedule,
                      rank2_sign_coloring, rank2_state, rank2_w)
from .seed import (TRIVIAL, WITH_COEFFS, Seed, composite_mutate_seed,
                   initial_seed, mutate_seed)
from .tysystem import (UNIT, ZERO, IndexOutOfRange, TYIndex, UnknownKind,
                       g_exponent, parity, point_parity, s_factors,
                       t_relation, y_relation, z_factors)
from .verify import (RunTrace, run, summarize, verify_periodicity, verify_t,
                     verify_y)

__version__ = "0.1.0"
