"""Interpreter for the lambda calculus and its randomized (collections) and
quantumized (signed collections with cancellation) extensions."""

from .evaluation import EvalConfig, EvalError, cbv_step, evaluate, evaluate_small_step, is_value
from .numerals import FALSE, IDENTITY, TRUE, church, int_term, pair
from .observe import (
    Distribution,
    ObservationFailure,
    Rng,
    delta,
    exact_distribution,
    member_distribution,
    observe_program,
    sample_many,
    statistically_indistinguishable,
    theta_sample,
    xi_sample,
)
from .prelude import PRELUDE, DecodeError, builtin, decode_bool, decode_church, decode_int, describe
from .rewrite import (
    RedexPath,
    beta_gamma_step,
    beta_p_contract,
    gamma_normalize,
    gamma_step,
    normalize,
    scale,
    substitute,
)
from .syntax import Env, Level, ParseError, parse, parse_program, print_term
from .terms import NEG, POS, App, Coll, Lam, Neg, Sign, Term, TermError, Var, alpha_canonical, cardinality, mk_collection, opposite, term_equal

__version__ = "0.1.0"
