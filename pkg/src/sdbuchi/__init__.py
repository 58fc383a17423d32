"""Compositional almost-sure Büchi checking for string diagrams of rightward-open MDPs."""
from .compose import bottom_up, seq_solutions, sum_solutions, trace_solution
from .errors import (
    ContractError,
    InvariantViolation,
    SdBuchiError,
    SizeGuardError,
    ValidationError,
)
from .estimator import BuchiChecker
from .fileformat import load, parse_json, parse_text, print_json, print_text
from .graph import MdpGraph, buchi_operator, buchi_winning_region, can_reach, post, pre, reach, winning_region
from .refinement import MaxEffectCache, strat_ref
from .romdp import (
    ComponentEntrance,
    Diagram,
    Leaf,
    RoMdp,
    Seq,
    Sum,
    Trace,
    connection_map,
    cpi,
    flatten,
    global_entrances,
    monolithic_check,
    monolithic_semantics,
    seq_compose,
    sum_compose,
    trace_compose,
)
from .shortcut import build_shortcut_graph, shortcut_check
from .solution import Effect, Solution, effect_join, effect_leq, effect_of, is_no_lose, local_solution, max_effect

__version__ = "0.1.0"
