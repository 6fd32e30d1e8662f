"""Bounded-excess flows on cubic multigraphs: feasibility, exact domains, 5-weak bisections."""
from .bisection import find_k_weak, hunt, hunt_one, is_k_weak, iter_k_weak
from .canon import canonical_form, corpus, generate_cubic, is_isomorphic
from .errors import BeflowError
from .flow import FlowAssignment, FlowPoint, check_flow, cut_condition_oracle, feasible_circulation, verify_flow
from .graph import CubicMultigraph, import_graph6, named_graph, parse_edge_list, parse_edge_lists
from .orientation import Bisection, Orientation, balanced_orientation, check_orientable
from .region import FlowRegion, bed_of_bisection, bed_of_graph, min_trace, trace, urd
from .weak5 import check_factor, construct_orientable_5weak, find_factor

__version__ = "0.1.0"
