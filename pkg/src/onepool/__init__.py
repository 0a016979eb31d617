"""Exact solver for the pooling problem with one pool and few inputs."""
from .arrangement import (Cell, Hyperplane, buck_bound, build_hyperplanes, cell_bound,
                          classify_point, enumerate_cells, is_general_position)
from .exactnum import Mode, Rational, rat_cmp, rat_from_decimal, rat_to_str
from .instance import (Flow, PoolingInstance, ValidationReport, check_flow_feasible,
                       check_quality_feasible, objective, preprocess, validate)
from .lp import LinearProgram, LpResult, LpStatus, solve_lp, solve_max_min_slack
from .oracle import grid_scan, solve_by_subset_enumeration, verify_solution
from .solver import (Solution, build_lp_for_outputs, solve_fixed_ratio, solve_pooling, val)

__version__ = "0.1.0"
