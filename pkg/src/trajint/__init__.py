"""Trajectory-based conditional integration on finite price trees.

Prices live on a finite tree whose root-to-leaf paths are the admitted
trajectories.  Conditional upper and lower integrals, conditional norms and
the associated null sets are computed by superhedging recursions over that
tree, without reference to any probability measure.
"""

from __future__ import annotations

from ._kernels import BACKEND
from .classify import NodeClass, NodeKind, TreeScan, classify_node, scan_tree
from .construct import (
    accumulate_portfolios,
    contrarian_trajectory,
    gen_example1,
    gen_example2,
    gen_lattice,
    random_tree,
    verify_example1_L_failure,
)
from .elementary import (
    Constraint,
    ElementaryFunction,
    check_wellposed,
    elementary_integral,
    evaluate_elementary,
    represent_abs,
)
from .extreal import INF, NEG_INF, ext_add, ext_scale
from .martingale import PriceProcess, classify_process, price_process, verify_tower
from .measure import (
    check_integrable,
    check_K_property,
    check_L_property,
    is_conditionally_null,
    verify_convergence_theorems,
)
from .payoff import Payoff, evaluate_payoff
from .superhedge import (
    HedgeCertificate,
    NodeSolve,
    conditional_norm,
    hedge_certificate,
    lower_integral,
    node_minimax,
    upper_integral,
)
from .tree import EXACT, FLOAT, NumericMode, TrajectoryTree, conditional_leaves, make_tree

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "Constraint",
    "EXACT",
    "ElementaryFunction",
    "FLOAT",
    "HedgeCertificate",
    "INF",
    "NEG_INF",
    "NodeClass",
    "NodeKind",
    "NodeSolve",
    "NumericMode",
    "Payoff",
    "PriceProcess",
    "TrajectoryTree",
    "TreeScan",
    "accumulate_portfolios",
    "check_K_property",
    "check_L_property",
    "check_integrable",
    "check_wellposed",
    "classify_node",
    "classify_process",
    "conditional_leaves",
    "conditional_norm",
    "contrarian_trajectory",
    "elementary_integral",
    "evaluate_elementary",
    "evaluate_payoff",
    "ext_add",
    "ext_scale",
    "gen_example1",
    "gen_example2",
    "gen_lattice",
    "hedge_certificate",
    "is_conditionally_null",
    "lower_integral",
    "make_tree",
    "node_minimax",
    "price_process",
    "random_tree",
    "represent_abs",
    "scan_tree",
    "upper_integral",
    "verify_convergence_theorems",
    "verify_example1_L_failure",
    "verify_tower",
]
