"""Broadcast independence number of locally uniform 2-lobsters.

Closed-form value, an explicit optimal broadcast, and an exact oracle to
check both against.
"""

from .beta_star import BetaStarReport, beta_star
from .classifier import SubtreeType, T4Sequence, classify_all, find_t4_sequences
from .constructor import ConstructionTrace, VerificationFailure, construct
from .genlab import Catalog, GenParams, enumerate_small, random_instance, random_instances
from .lobster_model import (
    LobsterSpec,
    LobsterStructure,
    SubtreeSpec,
    build_tree_from_spec,
    recognize_lobster,
    validate,
)
from .oracle import OracleResult, TooLarge, exact_beta_b, milp_beta_b
from .tree_core import Tree, check_broadcast, check_dominating, check_independent, cost, metrics

__all__ = [
    "BetaStarReport",
    "Catalog",
    "ConstructionTrace",
    "GenParams",
    "LobsterSpec",
    "LobsterStructure",
    "OracleResult",
    "SubtreeSpec",
    "SubtreeType",
    "T4Sequence",
    "TooLarge",
    "Tree",
    "VerificationFailure",
    "beta_star",
    "build_tree_from_spec",
    "check_broadcast",
    "check_dominating",
    "check_independent",
    "classify_all",
    "construct",
    "cost",
    "enumerate_small",
    "exact_beta_b",
    "find_t4_sequences",
    "metrics",
    "milp_beta_b",
    "random_instance",
    "random_instances",
    "recognize_lobster",
    "validate",
]
