"""Shared fixtures: small worked instances with hand-frozen expected values."""

from __future__ import annotations

import numpy as np
import pytest

from minrank import (
    GraphKind,
    NetworkSpec,
    PatternMatrix,
    SideInfoGraph,
    SolverConfig,
    Variant,
    build_pattern_matrix,
    undirected_subgraph,
)

# Four users on a line-like demand structure; the canonical walkthrough
# instance used across the suite.  User i wants X_i and caches:
#   1: {2, 3}   2: {1, 3}   3: {2, 4}   4: {1}
FIG1_EDGES = frozenset(
    {(1, 2), (1, 3), (2, 1), (2, 3), (3, 2), (3, 4), (4, 1)}
)


@pytest.fixture(scope="session")
def fig1_graph() -> SideInfoGraph:
    return SideInfoGraph(n=4, edges=FIG1_EDGES, kind=GraphKind.DIRECTED)


@pytest.fixture(scope="session")
def fig1_pattern(fig1_graph) -> PatternMatrix:
    return build_pattern_matrix(fig1_graph)


@pytest.fixture(scope="session")
def fig1_undirected(fig1_graph) -> SideInfoGraph:
    return undirected_subgraph(fig1_graph)


# A published rank-2 completion of the walkthrough pattern (4 decimal
# places; tiny entries are the solver's leftover noise at zero cells).
WORKED_COMPLETION = np.array(
    [
        [1.0000, 1.4492, 1.8671, 0.00001],
        [0.6900, 1.0000, 1.2883, -0.00001],
        [0.000009, 0.7762, 1.0000, -0.7519],
        [0.7122, 0.00001, -0.00001, 1.0000],
    ]
)

# Worked encode/decode pass for that completion with X = (10, 10, -10, 10):
# the reference transmits rows 1 and 3, and recovers X to ~1e-3.
WORKED_X = np.array([10.0, 10.0, -10.0, 10.0])
WORKED_Y = np.array([5.8211, -9.7575])
WORKED_XHAT = np.array([9.999, 9.9998, -9.9997, 10.0002])
WORKED_AGG_ERROR = 3.6894e-4


@pytest.fixture(scope="session")
def worked_completion() -> np.ndarray:
    return WORKED_COMPLETION.copy()


@pytest.fixture
def fast_cfg() -> SolverConfig:
    return SolverConfig(epsilon=1e-3, max_iters=2000, restarts=2, seed=0)


@pytest.fixture
def fast_eig_cfg(fast_cfg) -> SolverConfig:
    return SolverConfig(
        epsilon=fast_cfg.epsilon,
        max_iters=fast_cfg.max_iters,
        restarts=fast_cfg.restarts,
        seed=0,
        variant=Variant.AP_EIG,
    )


# --- tiny networks -----------------------------------------------------------


@pytest.fixture(scope="session")
def butterfly() -> NetworkSpec:
    return NetworkSpec(
        nodes=("s1", "s2", "a", "b", "t1", "t2"),
        edges=(
            ("s1", "a", 1),
            ("s2", "a", 1),
            ("s1", "t1", 1),
            ("s2", "t2", 1),
            ("a", "b", 1),
            ("b", "t1", 1),
            ("b", "t2", 1),
        ),
        sources=(("X1", "s1"), ("X2", "s2")),
        demands=(("t1", "X1"), ("t1", "X2"), ("t2", "X1"), ("t2", "X2")),
    )


@pytest.fixture(scope="session")
def path_net() -> NetworkSpec:
    return NetworkSpec(
        nodes=("s", "a", "b"),
        edges=(("s", "a", 1), ("a", "b", 1)),
        sources=(("X1", "s"),),
        demands=(("b", "X1"),),
    )


@pytest.fixture(scope="session")
def starved_net() -> NetworkSpec:
    # two unicast sessions forced through one unit edge; no valid code
    return NetworkSpec(
        nodes=("A", "B"),
        edges=(("A", "B", 1),),
        sources=(("X1", "A"), ("X2", "A")),
        demands=(("B", "X1"), ("B", "X2")),
    )
