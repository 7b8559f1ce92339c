"""Shared constructions for the test suite, cached across modules."""

import functools

import numpy as np

import qgidem as qg
from qgidem.cayley import all_subgroups
from qgidem.states import (
    SolveConfig,
    solve_idempotents,
    subgroup_state_fn,
    subgroup_state_ga,
)

# solver cases with oracle counts from brute-force subgroup enumeration
SOLVER_CASES = [
    ("fn", "Z4", 3),
    ("fn", "Z2xZ2", 5),
    ("fn", "S3", 6),
    ("ga", "S3", 6),
    ("ga", "D4", 10),
    ("ga", "Q8", 6),
]

PROPERTY_GROUPS = ["Z2", "Z3", "Z4", "Z2xZ2", "S3", "D4", "Q8"]


@functools.lru_cache(maxsize=None)
def group(name):
    return qg.builtin_group(name)


@functools.lru_cache(maxsize=None)
def algebra(kind, name):
    ct = group(name)
    return qg.function_algebra(ct) if kind == "fn" else qg.group_algebra(ct)


@functools.lru_cache(maxsize=None)
def gns_and_unitary(kind, name):
    g = algebra(kind, name)
    gd = qg.gns(g)
    return gd, qg.multiplicative_unitary(g, gd)


@functools.lru_cache(maxsize=None)
def solved(kind, name, starts=500, seed=0):
    return tuple(
        solve_idempotents(algebra(kind, name), SolveConfig(starts=starts, seed=seed))
    )


@functools.lru_cache(maxsize=None)
def oracle_states(kind, name):
    ct = group(name)
    g = algebra(kind, name)
    build = subgroup_state_fn if kind == "fn" else subgroup_state_ga
    return tuple(build(g, ct, sub) for sub in all_subgroups(ct))


def hausdorff(states_a, states_b):
    """Sup-norm Hausdorff distance between two finite sets of states."""
    if not states_a or not states_b:
        return np.inf
    d_ab = max(
        min(np.abs(a.coeffs - b.coeffs).max() for b in states_b) for a in states_a
    )
    d_ba = max(
        min(np.abs(a.coeffs - b.coeffs).max() for a in states_a) for b in states_b
    )
    return max(d_ab, d_ba)


def basis_vector(n, i):
    v = np.zeros(n)
    v[i] = 1.0
    return v


def match_state(states, target, tol=1e-7):
    """Index of the state matching the target coefficients."""
    for i, st in enumerate(states):
        if np.abs(st.coeffs - np.asarray(target)).max() <= tol:
            return i
    raise AssertionError("no matching state found")
