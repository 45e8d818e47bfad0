"""Shared fixtures: built-in diagrams and cached multistart solves."""

import numpy as np
import pytest

from optlim import (SolveConfig, assemble_V, assemble_W, build_system, builtin,
                    solve)

FIG8_PD = "X(4,2,5,1) X(8,6,1,5) X(6,3,7,4) X(2,7,3,8)"

# Printed region potential of the figure-eight diagram: the four crossing
# blocks in region labels 1..6 (sign; j, k, l, m).
FIG8_CROSSINGS = [
    (+1, (4, 2, 1, 3)),
    (+1, (1, 5, 4, 3)),
    (-1, (5, 6, 2, 4)),
    (-1, (2, 6, 5, 1)),
]


@pytest.fixture(scope="session")
def fig8():
    return builtin("4_1")


@pytest.fixture(scope="session")
def fig8_w_solutions(fig8):
    system = build_system(assemble_W(fig8))
    return solve(system, SolveConfig(restarts=512, seed=0))


@pytest.fixture(scope="session")
def knot52():
    return builtin("5_2")


@pytest.fixture(scope="session")
def knot52_w_solutions(knot52):
    system = build_system(assemble_W(knot52))
    return solve(system, SolveConfig(restarts=512, seed=0))


@pytest.fixture(scope="session")
def knot52_v_solutions(knot52):
    system = build_system(assemble_V(knot52))
    return solve(system, SolveConfig(restarts=512, seed=0))


def make_rng(salt: int = 0) -> np.random.Generator:
    return np.random.default_rng(987654321 + salt)


def _term_monomials(potential):
    for t in potential.terms:
        for m in (t.m1, t.m2):
            if m is not None:
                yield m


def random_essential_assignment(potential, rng, tol=1e-3, max_tries=500,
                                off_cuts=False):
    """Random assignment with every dilogarithm argument away from {0, 1}.

    With off_cuts=True every term monomial value also stays clear of the
    real axis, so small perturbations cannot jump a log or Li2 branch cut
    (needed by finite-difference oracles).
    """
    for _ in range(max_tries):
        values = {}
        for v in potential.variables:
            r = np.exp(rng.uniform(np.log(0.3), np.log(3.0)))
            th = rng.uniform(-np.pi, np.pi)
            values[v] = complex(r * np.exp(1j * th))
        ok = True
        for m in potential.dilog_monomials():
            val = m.value(values)
            if min(abs(val), abs(val - 1.0)) < tol or abs(val) > 1.0 / tol:
                ok = False
                break
        if ok and off_cuts:
            for m in _term_monomials(potential):
                if abs(m.value(values).imag) < tol:
                    ok = False
                    break
        if ok:
            return values
    raise RuntimeError("could not sample an essential assignment")
