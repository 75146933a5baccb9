import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import linprog

from abstab.errors import DimensionError, InvalidArgument
from abstab.lp import (Constraint, LinearProgram, in_convex_hull, mixture_majorization_feasible,
                       solve)
from abstab.operators import cnc_spectrum
from abstab.orbits import TWO_QUBIT_ORBITS
from abstab.polytope import lambda_hrep_qubits


def test_exact_two_variable_lp():
    lp = LinearProgram([1, 1], [Constraint((1, 2), '<=', 4), Constraint((3, 1), '<=', 6)])
    res = solve(lp, mode='exact')
    assert res.optimal
    assert res.value == Fraction(14, 5)
    assert tuple(res.point) == (Fraction(8, 5), Fraction(6, 5))
    assert res.tight_set == (0, 1)


def test_degenerate_lp_terminates_with_bland_rule():
    # classic cycling example for Dantzig's rule
    c = [0, 0, 0, Fraction(-3, 4), 150, Fraction(-1, 50), 6]
    cons = [
        Constraint((1, 0, 0, Fraction(1, 4), -60, Fraction(-1, 25), 9), '==', 0),
        Constraint((0, 1, 0, Fraction(1, 2), -90, Fraction(-1, 50), 3), '==', 0),
        Constraint((0, 0, 1, 0, 0, 1, 0), '==', 1),
    ]
    res = solve(LinearProgram(c, cons, sense='min'), mode='exact')
    assert res.optimal
    assert res.value == Fraction(-1, 20)


def test_infeasible_and_unbounded():
    lp = LinearProgram([1], [Constraint((1,), '>=', 2), Constraint((1,), '<=', 1)])
    assert solve(lp).status == 'infeasible'
    lp = LinearProgram([1, 0], [Constraint((1, -1), '<=', 1)])
    assert solve(lp).status == 'unbounded'


def test_free_and_bounded_variables():
    lp = LinearProgram([1, 1], [Constraint((1, 1), '>=', -3)], bounds=[(None, None), (-1, 2)], sense='min')
    res = solve(lp, mode='exact')
    assert res.optimal
    assert res.value == -3


@settings(max_examples=200, derandomize=True)
@given(st.integers(0, 2 ** 32 - 1))
def test_matches_reference_solver(seed):
    rng = np.random.default_rng(seed)
    nvar, ncon = int(rng.integers(2, 6)), int(rng.integers(2, 7))
    a = rng.uniform(0.1, 2.0, (ncon, nvar))
    b = rng.uniform(1.0, 5.0, ncon)
    c = rng.uniform(-1.0, 2.0, nvar)
    lp = LinearProgram(list(c), [Constraint(tuple(r), '<=', float(v)) for r, v in zip(a, b)])
    res = solve(lp, mode='float')
    ref = linprog(-c, A_ub=a, b_ub=b, bounds=[(0, None)] * nvar, method='highs')
    assert res.optimal and ref.status == 0
    assert res.value == pytest.approx(-ref.fun, abs=1e-7)


def test_validation():
    with pytest.raises(DimensionError):
        LinearProgram([1, 1], [Constraint((1,), '<=', 1)])
    with pytest.raises(InvalidArgument):
        LinearProgram([1], [Constraint((1,), '<', 1)])
    with pytest.raises(InvalidArgument):
        solve(LinearProgram([1], []), mode='decimal')


def test_convex_hull_membership():
    square = [(0, 0), (1, 0), (0, 1), (1, 1)]
    assert in_convex_hull((Fraction(1, 2), Fraction(1, 3)), square, mode='exact')
    assert not in_convex_hull((2, 0), square, mode='exact')
    assert not in_convex_hull((0, 0), [])


def test_two_qubit_orbits_majorized_by_cnc_mixtures():
    gens = [cnc_spectrum(2, 1), cnc_spectrum(2, 2)]
    for orbit in TWO_QUBIT_ORBITS:
        assert mixture_majorization_feasible(orbit.eigenvalues, gens)


def test_mixture_needs_generators():
    with pytest.raises(InvalidArgument):
        mixture_majorization_feasible([0.5, 0.5], [])


def test_dantzig_pricing_escapes_cycling():
    c = [0, 0, 0, Fraction(-3, 4), 150, Fraction(-1, 50), 6]
    cons = [
        Constraint((1, 0, 0, Fraction(1, 4), -60, Fraction(-1, 25), 9), '==', 0),
        Constraint((0, 1, 0, Fraction(1, 2), -90, Fraction(-1, 50), 3), '==', 0),
        Constraint((0, 0, 1, 0, 0, 1, 0), '==', 1),
    ]
    for mode in ('exact', 'float'):
        res = solve(LinearProgram(c, cons, sense='min'), mode=mode, pricing='dantzig')
        assert res.optimal
        assert float(res.value) == pytest.approx(-0.05, abs=1e-9)


def test_unknown_pricing_rule():
    with pytest.raises(InvalidArgument):
        solve(LinearProgram([1], [Constraint((1,), '<=', 1)]), pricing='steepest')


def _lambda_lp(n, c):
    h = lambda_hrep_qubits(n)
    cons = [Constraint(tuple(float(v) for v in q.a), '>=', float(q.b)) for q in h.inequalities]
    return LinearProgram(list(c), cons, bounds=[(None, None)] * len(c)), h


@settings(max_examples=25, derandomize=True)
@given(st.integers(0, 2 ** 32 - 1), st.sampled_from(['bland', 'dantzig']))
def test_degenerate_lambda_lp_matches_reference(seed, pricing):
    # every Lambda vertex is tight on many facets
    c = np.random.default_rng(seed).standard_normal(15)
    lp, h = _lambda_lp(2, c)
    res = solve(lp, mode='float', pricing=pricing)
    a = np.array([[float(v) for v in q.a] for q in h.inequalities])
    b = np.array([float(q.b) for q in h.inequalities])
    ref = linprog(-c, A_ub=-a, b_ub=-b, bounds=[(None, None)] * 15, method='highs')
    assert res.optimal and ref.status == 0
    assert res.value == pytest.approx(-ref.fun, abs=1e-7)
    assert (a @ res.point.astype(float) - b).min() >= -1e-9


def test_single_qubit_lambda_maximum_at_cube_corner():
    c = [1 / math.sqrt(3)] * 3
    res = solve(_lambda_lp(1, c)[0], mode='float')
    assert res.optimal
    np.testing.assert_allclose(res.point.astype(float), [1.0, 1.0, 1.0], atol=1e-9)
    assert (1 + res.value) / 2 == pytest.approx((1 + math.sqrt(3)) / 2)
    corners = [np.array(s) for s in itertools.product((-1, 1), repeat=3)]
    assert res.value == pytest.approx(max(float(np.dot(c, x)) for x in corners))


def test_dominating_spectrum_is_not_a_cnc_mixture():
    gens = [cnc_spectrum(2, 1), cnc_spectrum(2, 2)]
    assert not mixture_majorization_feasible([1.37, 0.0, 0.0, -0.37], gens)
    assert mixture_majorization_feasible([0.25] * 4, gens)
