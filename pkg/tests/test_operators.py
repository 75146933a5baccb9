import itertools
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose

from abstab.errors import ContractViolation, DimensionError, InputError, InvalidArgument
from abstab.operators import (HermitianOperator, ValueAssignment, cnc_spectrum, enumerate_cnc_qubits,
                              enumerate_stabilizer_states, extend_assignment, omega, pauli_word,
                              phase_point_operators, phase_point_spectrum,
                              qutrit_lambda_vertices, single_qudit_cnc_operators,
                              stabilizer_pairs, stabilizer_projector, wigner_function,
                              wigner_reconstruct)
from abstab.phase_space import all_vectors, beta, enumerate_isotropic, symplectic_form
from abstab.spectra import eigen_spectrum


@pytest.mark.parametrize('d,n', [(2, 1), (2, 2), (3, 1), (5, 1)])
def test_pauli_words_are_orthogonal_unitaries(d, n):
    vecs = all_vectors(d, n)
    dim = d ** n
    for u in vecs:
        t = pauli_word(u)
        assert_allclose(t @ t.conj().T, np.eye(dim), atol=1e-12)
    gram = np.array([[np.vdot(pauli_word(u), pauli_word(v)) for v in vecs] for u in vecs])
    assert_allclose(gram, dim * np.eye(len(vecs)), atol=1e-9)


def test_qubit_pauli_words_are_hermitian():
    for u in all_vectors(2, 2):
        t = pauli_word(u)
        assert_allclose(t, t.conj().T, atol=1e-12)


@pytest.mark.parametrize('d,n,count', [(2, 1, 6), (2, 2, 60), (2, 3, 1080), (3, 1, 12), (3, 2, 360)])
def test_stabilizer_states_are_distinct_pure_states(d, n, count):
    states = enumerate_stabilizer_states(d, n)
    assert len(states) == count
    for s in states:
        assert s.trace == pytest.approx(1, abs=1e-10)
        assert s.hs_norm2 == pytest.approx(1, abs=1e-10)
    flat = np.array([s.matrix.ravel() for s in states])
    gram = np.abs(flat.conj() @ flat.T)
    np.fill_diagonal(gram, 0)
    assert gram.max() < 1 - 1e-6


def test_extended_assignments_are_consistent():
    for lag, r in stabilizer_pairs(2, 2):
        assert r.violations() == []
    for space in enumerate_isotropic(3, 2, 2)[:5]:
        for free in itertools.product(range(3), repeat=2):
            assert extend_assignment(space, free).violations() == []


def test_single_qubit_cnc_is_the_cube():
    ops = enumerate_cnc_qubits(1, 1)
    assert len(ops) == 8
    for c in ops:
        assert c.cnc.is_closed()
        assert_allclose(eigen_spectrum(c.operator).sorted_desc, cnc_spectrum(1, 1), atol=1e-9)
        assert c.operator.hs_norm2 == pytest.approx(2, abs=1e-9)


@pytest.mark.parametrize('m,size', [(1, 8), (2, 6)])
def test_two_qubit_cnc_operators(m, size):
    states = enumerate_stabilizer_states(2, 2)
    ops = enumerate_cnc_qubits(2, m)
    assert ops
    for c in ops:
        assert len(c.cnc.omega) == size
        assert c.cnc.is_closed()
        assert c.operator.hs_norm2 == pytest.approx(size / 4, abs=1e-9)
        assert_allclose(eigen_spectrum(c.operator).sorted_desc, cnc_spectrum(2, m), atol=1e-9)
        assert min(c.operator.overlap(s) for s in states) >= -1e-12


def test_cnc_type_out_of_range():
    with pytest.raises(InvalidArgument):
        enumerate_cnc_qubits(2, 3)


@pytest.mark.parametrize('d,n', [(3, 1), (3, 2), (5, 1)])
def test_phase_point_operators(d, n):
    ops = phase_point_operators(d, n)
    dim = d ** n
    assert len(ops) == dim ** 2
    assert_allclose(sum(a.matrix for a in ops), dim * np.eye(dim), atol=1e-9)
    head = ops[:min(10, len(ops))]
    for a in head:
        assert_allclose(eigen_spectrum(a).sorted_desc, phase_point_spectrum(d, n), atol=1e-9)
    gram = np.array([[a.overlap(b) for b in head] for a in head])
    assert_allclose(gram, dim * np.eye(len(head)), atol=1e-9)


def test_stabilizer_states_have_nonnegative_wigner_function():
    for s in enumerate_stabilizer_states(3, 1):
        assert min(wigner_function(s).values()) >= -1e-12


def _random_density(rng, dim):
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


@settings(max_examples=50, derandomize=True)
@given(st.integers(0, 2 ** 32 - 1), st.sampled_from([(3, 1), (5, 1), (3, 2)]))
def test_wigner_reconstruction_round_trip(seed, dn):
    d, n = dn
    rho = HermitianOperator(_random_density(np.random.default_rng(seed), d ** n), d, n, 'state')
    w = wigner_function(rho)
    assert sum(w.values()) == pytest.approx(1, abs=1e-10)
    back = wigner_reconstruct(w, d, n)
    assert_allclose(back.matrix, rho.matrix, atol=1e-10)


def test_wigner_function_needs_odd_dimension():
    rho = HermitianOperator(np.eye(2) / 2, 2, 1, 'state')
    with pytest.raises(InvalidArgument):
        wigner_function(rho)


def test_single_qutrit_lambda_vertices():
    ops = qutrit_lambda_vertices()
    assert len(ops) == 81
    assert sum(1 for op in ops if op.label == 'phase-point') == 9
    for op in ops:
        assert op.hs_norm2 == pytest.approx(3, abs=1e-9)


def test_single_qudit_cnc_count_d5():
    ops = single_qudit_cnc_operators(5)
    assert len(ops) == 5 ** 6
    assert sum(1 for op in ops if op.label == 'phase-point') == 25


def test_operator_contracts():
    with pytest.raises(ContractViolation):
        HermitianOperator(np.array([[0, 1], [0, 0]]), 2, 1)
    with pytest.raises(DimensionError):
        HermitianOperator(np.eye(3), 2, 1)
    with pytest.raises(InputError):
        HermitianOperator.from_json({'d': 2, 'n': 1, 're': [[1]]})


def test_operator_json_codec():
    op = enumerate_stabilizer_states(3, 1)[4]
    back = HermitianOperator.from_json(op.to_json())
    assert (back.d, back.n, back.label) == (3, 1, 'stabilizer')
    assert_allclose(back.matrix, op.matrix, atol=1e-15)


@pytest.mark.parametrize('d', [2, 3])
def test_partial_stabilizer_projectors(d):
    for space in enumerate_isotropic(d, 2, 1):
        for r0 in range(d):
            p = stabilizer_projector(space, extend_assignment(space, [r0]))
            assert p.label == 'projector'
            assert_allclose(p.matrix @ p.matrix, p.matrix, atol=1e-10)
            assert p.trace == pytest.approx(d)
    space = enumerate_isotropic(3, 2, 1)[0]
    with pytest.raises(ContractViolation):
        stabilizer_projector(space, ValueAssignment(3, {}))


@pytest.mark.parametrize('d,n', [(2, 1), (2, 2), (3, 1), (3, 2), (5, 1)])
def test_phase_defect_matches_matrix_products(d, n):
    w = omega(d)
    for u, v in itertools.product(all_vectors(d, n), repeat=2):
        if symplectic_form(u, v):
            continue
        assert_allclose(pauli_word(u) @ pauli_word(v), w ** (-beta(u, v)) * pauli_word(u + v), atol=1e-12)


@pytest.mark.parametrize('m', [1, 2])
def test_cnc_value_assignments_per_set(m):
    per_set = Counter(frozenset(v.index for v in c.cnc.omega) for c in enumerate_cnc_qubits(2, m))
    assert set(per_set.values()) == {2 ** (2 - m) * 2 ** (2 * m + 1)}
    assert all(len(k) == (2 * m + 2) * 2 ** (2 - m) for k in per_set)
    if m == 2:
        assert len(per_set) == 6


def _noncontextual(points, lines):
    """Is there gamma on ``points`` with gamma(u)+gamma(v) = gamma(u+v) - beta(u, v) on each line?"""
    for bits in itertools.product(range(2), repeat=len(points)):
        g = dict(zip(points, bits))
        if all((g[u] + g[v] - g[u + v] + beta(u, v)) % 2 == 0 for u, v in lines):
            return True
    return False


def _mermin_squares():
    lines = []
    for lag in enumerate_isotropic(2, 2, 2):
        u, v = [e for e in lag.elements() if not e.is_zero()][:2]
        lines.append((u, v))
    out = []
    for grid in itertools.combinations(lines, 6):
        cover = Counter(p for u, v in grid for p in (u, v, u + v))
        if len(cover) != 9 or set(cover.values()) != {2}:
            continue
        if not _noncontextual(sorted(cover, key=lambda p: p.index), grid):
            out.append(frozenset(p.index for p in cover))
    return out


def test_cnc_sets_contain_no_mermin_square():
    squares = _mermin_squares()
    assert squares
    for m in (1, 2):
        for omega_set in {frozenset(v.index for v in c.cnc.omega) for c in enumerate_cnc_qubits(2, m)}:
            assert not any(sq <= omega_set for sq in squares)


@pytest.mark.slow
@pytest.mark.parametrize('m,sets,size', [(1, 315, 16), (2, 378, 12), (3, 288, 8)])
def test_three_qubit_cnc_operators(m, sets, size):
    ops = enumerate_cnc_qubits(3, m)
    per_set = Counter(frozenset(v.index for v in c.cnc.omega) for c in ops)
    assert len(per_set) == sets
    assert set(per_set.values()) == {2 ** (3 - m) * 2 ** (2 * m + 1)}
    assert all(len(k) == size for k in per_set)
    for c in ops[::97]:
        assert_allclose(eigen_spectrum(c.operator).sorted_desc, cnc_spectrum(3, m), atol=1e-9)
        assert c.operator.hs_norm2 == pytest.approx(size / 8, abs=1e-9)


def test_qutrit_lambda_vertex_spectra():
    golden = (1 + np.sqrt(5)) / 2, 0.0, (1 - np.sqrt(5)) / 2
    phase_points = nonlinear = 0
    for op in qutrit_lambda_vertices():
        spec = eigen_spectrum(op).sorted_desc
        if op.label == 'phase-point':
            assert_allclose(spec, [1, 1, -1], atol=1e-9)
            phase_points += 1
        else:
            assert_allclose(spec, golden, atol=1e-9)
            nonlinear += 1
    assert (phase_points, nonlinear) == (9, 72)
