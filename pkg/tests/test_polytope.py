from collections import Counter
from fractions import Fraction

import pytest

from abstab.errors import DivergenceError, InvalidArgument, ResourceGuardError
from abstab.polytope import (Inequality, RationalPolytope, double_description, facets_of,
                             intersect_halfspace, lambda_hrep_qubits, pauli_coordinates,
                             operator_from_pauli_coordinates, permutation_closure, polar,
                             radius_extremes, stab_polytope_qubits, stabilizer_sign_vectors,
                             weyl_chamber)
from abstab.operators import enumerate_stabilizer_states
from abstab.orbits import TWO_QUBIT_ORBITS, match_orbit
from abstab.spectra import eigen_spectrum

F = Fraction


def unit_square(exact=True):
    return RationalPolytope(2, [Inequality((1, 0), 0), Inequality((0, 1), 0),
                                Inequality((-1, 0), -1), Inequality((0, -1), -1)], exact=exact)


@pytest.mark.parametrize('exact', [True, False])
def test_square(exact):
    p = double_description(unit_square(exact))
    assert sorted(tuple(float(v) for v in x) for x in p.vertices) == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert p.check() == []


def test_unbounded_region():
    h = RationalPolytope(2, [Inequality((1, 0), 0), Inequality((0, 1), 0)])
    with pytest.raises(DivergenceError):
        double_description(h)


def test_intersect_halfspace_cuts_a_corner():
    sq = double_description(unit_square())
    cut = intersect_halfspace(sq, Inequality((-1, -1), F(-3, 2)))
    assert set(cut.vertices) == {(0, 0), (1, 0), (0, 1), (1, F(1, 2)), (F(1, 2), 1)}
    assert cut.check() == []
    assert intersect_halfspace(sq, Inequality((1, 1), -1)) is sq


def test_single_qubit_lambda_is_the_cube():
    cube = double_description(lambda_hrep_qubits(1))
    assert cube.vertex_count == 8
    assert {abs(v) for x in cube.vertices for v in x} == {1}


def test_single_qubit_stab_octahedron_and_polarity():
    stab = stab_polytope_qubits(1)
    assert len(stab.vertices) == 6 and stab.facet_count == 8
    cube = double_description(lambda_hrep_qubits(1))
    octa = polar(cube)
    assert set(octa.vertices) == set(stab.vertices)
    r = radius_extremes(stab, (0, 0, 0))
    big = radius_extremes(cube, (0, 0, 0))
    assert r.inradius_sq == F(1, 3)
    assert big.circumradius_sq == 3
    assert r.inradius_sq * big.circumradius_sq == 1
    # Hilbert-Schmidt metric: |X - I/2|^2 = |x|^2 / 2
    assert radius_extremes(stab, (0, 0, 0), metric_scale=F(1, 2)).inradius_sq == F(1, 6)


def test_stabilizer_sign_vectors_round_trip():
    signs = stabilizer_sign_vectors(2)
    assert len(signs) == 60
    assert all(sum(1 for v in s if v) == 3 for s in signs)
    state = enumerate_stabilizer_states(2, 2)[7]
    op = operator_from_pauli_coordinates(2, pauli_coordinates(state), 'state')
    assert abs(op.matrix - state.matrix).max() < 1e-12


def test_weyl_chamber():
    ch = weyl_chamber(4)
    assert ch.vertex_count == 4
    assert ch.check() == []
    assert ch.affine_dim == 3
    assert ch.contains((F(1, 2), F(1, 4), F(1, 4), 0))
    assert not ch.contains((F(1, 4), F(1, 2), F(1, 4), 0))


def test_permutation_closure_of_simplex_point():
    seed = RationalPolytope(3, [], [(F(1, 2), F(1, 2), 0), (F(1, 2), F(1, 4), F(1, 4))], True,
                            [Inequality((1, 1, 1), 1)])
    p = permutation_closure(seed)
    assert set(p.vertices) == {(F(1, 2), F(1, 2), 0), (F(1, 2), 0, F(1, 2)), (0, F(1, 2), F(1, 2))}
    assert p.facet_count == 3
    assert p.check() == []


def test_facets_of_square():
    facets = facets_of([(0, 0), (1, 0), (0, 1), (1, 1)])
    assert len(facets) == 4
    sq = RationalPolytope(2, facets, exact=True)
    assert sq.contains((F(1, 2), F(1, 2)))
    assert not sq.contains((F(3, 2), F(1, 2)))


def test_permutation_guard():
    v = tuple(F(k, 28) for k in range(1, 8))
    with pytest.raises(ResourceGuardError):
        permutation_closure(RationalPolytope(7, [], [v], True))


def test_representation_checks():
    with pytest.raises(InvalidArgument):
        double_description(RationalPolytope(2, [], [(0, 0)]))
    with pytest.raises(InvalidArgument):
        lambda_hrep_qubits(4)


def test_json_codec(validate):
    p = double_description(unit_square())
    doc = p.to_json()
    validate(doc, 'polytope')
    back = RationalPolytope.from_json(doc)
    assert back.vertices == p.vertices and back.exact


@pytest.mark.slow
def test_two_qubit_lambda_vertex_count():
    lam = double_description(lambda_hrep_qubits(2), progress=True)
    assert lam.vertex_count == 22320
    seen = Counter()
    for v in lam.vertices:
        rec = match_orbit(eigen_spectrum(operator_from_pauli_coordinates(2, v)).values)
        assert rec is not None, v
        assert (1 + sum(F(x) ** 2 for x in v)) / 4 == rec.hs_norm2
        seen[rec.name] += 1
    assert set(seen) == {o.name for o in TWO_QUBIT_ORBITS}
    assert sum(seen.values()) == 22320
