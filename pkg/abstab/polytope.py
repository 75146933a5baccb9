"""
Convex polytopes in exact rational or floating arithmetic.

A polytope carries an H-representation (inequalities a.x >= b plus
optional equalities a.x == b) and/or a V-representation. Conversion
H -> V is the double description method on the homogenised cone
{(t, x) : a.x - b t >= 0, t >= 0}; adjacency of extreme rays uses the
combinatorial test on zero sets.
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import NamedTuple

import more_itertools
import numpy as np
import scipy.linalg

from .config import DD_TOL
from .errors import (ContractViolation, DimensionError, DivergenceError, InvalidArgument,
                     ResourceGuardError, ToleranceError)
from .linalg import integer_row, inverse_exact, nullspace_exact, rank_exact, rank_float
from .lp import in_convex_hull

log = logging.getLogger(__name__)

PERMUTATION_GUARD = 720
# ray entries above this switch DD to Python integers so products stay inside int64
INT_LIMIT = 2 ** 24


class Inequality(NamedTuple):
    """a.x >= b"""
    a: tuple
    b: object


def _frac_str(v):
    v = Fraction(v)
    return str(v.numerator) if v.denominator == 1 else f'{v.numerator}/{v.denominator}'


@dataclass
class RationalPolytope:
    dim: int
    inequalities: list = field(default_factory=list)
    vertices: list = None
    exact: bool = True
    equalities: list = field(default_factory=list)
    notes: dict = field(default_factory=dict)

    def __post_init__(self):
        conv = Fraction if self.exact else float
        self.inequalities = [Inequality(tuple(conv(v) for v in q.a), conv(q.b))
                             for q in (Inequality(*q) for q in self.inequalities)]
        self.equalities = [Inequality(tuple(conv(v) for v in q.a), conv(q.b))
                           for q in (Inequality(*q) for q in self.equalities)]
        for q in self.inequalities + self.equalities:
            if len(q.a) != self.dim:
                raise DimensionError(f'inequality of length {len(q.a)} in dimension {self.dim}')
        if self.vertices is not None:
            self.vertices = [tuple(conv(v) for v in p) for p in self.vertices]
            for p in self.vertices:
                if len(p) != self.dim:
                    raise DimensionError(f'vertex of length {len(p)} in dimension {self.dim}')

    @property
    def has_h(self):
        return bool(self.inequalities)

    @property
    def has_v(self):
        return self.vertices is not None

    @property
    def vertex_count(self):
        return len(self.vertices)

    @property
    def facet_count(self):
        return len(self.inequalities)

    @property
    def affine_dim(self):
        return self.dim - self._rank([q.a for q in self.equalities])

    def _rank(self, rows):
        rows = list(rows)
        if not rows:
            return 0
        return rank_exact(rows) if self.exact else rank_float(rows)

    def slacks(self, x):
        return [sum(a * v for a, v in zip(q.a, x)) - q.b for q in self.inequalities]

    def contains(self, x, tol=DD_TOL):
        tol = 0 if self.exact else tol
        conv = Fraction if self.exact else float
        x = [conv(v) for v in x]
        if any(s < -tol for s in self.slacks(x)):
            return False
        return all(abs(sum(a * v for a, v in zip(q.a, x)) - q.b) <= tol for q in self.equalities)

    def tight_set(self, x, tol=DD_TOL):
        tol = 0 if self.exact else tol
        return [k for k, s in enumerate(self.slacks(x)) if abs(s) <= tol]

    def check(self, tol=DD_TOL):
        """Both representations agree and every vertex is pinned by its tight set.

        Returns the list of offending vertex indices (empty when consistent).
        """
        bad = []
        eq_rows = [q.a for q in self.equalities]
        for i, v in enumerate(self.vertices or []):
            if not self.contains(v, tol):
                bad.append(i)
                continue
            rows = [self.inequalities[k].a for k in self.tight_set(v, tol)] + eq_rows
            if self._rank(rows) != self.dim:
                bad.append(i)
        return bad

    def to_json(self):
        num = _frac_str if self.exact else float
        return {
            'dim': self.dim,
            'exact': self.exact,
            'H': [{'a': [num(v) for v in q.a], 'b': num(q.b)} for q in self.inequalities],
            'E': [{'a': [num(v) for v in q.a], 'b': num(q.b)} for q in self.equalities],
            'V': [[num(v) for v in p] for p in (self.vertices or [])],
            'notes': self.notes,
        }

    @classmethod
    def from_json(cls, obj):
        exact = bool(obj['exact'])
        conv = Fraction if exact else float
        ineqs = [Inequality([conv(v) for v in q['a']], conv(q['b'])) for q in obj.get('H', [])]
        eqs = [Inequality([conv(v) for v in q['a']], conv(q['b'])) for q in obj.get('E', [])]
        verts = [[conv(v) for v in p] for p in obj['V']] if obj.get('V') else None
        return cls(int(obj['dim']), ineqs, verts, exact, eqs, dict(obj.get('notes', {})))


# ── Double description core ─────────────────────────────


def _homogenize(poly):
    """Rows r with r.(t, x) >= 0; equalities become two opposite rows."""
    rows = [(1,) + (0,) * poly.dim]
    for q in poly.inequalities:
        rows.append((-q.b,) + tuple(q.a))
    for q in poly.equalities:
        rows.append((-q.b,) + tuple(q.a))
        rows.append((q.b,) + tuple(-v for v in q.a))
    if poly.exact:
        return [np.array(integer_row(r), dtype=object if max(map(abs, integer_row(r))) > INT_LIMIT else np.int64)
                for r in rows]
    out = []
    for r in rows:
        r = np.asarray(r, dtype=float)
        nrm = np.linalg.norm(r)
        out.append(r / nrm if nrm > 0 else r)
    return out


def _normalize_rays(rays, exact):
    if not exact:
        scale = np.abs(rays).max(axis=1, keepdims=True)
        scale[scale == 0] = 1
        return rays / scale
    if rays.dtype == object:
        for i in range(rays.shape[0]):
            g = reduce(math.gcd, (int(v) for v in rays[i]), 0)
            if g > 1:
                rays[i] = rays[i] // g
        return rays
    g = np.gcd.reduce(rays, axis=1)
    g[g == 0] = 1
    return rays // g[:, None]


def _int_array(rows):
    arr = np.array(rows, dtype=object)
    return arr if _too_wide(arr, []) else arr.astype(np.int64)


def _too_wide(rays, rows):
    big = max([int(np.abs(rays).max()) if rays.size else 0]
              + [max(abs(int(v)) for v in r) for r in rows])
    return big > INT_LIMIT


class _ConeDD:
    """Extreme rays of {y : r.y >= 0 for every added row r}."""

    def __init__(self, rays, rows, exact, tol=DD_TOL):
        self.exact = exact
        self.tol = tol
        if exact and rays.dtype != object and _too_wide(rays, rows):
            rays = rays.astype(object)
        self.rays = rays
        self.rows = list(rows)
        self.dim = rays.shape[1]
        if self.rows:
            self.zero = np.stack([self._is_zero(rays @ self._cast(r)) for r in self.rows], axis=1)
        else:
            self.zero = np.zeros((rays.shape[0], 0), dtype=bool)

    def _cast(self, row):
        if self.exact and self.rays.dtype == object:
            return np.array([int(v) for v in row], dtype=object)
        return row

    def _is_zero(self, vals):
        if self.exact:
            return np.asarray(vals == 0, dtype=bool)
        return np.abs(vals.astype(float)) <= self.tol

    def values(self, row):
        return self.rays @ self._cast(row)

    def add_row(self, row):
        if self.exact and self.rays.dtype != object and _too_wide(self.rays, [row]):
            self.rays = self.rays.astype(object)
        vals = self.values(row)
        zer = self._is_zero(vals)
        pos = (vals > 0) & ~zer
        neg = (vals < 0) & ~zer
        P, N = np.flatnonzero(pos), np.flatnonzero(neg)
        new_rays, new_zero = [], []
        if N.size and P.size:
            zf = self.zero.astype(np.float32)
            need = self.dim - 2
            for p in P:
                common = self.zero[p] & self.zero[N]
                counts = common.sum(axis=1)
                cand = np.flatnonzero(counts >= need)
                for lo in range(0, cand.size, 256):
                    block = cand[lo:lo + 256]
                    c = common[block]
                    contained = (zf @ c.T.astype(np.float32)) == counts[block]
                    hits = contained.sum(axis=0)
                    for idx in block[hits == 2]:
                        q = N[idx]
                        new_rays.append(vals[p] * self.rays[q] - vals[q] * self.rays[p])
                        new_zero.append(common[idx])
        keep = ~neg
        rays = self.rays[keep]
        zero = self.zero[keep]
        zcol = zer[keep]
        if new_rays:
            fresh = _normalize_rays(np.array(new_rays, dtype=self.rays.dtype), self.exact)
            rays = np.vstack([rays, fresh])
            zero = np.vstack([zero, np.array(new_zero, dtype=bool)])
            zcol = np.concatenate([zcol, np.ones(len(new_rays), dtype=bool)])
        if self.exact and rays.dtype != object and rays.size and np.abs(rays).max() > INT_LIMIT:
            log.debug('DD rays exceed int64 comfort range; switching to Python integers')
            rays = rays.astype(object)
        self.rays = rays
        self.zero = np.hstack([zero, zcol[:, None]])
        self.rows.append(row)
        return len(P), len(N), len(new_rays)


def _initial_cone(rows, exact):
    """Simplicial cone from the first full-rank subset of ``rows``."""
    dim = rows[0].size
    chosen = []
    for k, r in enumerate(rows):
        trial = [rows[i] for i in chosen] + [r]
        rank = rank_exact(trial) if exact else rank_float(trial)
        if rank == len(trial):
            chosen.append(k)
            if len(chosen) == dim:
                break
    if len(chosen) < dim:
        raise DivergenceError('constraint matrix is rank deficient: the polyhedron has a lineality space')
    a = [rows[i] for i in chosen]
    if exact:
        inv = inverse_exact([[int(v) for v in r] for r in a])
        rays = np.array([integer_row([inv[i][j] for i in range(dim)]) for j in range(dim)], dtype=object)
        if not _too_wide(rays, []):
            rays = rays.astype(np.int64)
    else:
        rays = np.linalg.inv(np.array(a)).T.copy()
        rays = _normalize_rays(rays, False)
    return chosen, rays


def _run_dd(poly, progress=False):
    rows = _homogenize(poly)
    chosen, rays = _initial_cone(rows, poly.exact)
    cone = _ConeDD(rays, [rows[i] for i in chosen], poly.exact)
    rest = [k for k in range(len(rows)) if k not in set(chosen)]
    # most-cutting rows first
    rest.sort(key=lambda k: (int(np.sum(~((cone.values(rows[k]) < 0) & ~cone._is_zero(cone.values(rows[k]))))), k))
    for step, k in enumerate(rest, 1):
        npos, nneg, nnew = cone.add_row(rows[k])
        level = logging.INFO if progress else logging.DEBUG
        log.log(level, 'DD row %d/%d: %d rays (+%d new, -%d cut)',
                step, len(rest), cone.rays.shape[0], nnew, nneg)
    return cone


def _rays_to_vertices(rays, exact, tol=DD_TOL):
    verts = []
    for r in rays:
        t = r[0]
        if (t == 0) if exact else abs(float(t)) <= tol:
            raise DivergenceError('polyhedron is unbounded (recession ray found)')
        if exact:
            verts.append(tuple(Fraction(int(v), int(t)) for v in r[1:]))
        else:
            verts.append(tuple(float(v) / float(t) for v in r[1:]))
    return verts


def _verify_float(poly):
    bad = poly.check()
    if bad:
        v = poly.vertices[bad[0]]
        raise ToleranceError(f'ambiguous tight set at vertex {bad[0]}', poly.tight_set(v))


def double_description(h: RationalPolytope, progress: bool = False) -> RationalPolytope:
    """V-representation of a bounded H-polytope.

    Exact mode works in integers; floating mode uses tolerance 1e-9 for
    zero detection and certifies every vertex by a pivoted rank test.
    """
    if not h.has_h:
        raise InvalidArgument('double description needs an H-representation')
    cone = _run_dd(h, progress)
    verts = _rays_to_vertices(cone.rays, h.exact)
    if not h.exact:
        verts = _dedup(verts, False)
    out = RationalPolytope(h.dim, h.inequalities, sorted(verts), h.exact, h.equalities, dict(h.notes))
    if not h.exact:
        _verify_float(out)
    log.debug('double description: %d vertices in dimension %d', len(verts), h.dim)
    return out


def intersect_halfspace(p: RationalPolytope, ineq: Inequality) -> RationalPolytope:
    """One DD step: p intersected with {x : a.x >= b}."""
    if not (p.has_v and (p.has_h or p.equalities)):
        raise InvalidArgument('intersect_halfspace needs both representations')
    ineq = Inequality(*ineq)
    conv = Fraction if p.exact else float
    ineq = Inequality(tuple(conv(v) for v in ineq.a), conv(ineq.b))
    if all(sum(a * v for a, v in zip(ineq.a, x)) - ineq.b >= (0 if p.exact else -DD_TOL)
           for x in p.vertices):
        return p
    rows = _homogenize(p)
    if p.exact:
        rays = _int_array([integer_row((1,) + tuple(v)) for v in p.vertices])
        new_row = _int_array([integer_row((-ineq.b,) + ineq.a)])[0]
    else:
        rays = _normalize_rays(np.array([(1.0,) + tuple(v) for v in p.vertices]), False)
        new_row = np.array((-ineq.b,) + ineq.a, dtype=float)
        new_row = new_row / np.linalg.norm(new_row)
    cone = _ConeDD(rays, rows, p.exact)
    cone.add_row(new_row)
    verts = _rays_to_vertices(cone.rays, p.exact)
    if not p.exact:
        verts = _dedup(verts, False)
    return RationalPolytope(p.dim, list(p.inequalities) + [ineq], sorted(verts), p.exact,
                            p.equalities, dict(p.notes))


# ── Constructions ───────────────────────────────────────


def weyl_chamber(dim: int) -> RationalPolytope:
    """Sorted probability vectors: lambda_1 >= ... >= lambda_dim >= 0, sum 1."""
    if dim < 2:
        raise InvalidArgument(f'Weyl chamber needs dim >= 2, got {dim}')
    ineqs = []
    for i in range(dim - 1):
        a = [0] * dim
        a[i], a[i + 1] = 1, -1
        ineqs.append(Inequality(a, 0))
    last = [0] * dim
    last[-1] = 1
    ineqs.append(Inequality(last, 0))
    verts = [[Fraction(1, k)] * k + [Fraction(0)] * (dim - k) for k in range(1, dim + 1)]
    return RationalPolytope(dim, ineqs, verts, True, [Inequality([1] * dim, 1)])


def _key(v, exact):
    return tuple(v) if exact else tuple(round(float(x), 9) + 0.0 for x in v)


def _dedup(points, exact):
    seen = {}
    for p in points:
        seen.setdefault(_key(p, exact), p)
    return list(seen.values())


def _snap(v, exact):
    """Equal-within-tolerance float coordinates share one representative."""
    if exact:
        return tuple(v)
    order = sorted(range(len(v)), key=lambda i: v[i])
    out = list(v)
    for prev, cur in zip(order, order[1:]):
        if abs(out[cur] - out[prev]) <= 1e-12:
            out[cur] = out[prev]
    return tuple(out)


def _orbit_size(v):
    counts = {}
    for x in v:
        counts[x] = counts.get(x, 0) + 1
    size = math.factorial(len(v))
    for c in counts.values():
        size //= math.factorial(c)
    return size


def permutation_closure(p: RationalPolytope, facets: bool = True) -> RationalPolytope:
    """Convex hull of all coordinate permutations of p's vertices.

    Non-extreme orbits are removed by LP separation; the facets of the
    result come from double description on its polar.
    """
    if not p.has_v:
        raise InvalidArgument('permutation closure needs vertices')
    orbits = []
    seen = set()
    for v in p.vertices:
        v = _snap(v, p.exact)
        if _orbit_size(v) > PERMUTATION_GUARD:
            raise ResourceGuardError(f'vertex orbit of size {_orbit_size(v)} exceeds {PERMUTATION_GUARD}')
        if _key(sorted(v), p.exact) in seen:
            continue
        seen.add(_key(sorted(v), p.exact))
        orbits.append([tuple(x) for x in more_itertools.distinct_permutations(v)])
    points = [x for orbit in orbits for x in orbit]
    mode = 'exact' if p.exact else 'float'
    kept = []
    for orbit in orbits:
        rep = orbit[0]
        others = [x for x in points if x != rep]
        if in_convex_hull(rep, others, mode):
            log.debug('orbit of %s is redundant', rep)
            drop = set(orbit)
            points = [x for x in points if x not in drop]
            continue
        kept.extend(orbit)
    kept = sorted(_dedup(kept, p.exact))
    ineqs = facets_of(kept, p.equalities, p.exact) if facets else []
    return RationalPolytope(p.dim, ineqs, kept, p.exact, p.equalities, dict(p.notes))


def _direction_basis(dim, equalities, exact):
    """Columns spanning {x : a.x = 0 for every equality a}."""
    if not equalities:
        return [[int(i == j) for j in range(dim)] for i in range(dim)]
    rows = [list(q.a) for q in equalities]
    if exact:
        return nullspace_exact(rows)
    null = scipy.linalg.null_space(np.array(rows, dtype=float))
    return [list(col) for col in null.T]


def facets_of(points, equalities=(), exact=True):
    """Facet inequalities of conv(points) within the affine hull fixed by ``equalities``."""
    if not points:
        return []
    dim = len(points[0])
    conv = Fraction if exact else float
    basis = _direction_basis(dim, list(equalities), exact)
    k = len(points)
    center = [sum((conv(p[i]) for p in points), conv(0)) / k for i in range(dim)]
    coords = []
    for p in points:
        diff = [conv(p[i]) - center[i] for i in range(dim)]
        coords.append([sum(b[i] * diff[i] for i in range(dim)) for b in basis])
    polar = RationalPolytope(len(basis), [Inequality([-y for y in c], -1) for c in coords], exact=exact)
    dual = double_description(polar)
    out = []
    for w in dual.vertices:
        normal = [sum(w[j] * basis[j][i] for j in range(len(basis))) for i in range(dim)]
        # normal.(x - c) <= 1
        b = -1 - sum(normal[i] * center[i] for i in range(dim))
        out.append(Inequality([-v for v in normal], b))
    return out


def polar(p):
    """{y : v.y <= 1 for every vertex v}, about the origin."""
    if not p.has_v:
        raise InvalidArgument('polar needs vertices')
    h = RationalPolytope(p.dim, [Inequality([-x for x in v], -1) for v in p.vertices], exact=p.exact)
    return double_description(h)


# ── Radii ───────────────────────────────────────────────


class Radii(NamedTuple):
    inradius: float
    circumradius: float
    inradius_sq: object
    circumradius_sq: object


def _project(a, eq_rows, exact):
    """Component of a orthogonal to the equality normals."""
    if not eq_rows:
        return list(a)
    conv = Fraction if exact else float
    gram = [[sum(conv(x) * conv(y) for x, y in zip(r, s)) for s in eq_rows] for r in eq_rows]
    rhs = [sum(conv(x) * conv(y) for x, y in zip(r, a)) for r in eq_rows]
    if exact:
        inv = inverse_exact(gram)
    else:
        inv = np.linalg.inv(np.array(gram, dtype=float)).tolist()
    coef = [sum(inv[i][j] * rhs[j] for j in range(len(rhs))) for i in range(len(rhs))]
    return [conv(a[k]) - sum(coef[i] * conv(eq_rows[i][k]) for i in range(len(eq_rows)))
            for k in range(len(a))]


def radius_extremes(p: RationalPolytope, center, metric_scale=1) -> Radii:
    """(inradius, circumradius) of p about ``center``.

    Distances use the metric ``metric_scale * |x|^2``; squared values are
    exact Fractions when p is exact.
    """
    if not p.has_v:
        raise InvalidArgument('radius_extremes needs vertices')
    conv = Fraction if p.exact else float
    c = [conv(v) for v in center]
    if len(c) != p.dim:
        raise DimensionError(f'center of length {len(c)} in dimension {p.dim}')
    if p.has_h and not p.contains(c):
        raise ContractViolation('center lies outside the polytope')
    scale = conv(metric_scale)
    circ = max(sum((conv(v[i]) - c[i]) ** 2 for i in range(p.dim)) for v in p.vertices) * scale
    inr = None
    eq_rows = [q.a for q in p.equalities]
    for q in p.inequalities:
        a = _project(q.a, eq_rows, p.exact)
        nrm = sum(x * x for x in a)
        if (nrm == 0) if p.exact else nrm < 1e-18:
            continue
        val = sum(x * y for x, y in zip(q.a, c)) - q.b
        d2 = scale * val * val / nrm
        inr = d2 if inr is None or d2 < inr else inr
    return Radii(math.sqrt(inr) if inr is not None else float('nan'), math.sqrt(circ), inr, circ)


# ── Qubit Lambda in Pauli coordinates ───────────────────


def _nonzero_vectors(n):
    from .phase_space import all_vectors
    return [v for v in all_vectors(2, n) if not v.is_zero()]


def pauli_coordinates(x):
    """x_a = Tr(X T_a) for every nonzero a, canonical order."""
    from .operators import pauli_word
    m = getattr(x, 'matrix', x)
    n = int(round(math.log2(m.shape[0])))
    return np.array([np.vdot(pauli_word(a), m).real for a in _nonzero_vectors(n)])


def operator_from_pauli_coordinates(n: int, coords, label: str = 'generic'):
    """X = (I + sum_a x_a T_a) / 2^n."""
    from .operators import HermitianOperator, pauli_word
    vecs = _nonzero_vectors(n)
    if len(coords) != len(vecs):
        raise DimensionError(f'expected {len(vecs)} Pauli coordinates, got {len(coords)}')
    m = np.eye(2 ** n, dtype=complex)
    for a, xa in zip(vecs, coords):
        m = m + float(xa) * pauli_word(a)
    return HermitianOperator(m / 2 ** n, 2, n, label)


def stabilizer_sign_vectors(n):
    from .operators import enumerate_stabilizer_states
    out = []
    for s in enumerate_stabilizer_states(2, n):
        sv = pauli_coordinates(s)
        ints = np.rint(sv)
        if not np.allclose(sv, ints, atol=1e-9):
            raise ContractViolation('stabilizer Pauli expansion is not integral')
        out.append(tuple(int(v) for v in ints))
    return out


def lambda_hrep_qubits(n: int) -> RationalPolytope:
    """One inequality 1 + sum_a s_a x_a >= 0 per stabilizer state."""
    if not 1 <= n <= 3:
        raise InvalidArgument(f'qubit Lambda H-representation supports 1 <= n <= 3, got {n}')
    ineqs = [Inequality(s, -1) for s in stabilizer_sign_vectors(n)]
    return RationalPolytope(4 ** n - 1, ineqs, None, True, notes={'d': 2, 'n': n, 'coords': 'pauli'})


def stab_polytope_qubits(n, lambda_vertices=None):
    """STAB in Pauli coordinates: V from stabilizer states, H from Lambda vertices."""
    if lambda_vertices is None:
        lambda_vertices = double_description(lambda_hrep_qubits(n)).vertices
    ineqs = [Inequality(w, -1) for w in lambda_vertices]
    verts = [tuple(Fraction(v) for v in s) for s in stabilizer_sign_vectors(n)]
    return RationalPolytope(4 ** n - 1, ineqs, verts, True, notes={'d': 2, 'n': n, 'coords': 'pauli'})
