"""
Dense-tableau simplex method with Bland's or Dantzig's pricing.

Runs either in exact rational arithmetic (``mode='exact'``, numpy object
arrays of Fractions) or in float64 (``mode='float'``). Used for Lambda
vertex sampling, majorization-mixture feasibility and redundancy removal.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .errors import ContractViolation, DimensionError, InvalidArgument, SolverError, ToleranceError
from .spectra import as_spectrum, lorenz_curve

log = logging.getLogger(__name__)

RELATIONS = ('>=', '<=', '==')
MAX_PIVOTS = 10 ** 6
FLOAT_EPS = 1e-9
STALL_EPS = 1e-7
DEGENERATE_RUN = 50


class Constraint(NamedTuple):
    a: tuple
    relation: str
    b: object


@dataclass
class LinearProgram:
    """max (or min) c.x subject to rows a.x REL b and per-variable bounds.

    ``bounds`` holds one (lo, hi) pair per variable, None meaning infinite;
    the default is x >= 0.
    """

    objective: list
    constraints: list
    bounds: list = None
    sense: str = 'max'

    def __post_init__(self):
        nvar = len(self.objective)
        self.constraints = [c if isinstance(c, Constraint) else Constraint(*c) for c in self.constraints]
        for k, c in enumerate(self.constraints):
            if len(c.a) != nvar:
                raise DimensionError(f'constraint {k} has {len(c.a)} coefficients, expected {nvar}')
            if c.relation not in RELATIONS:
                raise InvalidArgument(f'constraint {k}: relation {c.relation!r} not in {RELATIONS}')
        if self.bounds is None:
            self.bounds = [(0, None)] * nvar
        if len(self.bounds) != nvar:
            raise DimensionError(f'{len(self.bounds)} bounds for {nvar} variables')
        if self.sense not in ('max', 'min'):
            raise InvalidArgument(f'sense must be max or min, got {self.sense!r}')

    @property
    def num_vars(self):
        return len(self.objective)


@dataclass
class LPResult:
    status: str                      # optimal | infeasible | unbounded
    value: object = None
    point: np.ndarray = None
    tight_set: tuple = ()
    pivots: int = 0
    extra: dict = field(default_factory=dict)

    @property
    def optimal(self):
        return self.status == 'optimal'


def _num(mode):
    if mode == 'exact':
        def conv(v):
            if isinstance(v, complex) or (isinstance(v, float) and not np.isfinite(v)):
                raise InvalidArgument(f'exact mode needs rational data, got {v!r}')
            return Fraction(v)
        return conv, object, 0
    if mode == 'float':
        return float, float, FLOAT_EPS
    raise InvalidArgument(f'mode must be exact or float, got {mode!r}')


class _Tableau:
    """Rows [A | rhs] with an explicit basis and reduced-cost row."""

    def __init__(self, table, basis, eps, mode):
        self.t = table
        self.basis = basis
        self.eps = eps
        self.mode = mode
        self.pivots = 0

    def price(self, costs):
        cb = costs[self.basis]
        self.costs = costs
        self.reduced = costs - cb @ self.t[:, :-1]

    def pivot(self, i, j):
        t = self.t
        t[i] = t[i] / t[i, j]
        f = t[:, j].copy()
        f[i] = 0
        t -= np.outer(f, t[i])
        if self.mode == 'float':
            rhs = t[:, -1]
            rhs[np.abs(rhs) < self.eps] = 0.0
        self.reduced = self.reduced - self.reduced[j] * t[i, :-1]
        self.basis[i] = j
        self.pivots += 1
        if self.pivots > MAX_PIVOTS:
            raise SolverError(f'simplex exceeded {MAX_PIVOTS} pivots')
        if self.mode == 'float' and t[:, -1].min() < -STALL_EPS:
            raise ToleranceError('simplex lost primal feasibility', np.flatnonzero(t[:, -1] < -STALL_EPS))

    def run(self, allowed, pricing='bland'):
        """Pivot to optimality; returns 'optimal' or 'unbounded'.

        ``pricing='dantzig'`` enters the largest reduced cost and drops to
        Bland's rule after DEGENERATE_RUN consecutive degenerate pivots.
        """
        eps = self.eps
        bland = pricing == 'bland'
        stalled = 0
        while True:
            cand = np.flatnonzero((self.reduced > eps) & allowed)
            if cand.size == 0:
                return 'optimal'
            if bland:
                j = int(cand[0])
            else:
                j = int(cand[np.argmax(self.reduced[cand].astype(float))])
            col = self.t[:, j]
            rows = np.flatnonzero(col > eps)
            if rows.size == 0:
                return 'unbounded'
            ratios = self.t[rows, -1] / col[rows]
            best = ratios.min()
            ties = rows[ratios == best]
            i = int(ties[np.argmin(self.basis[ties])])
            if best == 0:
                stalled += 1
                if stalled > DEGENERATE_RUN and not bland:
                    log.debug('switching to Bland pricing after %d degenerate pivots', stalled)
                    bland = True
            else:
                stalled = 0
            self.pivot(i, j)

    @property
    def value(self):
        return self.costs[self.basis] @ self.t[:, -1]


def solve(lp: LinearProgram, mode: str = 'float', pricing: str = 'bland') -> LPResult:
    """Solve ``lp`` by the two-phase simplex method.

    ``pricing`` is 'bland' (smallest index enters) or 'dantzig' (largest
    reduced cost enters, Bland after a long degenerate run). Ties in the
    ratio test go to the smallest basic index among exactly equal ratios.

    Returns
    -------
    LPResult with status optimal (value, point, tight_set), infeasible or
    unbounded. ``tight_set`` lists the constraint indices holding with
    equality at the returned basic solution.
    """
    if pricing not in ('bland', 'dantzig'):
        raise InvalidArgument(f'pricing must be bland or dantzig, got {pricing!r}')
    conv, dtype, eps = _num(mode)
    nvar = lp.num_vars

    # x = offset + M y, y >= 0
    cols = []
    offset = []
    extra_rows = []
    for j, (lo, hi) in enumerate(lp.bounds):
        if lo is not None:
            offset.append(conv(lo))
            cols.append((j, 1))
            if hi is not None:
                extra_rows.append((len(cols) - 1, conv(hi) - conv(lo)))
        elif hi is not None:
            offset.append(conv(hi))
            cols.append((j, -1))
        else:
            offset.append(conv(0))
            cols.append((j, 1))
            cols.append((j, -1))
    ny = len(cols)
    mmap = np.zeros((nvar, ny), dtype=dtype)
    if dtype is object:
        mmap[:] = conv(0)
    for k, (j, s) in enumerate(cols):
        mmap[j, k] = conv(s)
    offset = np.array(offset, dtype=dtype)

    rows = []
    for c in lp.constraints:
        a = np.array([conv(v) for v in c.a], dtype=dtype)
        rows.append((a @ mmap, c.relation, conv(c.b) - a @ offset))
    for k, ub in extra_rows:
        a = np.zeros(ny, dtype=dtype)
        if dtype is object:
            a[:] = conv(0)
        a[k] = conv(1)
        rows.append((a, '<=', ub))

    cvec = np.array([conv(v) for v in lp.objective], dtype=dtype)
    if lp.sense == 'min':
        cvec = -cvec
    cy = cvec @ mmap

    # standard form: A y + slack - surplus + art = b >= 0
    norm = []
    for a, rel, b in rows:
        if b < 0:
            a, b = -a, -b
            rel = {'<=': '>=', '>=': '<=', '==': '=='}[rel]
        norm.append((a, rel, b))
    m = len(norm)
    nslack = sum(1 for _, rel, _ in norm if rel != '==')
    nart = sum(1 for _, rel, _ in norm if rel != '<=')
    width = ny + nslack + nart + 1
    table = np.zeros((m, width), dtype=dtype)
    if dtype is object:
        table[:] = conv(0)
    basis = []
    s_col, a_col = ny, ny + nslack
    art_cols = []
    for i, (a, rel, b) in enumerate(norm):
        table[i, :ny] = a
        table[i, -1] = b
        if rel == '<=':
            table[i, s_col] = conv(1)
            basis.append(s_col)
            s_col += 1
            continue
        if rel == '>=':
            table[i, s_col] = conv(-1)
            s_col += 1
        table[i, a_col] = conv(1)
        basis.append(a_col)
        art_cols.append(a_col)
        a_col += 1

    tab = _Tableau(table, np.array(basis, dtype=int), eps, mode)
    ncols = width - 1
    allowed = np.ones(ncols, dtype=bool)

    if art_cols:
        phase1 = np.zeros(ncols, dtype=dtype)
        if dtype is object:
            phase1[:] = conv(0)
        phase1[art_cols] = conv(-1)
        tab.price(phase1)
        tab.run(allowed, pricing)
        if tab.value < -eps:
            log.debug('LP infeasible after %d pivots', tab.pivots)
            return LPResult('infeasible', pivots=tab.pivots)
        is_art = np.zeros(ncols, dtype=bool)
        is_art[art_cols] = True
        keep = []
        for i in range(m):
            if not is_art[tab.basis[i]]:
                keep.append(i)
                continue
            row = tab.t[i, :ncols]
            cand = [j for j in range(ncols) if not is_art[j] and abs(row[j]) > eps]
            if cand:
                tab.pivot(i, cand[0])
                keep.append(i)
        if len(keep) < m:
            tab.t = tab.t[keep]
            tab.basis = tab.basis[keep]
        allowed = ~is_art

    costs = np.zeros(ncols, dtype=dtype)
    if dtype is object:
        costs[:] = conv(0)
    costs[:ny] = cy
    tab.price(costs)
    status = tab.run(allowed, pricing)
    if status == 'unbounded':
        return LPResult('unbounded', pivots=tab.pivots)

    y = np.zeros(ncols, dtype=dtype)
    if dtype is object:
        y[:] = conv(0)
    y[tab.basis] = tab.t[:, -1]
    x = offset + mmap @ y[:ny]
    value = np.array([conv(v) for v in lp.objective], dtype=dtype) @ x
    tight = []
    for k, c in enumerate(lp.constraints):
        a = np.array([conv(v) for v in c.a], dtype=dtype)
        gap = a @ x - conv(c.b)
        if (gap == 0) if mode == 'exact' else abs(gap) <= 1e-8 * (1 + abs(float(c.b))):
            tight.append(k)
    return LPResult('optimal', value, x, tuple(tight), tab.pivots)


# ── Applications ────────────────────────────────────────


def mixture_majorization_feasible(lam, generators, tol: float = 1e-9) -> bool:
    """Is lam majorized by some convex mixture of the (descending) generators?"""
    if not generators:
        raise InvalidArgument('need at least one generator spectrum')
    lam = as_spectrum(lam)
    gens = [as_spectrum(g) for g in generators]
    for g in gens:
        if len(g) != len(lam):
            raise DimensionError(f'generator length {len(g)} != {len(lam)}')
        if abs(g.trace - lam.trace) > tol:
            raise ContractViolation('generators and target must share the same trace')
    curves = np.array([lorenz_curve(g) for g in gens])
    target = lorenz_curve(lam)
    cons = [Constraint(tuple([1.0] * len(gens)), '==', 1.0)]
    for k in range(len(lam) - 1):
        cons.append(Constraint(tuple(curves[:, k]), '>=', float(target[k]) - tol))
    res = solve(LinearProgram([0.0] * len(gens), cons), mode='float')
    return res.optimal


def in_convex_hull(point, points, mode: str = 'float') -> bool:
    """Is ``point`` a convex combination of ``points``?"""
    if not points:
        return False
    dim = len(point)
    cons = [Constraint(tuple([1] * len(points)), '==', 1)]
    for i in range(dim):
        cons.append(Constraint(tuple(p[i] for p in points), '==', point[i]))
    res = solve(LinearProgram([0] * len(points), cons), mode=mode)
    return res.optimal
