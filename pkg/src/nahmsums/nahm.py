"""Generalized Nahm sums by pruned enumeration of the positive orthant.

The sum runs over n in N^r of

    q^(n^t A D n / 2 + n^t B + C) / prod_i (q^(d_i); q^(d_i))_{n_i},

optionally restricted to a congruence c.n = t (mod m) on the summation
variables.  Enumeration is depth first in n_1, n_2, ...; the pruning bound
is the exact real minimum of the exponent over completions of a prefix,
obtained from a rational square completion of A D.  Exactness matters: a
floating bound could drop a boundary lattice point.

Exponent bookkeeping is integer-scaled so the inner loop runs on machine
ints (arbitrary precision only in the coefficients); the constant C is
applied afterwards as a pure exponent shift.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .qseries import QSeries, make_series, series_shift, _div_one_minus

__all__ = [
    "NahmError",
    "NotPositiveDefinite",
    "NahmQuadruple",
    "LatticeConstraint",
    "nahm_sum",
    "min_exponent_tail",
]

RationalMatrix = tuple[tuple[Fraction, ...], ...]


class NahmError(Exception):
    pass


class NotPositiveDefinite(NahmError):
    pass


@dataclass(frozen=True)
class NahmQuadruple:
    """Exact data (A, B, C, D) of a generalized Nahm sum.

    A is r x r rational, B a rational vector, C a rational scalar and D a
    positive-integer diagonal with A D symmetric positive-definite.
    """

    a: RationalMatrix
    b: tuple[Fraction, ...]
    c: Fraction
    d: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.a)

    def ad_matrix(self) -> RationalMatrix:
        return tuple(tuple(self.a[i][j] * self.d[j] for j in range(self.rank))
                     for i in range(self.rank))

    def validate(self) -> None:
        r = self.rank
        if r < 1:
            raise NahmError("rank must be >= 1")
        if any(len(row) != r for row in self.a) or len(self.b) != r or len(self.d) != r:
            raise NahmError("inconsistent dimensions")
        if any(d < 1 for d in self.d):
            raise NahmError("D entries must be positive integers")
        ad = self.ad_matrix()
        for i in range(r):
            for j in range(i):
                if ad[i][j] != ad[j][i]:
                    raise NahmError("A*D is not symmetric")
        for k in range(r):
            if _leading_minor(ad, k + 1) <= 0:
                raise NotPositiveDefinite(
                    f"leading principal minor {k + 1} of A*D is not positive")

    @staticmethod
    def make(a, b, c, d) -> NahmQuadruple:
        quad = NahmQuadruple(
            tuple(tuple(Fraction(x) for x in row) for row in a),
            tuple(Fraction(x) for x in b),
            Fraction(c),
            tuple(int(x) for x in d))
        quad.validate()
        return quad

    def permuted(self, perm: tuple[int, ...]) -> NahmQuadruple:
        """Simultaneous reordering of the summation variables."""
        r = self.rank
        a = tuple(tuple(self.a[perm[i]][perm[j]] for j in range(r)) for i in range(r))
        return NahmQuadruple(a, tuple(self.b[p] for p in perm), self.c,
                             tuple(self.d[p] for p in perm))


def _leading_minor(m: RationalMatrix, k: int) -> Fraction:
    sub = [list(row[:k]) for row in m[:k]]
    det = Fraction(1)
    for col in range(k):
        pivot = next((r for r in range(col, k) if sub[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            sub[col], sub[pivot] = sub[pivot], sub[col]
            det = -det
        det *= sub[col][col]
        inv = 1 / sub[col][col]
        for r in range(col + 1, k):
            f = sub[r][col] * inv
            if f:
                sub[r] = [x - f * y for x, y in zip(sub[r], sub[col])]
    return det


@dataclass(frozen=True)
class LatticeConstraint:
    """Restrict the sum to lattice points with weights.n = residue (mod modulus)."""

    weights: tuple[int, ...]
    modulus: int
    residue: int

    def __post_init__(self) -> None:
        if self.modulus < 1:
            raise NahmError("modulus must be positive")
        if not 0 <= self.residue < self.modulus:
            raise NahmError("residue must satisfy 0 <= residue < modulus")


@dataclass(frozen=True)
class _SquareData:
    """Exponent as C0 + sum_i p_i (n_i + mu_i + sum_{j<i} w_ij (n_j + mu_j))^2 / 2."""

    p: tuple[Fraction, ...]
    w: tuple[tuple[Fraction, ...], ...]   # w[i][j] for j < i
    mu: tuple[Fraction, ...]
    c0: Fraction                          # includes B-completion, excludes C


def _square_completion(quad: NahmQuadruple) -> _SquareData:
    r = quad.rank
    m = [list(row) for row in quad.ad_matrix()]
    # Eliminate from the last variable so each square only involves earlier ones.
    p = [Fraction(0)] * r
    w = [[Fraction(0)] * r for _ in range(r)]
    for i in range(r - 1, -1, -1):
        if m[i][i] <= 0:
            raise NotPositiveDefinite("square completion hit a non-positive pivot")
        p[i] = m[i][i]
        for j in range(i):
            w[i][j] = m[i][j] / p[i]
        for a in range(i):
            for bidx in range(i):
                m[a][bidx] -= p[i] * w[i][a] * w[i][bidx]
    # mu = (AD)^-1 B via the completed squares: solve AD mu = B by forward passes.
    # Solve directly with Gaussian elimination for clarity.
    mu = _solve(quad.ad_matrix(), quad.b)
    c0 = -sum(quad.b[i] * mu[i] for i in range(r)) / 2
    return _SquareData(tuple(p), tuple(tuple(w[i][:i]) for i in range(r)),
                       tuple(mu), c0)


def _solve(m: RationalMatrix, rhs: tuple[Fraction, ...]) -> tuple[Fraction, ...]:
    n = len(m)
    a = [list(row) + [rhs[i]] for i, row in enumerate(m)]
    for col in range(n):
        pivot = next(r for r in range(col, n) if a[r][col] != 0)
        a[col], a[pivot] = a[pivot], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return tuple(a[i][n] for i in range(n))


def min_exponent_tail(quad: NahmQuadruple, prefix: tuple[int, ...]) -> Fraction:
    """Exact lower bound of n^t A D n / 2 + n^t B over completions of prefix.

    The bound is the real minimum with the orthant constraint dropped, so it
    never exceeds the true lattice minimum; with a full prefix it is exact.
    """
    sq = _square_completion(quad)
    k = len(prefix)
    if k > quad.rank:
        raise NahmError("prefix longer than rank")
    total = sq.c0
    shifted = [Fraction(prefix[j]) + sq.mu[j] for j in range(k)]
    for i in range(k):
        t = shifted[i] + sum(sq.w[i][j] * shifted[j] for j in range(i))
        total += sq.p[i] * t * t / 2
    return total


def nahm_sum(quad: NahmQuadruple, order_exp: Fraction | int,
             constraint: LatticeConstraint | None = None,
             first_coord_range: tuple[int, int] | None = None) -> QSeries:
    """Expand the generalized Nahm sum of `quad` with exponents below order_exp.

    Every lattice point whose exponent can fall below the bound is visited
    exactly once.  `first_coord_range` restricts n_1 to [lo, hi) so callers
    can evaluate disjoint slices and add them; the full sum is the default.
    """
    quad.validate()
    if constraint is not None and len(constraint.weights) != quad.rank:
        raise NahmError("constraint length must match rank")
    order_exp = Fraction(order_exp)
    r = quad.rank
    sq = _square_completion(quad)

    # Working grain G carries n-dependent exponents; C is shifted in at the end.
    g = 1
    for i in range(r):
        g = lcm(g, (Fraction(quad.a[i][i]) * quad.d[i] / 2).denominator)
        g = lcm(g, quad.b[i].denominator)
        for j in range(r):
            if i != j:
                g = lcm(g, (quad.a[i][j] * quad.d[j]).denominator)
    bound = order_exp - quad.c
    units = int(bound * g)
    if bound * g > units:
        units += 1  # ceil: enumerate everything strictly below the bound
    if units <= 0:
        return series_shift(make_series(g, units, units, ()), quad.c)

    # Integer scaling: t_hat = LAM * t stays integral along the tree, squares
    # carry per-level integer weights so VAL == SCALE * (exponent - C) exactly.
    lam = 1
    for i in range(r):
        lam = lcm(lam, sq.mu[i].denominator)
        for j, x in enumerate(sq.w[i]):
            lam = lcm(lam, x.denominator)
            lam = lcm(lam, (x * sq.mu[j]).denominator)
    pg = [Fraction(p, 2) * g for p in sq.p]
    pden = 1
    for x in pg:
        pden = lcm(pden, x.denominator)
    scale = pden * lam * lam
    pw = [int(x * pden) for x in pg]                   # weight of t_hat^2
    c0_scaled = sq.c0 * g * scale
    if c0_scaled.denominator != 1:
        raise NahmError("internal scaling failed")  # exponents must live on 1/g
    c0_int = int(c0_scaled)
    limit = units * scale

    mu_hat = [int(x * lam) for x in sq.mu]
    w_hat = [[int(x * lam) for x in sq.w[i]] for i in range(r)]
    wmu_hat = [[int(x * sq.mu[j] * lam) for j, x in enumerate(sq.w[i])]
               for i in range(r)]

    base = min(0, c0_int // scale)
    # All exponents lie in [c0, bound); accumulate on [base, units).
    acc = [0] * (units - base)
    strides = [quad.d[i] * g for i in range(r)]

    cw = constraint.weights if constraint is not None else None
    cm = constraint.modulus if constraint is not None else 1
    ct = constraint.residue if constraint is not None else 0

    # Depth-first enumeration.  At depth i the running state holds the scaled
    # partial exponent, per-level linear offsets for t_hat, the denominator
    # expansion for the fixed prefix, and the constraint residue.
    den_stack = [[0] * (units - base) for _ in range(r + 1)]
    den_stack[0][0] = 1
    top = units - base
    lo1, hi1 = first_coord_range if first_coord_range is not None else (0, None)

    def descend(depth: int, partial: int, offs: list[int], residue: int) -> None:
        stride = strides[depth]
        cur = den_stack[depth + 1]
        cur[:] = den_stack[depth]
        weight = pw[depth]
        t0 = mu_hat[depth] + offs[depth]  # t_hat at n_depth = v is v*lam + t0
        v = 0
        while True:
            t_hat = v * lam + t0
            val = partial + weight * t_hat * t_hat
            if val >= limit and t_hat >= 0:
                break  # rising branch of the parabola: no later v contributes
            if depth == 0 and hi1 is not None and v >= hi1:
                break
            if v > 0:
                _div_one_minus(cur, stride * v, 1)
            visit = val < limit and (depth > 0 or v >= lo1)
            if visit and depth + 1 == r:
                if cw is None or (residue + cw[depth] * v) % cm == ct:
                    e = val // scale - base  # exact division: exponents sit on 1/g
                    for idx in range(top - e):
                        c = cur[idx]
                        if c:
                            acc[e + idx] += c
            elif visit:
                new_offs = offs.copy()
                for i2 in range(depth + 1, r):
                    new_offs[i2] += w_hat[i2][depth] * v + wmu_hat[i2][depth]
                descend(depth + 1, val, new_offs,
                        residue + (cw[depth] * v if cw is not None else 0))
            v += 1

    descend(0, c0_int, [0] * r, 0)
    series = make_series(g, base, units, acc)
    return series_shift(series, quad.c)
