"""Cartan-matrix catalog and the exact linear algebra behind the quadruples.

Families A, B, C, D, E, F, G plus the tadpole family T (the A_{2r} chain
folded in half: same Cartan matrix as A_r except for the 1 in the last
diagonal slot).  Root-length data D(X) is normalized so a short root has
square length 1; Coxeter numbers follow the standard tables.

Matrices are tuples of tuples of Fraction; all arithmetic is exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as iter_product

from .nahm import NahmQuadruple

__all__ = [
    "DynkinError",
    "InvalidRank",
    "Singular",
    "DiagramKind",
    "CartanData",
    "RationalMatrix",
    "cartan_data",
    "rational_inverse",
    "kronecker",
    "mat_mul",
    "identity_matrix",
    "build_quadruple",
    "central_charge",
    "dual_quadruple",
    "permutation_equivalent",
]

RationalMatrix = tuple[tuple[Fraction, ...], ...]


class DynkinError(Exception):
    pass


class InvalidRank(DynkinError):
    pass


class Singular(DynkinError):
    pass


_RANK_RULES = {
    "A": lambda r: r >= 1,
    "B": lambda r: r >= 2,   # B2 accepted, aliased to C2
    "C": lambda r: r >= 2,
    "D": lambda r: r >= 3,   # D3 accepted, aliased to A3
    "E": lambda r: r in (6, 7, 8),
    "F": lambda r: r == 4,
    "G": lambda r: r == 2,
    "T": lambda r: r >= 1,
}


@dataclass(frozen=True)
class DiagramKind:
    family: str
    rank: int

    def __post_init__(self) -> None:
        if self.family not in _RANK_RULES:
            raise InvalidRank(f"unknown family {self.family!r}")
        if not _RANK_RULES[self.family](self.rank):
            raise InvalidRank(f"{self.family}{self.rank} is not a valid diagram")

    @staticmethod
    def parse(text: str) -> DiagramKind:
        text = text.strip()
        if len(text) < 2 or text[0].upper() not in _RANK_RULES:
            raise InvalidRank(f"cannot parse diagram kind {text!r}")
        try:
            rank = int(text[1:])
        except ValueError as exc:
            raise InvalidRank(f"cannot parse diagram kind {text!r}") from exc
        return DiagramKind(text[0].upper(), rank)

    def __str__(self) -> str:
        return f"{self.family}{self.rank}"


@dataclass(frozen=True)
class CartanData:
    kind: DiagramKind
    cartan: tuple[tuple[int, ...], ...]
    dvec: tuple[int, ...]
    coxeter: int
    alias_of: DiagramKind | None = field(default=None)

    @property
    def rank(self) -> int:
        return len(self.cartan)


def _chain(rank: int) -> list[list[int]]:
    m = [[0] * rank for _ in range(rank)]
    for i in range(rank):
        m[i][i] = 2
        if i + 1 < rank:
            m[i][i + 1] = -1
            m[i + 1][i] = -1
    return m


def cartan_data(kind: DiagramKind) -> CartanData:
    """Catalog lookup: Cartan matrix, root-length diagonal, Coxeter number.

    B2 is returned as C2 data and D3 as A3 data (marked via alias_of),
    matching the usual low-rank coincidences.
    """
    fam, r = kind.family, kind.rank
    if fam == "B" and r == 2:
        base = cartan_data(DiagramKind("C", 2))
        return CartanData(kind, base.cartan, base.dvec, base.coxeter,
                          alias_of=base.kind)
    if fam == "D" and r == 3:
        base = cartan_data(DiagramKind("A", 3))
        return CartanData(kind, base.cartan, base.dvec, base.coxeter,
                          alias_of=base.kind)

    if fam == "A":
        return CartanData(kind, _freeze(_chain(r)), (1,) * r, r + 1)
    if fam == "T":
        m = _chain(r)
        m[r - 1][r - 1] = 1
        return CartanData(kind, _freeze(m), (1,) * r, 2 * r + 1)
    if fam == "B":
        m = _chain(r)
        m[r - 2][r - 1] = -2
        return CartanData(kind, _freeze(m), (2,) * (r - 1) + (1,), 2 * r)
    if fam == "C":
        m = _chain(r)
        m[r - 1][r - 2] = -2
        return CartanData(kind, _freeze(m), (1,) * (r - 1) + (2,), 2 * r)
    if fam == "D":
        m = _chain(r)
        m[r - 2][r - 1] = 0
        m[r - 1][r - 2] = 0
        m[r - 3][r - 1] = -1
        m[r - 1][r - 3] = -1
        return CartanData(kind, _freeze(m), (1,) * r, 2 * r - 2)
    if fam == "E":
        # Bourbaki ordering: chain 1-3-4-...-r with node 2 hanging off node 4.
        m = [[2 if i == j else 0 for j in range(r)] for i in range(r)]
        edges = [(0, 2), (1, 3), (2, 3)] + [(i, i + 1) for i in range(3, r - 1)]
        for i, j in edges:
            m[i][j] = -1
            m[j][i] = -1
        h = {6: 12, 7: 18, 8: 30}[r]
        return CartanData(kind, _freeze(m), (1,) * r, h)
    if fam == "F":
        m = _chain(4)
        m[1][2] = -2
        return CartanData(kind, _freeze(m), (2, 2, 1, 1), 12)
    if fam == "G":
        return CartanData(kind, ((2, -1), (-3, 2)), (1, 3), 6)
    raise InvalidRank(str(kind))


def _freeze(rows: list[list[int]]) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(row) for row in rows)


def to_rational(rows) -> RationalMatrix:
    return tuple(tuple(Fraction(x) for x in row) for row in rows)


def identity_matrix(n: int) -> RationalMatrix:
    return tuple(tuple(Fraction(1 if i == j else 0) for j in range(n))
                 for i in range(n))


def mat_mul(a: RationalMatrix, b: RationalMatrix) -> RationalMatrix:
    n, k, m = len(a), len(b), len(b[0])
    return tuple(
        tuple(sum((a[i][t] * b[t][j] for t in range(k)), Fraction(0))
              for j in range(m))
        for i in range(n))


def rational_inverse(m: RationalMatrix) -> RationalMatrix:
    """Exact inverse by Gauss-Jordan elimination with rational pivots."""
    n = len(m)
    a = [list(row) for row in to_rational(m)]
    inv = [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            raise Singular("matrix is not invertible")
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            inv[col], inv[pivot] = inv[pivot], inv[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        inv[col] = [x / p for x in inv[col]]
        for r in range(n):
            if r == col or a[r][col] == 0:
                continue
            f = a[r][col]
            a[r] = [x - f * y for x, y in zip(a[r], a[col])]
            inv[r] = [x - f * y for x, y in zip(inv[r], inv[col])]
    return _freeze_frac(inv)


def _freeze_frac(rows) -> RationalMatrix:
    return tuple(tuple(Fraction(x) for x in row) for row in rows)


def kronecker(a: RationalMatrix, b: RationalMatrix) -> RationalMatrix:
    na, nb = len(a), len(b)
    return tuple(
        tuple(a[i // nb][j // nb] * b[i % nb][j % nb]
              for j in range(na * len(b[0])))
        for i in range(na * nb))


def central_charge(x: DiagramKind, y: DiagramKind) -> Fraction:
    """tr(D(X) (x) D(Y)) * h(X) / (h(X) + h(Y))."""
    dx = cartan_data(x)
    dy = cartan_data(y)
    trace = sum(dx.dvec) * sum(dy.dvec)
    return Fraction(trace * dx.coxeter, dx.coxeter + dy.coxeter)


def build_quadruple(x: DiagramKind, y: DiagramKind) -> NahmQuadruple:
    """The quadruple (C(X) (x) C(Y)^-1, 0, -c(X,Y)/24, D(X) (x) D(Y))."""
    dx = cartan_data(x)
    dy = cartan_data(y)
    a = kronecker(to_rational(dx.cartan), rational_inverse(to_rational(dy.cartan)))
    dvec = tuple(di * dj for di in dx.dvec for dj in dy.dvec)
    c = -central_charge(x, y) / 24
    r = len(a)
    quad = NahmQuadruple(a, (Fraction(0),) * r, c, dvec)
    quad.validate()
    return quad


def dual_quadruple(quad: NahmQuadruple) -> NahmQuadruple:
    """(A^-1, A^-1 B, B^t (AD)^-1 B / 2 - tr(D)/24 - C, D)."""
    a_inv = rational_inverse(quad.a)
    b = tuple(sum((a_inv[i][j] * quad.b[j] for j in range(quad.rank)),
                  Fraction(0)) for i in range(quad.rank))
    ad = quad.ad_matrix()
    ad_inv = rational_inverse(ad)
    quad_form = sum(quad.b[i] * ad_inv[i][j] * quad.b[j]
                    for i in range(quad.rank) for j in range(quad.rank))
    c = quad_form / 2 - Fraction(sum(quad.d), 24) - quad.c
    return NahmQuadruple(a_inv, b, c, quad.d)


def permutation_equivalent(a: RationalMatrix, b: RationalMatrix) -> bool:
    """True iff P^t a P == b for some permutation matrix P.

    Backtracking on rows, pruning candidates by diagonal entry and by the
    multisets of row and column values; fine for the dimensions in scope.
    """
    n = len(a)
    if len(b) != n:
        return False
    if n == 0:
        return True

    def signature(m: RationalMatrix, i: int) -> tuple:
        return (m[i][i], tuple(sorted(m[i])), tuple(sorted(r[i] for r in m)))

    sig_a = [signature(a, i) for i in range(n)]
    sig_b = [signature(b, i) for i in range(n)]
    if sorted(sig_a) != sorted(sig_b):
        return False
    candidates = [[j for j in range(n) if sig_a[j] == sig_b[i]] for i in range(n)]

    perm: list[int] = []
    used = [False] * n

    def extend(i: int) -> bool:
        if i == n:
            return True
        for j in candidates[i]:
            if used[j]:
                continue
            ok = all(a[j][perm[k]] == b[i][k] and a[perm[k]][j] == b[k][i]
                     for k in range(i)) and a[j][j] == b[i][i]
            if not ok:
                continue
            used[j] = True
            perm.append(j)
            if extend(i + 1):
                return True
            perm.pop()
            used[j] = False
        return False

    return extend(0)
