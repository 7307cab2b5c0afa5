"""Identity database and verification runner.

Each record pairs a (generalized) Nahm sum with a closed form: an infinite
product, a theta quotient, an integer combination of CFT characters, an
explicit coefficient list, or another sum.  Verification expands both
sides exactly and compares coefficients below the record's order.

Status values: "proved" marks identities with published proofs,
"conjectural" marks numerically observed relations (including the two
open sum=product conjectures, which a truncated check can support but
never prove), and "provisional" marks records whose statement itself is
ambiguous; provisional mismatches do not fail the suite.

Records whose summation data (B, C) lives only in external tables ship
with requires_external_data=True and no left side; they are listed but
skipped.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction

from . import cft
from .dynkin import DiagramKind, build_quadruple, central_charge, rational_inverse
from .nahm import LatticeConstraint, NahmQuadruple, nahm_sum
from .qseries import (
    QSeries,
    congruence_product,
    equal_to_order,
    make_series,
    monomial,
    pochhammer,
    series_add,
    series_inverse,
    series_mul,
    series_scale,
    series_shift,
    zero_series,
)

__all__ = [
    "RegistryError",
    "IdentityRecord",
    "VerificationReport",
    "load_registry",
    "verify_identity",
    "run_suite",
    "records_to_json",
    "records_from_json",
    "report_lines",
    "lhs_quadruple",
    "evaluate_rhs",
]


class RegistryError(Exception):
    pass


@dataclass(frozen=True)
class IdentityRecord:
    id: str
    source: tuple[str, str]          # (tag, human-readable anchor)
    lhs: dict | None                 # pair/quadruple description; None if missing
    rhs: dict                        # expression tree
    default_order: int
    status: str                      # proved | conjectural | provisional
    tags: tuple[str, ...] = ()
    note: str | None = None
    requires_external_data: bool = False


@dataclass(frozen=True)
class VerificationReport:
    id: str
    order: Fraction
    equal: bool
    first_mismatch: Fraction | None
    wall_time: float
    status: str = "conjectural"

    def line(self, include_timing: bool = True) -> str:
        if self.equal:
            verdict = ("conjecture-consistent" if self.status == "conjectural"
                       else "ok")
        else:
            verdict = f"MISMATCH at q^{self.first_mismatch}"
        timing = f"  [{self.wall_time:.2f}s]" if include_timing else ""
        return f"{self.id}: {verdict} (order {self.order}){timing}"


# ---------------------------------------------------------------------------
# Rational / matrix (de)serialization helpers

def _frac_to_json(x: Fraction | int) -> list[int]:
    f = Fraction(x)
    return [f.numerator, f.denominator]


def _frac(x) -> Fraction:
    if isinstance(x, (list, tuple)):
        return Fraction(x[0], x[1])
    return Fraction(x)


def _quad_to_json(quad: NahmQuadruple) -> dict:
    return {
        "a": [[_frac_to_json(x) for x in row] for row in quad.a],
        "b": [_frac_to_json(x) for x in quad.b],
        "c": _frac_to_json(quad.c),
        "d": list(quad.d),
    }


def _quad_from_json(data: dict) -> NahmQuadruple:
    return NahmQuadruple.make(
        [[_frac(x) for x in row] for row in data["a"]],
        [_frac(x) for x in data["b"]],
        _frac(data["c"]),
        data["d"])


def lhs_quadruple(lhs: dict) -> tuple[NahmQuadruple, LatticeConstraint | None]:
    """Materialize a record's left side."""
    if "quad" in lhs:
        quad = _quad_from_json(lhs["quad"])
    else:
        x, y = lhs["pair"]
        base = build_quadruple(DiagramKind.parse(x), DiagramKind.parse(y))
        b = base.b if lhs.get("b") is None else tuple(_frac(v) for v in lhs["b"])
        c = base.c if lhs.get("c") is None else _frac(lhs["c"])
        quad = NahmQuadruple(base.a, b, c, base.d)
        quad.validate()
    constraint = None
    if lhs.get("constraint"):
        cd = lhs["constraint"]
        constraint = LatticeConstraint(tuple(cd["weights"]), cd["modulus"],
                                       cd["residue"])
    return quad, constraint


# ---------------------------------------------------------------------------
# Right-hand-side expression trees

def evaluate_rhs(node: dict, order: Fraction) -> QSeries:
    op = node["op"]
    if op == "sum":
        total: QSeries | None = None
        for coef, child in node["terms"]:
            term = evaluate_rhs(child, order)
            if coef != 1:
                term = series_scale(term, coef)
            total = term if total is None else series_add(total, term)
        return total if total is not None else zero_series(order)
    if op == "prod":
        margin = Fraction(2)
        total = None
        for child in node["factors"]:
            term = evaluate_rhs(child, order + margin)
            total = term if total is None else series_mul(total, term)
        return total
    if op == "char":
        return cft.character_series(node["spec"], order)
    if op == "congruence":
        return congruence_product(node["scale_den"], node["modulus"],
                                  set(node["residues"]), node["exponent"], order)
    if op == "qpoch":
        return pochhammer(_frac(node["start"]), _frac(node["step"]),
                          node.get("n"), order, sign=node.get("sign", 1),
                          power=node.get("power", 1))
    if op == "qpow":
        return monomial(_frac(node["exp"]), order)
    if op == "nahm":
        quad = _quad_from_json(node["quad"])
        constraint = None
        if node.get("constraint"):
            cd = node["constraint"]
            constraint = LatticeConstraint(tuple(cd["weights"]), cd["modulus"],
                                           cd["residue"])
        return nahm_sum(quad, order, constraint)
    if op == "coeffs":
        grain = node.get("grain", 1)
        start = int(_frac(node["start"]) * grain)
        values = [int(v) for v in node["values"]]
        return make_series(grain, start, start + len(values), values)
    if op == "one_var_sum":
        # sum_m q^(a m^2 + b m) / (q^den_base; q^den_base)_(den_mult * m)
        a = _frac(node["quad"])
        b = _frac(node.get("lin", 0))
        base = node.get("den_base", 1)
        mult = node.get("den_mult", 1)
        total = zero_series(order)
        m = 0
        while True:
            e = a * m * m + b * m
            if e >= order:
                break
            term = monomial(e, order)
            if m:
                poch = pochhammer(base, base, mult * m, order + e)
                term = series_mul(term, series_inverse(poch, int(order * poch.grain)))
            total = series_add(total, term)
            m += 1
        return total
    raise RegistryError(f"unknown rhs op {op!r}")


# ---------------------------------------------------------------------------
# Verification

def verify_identity(rec: IdentityRecord,
                    order: int | Fraction | None = None) -> VerificationReport:
    if rec.requires_external_data or rec.lhs is None:
        raise RegistryError(
            f"record {rec.id} needs summation data not determined here")
    target = Fraction(order if order is not None else rec.default_order)
    start = time.perf_counter()
    quad, constraint = lhs_quadruple(rec.lhs)
    lhs = nahm_sum(quad, target, constraint)
    rhs = evaluate_rhs(rec.rhs, target)
    cmp = equal_to_order(lhs, rhs, target)
    return VerificationReport(rec.id, target, cmp.equal, cmp.first_mismatch,
                              time.perf_counter() - start, rec.status)


def run_suite(records: list[IdentityRecord] | None = None,
              filter_tags: set[str] | None = None,
              order_overrides: dict[str, int] | None = None,
              jobs: int = 1,
              include_provisional: bool = True) -> list[VerificationReport]:
    """Verify matching records; reports are sorted by record id.

    A record matches when filter_tags is None or intersects the record's
    tags, its status, or its id.  Records lacking summation data are
    always skipped.  Results are independent of the job count.
    """
    if records is None:
        records = load_registry()
    selected = []
    for rec in records:
        if rec.requires_external_data:
            continue
        if not include_provisional and rec.status == "provisional":
            continue
        if filter_tags is not None:
            keys = set(rec.tags) | {rec.status, rec.id}
            if not (keys & filter_tags):
                continue
        selected.append(rec)
    overrides = order_overrides or {}

    def job(rec: IdentityRecord) -> VerificationReport:
        return verify_identity(rec, overrides.get(rec.id))

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(job, selected))
    else:
        reports = [job(rec) for rec in selected]
    return sorted(reports, key=lambda rep: rep.id)


def suite_failed(reports: list[VerificationReport],
                 records: list[IdentityRecord]) -> bool:
    """Failure iff any non-provisional executed record mismatched."""
    status = {rec.id: rec.status for rec in records}
    return any(not rep.equal and status.get(rep.id) != "provisional"
               for rep in reports)


def report_lines(reports: list[VerificationReport],
                 include_timing: bool = False) -> str:
    return "\n".join(rep.line(include_timing) for rep in reports) + "\n"


# ---------------------------------------------------------------------------
# JSON interchange

def records_to_json(records: list[IdentityRecord]) -> str:
    out = []
    for rec in records:
        out.append({
            "id": rec.id,
            "source": {"tag": rec.source[0], "anchor": rec.source[1]},
            "lhs": rec.lhs,
            "rhs": rec.rhs,
            "default_order": rec.default_order,
            "status": rec.status,
            "tags": list(rec.tags),
            "note": rec.note,
            "requires_external_data": rec.requires_external_data,
        })
    return json.dumps(out, sort_keys=True, indent=1) + "\n"


def records_from_json(text: str) -> list[IdentityRecord]:
    out = []
    for data in json.loads(text):
        out.append(IdentityRecord(
            id=data["id"],
            source=(data["source"]["tag"], data["source"]["anchor"]),
            lhs=data["lhs"],
            rhs=data["rhs"],
            default_order=data["default_order"],
            status=data["status"],
            tags=tuple(data["tags"]),
            note=data.get("note"),
            requires_external_data=data.get("requires_external_data", False)))
    return out


# ---------------------------------------------------------------------------
# Built-in records

def _pair(x: str, y: str, b=None, c="pair-default", constraint=None) -> dict:
    lhs: dict = {"pair": [x, y]}
    lhs["b"] = None if b is None else [_frac_to_json(v) for v in b]
    lhs["c"] = None if c == "pair-default" else _frac_to_json(Fraction(c))
    if constraint is not None:
        lhs["constraint"] = constraint
    return lhs


def _quad_lhs(a, b, c, d, constraint=None) -> dict:
    quad = NahmQuadruple.make(a, b, c, d)
    lhs = {"quad": _quad_to_json(quad)}
    if constraint is not None:
        lhs["constraint"] = constraint
    return lhs


def _sum(*terms) -> dict:
    return {"op": "sum", "terms": [[coef, node] for coef, node in terms]}


def _prod(*factors) -> dict:
    return {"op": "prod", "factors": list(factors)}


def _cong(s: int, m: int, residues, exponent: int) -> dict:
    return {"op": "congruence", "scale_den": s, "modulus": m,
            "residues": sorted(residues), "exponent": exponent}


def _qpoch(start, step, n=None, sign=1, power=1) -> dict:
    return {"op": "qpoch", "start": _frac_to_json(Fraction(start)),
            "step": _frac_to_json(Fraction(step)), "n": n,
            "sign": sign, "power": power}


def _qpow(exp) -> dict:
    return {"op": "qpow", "exp": _frac_to_json(Fraction(exp))}


def _char(**spec) -> dict:
    return {"op": "char", "spec": spec}


def _eta_inv() -> dict:
    return _cong(1, 1, {0}, -1)


def _triple_product_over_eta(s: int, modulus: int) -> dict:
    """(q^s, q^(mod-s), q^mod; q^mod)_inf / (q; q)_inf."""
    return _prod(_qpoch(s, modulus), _qpoch(modulus - s, modulus),
                 _qpoch(modulus, modulus), _eta_inv())


def _ag_linear(r: int, s: int) -> list[Fraction]:
    return [Fraction(max(0, i - s + 1)) for i in range(1, r + 1)]


def _d_type_inverse_times(scale: int, r: int):
    """scale * C(D_r)^(-1) with the fork nodes in the last two slots."""
    m = [[0] * r for _ in range(r)]
    for i in range(r):
        m[i][i] = 2
        if i + 1 < r:
            m[i][i + 1] = -1
            m[i + 1][i] = -1
    m[r - 2][r - 1] = 0
    m[r - 1][r - 2] = 0
    m[r - 3][r - 1] = -1
    m[r - 1][r - 3] = -1
    inv = rational_inverse(tuple(tuple(Fraction(v) for v in row) for row in m))
    return [[scale * x for x in row] for row in inv]


def load_registry() -> list[IdentityRecord]:
    """All built-in identity records."""
    recs: list[IdentityRecord] = []

    def add(id_: str, tag: str, anchor: str, lhs, rhs, order: int, status: str,
            tags: tuple[str, ...], note: str | None = None,
            external: bool = False) -> None:
        recs.append(IdentityRecord(id_, (tag, anchor), lhs, rhs, order, status,
                                   tags, note, external))

    # --- Rogers-Ramanujan -------------------------------------------------
    add("RR-G", "A1,T1", "first sum-product identity of modulus 5",
        _quad_lhs([[2]], [0], 0, [1]), _cong(1, 5, {1, 4}, -1),
        200, "proved", ("rogers-ramanujan", "product"))
    add("RR-H", "A1,T1", "second sum-product identity of modulus 5",
        _quad_lhs([[2]], [1], 0, [1]), _cong(1, 5, {2, 3}, -1),
        200, "proved", ("rogers-ramanujan", "product"))

    # --- Andrews-Gordon, modulus 2r+3 ------------------------------------
    for r in range(1, 5):
        for s in range(1, r + 2):
            add(f"AG-r{r}-s{s}", f"A1,T{r}",
                f"multi-sum identity of modulus {2 * r + 3}, shift {s}",
                _pair("A1", f"T{r}", b=_ag_linear(r, s), c=0),
                _triple_product_over_eta(s, 2 * r + 3),
                120, "proved", ("andrews-gordon", "product"))

    # --- Melzer (half-integer grid, modulus 4(r+1)) -----------------------
    for r in range(1, 4):
        m = 4 * (r + 1)
        allowed = {n for n in range(m)
                   if n % 4 != 2 and n % m not in {0, 2 * r + 1, m - 2 * r - 1}}
        add(f"Melzer-r{r}", f"T1,T{2 * r}",
            "half-grid multi-sum equals a restricted-parts product",
            _pair("T1", f"T{2 * r}", c=0), _cong(2, m, allowed, -1),
            80, "proved", ("melzer", "product"))

    # --- Warnaar odd-rank family ------------------------------------------
    for r in range(1, 4):
        m = 2 * r + 1
        allowed = {n for n in range(m) if n not in {0, r, r + 1}}
        factors = [_qpoch(Fraction(1, 2), 1, sign=-1)]
        if allowed:
            factors.append(_cong(1, m, allowed, -1))
        add(f"WarOdd-r{r}", f"T1,T{2 * r - 1}",
            "odd-rank half-grid multi-sum with a fermionic prefactor",
            _pair("T1", f"T{2 * r - 1}", c=0), _prod(*factors),
            80, "proved", ("warnaar-odd", "product"))

    # --- (A1, B_r) family --------------------------------------------------
    for r in range(2, 5):
        if r == 2:
            # rank-2 member written in its native coordinate order
            lhs = _quad_lhs([[2, 2], [1, 2]], [0, 0], 0, [2, 1])
        else:
            lhs = _pair("A1", f"B{r}", c=0)
        rhs = _prod(_qpoch(Fraction(r, 2), r + 1, sign=-1),
                    _qpoch(Fraction(r, 2) + 1, r + 1, sign=-1),
                    _qpoch(r + 1, r + 1), _cong(1, 2, {0}, -1))
        add(f"BKRS-r{r}", f"A1,B{r}",
            f"mixed-step multi-sum of modulus {r + 1} with signed factors",
            lhs, rhs, 100, "proved", ("bkrs", "product"))

    # --- Bressoud (A1, C_r), modulus 2r+2 ---------------------------------
    for r in range(2, 5):
        for s in range(1, r + 2):
            add(f"Bressoud-r{r}-s{s}", f"A1,C{r}",
                f"even-modulus multi-sum identity, shift {s}",
                _pair("A1", f"C{r}", b=_ag_linear(r, s), c=0),
                _triple_product_over_eta(s, 2 * r + 2),
                120, "proved", ("bressoud", "product"))

    # --- KKMM (A1, D_r), parity constrained --------------------------------
    for r in range(3, 6):
        if r == 3:
            lhs_base = {"a": _d_type_inverse_times(2, 3), "b": [0, 0, 0],
                        "c": 0, "d": [1, 1, 1]}
        else:
            lhs_base = None
        for parity, name in ((0, "even"), (1, "odd")):
            constraint = {"weights": [0] * (r - 2) + [1, 1], "modulus": 2,
                          "residue": parity}
            if lhs_base is None:
                lhs = _pair("A1", f"D{r}", c=0, constraint=constraint)
            else:
                lhs = _quad_lhs(lhs_base["a"], lhs_base["b"], lhs_base["c"],
                                lhs_base["d"], constraint=constraint)
            theta = ({"op": "theta", "a": _frac_to_json(r),
                      "b": _frac_to_json(0), "c": _frac_to_json(0)}
                     if parity == 0 else
                     {"op": "theta", "a": _frac_to_json(r),
                      "b": _frac_to_json(r), "c": _frac_to_json(Fraction(r, 4))})
            add(f"KKMM-r{r}-{name}", f"A1,D{r}",
                f"fork-parity {name} slice equals a theta over eta",
                lhs, _prod(_eta_inv(), theta),
                80, "proved", ("kkmm", "theta"))

    # --- Warnaar (T1, C_r) products ----------------------------------------
    for r in range(2, 5):
        step = Fraction(2 * r + 3, 2)
        rhs = _prod(_qpoch(Fraction(r + 1, 2), step), _qpoch(Fraction(r + 2, 2), step),
                    _qpoch(step, step), _qpoch(1, 1, sign=-1, power=-1),
                    _qpoch(Fraction(1, 2), Fraction(1, 2), power=-1))
        add(f"TC-r{r}", f"T1,C{r}",
            "half-grid mixed-step multi-sum as a triple product quotient",
            _pair("T1", f"C{r}", c=0), rhs, 80, "proved",
            ("warnaar-tc", "product"))

    # --- (T1, D_r): characters and product form ---------------------------
    for r in range(3, 6):
        p = 8 * r + 4
        if r == 3:
            base_a = _d_type_inverse_times(1, 3)
            lhs_char = _quad_lhs(base_a, [0, 0, 0], Fraction(-r, 8 * (2 * r + 1)),
                                 [1, 1, 1])
            lhs_prod = _quad_lhs(base_a, [0, 0, 0], 0, [1, 1, 1])
        else:
            lhs_char = _pair("T1", f"D{r}", c=Fraction(-r, 8 * (2 * r + 1)))
            lhs_prod = _pair("T1", f"D{r}", c=0)
        rhs_char = _sum(
            (1, _char(family="super_eff_index", p=p, pp=2, sector="NS", j=1)),
            (1, _char(family="super_eff_index", p=p, pp=2, sector="NS", j=2 * r + 1)),
            (2, _char(family="super_eff_index", p=p, pp=2, sector="R", j=r + 1)))
        add(f"T1Dr-char-r{r}", f"T1,D{r}",
            "sum as NS vacuum + top NS + twice middle R of the even super series",
            lhs_char, rhs_char, 60, "conjectural", ("t1dr", "characters"))
        allowed1 = {n for n in range(p)
                    if n % 4 != 2 and n % p not in {0, 4 * r + 1, 4 * r + 3}}
        allowed2 = {n for n in range(p)
                    if n % 4 != 2 and n % p not in {0, 1, p - 1}}
        modd = 4 * r + 2
        allowed3 = {n for n in range(modd) if n not in {0, r + 1, 3 * r + 1}}
        rhs_prod = _sum(
            (1, _cong(2, p, allowed1, -1)),
            (1, _prod(_qpow(Fraction(r, 2)), _cong(2, p, allowed2, -1))),
            (2, _prod(_qpow(Fraction(r, 8)), _cong(1, 2, {1}, -1),
                      _cong(1, modd, allowed3, -1))))
        add(f"T1Dr-prod-r{r}", f"T1,D{r}",
            "same sum as three restricted-parts products",
            lhs_prod, rhs_prod, 60, "conjectural", ("t1dr", "product"))

    # --- (A1, C_r) as free-boson characters --------------------------------
    for r in (2, 3):
        k = 4 * (r + 1)
        add(f"A1Cr-r{r}", f"A1,C{r}",
            f"sum as vacuum minus top charge of the level-{k} free boson",
            _pair("A1", f"C{r}", c=Fraction(-1, 24)),
            _sum((1, _char(family="u1", k=k, m=0)),
                 (-1, _char(family="u1", k=k, m=k))),
            60, "proved", ("a1cr", "characters"))

    # --- (T1, C_r) with the explicit B lists -------------------------------
    t1c2 = [((0, 0), Fraction(-3, 56), Fraction(0), Fraction(2)),
            ((0, 1), Fraction(1, 56), Fraction(1, 14), Fraction(15, 14)),
            ((1, 1), Fraction(9, 56), Fraction(3, 14), Fraction(45, 14))]
    for b, c, w1, w2 in t1c2:
        bid = "".join(str(x) for x in b)
        add(f"T1Cr-r2-B{bid}", "T1,C2",
            f"B={b} sum as an NS character difference of the rank-2 super series",
            _pair("T1", "C2", b=b, c=c),
            _sum((1, _char(family="super_eff_weight", p=14, pp=4, sector="NS",
                           w=_frac_to_json(w1))),
                 (-1, _char(family="super_eff_weight", p=14, pp=4, sector="NS",
                            w=_frac_to_json(w2)))),
            60, "conjectural", ("t1cr", "characters"))
    t1c3 = [((0, 0, 0), Fraction(-1, 18), Fraction(0), Fraction(2)),
            ((0, 0, 1), Fraction(0), Fraction(1, 18), Fraction(55, 18)),
            ((0, 1, 1), Fraction(1, 9), Fraction(1, 6), Fraction(7, 6)),
            ((1, 1, 2), Fraction(5, 18), Fraction(1, 3), Fraction(13, 3))]
    for b, c, w1, w2 in t1c3:
        bid = "".join(str(x) for x in b)
        add(f"T1Cr-r3-B{bid}", "T1,C3",
            f"B={b} sum as an NS character difference of the rank-3 super series",
            _pair("T1", "C3", b=b, c=c),
            _sum((1, _char(family="super_eff_weight", p=18, pp=4, sector="NS",
                           w=_frac_to_json(w1))),
                 (-1, _char(family="super_eff_weight", p=18, pp=4, sector="NS",
                            w=_frac_to_json(w2)))),
            60, "conjectural", ("t1cr", "characters"))
    for r in (4, 5):
        p = 4 * r + 6
        n = r // 2
        add(f"T1Cr-r{r}-general", f"T1,C{r}",
            "vacuum-minus-one NS difference; the odd-rank branch of the "
            "stated uniform rule is ambiguous, so this stays provisional",
            _pair("T1", f"C{r}"),
            _sum((1, _char(family="super_eff_weight", p=p, pp=4, sector="NS",
                           w=_frac_to_json(0))),
                 (-1, _char(family="super_eff_weight", p=p, pp=4, sector="NS",
                            w=_frac_to_json(n + 1)))),
            40, "provisional", ("t1cr", "characters"),
            note="uniform-rule candidate for higher rank; both parity branches "
                 "display the same expression, so the intended odd-rank label "
                 "is unclear")

    # --- F4 pairs -----------------------------------------------------------
    add("A1F4-prod", "A1,F4", "rank-4 mixed-step sum of modulus 14",
        _pair("A1", "F4", c=0), _cong(1, 14, {2, 3, 4, 10, 11, 12}, -1),
        40, "proved", ("a1f4", "product"))
    add("A1F4-char", "A1,F4",
        "same sum as a unitary minimal-model character difference",
        _pair("A1", "F4", c=0),
        _prod(_qpow(Fraction(1, 28)),
              _sum((1, _char(family="virasoro_weight", p=7, pp=6,
                             h=_frac_to_json(0))),
                   (-1, _char(family="virasoro_weight", p=7, pp=6,
                              h=_frac_to_json(5))))),
        40, "conjectural", ("a1f4", "characters"))
    add("T1F4-prod", "T1,F4", "rank-4 mixed-step sum of modulus 10",
        _pair("T1", "F4", c=0), _cong(1, 10, {1, 2, 4, 6, 8, 9}, -1),
        40, "proved", ("t1f4", "product"))
    add("T1F4-char", "T1,F4",
        "same sum as Lee-Yang vacuum times a character difference",
        _pair("T1", "F4", c=0),
        _prod(_qpow(Fraction(1, 20)),
              _char(family="virasoro_eff", p=5, pp=2, j=1),
              _sum((1, _char(family="virasoro_weight", p=6, pp=5,
                             h=_frac_to_json(0))),
                   (-1, _char(family="virasoro_weight", p=6, pp=5,
                              h=_frac_to_json(3))))),
        40, "conjectural", ("t1f4", "characters"))

    # --- G2, E6, E8 ---------------------------------------------------------
    add("A1G2", "A1,G2",
        "sum as a four-term signed combination of level-36 boson characters",
        _pair("A1", "G2", c=Fraction(-1, 24)),
        _sum((1, _char(family="u1", k=36, m=0)), (-1, _char(family="u1", k=36, m=12)),
             (-1, _char(family="u1", k=36, m=24)), (1, _char(family="u1", k=36, m=36))),
        60, "conjectural", ("a1g2", "characters"))
    add("T1E6", "T1,E6",
        "sum as Lee-Yang vacuum times the three-state-Potts vacuum combination",
        _pair("T1", "E6", c=Fraction(-1, 20)),
        _prod(_char(family="virasoro_eff", p=5, pp=2, j=1),
              _sum((1, _char(family="virasoro_weight", p=6, pp=5, h=_frac_to_json(0))),
                   (1, _char(family="virasoro_weight", p=6, pp=5, h=_frac_to_json(3))),
                   (2, _char(family="virasoro_weight", p=6, pp=5,
                             h=_frac_to_json(Fraction(2, 3)))))),
        30, "conjectural", ("t1e6", "characters"))
    add("T1E8", "T1,E8",
        "rank-8 sum as the vacuum of the effective modulus-11 series",
        _pair("T1", "E8", c=Fraction(-1, 33)),
        _char(family="virasoro_eff", p=11, pp=2, j=1),
        30, "conjectural", ("t1e8", "characters"))
    add("E8T1-coeffs", "E8,T1",
        "recorded leading coefficients of the rank-8 dual-order sum",
        _pair("E8", "T1", c=0),
        {"op": "coeffs", "values": [1, 120, 1660, 12320, 68210],
         "start": _frac_to_json(0), "grain": 1},
        5, "conjectural", ("e8t1", "coefficients"))
    add("E8-fermionic", "A1,E8",
        "rank-8 sum collapses to a one-variable even-index sum",
        _pair("A1", "E8", c=0),
        {"op": "one_var_sum", "quad": _frac_to_json(2), "lin": _frac_to_json(0),
         "den_base": 1, "den_mult": 2},
        25, "proved", ("e8-fermionic", "sum-sum"))

    # --- rank-one and rank-two isolated cases ------------------------------
    add("T1A1-f1", "T1,A1",
        "half-matrix sum, zero shift, as two effective characters",
        _quad_lhs([[Fraction(1, 2)]], [0], Fraction(-1, 40), [1]),
        _sum((1, _char(family="virasoro_weight", p=5, pp=3,
                       h=_frac_to_json(Fraction(-1, 20)))),
             (1, _char(family="virasoro_weight", p=5, pp=3,
                       h=_frac_to_json(Fraction(1, 5))))),
        100, "conjectural", ("t1a1", "characters"))
    add("T1A1-f2", "T1,A1",
        "half-matrix sum, half shift, as the other two effective characters",
        _quad_lhs([[Fraction(1, 2)]], [Fraction(1, 2)], Fraction(1, 40), [1]),
        _sum((1, _char(family="virasoro_weight", p=5, pp=3, h=_frac_to_json(0))),
             (1, _char(family="virasoro_weight", p=5, pp=3,
                       h=_frac_to_json(Fraction(3, 4))))),
        100, "conjectural", ("t1a1", "characters"))
    add("T1A2", "T1,A2",
        "sum as vacuum plus twice the charge-2 level-3 boson character",
        _pair("T1", "A2", c=Fraction(-1, 24)),
        _sum((1, _char(family="u1", k=3, m=0)), (2, _char(family="u1", k=3, m=2))),
        60, "conjectural", ("t1a2", "characters"))
    add("A2T1", "A2,T1",
        "sum as the level-1 su(2) vacuum: two level-4 boson characters",
        _pair("A2", "T1", c=Fraction(-1, 24)),
        _sum((1, _char(family="u1", k=4, m=0)), (1, _char(family="u1", k=4, m=4))),
        60, "conjectural", ("a2t1", "characters"))

    # --- (T2, T1): the zero-B member and the external ones ------------------
    add("T2T1-f2", "T2,T1",
        "zero-B sum as NS vacuum of the rank-2 super series times a free fermion",
        _pair("T2", "T1"),
        _prod(_char(family="super_eff_weight", p=8, pp=2, sector="NS",
                    w=_frac_to_json(0)),
              _char(family="free_fermion", sector="NS")),
        60, "conjectural", ("t2t1", "characters"))
    add("T2T1-f3", "T2,T1",
        "R-sector product form for the second sum of this matrix",
        None,
        _prod(_char(family="super_eff_weight", p=8, pp=2, sector="R",
                    w=_frac_to_json(Fraction(1, 32))),
              _char(family="free_fermion", sector="R")),
        60, "conjectural", ("t2t1", "characters"),
        note="summation data (B, C) lives in an external table",
        external=True)
    add("T2T1-f4", "T2,T1",
        "R-sector product form for the third sum of this matrix",
        None,
        _prod(_char(family="super_eff_weight", p=8, pp=2, sector="R",
                    w=_frac_to_json(Fraction(5, 32))),
              _char(family="free_fermion", sector="R")),
        60, "conjectural", ("t2t1", "characters"),
        note="summation data (B, C) lives in an external table",
        external=True)
    add("T2T1-f5", "T2,T1",
        "NS product form for the last sum of this matrix; C = 19/96 "
        "(correcting a sign slip in the source table), B undetermined here",
        None,
        _prod(_char(family="super_eff_weight", p=8, pp=2, sector="NS",
                    w=_frac_to_json(Fraction(1, 4))),
              _char(family="free_fermion", sector="NS")),
        60, "conjectural", ("t2t1", "characters"),
        note="C is pinned to 19/96 but B lives in an external table",
        external=True)

    # --- (T2, A1): zero-B member plus external ones -------------------------
    t2a1_terms = [("NS", Fraction(0), 1), ("NS", Fraction(1, 2), 1),
                  ("NS", Fraction(5, 2), 1), ("NS", Fraction(5), 1),
                  ("R", Fraction(1, 4), 2), ("R", Fraction(5, 4), 2)]
    add("T2A1-f1", "T2,A1",
        "zero-B sum as a six-term NS/R combination of the modulus-84 series",
        _pair("T2", "A1"),
        _sum(*(((coef, _char(family="super_eff_weight", p=84, pp=2, sector=sec,
                             w=_frac_to_json(w)))) for sec, w, coef in t2a1_terms)),
        40, "conjectural", ("t2a1", "characters"),
        note="identified with the zero-B quadruple by matching the vacuum "
             "leading behavior; confirmed by the expansion itself")
    for fid, terms in (
            ("T2A1-f2", [("NS", Fraction(5, 14), 1), ("NS", Fraction(6, 7), 1),
                         ("NS", Fraction(13, 7), 1), ("NS", Fraction(20, 7), -1),
                         ("R", Fraction(3, 28), 2), ("R", Fraction(87, 28), 2)]),
            ("T2A1-f3", [("NS", Fraction(1, 14), 1), ("NS", Fraction(15, 14), -1),
                         ("NS", Fraction(11, 7), 1), ("NS", Fraction(57, 14), 1),
                         ("R", Fraction(23, 28), 2), ("R", Fraction(135, 28), -2)])):
        add(fid, "T2,A1", "NS/R combination for a nonzero-B sum of this matrix",
            None,
            _sum(*(((coef, _char(family="super_eff_weight", p=84, pp=2, sector=sec,
                                 w=_frac_to_json(w)))) for sec, w, coef in terms)),
            40, "conjectural", ("t2a1", "characters"),
            note="summation data (B, C) lives in an external table",
            external=True)

    # --- (T1, A3): both candidate combinations ------------------------------
    t1a3_lhs = _pair("T1", "A3", c=Fraction(-3, 56))
    add("T1A3-displayed", "T1,A3",
        "displayed combination: NS vacuum + NS 3/2 + twice R 3/8",
        t1a3_lhs,
        _sum((1, _char(family="super_eff_weight", p=28, pp=2, sector="NS",
                       w=_frac_to_json(0))),
             (1, _char(family="super_eff_weight", p=28, pp=2, sector="NS",
                       w=_frac_to_json(Fraction(3, 2)))),
             (2, _char(family="super_eff_weight", p=28, pp=2, sector="R",
                       w=_frac_to_json(Fraction(3, 8))))),
        60, "provisional", ("t1a3", "characters"),
        note="the surrounding text claims the sum equals the first listed "
             "combination, but the displayed equation is this one; "
             "verification picks the winner")
    add("T1A3-first-listed", "T1,A3",
        "first-listed combination: NS 3/14 + NS 5/7 + twice R 5/56",
        t1a3_lhs,
        _sum((1, _char(family="super_eff_weight", p=28, pp=2, sector="NS",
                       w=_frac_to_json(Fraction(3, 14)))),
             (1, _char(family="super_eff_weight", p=28, pp=2, sector="NS",
                       w=_frac_to_json(Fraction(5, 7)))),
             (2, _char(family="super_eff_weight", p=28, pp=2, sector="R",
                       w=_frac_to_json(Fraction(5, 56))))),
        60, "provisional", ("t1a3", "characters"),
        note="expected to fail; kept so the ambiguity is machine-checked")

    # --- (A1, A2) and (A2, A1) ----------------------------------------------
    add("A1A2-f1", "A1,A2",
        "nonzero-B sum as 2 chi(1/15) + chi(2/5) of the Potts subalgebra",
        _pair("A1", "A2", b=(Fraction(-2, 3), Fraction(-1, 3)), c=Fraction(1, 30)),
        _sum((2, _char(family="composite", name="MSub65",
                       label=_frac_to_json(Fraction(1, 15)))),
             (1, _char(family="composite", name="MSub65",
                       label=_frac_to_json(Fraction(2, 5))))),
        60, "conjectural", ("a1a2", "characters"),
        note="(B, C) recovered by exact series matching against the stated "
             "character combination; the matrix symmetry pairs it with the "
             "swapped B, consistent with the first two sums being equal")
    add("A1A2-f3", "A1,A2",
        "zero-B sum as chi(0) + 2 chi(2/3) of the Potts subalgebra",
        _pair("A1", "A2", c=Fraction(-1, 30)),
        _sum((1, _char(family="composite", name="MSub65", label=_frac_to_json(0))),
             (2, _char(family="composite", name="MSub65",
                       label=_frac_to_json(Fraction(2, 3))))),
        60, "conjectural", ("a1a2", "characters"))
    add("A2A1-f1", "A2,A1",
        "nonzero-B sum as 3 chi(1/10) + chi(3/5) of the Monster-related theory",
        _pair("A2", "A1", b=(Fraction(-1, 2), Fraction(0)), c=Fraction(1, 20)),
        _sum((3, _char(family="composite", name="D2A",
                       label=_frac_to_json(Fraction(1, 10)))),
             (1, _char(family="composite", name="D2A",
                       label=_frac_to_json(Fraction(3, 5))))),
        60, "conjectural", ("a2a1", "characters"),
        note="(B, C) recovered by exact series matching against the stated "
             "character combination")
    add("A2A1-f3", "A2,A1",
        "zero-B sum as chi(0) + 3 chi(1/2) of the Monster-related theory",
        _pair("A2", "A1", c=Fraction(-1, 20)),
        _sum((1, _char(family="composite", name="D2A", label=_frac_to_json(0))),
             (3, _char(family="composite", name="D2A",
                       label=_frac_to_json(Fraction(1, 2))))),
        60, "conjectural", ("a2a1", "characters"))

    # --- (A1, A3) -----------------------------------------------------------
    add("A1A3-u1", "A1,A3",
        "sum as vacuum plus weight-3/4 character of the level-3 boson",
        _pair("A1", "A3", c=Fraction(-1, 24)),
        _sum((1, _char(family="u1", k=3, m=0)), (1, _char(family="u1", k=3, m=3))),
        60, "conjectural", ("a1a3", "characters"))
    add("A1A3-parafermion", "A1,A3",
        "same sum over the four-state parafermion spectrum",
        _pair("A1", "A3", c=Fraction(-1, 24)),
        _sum((1, _char(family="parafermion", k=4, l=0, m=0)),
             (1, _char(family="parafermion", k=4, l=4, m=0)),
             (2, _char(family="parafermion", k=4, l=4, m=2))),
        60, "conjectural", ("a1a3", "characters"))

    # --- (A1, B3) with nonzero B --------------------------------------------
    a1b3 = [[2, 2, 2], [2, 4, 4], [1, 2, 3]]
    for fid, b, c, sector, h1, h2 in (
            ("A1B3-1", (0, 0, 0), Fraction(-5, 96), "NS", Fraction(0), Fraction(3)),
            ("A1B3-2", (0, -1, -1), Fraction(-1, 48), "NS", Fraction(1, 32),
             Fraction(33, 32)),
            ("A1B3-3", (-1, 0, Fraction(1, 2)), Fraction(1, 24), "R",
             Fraction(3, 32), Fraction(67, 32))):
        add(fid, "A1,B3",
            f"B={b} sum as a {sector} character difference of the unitary "
            "rank-3 super model",
            _quad_lhs(a1b3, b, c, [2, 2, 1]),
            _sum((1, {"op": "char", "spec": {
                "family": "super_weight", "p": 8, "pp": 6, "sector": sector,
                "h": _frac_to_json(h1)}}),
                 (-1, {"op": "char", "spec": {
                     "family": "super_weight", "p": 8, "pp": 6, "sector": sector,
                     "h": _frac_to_json(h2)}})),
            60, "conjectural", ("a1b3", "characters"))

    # --- (A1, A5) consistency pair -------------------------------------------
    add("A1A5-parafermion", "A1,A5",
        "rank-5 sum over the six-state parafermion spectrum",
        _pair("A1", "A5", c=Fraction(-5, 96)),
        _sum((1, _char(family="parafermion", k=6, l=0, m=0)),
             (1, _char(family="parafermion", k=6, l=6, m=0)),
             (2, _char(family="parafermion", k=6, l=6, m=4)),
             (2, _char(family="parafermion", k=6, l=6, m=2))),
        40, "conjectural", ("a1a5", "characters"))
    add("A1A5-super", "A1,A5",
        "the same sum over NS characters of the unitary rank-3 super model",
        _pair("A1", "A5", c=Fraction(-5, 96)),
        _sum((1, {"op": "char", "spec": {"family": "super_weight", "p": 8,
                                         "pp": 6, "sector": "NS",
                                         "h": _frac_to_json(0)}}),
             (1, {"op": "char", "spec": {"family": "super_weight", "p": 8,
                                         "pp": 6, "sector": "NS",
                                         "h": _frac_to_json(3)}}),
             (2, {"op": "char", "spec": {"family": "super_weight", "p": 8,
                                         "pp": 6, "sector": "NS",
                                         "h": _frac_to_json(Fraction(5, 6))}})),
        40, "conjectural", ("a1a5", "characters"))

    # --- open sum=product conjectures ----------------------------------------
    add("KR-T1G2", "T1,G2",
        "two-variable mixed-step sum as a modulus-9 product",
        _pair("T1", "G2", c=0), _cong(1, 9, {1, 3, 6, 8}, -1),
        150, "conjectural", ("kanade-russell", "product"))
    p1 = _cong(1, 9, {1, 3, 6, 8}, -1)
    p2a = _cong(1, 9, {3, 6}, -1)
    p2b = _cong(1, 9, {2, 4, 5, 7}, -1)
    add("WW-G2T1", "G2,T1",
        "two-variable mixed-step sum as a two-term modulus-9 product combination",
        _pair("G2", "T1", c=0),
        _sum((1, _prod(p1, p1)), (1, _prod(_qpow(1), p2a, p2a, p2b))),
        150, "conjectural", ("wang-wang", "product"))

    _validate_registry(recs)
    return recs


def _validate_registry(recs: list[IdentityRecord]) -> None:
    seen: dict[str, IdentityRecord] = {}
    for rec in recs:
        if rec.id in seen:
            raise RegistryError(f"duplicate record id {rec.id}")
        seen[rec.id] = rec
        if rec.status not in ("proved", "conjectural", "provisional"):
            raise RegistryError(f"{rec.id}: unknown status {rec.status}")
        if rec.status == "provisional" and not rec.note:
            raise RegistryError(f"{rec.id}: provisional records need a note")
        if rec.requires_external_data and rec.lhs is not None:
            raise RegistryError(f"{rec.id}: external-data records carry no lhs")
        if not rec.requires_external_data and rec.lhs is None:
            raise RegistryError(f"{rec.id}: missing lhs")
