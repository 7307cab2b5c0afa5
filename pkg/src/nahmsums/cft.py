"""Truncated q-expansions of the 2d CFT characters used by the registry.

Conventions (fixed here, validated downstream by the product-form
identities in the registry):

* Virasoro minimal model M(p, p') with gcd(p, p') = 1: theta-quotient
  characters with prefactor q^(-1/24) / (q; q)_inf; labels (r, s) with
  1 <= r <= p'-1, 1 <= s <= p-1 modulo (r, s) ~ (p'-r, p-s).
* N=1 super-Virasoro SM(p, p'), (p - p')/2 integral: NS labels need
  r - s even and carry prod(1 + q^(n-1/2)) / prod(1 - q^n) with a
  q^(-1/16) shift; R labels need r - s odd and carry
  prod(1 + q^n) / prod(1 - q^n) with no shift and no sqrt(2).
* U(1)_K: chi_m = q^(-1/24)/(q;q)_inf * sum_n q^(K(n + m/(2K))^2),
  conformal weight m^2/(4K), labels 0 <= m <= K.
* Z_k parafermion: eta times the level-k string function, extracted from
  the two-variable affine character by slicing the z-power lattice.
* "Effective" models relabel the same characters by ascending leading
  exponent; effective weight = leading exponent + c_eff/24.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt

from .qseries import (
    QSeries,
    congruence_product,
    monomial,
    pochhammer,
    series_add,
    series_mul,
    series_shift,
    series_sub,
    theta_series,
)
from .zq import ZQSeries, divide_theta_quotient

__all__ = [
    "CftError",
    "InvalidLabel",
    "SectorParityMismatch",
    "IndexOutOfRange",
    "virasoro_character",
    "virasoro_weight",
    "virasoro_labels",
    "virasoro_character_by_weight",
    "super_virasoro_character",
    "super_virasoro_weight",
    "super_virasoro_labels",
    "effective_character",
    "effective_weights",
    "super_character_by_effective_weight",
    "super_character_by_sector_index",
    "u1_character",
    "free_fermion_character",
    "parafermion_character",
    "parafermion_weight",
    "composite_character",
    "character_series",
    "clear_cache",
]

Rational = int | Fraction


class CftError(Exception):
    pass


class InvalidLabel(CftError):
    pass


class SectorParityMismatch(CftError):
    pass


class IndexOutOfRange(CftError):
    pass


_CACHE: dict[tuple, QSeries] = {}


def clear_cache() -> None:
    _CACHE.clear()


def _cached(key: tuple, builder) -> QSeries:
    hit = _CACHE.get(key)
    if hit is None:
        hit = builder()
        _CACHE[key] = hit
    return hit


def _euler_inverse(order: Rational) -> QSeries:
    return congruence_product(1, 1, {0}, -1, order)


# ---------------------------------------------------------------------------
# Virasoro minimal models

def _check_virasoro(p: int, pp: int, r: int, s: int) -> None:
    if p <= pp or pp < 2 or gcd(p, pp) != 1:
        raise InvalidLabel(f"M({p},{pp}) is not a valid minimal model")
    if not (1 <= r <= pp - 1 and 1 <= s <= p - 1):
        raise InvalidLabel(f"label (r,s)=({r},{s}) outside the M({p},{pp}) table")


def virasoro_weight(p: int, pp: int, r: int, s: int) -> Fraction:
    _check_virasoro(p, pp, r, s)
    return Fraction((p * r - pp * s) ** 2 - (p - pp) ** 2, 4 * p * pp)


def virasoro_labels(p: int, pp: int) -> list[tuple[int, int]]:
    """Distinct labels, one representative per (r,s) ~ (p'-r, p-s) pair."""
    seen = set()
    out = []
    for r in range(1, pp):
        for s in range(1, p):
            key = min((r, s), (pp - r, p - s))
            if key not in seen:
                seen.add(key)
                out.append(key)
    return out


def virasoro_character(p: int, pp: int, r: int, s: int,
                       order: Rational) -> QSeries:
    """Theta-quotient expansion of the (r, s) character of M(p, p')."""
    _check_virasoro(p, pp, r, s)
    order = Fraction(order)

    def build() -> QSeries:
        n = order + 1
        a = p * r - pp * s
        b = p * r + pp * s
        t = series_sub(
            theta_series(p * pp, a, Fraction(a * a, 4 * p * pp), n),
            theta_series(p * pp, b, Fraction(b * b, 4 * p * pp), n))
        chi = series_mul(_euler_inverse(n), t)
        return series_shift(chi, Fraction(-1, 24))

    return _cached(("vir", p, pp, r, s, order), build)


def virasoro_character_by_weight(p: int, pp: int, h: Rational,
                                 order: Rational) -> QSeries:
    h = Fraction(h)
    for r, s in virasoro_labels(p, pp):
        if virasoro_weight(p, pp, r, s) == h:
            return virasoro_character(p, pp, r, s, order)
    raise InvalidLabel(f"M({p},{pp}) has no primary of weight {h}")


# ---------------------------------------------------------------------------
# N=1 super-Virasoro minimal models

def _check_super(p: int, pp: int, r: int, s: int, sector: str) -> None:
    if p <= pp or pp < 2 or (p - pp) % 2 != 0:
        raise InvalidLabel(f"SM({p},{pp}) is not a valid super minimal model")
    if not (1 <= r <= pp - 1 and 1 <= s <= p - 1):
        raise InvalidLabel(f"label (r,s)=({r},{s}) outside the SM({p},{pp}) table")
    if sector not in ("NS", "R"):
        raise InvalidLabel(f"unknown sector {sector!r}")
    if sector == "NS" and (r - s) % 2 != 0:
        raise SectorParityMismatch(f"(r,s)=({r},{s}) has odd r-s, not an NS label")
    if sector == "R" and (r - s) % 2 == 0:
        raise SectorParityMismatch(f"(r,s)=({r},{s}) has even r-s, not an R label")


def super_virasoro_weight(p: int, pp: int, sector: str, r: int, s: int) -> Fraction:
    _check_super(p, pp, r, s, sector)
    h = Fraction((p * r - pp * s) ** 2 - (p - pp) ** 2, 8 * p * pp)
    if sector == "R":
        h += Fraction(1, 16)
    return h


def super_virasoro_labels(p: int, pp: int, sector: str) -> list[tuple[int, int]]:
    want = 0 if sector == "NS" else 1
    seen = set()
    out = []
    for r in range(1, pp):
        for s in range(1, p):
            if (r - s) % 2 != want:
                continue
            key = min((r, s), (pp - r, p - s))
            if key not in seen:
                seen.add(key)
                out.append(key)
    return out


def _lead_super(p: int, pp: int, sector: str, r: int, s: int) -> Fraction:
    lead = Fraction((p * r - pp * s) ** 2, 8 * p * pp)
    if sector == "NS":
        lead -= Fraction(1, 16)
    return lead


def super_virasoro_character(p: int, pp: int, sector: str, r: int, s: int,
                             order: Rational) -> QSeries:
    """NS/R character of SM(p, p'); integer coefficients, no sqrt(2) in R."""
    _check_super(p, pp, r, s, sector)
    order = Fraction(order)

    def build() -> QSeries:
        n = order + 1
        a = p * r - pp * s
        b = p * r + pp * s
        quad = Fraction(p * pp, 2)
        t = series_sub(
            theta_series(quad, Fraction(a, 2), Fraction(a * a, 8 * p * pp), n),
            theta_series(quad, Fraction(b, 2), Fraction(b * b, 8 * p * pp), n))
        if sector == "NS":
            pref = series_mul(pochhammer(Fraction(1, 2), 1, None, n, sign=-1),
                              _euler_inverse(n))
            return series_shift(series_mul(pref, t), Fraction(-1, 16))
        pref = series_mul(pochhammer(1, 1, None, n, sign=-1), _euler_inverse(n))
        return series_mul(pref, t)

    return _cached(("svir", p, pp, sector, r, s, order), build)


# ---------------------------------------------------------------------------
# Effective relabeling

def _model_leads(model: tuple) -> list[tuple[Fraction, tuple]]:
    """(leading exponent, label) for every distinct character of the model.

    model is ("virasoro", p, pp) or ("super", p, pp); the super case spans
    both sectors, since the effective central charge is a property of the
    whole multiplet.
    """
    kind = model[0]
    if kind == "virasoro":
        _, p, pp = model
        return sorted(
            (virasoro_weight(p, pp, r, s) + Fraction(
                (p - pp) ** 2, 4 * p * pp) - Fraction(1, 24), ("virasoro", p, pp, r, s))
            for r, s in virasoro_labels(p, pp))
    if kind == "super":
        _, p, pp = model
        out = []
        for sector in ("NS", "R"):
            for r, s in super_virasoro_labels(p, pp, sector):
                out.append((_lead_super(p, pp, sector, r, s),
                            ("super", p, pp, sector, r, s)))
        return sorted(out)
    raise InvalidLabel(f"unknown model {model!r}")


def effective_weights(model: tuple) -> list[tuple[Fraction, tuple]]:
    """(effective weight, label) sorted ascending; weight 0 is the minimum."""
    leads = _model_leads(model)
    base = leads[0][0]
    return [(lead - base, label) for lead, label in leads]


def effective_character(model: tuple, j: int, order: Rational) -> QSeries:
    """The j-th character (1-based, ascending leading exponent) of the model."""
    leads = _model_leads(model)
    if not 1 <= j <= len(leads):
        raise IndexOutOfRange(f"model has {len(leads)} characters, asked for {j}")
    label = leads[j - 1][1]
    return _character_from_label(label, order)


def _character_from_label(label: tuple, order: Rational) -> QSeries:
    if label[0] == "virasoro":
        return virasoro_character(*label[1:], order)
    return super_virasoro_character(*label[1:], order)


def super_character_by_effective_weight(p: int, pp: int, sector: str,
                                        w: Rational, order: Rational) -> QSeries:
    """Sector character with the given effective weight (global reference)."""
    w = Fraction(w)
    for weight, label in effective_weights(("super", p, pp)):
        if weight == w and label[3] == sector:
            return _character_from_label(label, order)
    raise InvalidLabel(f"SM({p},{pp}) {sector} sector has no effective weight {w}")


def super_character_by_weight(p: int, pp: int, sector: str, h: Rational,
                              order: Rational) -> QSeries:
    """Sector character with the given conformal weight."""
    h = Fraction(h)
    for r, s in super_virasoro_labels(p, pp, sector):
        if super_virasoro_weight(p, pp, sector, r, s) == h:
            return super_virasoro_character(p, pp, sector, r, s, order)
    raise InvalidLabel(f"SM({p},{pp}) {sector} sector has no weight {h}")


def super_character_by_sector_index(p: int, pp: int, sector: str, j: int,
                                    order: Rational) -> QSeries:
    """The j-th character of one sector, 1-based by ascending weight."""
    labels = sorted((_lead_super(p, pp, sector, r, s), (r, s))
                    for r, s in super_virasoro_labels(p, pp, sector))
    if not 1 <= j <= len(labels):
        raise IndexOutOfRange(
            f"SM({p},{pp}) {sector} sector has {len(labels)} characters")
    r, s = labels[j - 1][1]
    return super_virasoro_character(p, pp, sector, r, s, order)


# ---------------------------------------------------------------------------
# Free boson and free fermion

def u1_character(k: int, m: int, order: Rational) -> QSeries:
    if not 0 <= m <= k:
        raise InvalidLabel(f"U(1)_{k} labels run from 0 to {k}")
    order = Fraction(order)

    def build() -> QSeries:
        n = order + 1
        t = theta_series(k, m, Fraction(m * m, 4 * k), n)
        return series_shift(series_mul(_euler_inverse(n), t), Fraction(-1, 24))

    return _cached(("u1", k, m, order), build)


def free_fermion_character(sector: str, order: Rational) -> QSeries:
    order = Fraction(order)
    if sector == "NS":
        return _cached(("ff", "NS", order), lambda: series_shift(
            pochhammer(Fraction(1, 2), 1, None, order + 1, sign=-1),
            Fraction(-1, 48)))
    if sector == "R":
        return _cached(("ff", "R", order), lambda: series_shift(
            pochhammer(1, 1, None, order + 1, sign=-1), Fraction(1, 24)))
    raise InvalidLabel(f"unknown fermion sector {sector!r}")


# ---------------------------------------------------------------------------
# Z_k parafermions via level-k string functions

def _normalize_parafermion(k: int, l: int, m: int) -> tuple[int, int]:
    if not 0 <= l <= k:
        raise InvalidLabel(f"parafermion spin label l={l} outside 0..{k}")
    if (l - m) % 2 != 0:
        raise InvalidLabel(f"parafermion labels need l - m even, got ({l},{m})")
    m = m % (2 * k)
    if m > k:
        m -= 2 * k
    m = abs(m)
    if m > l:
        l, m = k - l, k - m
    return l, m


def parafermion_weight(k: int, l: int, m: int) -> Fraction:
    l, m = _normalize_parafermion(k, l, m)
    return Fraction(l * (l + 2), 4 * (k + 2)) - Fraction(m * m, 4 * k)


def parafermion_character(k: int, l: int, m: int, order: Rational) -> QSeries:
    """eta times the string function c^l_m of level k.

    The normalized affine character (Theta_{l+1,k+2} - Theta_{-l-1,k+2}) /
    (Theta_{1,2} - Theta_{-1,2}) is expanded in (z, q); the z^(m/2) slice
    equals c^l_m * q^(m^2/4k) because distinct m classes populate disjoint
    z-power lattices.  The z-window never needs truncation: powers reachable
    below the q-limit grow like sqrt(q-limit * k), which stays tiny here.
    """
    l, m = _normalize_parafermion(k, l, m)
    order = Fraction(order)

    def build() -> QSeries:
        grain = 1
        for d in (8, 4 * (k + 2), 4 * k, 24):
            grain = grain * d // gcd(grain, d)
        limit = order + k + 1
        limit_units = int(limit * grain)

        numer = ZQSeries(grain)
        jmax = isqrt(limit_units // ((k + 2) * grain) + 4) + 2
        for j in range(-jmax, jmax + 1):
            e = (Fraction(k + 2) * j * j + (l + 1) * j
                 + Fraction((l + 1) ** 2, 4 * (k + 2)))
            u = int(e * grain)
            if u >= limit_units + grain:
                continue
            c = 2 * (k + 2) * j + (l + 1)
            numer.add_term(u, c, 1)
            numer.add_term(u, -c, -1)

        denom = ZQSeries(grain)
        jmax = isqrt(limit_units // (2 * grain) + 4) + 2
        for j in range(-jmax, jmax + 1):
            e = 2 * Fraction(j) * j + j + Fraction(1, 8)
            u = int(e * grain)
            if u >= limit_units + grain:
                continue
            denom.add_term(u, 4 * j + 1, 1)
            denom.add_term(u, -4 * j - 1, -1)

        chi = divide_theta_quotient(numer, denom, limit_units)
        slice_coeffs: dict[int, int] = {}
        for qu, level in chi.table.items():
            c = level.get(m)
            if c:
                slice_coeffs[qu] = c
        if not slice_coeffs:
            raise InvalidLabel(f"empty string function c^{l}_{m} at level {k}")
        lo = min(slice_coeffs)
        arr = [0] * (limit_units - lo)
        for qu, c in slice_coeffs.items():
            if qu < limit_units:
                arr[qu - lo] = c
        from .qseries import make_series
        string_fn = series_shift(make_series(grain, lo, limit_units, arr),
                                 -Fraction(m * m, 4 * k))
        eta = series_shift(pochhammer(1, 1, None, limit, 1), Fraction(1, 24))
        return series_mul(string_fn, eta)

    return _cached(("pf", k, l, m, order), build)


# ---------------------------------------------------------------------------
# Composite spectra

_MSUB65 = {
    Fraction(0): ((Fraction(0), 1), (Fraction(3), 1)),
    Fraction(2, 5): ((Fraction(2, 5), 1), (Fraction(7, 5), 1)),
    Fraction(2, 3): ((Fraction(2, 3), 1),),
    Fraction(1, 15): ((Fraction(1, 15), 1),),
}

# Pairing (Ising weight, M(5,4) weight) per label; the non-diagonal modular
# invariant couples h1 in {0, 1/2} with the matching h2 so h1 + h2 = label
# mod 1.  Validated by the identity suite at order 60.
_D2A = {
    Fraction(0): ((Fraction(0), Fraction(0)), (Fraction(1, 2), Fraction(3, 2))),
    Fraction(1, 2): ((Fraction(1, 2), Fraction(0)), (Fraction(0), Fraction(3, 2))),
    Fraction(1, 10): ((Fraction(0), Fraction(1, 10)), (Fraction(1, 2), Fraction(3, 5))),
    Fraction(3, 5): ((Fraction(0), Fraction(3, 5)), (Fraction(1, 2), Fraction(1, 10))),
}


def composite_character(name: str, label: Rational, order: Rational) -> QSeries:
    label = Fraction(label)
    order = Fraction(order)
    if name == "MSub65":
        combo = _MSUB65.get(label)
        if combo is None:
            raise InvalidLabel(f"MSub65 has no weight {label}")
        total = None
        for h, coeff in combo:
            term = virasoro_character_by_weight(6, 5, h, order)
            term = term if coeff == 1 else term * coeff
            total = term if total is None else series_add(total, term)
        return total
    if name == "D2A":
        combo = _D2A.get(label)
        if combo is None:
            raise InvalidLabel(f"D2A has no weight {label}")
        total = None
        for h1, h2 in combo:
            term = series_mul(virasoro_character_by_weight(4, 3, h1, order + 1),
                              virasoro_character_by_weight(5, 4, h2, order + 1))
            total = term if total is None else series_add(total, term)
        return total
    raise InvalidLabel(f"unknown composite family {name!r}")


# ---------------------------------------------------------------------------
# Dict-based dispatch for registry records and the CLI

def character_series(spec: dict, order: Rational) -> QSeries:
    """Evaluate a serializable character spec.

    Families: virasoro (p, pp, r, s), virasoro_weight (p, pp, h),
    virasoro_eff (p, pp, j), super (p, pp, sector, r, s),
    super_eff_weight (p, pp, sector, w), super_eff_index (p, pp, sector, j),
    u1 (k, m), free_fermion (sector), parafermion (k, l, m),
    composite (name, label).
    """
    fam = spec["family"]
    if fam == "virasoro":
        return virasoro_character(spec["p"], spec["pp"], spec["r"], spec["s"], order)
    if fam == "virasoro_weight":
        h = spec["h"]
        h = Fraction(h[0], h[1]) if isinstance(h, (list, tuple)) else Fraction(h)
        return virasoro_character_by_weight(spec["p"], spec["pp"], h, order)
    if fam == "virasoro_eff":
        return effective_character(("virasoro", spec["p"], spec["pp"]),
                                   spec["j"], order)
    if fam == "super":
        return super_virasoro_character(spec["p"], spec["pp"], spec["sector"],
                                        spec["r"], spec["s"], order)
    if fam == "super_eff_weight":
        w = spec["w"]
        w = Fraction(w[0], w[1]) if isinstance(w, (list, tuple)) else Fraction(w)
        return super_character_by_effective_weight(
            spec["p"], spec["pp"], spec["sector"], w, order)
    if fam == "super_weight":
        h = spec["h"]
        h = Fraction(h[0], h[1]) if isinstance(h, (list, tuple)) else Fraction(h)
        return super_character_by_weight(spec["p"], spec["pp"], spec["sector"],
                                         h, order)
    if fam == "super_eff_index":
        return super_character_by_sector_index(
            spec["p"], spec["pp"], spec["sector"], spec["j"], order)
    if fam == "u1":
        return u1_character(spec["k"], spec["m"], order)
    if fam == "free_fermion":
        return free_fermion_character(spec["sector"], order)
    if fam == "parafermion":
        return parafermion_character(spec["k"], spec["l"], spec["m"], order)
    if fam == "composite":
        label = spec["label"]
        label = (Fraction(label[0], label[1])
                 if isinstance(label, (list, tuple)) else Fraction(label))
        return composite_character(spec["name"], label, order)
    raise InvalidLabel(f"unknown character family {fam!r}")
