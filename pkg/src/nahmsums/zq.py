"""Two-variable Laurent series helper for affine character slicing.

A ZQSeries is a finite table q_exp -> (z_half_exp -> integer coefficient):
q-exponents in units of 1/q_grain, z-exponents in half-integer units so
both integer and half-integer z-powers fit on one grid.  Only what the
level-k string-function extraction needs is implemented: term insertion
and exact division by a Weyl-type denominator whose lowest q-level is
z^(1/2) - z^(-1/2).
"""

from __future__ import annotations

__all__ = ["ZQSeries", "divide_theta_quotient"]


class ZQSeries:
    """Mutable sparse two-variable series, used only inside cft."""

    __slots__ = ("q_grain", "table")

    def __init__(self, q_grain: int) -> None:
        self.q_grain = q_grain
        self.table: dict[int, dict[int, int]] = {}

    def add_term(self, q_units: int, z_half: int, coeff: int) -> None:
        level = self.table.setdefault(q_units, {})
        new = level.get(z_half, 0) + coeff
        if new:
            level[z_half] = new
        else:
            del level[z_half]
            if not level:
                del self.table[q_units]

    def min_q(self) -> int | None:
        return min(self.table) if self.table else None


def _divide_antisymmetric(level: dict[int, int]) -> dict[int, int]:
    """Exact Laurent division by u - 1/u, with u standing for z^(1/2).

    g * (u - 1/u) = f gives g_(j-1) = f_j + g_(j+1); antisymmetry of f
    under u -> 1/u makes the downward recursion close with no remainder.
    """
    if not level:
        return {}
    out: dict[int, int] = {}
    top = max(level)
    bottom = min(level)
    for j in range(top, bottom - 1, -1):
        val = level.get(j, 0) + out.get(j + 1, 0)
        if val:
            out[j - 1] = val
    if (bottom - 1) in out:
        raise ValueError("division left a remainder; input was not antisymmetric")
    return out


def divide_theta_quotient(numer: ZQSeries, denom: ZQSeries,
                          q_limit_units: int) -> ZQSeries:
    """Quotient Q with Q * denom = numer, valid for q-exponents < q_limit_units.

    denom's lowest q-level must be exactly z^(1/2) - z^(-1/2); every
    remainder level stays antisymmetric, so each step divides exactly.
    """
    out = ZQSeries(numer.q_grain)
    rem = ZQSeries(numer.q_grain)
    rem.table = {q: dict(level) for q, level in numer.table.items()}
    d_min = denom.min_q()
    if d_min is None:
        raise ZeroDivisionError("zero denominator")
    if sorted(denom.table[d_min].items()) != [(-1, -1), (1, 1)]:
        raise ValueError("denominator leading level must be z^(1/2) - z^(-1/2)")
    cap = d_min + q_limit_units  # rem levels at/above cap are never read
    while True:
        r_min = rem.min_q()
        if r_min is None or r_min - d_min >= q_limit_units:
            break
        t_level = _divide_antisymmetric(rem.table[r_min])
        q_off = r_min - d_min
        for zh, c in t_level.items():
            out.add_term(q_off, zh, c)
        for dq, d_level in denom.table.items():
            target_q = q_off + dq
            if target_q >= cap:
                continue
            for dzh, dc in d_level.items():
                for tzh, tc in t_level.items():
                    rem.add_term(target_q, dzh + tzh, -dc * tc)
    return out
