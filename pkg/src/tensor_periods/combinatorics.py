"""Counting data a_i, a*_j and the period monomials for c^±(M ⊗ M').

Motive tags always refer to input order: ``"M"`` is the first argument and
``"M2"`` the second, even when the even-rank factor comes second.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Literal, Mapping, Optional

from .hodge import HodgeData, betti_split, tensor_data

Variant = Literal["ledger", "theorem"]
VARIANTS: tuple[Variant, ...] = ("ledger", "theorem")

_KIND_ORDER = {"delta": 0, "c+": 1, "c-": 2, "c_p": 3}
_MOTIVE_ORDER = {"M": 0, "M2": 1}


class NotCritical(ValueError):
    pass


class UnsupportedRank(ValueError):
    pass


@dataclass(frozen=True)
class ACounts:
    a: tuple[int, ...]
    a_star: tuple[int, ...]
    threshold: int

    def to_json(self) -> dict:
        return {"a": list(self.a), "a_star": list(self.a_star), "threshold": self.threshold}


@dataclass(frozen=True)
class PeriodSymbol:
    kind: str
    motive: str
    p: Optional[int] = None

    def __post_init__(self):
        if self.kind not in _KIND_ORDER or self.motive not in _MOTIVE_ORDER:
            raise ValueError(f"bad period symbol {self.kind!r}/{self.motive!r}")
        if (self.kind == "c_p") != (self.p is not None):
            raise ValueError("p is required exactly for c_p symbols")

    def sort_key(self):
        return (_KIND_ORDER[self.kind], _MOTIVE_ORDER[self.motive], self.p or 0)

    def __str__(self) -> str:
        name = {"delta": "δ", "c+": "c+", "c-": "c-"}.get(self.kind) or f"c_{self.p}"
        return f"{name}({self.motive})"


def delta(motive: str) -> PeriodSymbol:
    return PeriodSymbol("delta", motive)


def c_sign(sign: int, motive: str) -> PeriodSymbol:
    return PeriodSymbol("c+" if sign > 0 else "c-", motive)


def c_p(p: int, motive: str) -> PeriodSymbol:
    return PeriodSymbol("c_p", motive, p)


@dataclass(frozen=True)
class PeriodExpression:
    """Formal monomial in period symbols; zero exponents are never stored."""

    factors: tuple[tuple[PeriodSymbol, int], ...] = ()

    @classmethod
    def from_map(cls, exps: Mapping[PeriodSymbol, int]) -> PeriodExpression:
        items = sorted(((s, int(e)) for s, e in exps.items() if e), key=lambda se: se[0].sort_key())
        return cls(tuple(items))

    def as_map(self) -> dict[PeriodSymbol, int]:
        return dict(self.factors)

    def exponent(self, sym: PeriodSymbol) -> int:
        return self.as_map().get(sym, 0)

    def __mul__(self, other: PeriodExpression) -> PeriodExpression:
        out = self.as_map()
        for s, e in other.factors:
            out[s] = out.get(s, 0) + e
        return PeriodExpression.from_map(out)

    def __pow__(self, k: int) -> PeriodExpression:
        return PeriodExpression.from_map({s: e * k for s, e in self.factors})

    def __truediv__(self, other: PeriodExpression) -> PeriodExpression:
        return self * other ** -1

    def evaluate(self, value_of: Callable[[PeriodSymbol], Fraction]) -> Fraction:
        out = Fraction(1)
        for s, e in self.factors:
            out *= Fraction(value_of(s)) ** e
        return out

    def __str__(self) -> str:
        if not self.factors:
            return "1"
        return " · ".join(f"{s}^{e}" for s, e in self.factors)

    def to_json(self) -> dict:
        rows = []
        for s, e in self.factors:
            row = {"symbol": s.kind, "motive": s.motive}
            if s.p is not None:
                row["p"] = s.p
            row["exp"] = e
            rows.append(row)
        return {"factors": rows}

    @classmethod
    def from_json(cls, data: dict | str) -> PeriodExpression:
        if isinstance(data, str):
            data = json.loads(data)
        return cls.from_map(
            {PeriodSymbol(r["symbol"], r["motive"], r.get("p")): r["exp"] for r in data["factors"]}
        )


@dataclass(frozen=True)
class ExponentLedger:
    alpha: int
    alpha_plus: int
    alpha_minus: int
    beta: int
    beta_plus: int
    beta_minus: int
    alpha_p: dict = field(default_factory=dict)
    beta_p: dict = field(default_factory=dict)

    @classmethod
    def from_expression(cls, expr: PeriodExpression, first: str = "M", second: str = "M2") -> ExponentLedger:
        m = expr.as_map()
        get = lambda s: m.get(s, 0)  # noqa: E731
        cp = lambda tag: {s.p: e for s, e in expr.factors if s.kind == "c_p" and s.motive == tag}  # noqa: E731
        return cls(
            get(delta(first)), get(c_sign(1, first)), get(c_sign(-1, first)),
            get(delta(second)), get(c_sign(1, second)), get(c_sign(-1, second)),
            cp(first), cp(second),
        )

    def to_expression(self, first: str = "M", second: str = "M2") -> PeriodExpression:
        exps = {
            delta(first): self.alpha, c_sign(1, first): self.alpha_plus, c_sign(-1, first): self.alpha_minus,
            delta(second): self.beta, c_sign(1, second): self.beta_plus, c_sign(-1, second): self.beta_minus,
        }
        exps.update({c_p(p, first): e for p, e in self.alpha_p.items()})
        exps.update({c_p(p, second): e for p, e in self.beta_p.items()})
        return PeriodExpression.from_map(exps)

    def to_json(self) -> dict:
        return {
            "alpha": self.alpha, "alpha_plus": self.alpha_plus, "alpha_minus": self.alpha_minus,
            "beta": self.beta, "beta_plus": self.beta_plus, "beta_minus": self.beta_minus,
            "alpha_p": {str(p): e for p, e in sorted(self.alpha_p.items())},
            "beta_p": {str(p): e for p, e in sorted(self.beta_p.items())},
        }


def compute_counts(h: HodgeData, h2: HodgeData, threshold: int) -> ACounts:
    a = tuple(sum(1 for q in h2.types if p + q <= threshold) for p in h.types)
    a_star = tuple(sum(1 for p in h.types if p + q <= threshold) for q in h2.types)
    return ACounts(a, a_star, threshold)


def _critical_tensor(h: HodgeData, h2: HodgeData):
    td = tensor_data(h, h2)
    if not td.crit.critical:
        raise NotCritical(f"{h} ⊗ {h2} is not critical")
    return td


def signed_counts(h: HodgeData, h2: HodgeData) -> tuple[ACounts, ACounts]:
    if (h.rank * h2.rank) % 2 == 0:
        raise ValueError("signed counts need n·n' odd")
    td = _critical_tensor(h, h2)
    return compute_counts(h, h2, td.threshold(1)), compute_counts(h, h2, td.threshold(-1))


def classify(h: HodgeData, h2: HodgeData) -> str:
    parities = (h.rank % 2, h2.rank % 2)
    if parities == (0, 0):
        return "PR3"
    if parities == (1, 1):
        return "PR2"
    return "PR1"


def exponent_ledger(h: HodgeData, h2: HodgeData) -> ExponentLedger:
    """Exponents of c^+(M ⊗ M') for M = h of even rank and M' = h2 of odd rank."""
    n, n2 = h.rank, h2.rank
    if n % 2 or not n2 % 2:
        raise ValueError("exponent ledger needs rank(M) even and rank(M') odd")
    td = _critical_tensor(h, h2)
    counts = compute_counts(h, h2, td.threshold(1))
    a, a_star = counts.a, counts.a_star
    k, k2 = n // 2, n2 // 2
    eps2 = h2.epsilon
    # a_k - n'/2 ± eps'/2, kept integral: n' and eps' are both odd
    return ExponentLedger(
        alpha=a[n - 1],
        alpha_plus=a[k - 1] - (n2 - eps2) // 2,
        alpha_minus=a[k - 1] - (n2 + eps2) // 2,
        beta=a_star[n2 - 1],
        beta_plus=a_star[k2 - 1] - k if k2 else 0,
        beta_minus=a_star[k2 - 1] - k if k2 else 0,
        alpha_p={p: a[p - 1] - a[p] for p in range(1, k)},
        beta_p={p: a_star[p - 1] - a_star[p] for p in range(1, k2)},
    )


def _common_factor(counts: ACounts, n: int, n2: int, tag: str, tag2: str, cc: int, cc2: int) -> PeriodExpression:
    """δ(M)^{a_n} δ(M')^{a*_n'} [c+c-(M)]^cc [c+c-(M')]^cc2 ∏ c_p(M)^{a_p-a_{p+1}} ∏ c_p(M')^{...}."""
    a, a_star = counts.a, counts.a_star
    k, k2 = n // 2, n2 // 2
    exps = {
        delta(tag): a[n - 1],
        delta(tag2): a_star[n2 - 1],
        c_sign(1, tag): cc,
        c_sign(-1, tag): cc,
        c_sign(1, tag2): cc2,
        c_sign(-1, tag2): cc2,
    }
    exps.update({c_p(p, tag): a[p - 1] - a[p] for p in range(1, k)})
    exps.update({c_p(p, tag2): a_star[p - 1] - a_star[p] for p in range(1, k2)})
    return PeriodExpression.from_map(exps)


def _swap_plus_minus(expr: PeriodExpression, tag: str) -> PeriodExpression:
    m = expr.as_map()
    plus, minus = m.pop(c_sign(1, tag), 0), m.pop(c_sign(-1, tag), 0)
    m[c_sign(1, tag)], m[c_sign(-1, tag)] = minus, plus
    return PeriodExpression.from_map(m)


def period_formula(
    h: HodgeData, h2: HodgeData, variant: Variant = "ledger"
) -> tuple[PeriodExpression, PeriodExpression]:
    """Monomials for (c^+(M ⊗ M'), c^-(M ⊗ M')).

    ``variant`` only matters for even ⊗ odd: "theorem" uses the closed form
    with [c+c-(M')]^{a*_k' - k - 1}, "ledger" the exponent list with
    [c+c-(M')]^{a*_k' - k}. For the other parities both variants coincide.
    """
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    case = classify(h, h2)
    td = _critical_tensor(h, h2)

    if case == "PR3":
        n, n2 = h.rank, h2.rank
        counts = compute_counts(h, h2, td.threshold(1))
        k, k2 = n // 2, n2 // 2
        expr = _common_factor(counts, n, n2, "M", "M2", counts.a[k - 1] - k2, counts.a_star[k2 - 1] - k)
        return expr, expr

    if case == "PR2":
        n, n2 = h.rank, h2.rank
        k, k2 = n // 2, n2 // 2
        if k == 0 or k2 == 0:
            raise UnsupportedRank("odd ⊗ odd formula needs both ranks ≥ 3")
        eps, eps2 = h.epsilon, h2.epsilon
        out = []
        for sign, counts in zip((1, -1), signed_counts(h, h2)):
            t = _common_factor(
                counts, n, n2, "M", "M2", counts.a[k - 1] - k2 - 1, counts.a_star[k2 - 1] - k - 1
            )
            extra = PeriodExpression.from_map({c_sign(sign * eps2, "M"): 1, c_sign(sign * eps, "M2"): 1})
            out.append(t * extra)
        return out[0], out[1]

    # PR1: relabel so the even-rank factor plays M
    swapped = h.rank % 2 == 1
    even, odd = (h2, h) if swapped else (h, h2)
    tag, tag2 = ("M2", "M") if swapped else ("M", "M2")
    n, n2 = even.rank, odd.rank
    k, k2 = n // 2, n2 // 2
    if k2 == 0:
        raise UnsupportedRank("even ⊗ odd formula needs the odd rank ≥ 3")
    eps2 = odd.epsilon
    if variant == "theorem":
        counts = compute_counts(even, odd, td.threshold(1))
        t = _common_factor(counts, n, n2, tag, tag2, counts.a[k - 1] - k2 - 1, counts.a_star[k2 - 1] - k - 1)
        c_plus = t * PeriodExpression.from_map({c_sign(eps2, tag): 1})
        c_minus = t * PeriodExpression.from_map({c_sign(-eps2, tag): 1})
        return c_plus, c_minus
    c_plus = exponent_ledger(even, odd).to_expression(tag, tag2)
    return c_plus, _swap_plus_minus(c_plus, tag)


def ratio_relation(h: HodgeData, h2: HodgeData) -> PeriodExpression:
    """Predicted c^+(M ⊗ M') / c^-(M ⊗ M') as a monomial."""
    _critical_tensor(h, h2)
    ratio = lambda tag, e: PeriodExpression.from_map({c_sign(1, tag): e, c_sign(-1, tag): -e})  # noqa: E731
    case = classify(h, h2)
    if case == "PR3":
        return PeriodExpression()
    if case == "PR2":
        return ratio("M", h2.epsilon) * ratio("M2", h.epsilon)
    if h.rank % 2 == 0:
        return ratio("M", h2.epsilon)
    return ratio("M2", h.epsilon)


def analysis(h: HodgeData, h2: HodgeData) -> dict:
    """JSON-ready summary of the tensor combinatorics."""
    td = tensor_data(h, h2)
    out = {
        "case": classify(h, h2),
        "split_a": betti_split(h).to_json(),
        "split_b": betti_split(h2).to_json(),
        "tensor_split": td.split.to_json(),
        "profile": td.profile.to_json(),
        "criticality": td.crit.to_json(),
        "critical": td.crit.critical,
    }
    if td.crit.critical:
        if td.crit.k0 is not None:
            out["k0"] = td.crit.k0
            counts = compute_counts(h, h2, td.threshold(1))
            out.update(counts.to_json())
        else:
            out["k_plus"], out["k_minus"] = td.crit.k_plus, td.crit.k_minus
            plus, minus = compute_counts(h, h2, td.threshold(1)), compute_counts(h, h2, td.threshold(-1))
            out["plus"], out["minus"] = plus.to_json(), minus.to_json()
    return out
