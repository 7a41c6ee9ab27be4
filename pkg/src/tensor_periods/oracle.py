"""Randomized exact verification of the tensor period monomials.

Period matrices are replaced by random integer matrices X, Y. The tensor
period matrix is X ⊗ Y with rows ordered by filtration degree and columns
by Betti sign, and its corner minors are compared with the predicted
monomials evaluated on the invariants of X and Y. An identity that holds
modulo Q^× shows up as one fixed nonzero rational ratio across trials.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .combinatorics import (
    VARIANTS,
    ExponentLedger,
    NotCritical,
    PeriodExpression,
    PeriodSymbol,
    UnsupportedRank,
    c_p,
    c_sign,
    classify,
    delta,
    period_formula,
    ratio_relation,
)
from .hodge import BettiSplit, FiltrationProfile, HodgeData, betti_split, filtration_profile, tensor_data
from .invariants import construct_invariant, corner_minor, evaluate, type_of_cp
from .linalg import RationalMatrix, frac_str, kron

DEFAULT_BOUND = 10
DEFAULT_TRIALS = 5
RETRY_CAP = 100


class ZeroInvariant(ArithmeticError):
    pass


class RetryCapExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class PeriodRealization:
    """Random stand-in for a period matrix.

    Rows follow the de Rham basis in ascending filtration degree (suffixes
    span the deeper filtration steps); columns follow the Betti basis with
    the + eigenvectors first.
    """

    matrix: RationalMatrix
    profile: FiltrationProfile
    split: BettiSplit
    row_degrees: tuple[int, ...]
    hodge: Optional[HodgeData] = None

    @property
    def rank(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class InvariantValues:
    delta: Fraction
    c_plus: Fraction
    c_minus: Fraction
    c_p: dict = field(default_factory=dict)

    def value(self, kind: str, p: Optional[int] = None) -> Fraction:
        if kind == "delta":
            return self.delta
        if kind == "c+":
            return self.c_plus
        if kind == "c-":
            return self.c_minus
        return self.c_p[p]


@dataclass(frozen=True)
class VerificationReport:
    case: str
    check: str
    variant: Optional[str]
    ratios: dict
    constant: bool
    ratio_value: dict
    trials: int
    seed: int
    bound: int

    def to_json(self) -> dict:
        return {
            "case": self.case,
            "check": self.check,
            "variant": self.variant,
            "constant": self.constant,
            "ratio_value": {k: (frac_str(v) if v is not None else None) for k, v in self.ratio_value.items()},
            "ratios": {k: [frac_str(r) for r in rs] for k, rs in self.ratios.items()},
            "trials": self.trials,
            "seed": self.seed,
            "bound": self.bound,
        }


def _rng(key: Sequence[int]) -> np.random.Generator:
    # counter-based: every (seed, trial, factor, attempt) gets its own stream
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(k) for k in key])))


def _cp_range(split: BettiSplit) -> range:
    return range(1, min(split.d_plus, split.d_minus))


def invariant_values(r: PeriodRealization, strict: bool = True) -> InvariantValues:
    """δ = det, c+ = upper-left d+ minor, c- = upper-right d- minor, c_p via the constructed invariants."""
    x, split = r.matrix, r.split
    vals = InvariantValues(
        x.det(),
        corner_minor(x, split.d_plus, "left"),
        corner_minor(x, split.d_minus, "right"),
        {
            p: evaluate(construct_invariant(type_of_cp(r.rank, p, (split.d_plus, split.d_minus))), x)
            for p in _cp_range(split)
        },
    )
    if strict and (not vals.delta or not vals.c_plus or not vals.c_minus or not all(vals.c_p.values())):
        raise ZeroInvariant("a period invariant vanishes on this realization")
    return vals


def realization_from_matrix(h: HodgeData, matrix: RationalMatrix) -> PeriodRealization:
    if matrix.shape != (h.rank, h.rank):
        raise ValueError(f"{h} needs a {h.rank}x{h.rank} matrix")
    return PeriodRealization(matrix, filtration_profile(h), betti_split(h), h.types, h)


def random_realization(
    h: HodgeData, seed: int | Sequence[int] = 0, bound: int = DEFAULT_BOUND
) -> PeriodRealization:
    """Random integer matrix, resampled until det and every invariant are nonzero."""
    key = [seed] if isinstance(seed, int) else list(seed)
    n = h.rank
    for attempt in range(RETRY_CAP):
        entries = _rng([*key, attempt]).integers(-bound, bound + 1, size=(n, n))
        r = realization_from_matrix(h, RationalMatrix.from_rows(entries.tolist()))
        try:
            invariant_values(r)
        except ZeroInvariant:
            continue
        return r
    raise RetryCapExceeded(f"no admissible realization of {h} in {RETRY_CAP} attempts")


def _column_signs(split: BettiSplit) -> list[int]:
    return [1] * split.d_plus + [-1] * split.d_minus


def tensor_realization(r: PeriodRealization, r2: PeriodRealization) -> PeriodRealization:
    """Permuted Kronecker product X ⊗ Y with tensor filtration rows and sign-ordered columns."""
    n, n2 = r.rank, r2.rank
    z = kron(r.matrix, r2.matrix)
    rows = sorted(((r.row_degrees[i] + r2.row_degrees[i2], i, i2) for i in range(n) for i2 in range(n2)))
    row_order = [i * n2 + i2 for _, i, i2 in rows]
    s, s2 = _column_signs(r.split), _column_signs(r2.split)
    block_rank = {(1, 1): 0, (-1, -1): 1, (1, -1): 2, (-1, 1): 3}
    cols = sorted((block_rank[s[j], s2[j2]], j, j2) for j in range(n) for j2 in range(n2))
    col_order = [j * n2 + j2 for _, j, j2 in cols]
    split = BettiSplit(
        r.split.d_plus * r2.split.d_plus + r.split.d_minus * r2.split.d_minus,
        r.split.d_plus * r2.split.d_minus + r.split.d_minus * r2.split.d_plus,
    )
    degrees = tuple(deg for deg, _, _ in rows)
    jumps = tuple(sorted(set(degrees)))
    profile = FiltrationProfile(jumps, tuple(degrees.count(j) for j in jumps))
    return PeriodRealization(z.permuted(row_order, col_order), profile, split, degrees)


def tensor_periods(z: PeriodRealization) -> tuple[Fraction, Fraction]:
    return corner_minor(z.matrix, z.split.d_plus, "left"), corner_minor(z.matrix, z.split.d_minus, "right")


def _symbol_value(values: dict[str, InvariantValues]):
    def value_of(sym: PeriodSymbol) -> Fraction:
        return values[sym.motive].value(sym.kind, sym.p)

    return value_of


@dataclass(frozen=True)
class _Trial:
    values: dict
    c_plus: Fraction
    c_minus: Fraction


def _draw_trial(h: HodgeData, h2: HodgeData, seed: int, t: int, bound: int) -> _Trial:
    x = random_realization(h, (seed, t, 0), bound)
    y = random_realization(h2, (seed, t, 1), bound)
    cp, cm = tensor_periods(tensor_realization(x, y))
    return _Trial({"M": invariant_values(x), "M2": invariant_values(y)}, cp, cm)


def _require_critical(h: HodgeData, h2: HodgeData) -> None:
    if not tensor_data(h, h2).crit.critical:
        raise NotCritical(f"{h} ⊗ {h2} is not critical")


def _constant(ratios: Sequence[Fraction]) -> Optional[Fraction]:
    if ratios and ratios[0] != 0 and all(r == ratios[0] for r in ratios):
        return ratios[0]
    return None


def _report(case, check, variant, ratios, trials, seed, bound) -> VerificationReport:
    values = {k: _constant(v) for k, v in ratios.items()}
    constant = all(v is not None for v in values.values())
    return VerificationReport(
        case, check, variant, {k: tuple(v) for k, v in ratios.items()}, constant, values, trials, seed, bound
    )


def verify_theorem(
    h: HodgeData,
    h2: HodgeData,
    trials: int = DEFAULT_TRIALS,
    seed: int = 0,
    variant: str = "ledger",
    bound: int = DEFAULT_BOUND,
) -> VerificationReport:
    """Check c±(X ⊗ Y) / formula±(X, Y) is one nonzero rational across trials."""
    _require_critical(h, h2)
    f_plus, f_minus = period_formula(h, h2, variant)
    ratios = {"c+": [], "c-": []}
    for t in range(trials):
        trial = _draw_trial(h, h2, seed, t, bound)
        value_of = _symbol_value(trial.values)
        ratios["c+"].append(trial.c_plus / f_plus.evaluate(value_of))
        ratios["c-"].append(trial.c_minus / f_minus.evaluate(value_of))
    return _report(classify(h, h2), "theorem", variant, ratios, trials, seed, bound)


def verify_ratio_relation(
    h: HodgeData, h2: HodgeData, trials: int = DEFAULT_TRIALS, seed: int = 0, bound: int = DEFAULT_BOUND
) -> VerificationReport:
    """Check (c+(Z)/c-(Z)) / predicted ratio is constant; independent of the exponent variant."""
    _require_critical(h, h2)
    predicted = ratio_relation(h, h2)
    ratios = {"c+/c-": []}
    for t in range(trials):
        trial = _draw_trial(h, h2, seed, t, bound)
        if not trial.c_minus:
            ratios["c+/c-"].append(Fraction(0))
            continue
        ratios["c+/c-"].append(trial.c_plus / trial.c_minus / predicted.evaluate(_symbol_value(trial.values)))
    return _report(classify(h, h2), "ratio", None, ratios, trials, seed, bound)


@dataclass(frozen=True)
class Adjudication:
    reports: dict
    exact: tuple[str, ...]

    def to_json(self) -> dict:
        return {"exact_variants": list(self.exact), "reports": {v: r.to_json() for v, r in self.reports.items()}}


def adjudicate_variants(
    h: HodgeData, h2: HodgeData, trials: int = DEFAULT_TRIALS, seed: int = 0, bound: int = DEFAULT_BOUND
) -> Adjudication:
    reports = {v: verify_theorem(h, h2, trials, seed, v, bound) for v in VARIANTS}
    return Adjudication(reports, tuple(v for v, r in reports.items() if r.constant))


def candidate_symbols(h: HodgeData, h2: HodgeData) -> list[PeriodSymbol]:
    """δ, c±, c_p of both factors; rank-1 factors contribute δ only (c^ε = δ, c^-ε = 1)."""
    out = []
    for tag, hd in (("M", h), ("M2", h2)):
        out.append(delta(tag))
        if hd.rank > 1:
            out += [c_sign(1, tag), c_sign(-1, tag)]
        out += [c_p(p, tag) for p in _cp_range(betti_split(hd))]
    return out


@dataclass(frozen=True)
class Discovery:
    c_plus: PeriodExpression
    c_minus: PeriodExpression
    ledger_plus: ExponentLedger
    ledger_minus: ExponentLedger
    confirmed: bool
    max_residual: float
    matches: tuple[str, ...]
    constants: dict
    trials: int
    seed: int

    def to_json(self) -> dict:
        return {
            "c_plus": self.c_plus.to_json(),
            "c_minus": self.c_minus.to_json(),
            "c_plus_str": str(self.c_plus),
            "c_minus_str": str(self.c_minus),
            "ledger_plus": self.ledger_plus.to_json(),
            "ledger_minus": self.ledger_minus.to_json(),
            "confirmed": self.confirmed,
            "max_residual": round(self.max_residual, 6),
            "matches_variants": list(self.matches),
            "constants": {k: (frac_str(v) if v is not None else None) for k, v in self.constants.items()},
            "trials": self.trials,
            "seed": self.seed,
        }


def _log_abs(x: Fraction) -> float:
    return math.log(abs(x.numerator)) - math.log(x.denominator)


def discover_exponents(
    h: HodgeData, h2: HodgeData, trials: Optional[int] = None, seed: int = 0, bound: int = DEFAULT_BOUND
) -> Discovery:
    """Fit integer exponents of c±(Z) in log coordinates, then confirm them exactly."""
    _require_critical(h, h2)
    symbols = candidate_symbols(h, h2)
    trials = trials or max(24, 4 * (len(symbols) + 1))
    draws = [_draw_trial(h, h2, seed, t, bound) for t in range(trials)]
    design = np.array(
        [[1.0] + [_log_abs(_symbol_value(d.values)(s)) for s in symbols] for d in draws]
    )

    exprs, residual, constants = {}, 0.0, {}
    for key in ("c+", "c-"):
        observed = [d.c_plus if key == "c+" else d.c_minus for d in draws]
        if not all(observed):
            exprs[key], constants[key], residual = PeriodExpression(), None, math.inf
            continue
        sol, *_ = np.linalg.lstsq(design, np.array([_log_abs(v) for v in observed]), rcond=None)
        exps = np.rint(sol[1:]).astype(int)
        residual = max(residual, float(np.max(np.abs(sol[1:] - exps))))
        expr = PeriodExpression.from_map(dict(zip(symbols, exps.tolist())))
        exprs[key] = expr
        constants[key] = _constant([v / expr.evaluate(_symbol_value(d.values)) for v, d in zip(observed, draws)])

    confirmed = all(v is not None for v in constants.values())
    matches = []
    try:
        for v in VARIANTS:
            if period_formula(h, h2, v) == (exprs["c+"], exprs["c-"]):
                matches.append(v)
    except UnsupportedRank:
        pass
    return Discovery(
        exprs["c+"],
        exprs["c-"],
        ExponentLedger.from_expression(exprs["c+"]),
        ExponentLedger.from_expression(exprs["c-"]),
        confirmed,
        residual,
        tuple(matches),
        constants,
        trials,
        seed,
    )
