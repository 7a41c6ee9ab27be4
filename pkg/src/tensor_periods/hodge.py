"""Combinatorial Hodge data for pure motives with unit Hodge numbers."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import asdict, dataclass, field
from itertools import accumulate
from typing import Optional


class InvalidHodgeData(ValueError):
    pass


class TotalMismatch(ValueError):
    pass


@dataclass(frozen=True)
class HodgeData:
    """Weight, strictly increasing Hodge types and (odd rank only) the middle sign.

    ``types[i]`` is p with h^{p, weight-p} = 1. The sign is the eigenvalue of
    complex conjugation on the middle type H^{w/2, w/2}.
    """

    weight: int
    types: tuple[int, ...]
    middle_sign: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "types", tuple(self.types))

    @property
    def rank(self) -> int:
        return len(self.types)

    @property
    def epsilon(self) -> int:
        s = betti_split(self)
        return s.d_plus - s.d_minus

    def check(self) -> HodgeData:
        report = validate(self)
        if not report.ok:
            raise InvalidHodgeData(f"{self}: " + ", ".join(report.violations))
        return self

    def to_json(self) -> dict:
        out = {"weight": self.weight, "types": list(self.types)}
        if self.middle_sign is not None:
            out["middle_sign"] = self.middle_sign
        return out

    @classmethod
    def from_json(cls, data: dict | str) -> HodgeData:
        if isinstance(data, str):
            data = json.loads(data)
        try:
            return cls(int(data["weight"]), tuple(int(t) for t in data["types"]), data.get("middle_sign"))
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidHodgeData(f"malformed HodgeData JSON: {data!r}") from exc

    def __str__(self) -> str:
        sign = "" if self.middle_sign is None else f", ε={self.middle_sign:+d}"
        return f"Hodge(w={self.weight}, types={self.types}{sign})"


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations


@dataclass(frozen=True)
class FiltrationProfile:
    jumps: tuple[int, ...]
    mults: tuple[int, ...]

    @property
    def total(self) -> int:
        return sum(self.mults)

    def is_symmetric(self, weight: int) -> bool:
        m = len(self.jumps)
        return all(
            self.jumps[t] + self.jumps[m - 1 - t] == weight and self.mults[t] == self.mults[m - 1 - t]
            for t in range(m)
        )

    def to_json(self) -> dict:
        return {"jumps": list(self.jumps), "mults": list(self.mults)}


@dataclass(frozen=True)
class BettiSplit:
    d_plus: int
    d_minus: int

    @property
    def total(self) -> int:
        return self.d_plus + self.d_minus

    def to_json(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class CriticalityResult:
    critical: bool
    k_plus: Optional[int] = None
    k_minus: Optional[int] = None

    @property
    def k0(self) -> Optional[int]:
        if self.critical and self.k_plus == self.k_minus:
            return self.k_plus
        return None

    def to_json(self) -> dict:
        out = asdict(self)
        if self.k0 is not None:
            out["k0"] = self.k0
        return out


def validate(h: HodgeData) -> ValidationReport:
    bad = []
    p = h.types
    n = len(p)
    if n == 0:
        return ValidationReport(("nonempty",))
    if any(a >= b for a, b in zip(p, p[1:])):
        bad.append("strictly_increasing")
    if any(p[i] + p[n - 1 - i] != h.weight for i in range(n)):
        bad.append("pairing")
    if n % 2:
        if h.weight % 2:
            bad.append("odd_rank_even_weight")
        elif p[n // 2] * 2 != h.weight and "pairing" not in bad:
            bad.append("middle_type")
        if h.middle_sign not in (1, -1):
            bad.append("middle_sign_required")
    elif h.middle_sign is not None:
        bad.append("middle_sign_forbidden")
    return ValidationReport(tuple(bad))


def betti_split(h: HodgeData) -> BettiSplit:
    h.check()
    half = h.rank // 2
    if h.rank % 2 == 0:
        return BettiSplit(half, half)
    if h.middle_sign == 1:
        return BettiSplit(half + 1, half)
    return BettiSplit(half, half + 1)


def filtration_profile(h: HodgeData) -> FiltrationProfile:
    h.check()
    return FiltrationProfile(h.types, (1,) * h.rank)


def tensor_degrees(h: HodgeData, h2: HodgeData) -> list[int]:
    return [p + q for p in h.types for q in h2.types]


def tensor_profile(h: HodgeData, h2: HodgeData) -> FiltrationProfile:
    h.check()
    h2.check()
    counts = Counter(tensor_degrees(h, h2))
    jumps = tuple(sorted(counts))
    return FiltrationProfile(jumps, tuple(counts[r] for r in jumps))


def tensor_betti_split(h: HodgeData, h2: HodgeData) -> BettiSplit:
    s, s2 = betti_split(h), betti_split(h2)
    return BettiSplit(
        s.d_plus * s2.d_plus + s.d_minus * s2.d_minus,
        s.d_plus * s2.d_minus + s.d_minus * s2.d_plus,
    )


def criticality(profile: FiltrationProfile, split: BettiSplit) -> CriticalityResult:
    """Prefix lengths of the multiplicities hitting d^+ and d^- (mults need not be 1)."""
    if profile.total != split.total:
        raise TotalMismatch(f"profile dimension {profile.total} != split dimension {split.total}")
    prefix = list(accumulate(profile.mults))
    index = {s: t + 1 for t, s in enumerate(prefix)}
    kp, km = index.get(split.d_plus), index.get(split.d_minus)
    if kp is None or km is None:
        return CriticalityResult(False)
    return CriticalityResult(True, kp, km)


@dataclass(frozen=True)
class TensorData:
    """Everything the period formulas need about M ⊗ M'."""

    profile: FiltrationProfile
    split: BettiSplit
    crit: CriticalityResult
    weight: int = field(default=0)

    def threshold(self, sign: int) -> int:
        if not self.crit.critical:
            raise ValueError("tensor product is not critical")
        k = self.crit.k_plus if sign > 0 else self.crit.k_minus
        return self.profile.jumps[k - 1]


def tensor_data(h: HodgeData, h2: HodgeData) -> TensorData:
    profile = tensor_profile(h, h2)
    split = tensor_betti_split(h, h2)
    return TensorData(profile, split, criticality(profile, split), h.weight + h2.weight)
