from collections import Counter
from itertools import product

import pytest
from hypothesis import given, settings

from tensor_periods.hodge import (
    BettiSplit,
    FiltrationProfile,
    HodgeData,
    InvalidHodgeData,
    TotalMismatch,
    betti_split,
    criticality,
    filtration_profile,
    tensor_betti_split,
    tensor_profile,
    validate,
)

from .conftest import hodge_data


@pytest.mark.parametrize(
    "h",
    [HodgeData(1, (0, 1)), HodgeData(2, (0, 1, 2), 1), HodgeData(4, (2,), -1), HodgeData(7, (0, 3, 4, 7))],
)
def test_validate_ok(h):
    assert validate(h).ok


@pytest.mark.parametrize(
    "h, violation",
    [
        (HodgeData(2, (0, 3)), "pairing"),
        (HodgeData(2, (1, 1)), "strictly_increasing"),
        (HodgeData(2, (0, 1, 2)), "middle_sign_required"),
        (HodgeData(1, (0, 1), 1), "middle_sign_forbidden"),
        (HodgeData(3, (1,), 1), "odd_rank_even_weight"),
        (HodgeData(0, ()), "nonempty"),
    ],
)
def test_validate_reports_violation(h, violation):
    report = validate(h)
    assert not report.ok
    assert violation in report.violations


def test_operations_reject_invalid():
    with pytest.raises(InvalidHodgeData):
        betti_split(HodgeData(2, (0, 3)))


@pytest.mark.parametrize(
    "h, split",
    [
        (HodgeData(1, (0, 1)), (1, 1)),
        (HodgeData(2, (0, 1, 2), 1), (2, 1)),
        (HodgeData(4, (0, 2, 4), -1), (1, 2)),
        (HodgeData(6, (3,), 1), (1, 0)),
    ],
)
def test_betti_split(h, split):
    assert betti_split(h) == BettiSplit(*split)


def test_filtration_profile():
    assert filtration_profile(HodgeData(1, (0, 1))) == FiltrationProfile((0, 1), (1, 1))
    assert filtration_profile(HodgeData(4, (0, 2, 4), 1)) == FiltrationProfile((0, 2, 4), (1, 1, 1))


def _enumerated_profile(h, h2):
    # oracle: count every pair sum directly
    counts = Counter(p + q for p, q in product(h.types, h2.types))
    return tuple(sorted(counts)), tuple(counts[k] for k in sorted(counts))


@pytest.mark.parametrize(
    "h, h2, jumps, mults",
    [
        (HodgeData(1, (0, 1)), HodgeData(2, (0, 1, 2), 1), (0, 1, 2, 3), (1, 2, 2, 1)),
        (HodgeData(1, (0, 1)), HodgeData(1, (0, 1)), (0, 1, 2), (1, 2, 1)),
        (HodgeData(1, (0, 1)), HodgeData(10, (5,), 1), (5, 6), (1, 1)),
    ],
)
def test_tensor_profile(h, h2, jumps, mults):
    assert _enumerated_profile(h, h2) == (jumps, mults)
    assert tensor_profile(h, h2) == FiltrationProfile(jumps, mults)


@pytest.mark.parametrize(
    "h, h2, split",
    [
        (HodgeData(1, (0, 1)), HodgeData(2, (0, 1, 2), 1), (3, 3)),
        (HodgeData(2, (0, 1, 2), 1), HodgeData(4, (0, 2, 4), 1), (5, 4)),
        (HodgeData(1, (0, 1)), HodgeData(3, (0, 3)), (2, 2)),
    ],
)
def test_tensor_betti_split(h, h2, split):
    assert tensor_betti_split(h, h2) == BettiSplit(*split)


def test_criticality_examples():
    r = criticality(FiltrationProfile((0, 1, 2, 3), (1, 2, 2, 1)), BettiSplit(3, 3))
    assert r.critical and r.k0 == 2
    assert not criticality(FiltrationProfile((0, 1, 2), (1, 2, 1)), BettiSplit(2, 2)).critical
    h, h2 = HodgeData(2, (0, 1, 2), 1), HodgeData(4, (0, 2, 4), 1)
    prof = tensor_profile(h, h2)
    assert prof.mults == (1, 1, 2, 1, 2, 1, 1)
    r = criticality(prof, tensor_betti_split(h, h2))
    assert (r.critical, r.k_plus, r.k_minus) == (True, 4, 3)


def test_criticality_total_mismatch():
    with pytest.raises(TotalMismatch):
        criticality(FiltrationProfile((0, 1), (1, 1)), BettiSplit(2, 1))


def test_json_round_trip():
    for h in (HodgeData(1, (0, 1)), HodgeData(2, (0, 1, 2), -1)):
        assert HodgeData.from_json(h.to_json()) == h
    with pytest.raises(InvalidHodgeData):
        HodgeData.from_json({"types": [0, 1]})


@settings(max_examples=150, deadline=None)
@given(hodge_data(), hodge_data())
def test_tensor_properties(h, h2):
    assert validate(h).ok and validate(h2).ok
    prof = tensor_profile(h, h2)
    assert prof == tensor_profile(h2, h)
    assert prof.is_symmetric(h.weight + h2.weight)
    assert prof.total == h.rank * h2.rank
    split = tensor_betti_split(h, h2)
    assert split.total == h.rank * h2.rank
    assert split.d_plus - split.d_minus == h.epsilon * h2.epsilon
    r = criticality(prof, split)
    if r.critical and split.d_plus != split.d_minus:
        assert abs(r.k_plus - r.k_minus) == 1


@settings(max_examples=100, deadline=None)
@given(hodge_data())
def test_unit_mults_even_split_always_critical(h):
    split = betti_split(h)
    if split.d_plus == split.d_minus:
        r = criticality(filtration_profile(h), split)
        assert r.critical and r.k0 == split.d_plus
