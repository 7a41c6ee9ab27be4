"""Exit criteria. Each test records one PASS/FAIL line, printed in the terminal summary."""

import json
import random
import subprocess
import sys
import time
from contextlib import contextmanager
from functools import partial

import pytest

from tensor_periods.combinatorics import compute_counts, signed_counts
from tensor_periods.hodge import HodgeData, criticality, tensor_betti_split, tensor_profile
from tensor_periods.invariants import (
    check_equivariance,
    construct_invariant,
    corner_minor,
    invariant_space,
    multiply_types,
    type_of_corner,
    type_of_cp,
    type_of_det,
)
from tensor_periods.oracle import adjudicate_variants, discover_exponents, verify_ratio_relation, verify_theorem

from .conftest import ACCEPTANCE_LINES

SAMPLES = 100


@contextmanager
def criterion(number, title, budget=None):
    start = time.perf_counter()
    ok = False
    try:
        yield
        ok = True
    finally:
        elapsed = time.perf_counter() - start
        within = budget is None or elapsed < budget
        status = "PASS" if ok and within else "FAIL"
        limit = f" (limit {budget:g}s)" if budget else ""
        line = f"[{status}] criterion {number}: {title} in {elapsed:.2f}s{limit}"
        ACCEPTANCE_LINES.append(line)
        print(line)
    assert within, f"criterion {number} took {elapsed:.2f}s, limit {budget}s"


def test_1_combinatorics_catalog():
    with criterion(1, "combinatorics catalog", budget=1):
        p01, p012 = HodgeData(1, (0, 1)), HodgeData(2, (0, 1, 2), 1)
        c = compute_counts(p01, p012, 1)
        assert (c.a, c.a_star) == ((2, 1), (2, 1, 0))
        c = compute_counts(p01, HodgeData(2, (0, 2)), 1)
        assert (c.a, c.a_star) == ((1, 1), (2, 0))
        h, h2 = HodgeData(2, (0, 1, 2), 1), HodgeData(4, (0, 2, 4), 1)
        plus, minus = signed_counts(h, h2)
        assert (plus.a, minus.a) == ((2, 2, 1), (2, 1, 1))
        assert (plus.a_star, minus.a_star) == ((3, 2, 0), (3, 1, 0))
        crit = criticality(tensor_profile(h, h2), tensor_betti_split(h, h2))
        assert (crit.k_plus, crit.k_minus) == (4, 3)


def _crit(h, h2):
    return criticality(tensor_profile(h, h2), tensor_betti_split(h, h2))


def test_2_criticality():
    with criterion(2, "criticality"):
        p01 = HodgeData(1, (0, 1))
        assert not _crit(p01, p01).critical
        r = _crit(p01, HodgeData(2, (0, 1, 2), 1))
        assert r.critical and r.k0 == 2
        r = _crit(HodgeData(2, (0, 1, 2), 1), HodgeData(4, (0, 2, 4), 1))
        assert r.critical and abs(r.k_plus - r.k_minus) == 1


EQUIVARIANCE_SETTINGS = [((1, 1), (1, 1)), ((1, 1, 1), (2, 1)), ((1, 1, 1, 1), (2, 2)), ((2, 1, 1), (2, 2))]


def test_3_equivariance_suite():
    with criterion(3, f"det/corner± equivariance, {SAMPLES} triples per case", budget=10):
        for partition, split in EQUIVARIANCE_SETTINGS:
            checks = [(lambda x: x.det(), type_of_det(partition, split))]
            checks.append((partial(corner_minor, size=split[0], side="left"), type_of_corner(partition, split, 1)))
            checks.append((partial(corner_minor, size=split[1], side="right"), type_of_corner(partition, split, -1)))
            for seed, (f, t) in enumerate(checks):
                report = check_equivariance(f, t, samples=SAMPLES, seed=seed)
                assert report.passed, (t, report.counterexample)


def _cp_types(max_n=6):
    for n in range(2, max_n + 1):
        splits = {((n + 1) // 2, n // 2), (n // 2, (n + 1) // 2)}
        for split in sorted(splits):
            for p in range(1, min(split)):
                yield type_of_cp(n, p, split)


def test_4_uniqueness_existence():
    with criterion(4, "c_p invariants: nullspace dimension 1, equivariant (n ≤ 6)", budget=60):
        types = list(_cp_types())
        assert len(types) == 5
        for k, t in enumerate(types):
            _, basis = invariant_space(t)
            assert len(basis) == 1, t
            report = check_equivariance(construct_invariant(t), t, samples=SAMPLES, seed=k)
            assert report.passed, (t, report.counterexample)


def test_5_lemma_multi():
    with criterion(5, "50 products of invariants pass against multiply_types"):
        rng = random.Random(2024)
        pools = {}
        for partition, split in [((1, 1, 1, 1), (2, 2)), ((1, 1, 1), (2, 1)), ((1,) * 5, (3, 2))]:
            ts = [type_of_det(partition, split), type_of_corner(partition, split, 1), type_of_corner(partition, split, -1)]
            if min(split) >= 2:
                ts.append(type_of_cp(len(partition), 1, split))
            pools[(partition, split)] = [construct_invariant(t) for t in ts]
        keys = sorted(pools)
        for k in range(50):
            pool = pools[keys[k % len(keys)]]
            f, g = rng.choice(pool), rng.choice(pool)
            t = multiply_types(f.type, g.type)
            assert check_equivariance(f * g, t, samples=3, seed=k).passed, t


CATALOG = [
    ("PR1", HodgeData(1, (0, 1)), HodgeData(2, (0, 1, 2), 1)),
    ("PR1", HodgeData(1, (0, 1)), HodgeData(2, (0, 1, 2), -1)),
    ("PR3", HodgeData(1, (0, 1)), HodgeData(2, (0, 2))),
    ("PR1", HodgeData(3, (0, 1, 2, 3)), HodgeData(2, (0, 1, 2), 1)),
    ("PR2", HodgeData(2, (0, 1, 2), 1), HodgeData(4, (0, 2, 4), 1)),
    ("PR2", HodgeData(2, (0, 1, 2), -1), HodgeData(6, (0, 3, 6), 1)),
    ("PR3", HodgeData(3, (0, 1, 2, 3)), HodgeData(6, (0, 2, 4, 6))),
    ("PR1", HodgeData(3, (0, 3)), HodgeData(4, (0, 1, 2, 3, 4), 1)),
    ("PR2", HodgeData(4, (0, 1, 2, 3, 4), -1), HodgeData(10, (0, 5, 10), 1)),
]


def test_6_theorem_oracle():
    with criterion(6, f"theorem oracle on {len(CATALOG)} critical pairs, 5 trials each", budget=120):
        for case, h, h2 in CATALOG:
            assert h.rank * h2.rank <= 16
            adj = adjudicate_variants(h, h2, trials=5, seed=0)
            assert adj.reports["ledger"].case == case
            assert adj.exact in (("ledger",), ("theorem",), ("ledger", "theorem")), (h, h2, adj.exact)
            for variant in adj.exact:
                assert all(v != 0 for v in adj.reports[variant].ratio_value.values())
            assert verify_ratio_relation(h, h2, trials=5, seed=0).constant, (h, h2)


def test_7_exponent_discovery():
    with criterion(7, "exponent discovery on the even ⊗ odd catalog pair"):
        h, h2 = HodgeData(1, (0, 1)), HodgeData(2, (0, 1, 2), 1)
        found = discover_exponents(h, h2, seed=0)
        led = found.ledger_plus
        assert (led.alpha, led.alpha_plus, led.alpha_minus, led.beta) == (1, 1, 0, 0)
        assert found.confirmed
        assert found.matches == ("ledger",)
        assert (led.beta_plus, led.beta_minus) == (1, 1)
        assert verify_theorem(h, h2, trials=5, seed=123, variant=found.matches[0]).constant


def test_8_cli_determinism():
    with criterion(8, "cli verify is byte-identical for a fixed seed"):
        argv = [
            sys.executable, "-m", "tensor_periods.cli", "verify",
            "--motive-a", json.dumps({"weight": 1, "types": [0, 1]}),
            "--motive-b", json.dumps({"weight": 2, "types": [0, 1, 2], "middle_sign": 1}),
            "--seed", "0", "--trials", "5",
        ]
        runs = [subprocess.run(argv, capture_output=True, check=False) for _ in range(2)]
        assert runs[0].returncode == 0
        assert runs[0].stdout == runs[1].stdout
        assert json.loads(runs[0].stdout)["reports"]["ledger"]["constant"] is True
