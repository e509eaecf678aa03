import time

from hermharm.calculus import identity_suite
from hermharm.harmonic import box_table, hodge_table
from hermharm.model import build_structure
from hermharm.sampling import random_specs


def test_random_n4_structure_within_budget():
    start = time.perf_counter()
    h = build_structure(random_specs(4, 1, seed=4)[0])
    reports = identity_suite(h, seed=0)
    box_table(h), hodge_table(h)
    elapsed = time.perf_counter() - start
    assert all(r.holds for r in reports)
    assert elapsed < 60, f"{elapsed:.1f}s"
