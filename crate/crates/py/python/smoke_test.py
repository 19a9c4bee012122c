"""Smoke test for the fcgrid extension module.

Build the module first, then run with it on the path:

    cargo build -p fcgrid-py --release
    cp target/release/libfcgrid.so crates/py/python/fcgrid.so
    python3 crates/py/python/smoke_test.py
"""

import bisect
import random

import fcgrid


def naive(grids, key):
    return [max(0, bisect.bisect_right(g, key) - 1) for g in grids]


def expect_value_error(fn, *args):
    try:
        fn(*args)
    except ValueError:
        return
    raise AssertionError(f"{fn.__name__}{args} did not raise ValueError")


def main():
    grids = fcgrid.paper_example()
    cascade = fcgrid.Cascade(grids)
    assert cascade.level_sizes == [9, 8, 4], cascade.level_sizes
    assert cascade.lookup(3.2) == [2, 1, 2]
    assert cascade.lookup(7.0) == [4, 5, 3]
    assert cascade.validate(grids) == []

    stats = cascade.stats()
    assert stats["total_entries"] == 21 and stats["ratio"] == 1.4
    assert stats["within_bound"]

    trace = cascade.lookup_traced(2.0)
    assert trace["indices"] == [1, 0, 1]
    assert trace["binary_searches"] == 1
    assert all(c <= 1 for c in trace["per_level_comparisons"])

    data = cascade.to_bytes()
    assert data[:4] == b"FCG1"
    assert fcgrid.Cascade.from_bytes(data, grids).lookup(4.7) == [3, 3, 3]
    assert fcgrid.Cascade.from_bytes(data).total_entries == 21
    expect_value_error(fcgrid.Cascade.from_bytes, data[:-1])

    text = fcgrid.write_grids(grids)
    assert fcgrid.parse_grids(text) == grids
    expect_value_error(fcgrid.parse_grids, "1\n2\n3 2\n")
    expect_value_error(fcgrid.GridSet, [[2.0, 1.0]])
    expect_value_error(cascade.lookup, float("nan"))

    assert fcgrid.strict_predecessor([1.0, 2.0, 2.0, 3.0], 2.0) == 2
    assert fcgrid.strict_predecessor([1.0], 0.5) == -1

    rng = random.Random(3)
    for seed in range(5):
        g = fcgrid.generate(k=6, size_min=1, size_max=200, seed=seed, duplicate_fraction=0.05)
        c = fcgrid.Cascade(g)
        plain = g.grids()
        lo, hi = plain[0][0], plain[0][-1]
        for _ in range(500):
            key = rng.uniform(lo / 2, hi * 2)
            want = naive(plain, key)
            assert c.lookup(key) == want == fcgrid.naive_lookup(g, key), key

    h = fcgrid.NuclideTable([1.0, 2.0, 4.0], [10.0, 20.0, 40.0])
    o = fcgrid.NuclideTable([1.5, 3.0], [1.0, 2.0])
    xs_grids = fcgrid.tables_gridset([h, o])
    xs = fcgrid.Cascade(xs_grids)
    assert h.interp(1, 3.0) == 30.0
    micro = fcgrid.eval_micro_all([h, o], xs, 3.0)
    assert micro == [30.0, 2.0], micro
    macro = fcgrid.eval_macro([(0, 2.0), (1, 0.5)], [h, o], xs, 3.0)
    assert macro == 61.0, macro

    print("fcgrid smoke test: OK")


if __name__ == "__main__":
    main()
