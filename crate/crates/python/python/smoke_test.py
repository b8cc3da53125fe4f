"""Smoke test for the zerofact extension module.

Build and install first, e.g. `maturin build --release -o dist && pip install dist/*.whl`
from crates/python, then run `python python/smoke_test.py`.
"""

import math

import zerofact


def main():
    value, err = zerofact.gamma_plus_one(0.5)
    assert abs(value - math.sqrt(math.pi) / 2) < 1e-10, value
    q, _ = zerofact.gamma_plus_one(0.5, method="quadrature")
    assert abs(q - value) < 1e-8
    assert zerofact.factorial(5) == 120

    t_min, v_min = zerofact.gamma_minimum()
    assert abs(t_min - 0.461632) < 1e-4 and abs(v_min - 0.885603) < 1e-6

    a, b = zerofact.bound_pair(1, 0.5)
    assert abs(a - 0.7071067812) < 1e-10 and abs(b - 1.189207115) < 1e-9

    for j in (1, 2, 3):
        report = zerofact.certify(j, 1001)
        assert report.passed(), report
        assert zerofact.integer_chain_holds(10, j)

    est = zerofact.limit_at_zero("gamma")
    assert abs(est.limit - 1.0) < 1e-9 and abs(est.slope + 0.5772156649) < 1e-3

    m, sd = zerofact.moment(0.3, route="monte-carlo", samples=100_000, seed=1)
    exact, _ = zerofact.moment(0.3)
    assert abs(m - exact) < 4 * sd

    flagged = [row for row in zerofact.compare_to_paper() if row[3]]
    assert [row[0] for row in flagged] == [
        "aggregate agree 3a",
        "aggregate agree 4",
        "aggregate increase 0 -> 4",
    ]

    r = zerofact.paired_t_test([3, 4, 2, 5, 3], [4, 5, 3, 5, 4])
    assert r.df == 4 and abs(r.t_stat + 4.0) < 1e-12 and abs(r.p_value - 0.00807) < 1e-5
    try:
        zerofact.paired_t_test([3, 4, 5], [3, 4, 5])
    except ValueError:
        pass
    else:
        raise AssertionError("zero variance accepted")

    assert len(zerofact.synthetic_pairing(42)) == 62
    csv = zerofact.render_figure(7)
    assert csv.splitlines()[1] == "0,strongly_agree,30,46.88"

    print("zerofact smoke test passed")


if __name__ == "__main__":
    main()
