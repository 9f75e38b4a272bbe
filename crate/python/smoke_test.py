"""Smoke test for the Python bindings.

    pip install --no-build-isolation ./crates/thetacert-py
    python python/smoke_test.py
"""

import thetacert_py as tc


def main():
    x = tc.Interval(1.0, 2.0)
    y = tc.Interval.from_decimal("0.1")
    s = x + y
    assert s.lo <= 1.1 <= s.hi and s.lo <= 2.1 <= s.hi
    assert (x * x).contains(2.25)
    assert tc.Interval(2.0).sqrt().contains(2.0 ** 0.5)

    k = tc.kernel_value(3, tc.Interval(0.99))
    assert 0 < k.width() < 1e-2, k

    w = tc.arcsinh_exact_integral(0.1, 0.2, tc.Interval(0.15))
    assert 0.0 < w.lo <= w.hi < 1.0, w

    g3, disk = tc.gershgorin(3)
    assert g3.lo > -0.3125, g3
    t3 = tc.projection_matrix(3)
    assert abs(t3[1][1] + 1.12901165788) < 1e-12

    it, ok = tc.itilde_cell(32, 64, budget=50)
    assert ok and 1.2 < it.lo <= it.hi < 1.7, it

    l0 = tc.vertex_lemma(tc.Interval(0.3583), tc.Interval(0.1534 ** 2), tc.Interval(0.8526))
    assert l0 is not None and l0.hi < 0.4117, l0

    passed, report = tc.certify({"min_itilde": (1.2704, 1.2704)})
    assert "record lambda0" in report
    print("certificate from published constants:", "PASS" if passed else "FAIL (boundary values)")
    print("smoke test ok")


if __name__ == "__main__":
    main()
