"""Smoke test for the hermcodes Python module.

Build and install first:  pip install --no-build-isolation -e crates/py
"""

import hermcodes


def main():
    csv = hermcodes.table_csv([5, 7])
    assert csv.splitlines() == [
        "q,cond_on_m,values",
        '5,6 <= m <= 14,"7, 8"',
        '7,14 <= m <= 29,"18"',
    ], csv
    assert hermcodes.improvement_table(7) == [18]

    r = hermcodes.bounds_report(7, 18)
    assert (r["n"], r["k"]) == (343, 309)
    assert r["main"]["guaranteed"] == 20
    assert r["one_point_true"]["d_true"] == 14

    gs = hermcodes.gap_set(5)
    curve = hermcodes.Curve(3)
    assert curve.genus == 3
    assert hermcodes.Curve(5).gaps() == gs

    code = curve.build_code(3)
    r3 = hermcodes.bounds_report(3, 3)
    assert (code.n, code.k) == (r3["n"], r3["k"]) == (27, 20)
    assert len(code.rows()) == code.k and len(code.columns()) == code.n
    d = code.min_distance()
    assert d["d"] == 5, d

    dual = curve.duality_check(3)
    assert dual["orthogonal"] and dual["complementary"]

    try:
        hermcodes.bounds_report(7, 40)
    except ValueError:
        pass
    else:
        raise AssertionError("m out of range accepted")

    w = hermcodes.verify_witness(orthogonality=False)
    assert w["off_curve"] == 20 and w["minimum_distance"] == 20

    print("smoke test ok:", code, "d =", d["d"], "| witness:", w["conclusion"])


if __name__ == "__main__":
    main()
