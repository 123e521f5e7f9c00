"""Smoke test for the sumdil_py extension module.

Build it first:  cargo build -p sumdil-python --release
then run:        python3 python/smoke_test.py
"""

import json
import math
import os
import shutil
import sys
import tempfile

HERE = os.path.dirname(os.path.abspath(__file__))
LIB = os.path.join(HERE, "..", "target", "release", "libsumdil_py.so")


def load():
    try:
        import sumdil_py
        return sumdil_py
    except ImportError:
        pass
    if not os.path.exists(LIB):
        sys.exit(f"extension not built: {LIB}")
    # the shared object must be importable under the module's own name
    tmp = tempfile.mkdtemp()
    shutil.copy(LIB, os.path.join(tmp, "sumdil_py.so"))
    sys.path.insert(0, tmp)
    import sumdil_py
    return sumdil_py


def main():
    sd = load()

    assert abs(sd.f_t(2, 0.0) - 3 ** (2 / 3)) < 1e-12
    assert abs(sd.critical_density(2) - 0.028595479208968317) < 1e-12
    assert sd.critical_density(3) == 0.0
    c = sd.solve_density(2, 2.08)
    assert abs(c - 2.90607e-5) < 1e-10
    assert abs(sd.lower_bound(1000003, 10, 2) - 18.80054978447029) < 1e-9
    assert sd.concentration(0.25, 1.0) == 1.0
    assert json.loads(sd.bound_profile(3, 0.1))["no_improvement"]

    a = sd.ResidueSet.parse("p=11;{0,1,2}")
    assert a == sd.ResidueSet(11, [2, 1, 11, -10])
    assert len(a.sum_of_dilates(2)) == 7
    assert a.dilate(3).elements == [0, 3, 6]
    assert 13 in a and 5 not in a
    assert str(a.canonical_form()) == "p=11;{0,1,2}"

    mags = a.magnitudes()
    assert abs(sum(m * m for m in mags) - 11 * 3) < 1e-9
    summary = json.loads(a.bias_summary())
    assert summary["argmax"] == 1 and summary["sizeA"] == 3
    assert math.isclose(summary["bias"], abs(1 + complex(math.cos(2 * math.pi / 11), -math.sin(2 * math.pi / 11)) + complex(math.cos(4 * math.pi / 11), -math.sin(4 * math.pi / 11))))

    assert json.loads(a.concentration_check(1 / 3))["holds"]
    big = sd.ResidueSet(10007, [0, 1, 2, 3, 5, 8, 13, 21])
    trace = json.loads(big.pipeline(2))
    assert all(s["verdict"] != "fails" for s in trace["steps"])

    report = json.loads(sd.search_min(2, 3, cap=9))
    assert report["min_sumset_size"] == 7 and [0, 1, 2] in report["witnesses"]
    report = json.loads(sd.search_min(3, 3, p=13))
    assert report["p"] == 13
    check = json.loads(sd.verify(11, -2))
    assert check["sets_checked"] == 2047 and not check["violations"]
    assert json.loads(sd.verify(101, 2, sample=100, seed=1))["sets_checked"] == 100

    try:
        sd.ResidueSet(12, [0])
    except ValueError as e:
        assert "12" in str(e)
    else:
        raise AssertionError("composite modulus accepted")

    print("python smoke test: ok")


if __name__ == "__main__":
    main()
