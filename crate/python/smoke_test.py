"""Smoke test for the satotate extension module.

Run after `cargo build -p satotate-python --release` (or `maturin develop`
inside crates/python). If the module is not installed, the freshly built
shared library is copied into a temp dir and imported from there.
"""

import importlib
import json
import os
import shutil
import sys
import tempfile
from fractions import Fraction
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def load_module():
    try:
        return importlib.import_module("satotate")
    except ImportError:
        pass
    for profile in ("release", "debug"):
        lib = ROOT / "target" / profile / "libsatotate.so"
        if lib.exists():
            tmp = tempfile.mkdtemp()
            shutil.copy(lib, os.path.join(tmp, "satotate.so"))
            sys.path.insert(0, tmp)
            return importlib.import_module("satotate")
    sys.exit("satotate extension not found; build crates/python first")


def main():
    st = load_module()

    catalan = [1, 1, 2, 5, 14, 42, 132]
    for k, c in enumerate(catalan):
        assert Fraction(st.su2_moment(2 * k)) == c
        assert Fraction(st.su2_moment(2 * k + 1)) == 0

    swap = json.dumps({"m": 2, "gamma": {"cyclic": 2}, "action": [[0, 1], [1, 0]], "a": 1})
    csv = st.moments_csv(swap, 4, 20000, 7)
    rows = [line.split(",") for line in csv.strip().splitlines()]
    assert rows[0][:2] == ["order", "component_class"]
    assert st.moments_csv(swap, 4, 20000, 7) == csv

    samples = st.sample(swap, 1000, 3)
    assert len(samples) == 1000
    assert {c for c, _, _ in samples} <= {0, 1}

    su2 = json.dumps({"m": 1, "gamma": {"cyclic": 1}, "a": 1})
    labels = st.irreps(su2, 4)
    assert [e for e, _, _ in labels] == [[0], [1], [2], [3], [4]]

    aps = st.curve_traces([0, 0, 1, -1, 0], 20)
    assert aps[:4] == [(2, -2), (3, -3), (5, -2), (7, -1)]

    ts = [a / p**0.5 for p, a in st.curve_traces([0, 0, 1, -1, 0], 20000)]
    ks = st.ks_semicircle(ts)
    assert ks < 0.03, ks

    try:
        st.moments_csv("{not json", 2, 0, 0)
    except ValueError:
        pass
    else:
        raise AssertionError("malformed spec accepted")

    print(f"smoke test ok: {len(labels)} irreps, KS(37a, p<2e4) = {ks:.4f}")


if __name__ == "__main__":
    main()
