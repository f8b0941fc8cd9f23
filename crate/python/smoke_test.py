"""Smoke test for the extension module.

Build it first with

    cargo build --release -p parcohom-py --features extension-module

The module is imported from the installed package if there is one, and
otherwise loaded straight from target/.
"""

import importlib.machinery
import importlib.util
import pathlib
import sys

ROOT = pathlib.Path(__file__).resolve().parent.parent


def load():
    try:
        import parcohom

        return parcohom
    except ImportError:
        pass
    for profile in ("release", "debug"):
        lib = ROOT / "target" / profile / "libparcohom.so"
        if lib.exists():
            loader = importlib.machinery.ExtensionFileLoader("parcohom", str(lib))
            spec = importlib.util.spec_from_loader("parcohom", loader)
            mod = importlib.util.module_from_spec(spec)
            loader.exec_module(mod)
            sys.modules["parcohom"] = mod
            return mod
    sys.exit("parcohom extension not found; build crates/py first")


def main():
    pc = load()
    print("parcohom", pc.__version__)

    h = pc.Cohomology(11, 5)
    assert (h.dim_h1, h.dim_par) == (11, 2), h
    # elliptic curve of conductor 11: a_2 = -2
    t2 = h.hecke(2)
    assert t2 == [[3, 0], [0, 3]], t2
    print(h)

    systems = h.eigen_systems(10)
    assert len(systems) == 1 and systems[0]["values"]["3"] == [4]

    assert pc.sturm_bound(23) == (2, 1)
    assert pc.sturm_bound(23, with_character=False) == (22, 1)

    w1 = pc.weight_one(23, 5, character="quadratic", output_bound=13)
    res = w1["result"]
    assert res["dim_T1"] == 1 and w1["structure_passed"]
    a = {int(n): c[0] for n, c in res["eigenforms"][0]["values"].items()}
    assert (a[2], a[3], a[13]) == (4, 4, 4), a
    print("weight one, level 23, p = 5:", [a[n] for n in sorted(a)])

    assert pc.verify_shapiro(4, 5, 7)["passed"]
    assert pc.twist_check(7, 5, 2)["passed"]

    try:
        pc.weight_one(10, 5)
    except ValueError as e:
        print("rejected:", e)
    else:
        raise AssertionError("p | N must be rejected")

    print("ok")


if __name__ == "__main__":
    main()
