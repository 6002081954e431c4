"""Smoke test for the octocfs extension module.

Build and run from the repository root:

    cargo build -p octo-cfs-python --features extension-module --release
    cp target/release/liboctocfs.so python/octocfs.so
    python3 python/smoke_test.py
"""

import json
import random
import sys
from fractions import Fraction
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

import octocfs  # noqa: E402


def check(name, ok, detail=""):
    print(f"{'ok  ' if ok else 'FAIL'} {name} {detail}".rstrip())
    return ok


def main():
    results = []
    e = [octocfs.Octonion.basis(i) for i in range(8)]
    for a, b, c in [(1, 2, 3), (1, 4, 5), (1, 7, 6), (2, 4, 6), (2, 5, 7), (3, 4, 7), (3, 6, 5)]:
        results.append(check(f"e{a}e{b} = e{c}", (e[a] * e[b]).coeffs == e[c].coeffs))

    rng = random.Random(0)
    worst = 0.0
    for _ in range(200):
        x = octocfs.Octonion([rng.uniform(-1, 1) for _ in range(8)])
        y = octocfs.Octonion([rng.uniform(-1, 1) for _ in range(8)])
        worst = max(worst, abs((x * y).norm() - x.norm() * y.norm()))
    results.append(check("norm multiplicative", worst < 1e-12, f"{worst:.2e}"))

    assoc = octocfs.Octonion.associator(e[1], e[2], e[4]).norm()
    results.append(check("nonassociative", assoc > 1.0, f"|[e1,e2,e4]| = {assoc}"))

    results.append(check("clifford dim", octocfs.clifford_dim() == (64, 64)))

    u = [Fraction(round(3 * q), 3) for _, _, q in octocfs.ideal_charges("u")]
    d = [Fraction(round(3 * q), 3) for _, _, q in octocfs.ideal_charges("d")]
    results.append(check("u charges", sorted(set(u)) == [0, Fraction(1, 3), Fraction(2, 3), 1], str(u)))
    results.append(check("d charges", sorted(set(d)) == [-1, Fraction(-2, 3), Fraction(-1, 3), 0], str(d)))

    x = [[1, 0], [0, -1]]
    y = [[0.5, 0.8j], [-0.8j, -1.2]]
    cls, lag = octocfs.classify(x, y, f=2, n=1, kappa=0.5)
    results.append(check("classify", cls in ("spacelike", "timelike", "lightlike"), f"{cls} L={lag:.6g}"))

    cfg = {"command": "clifford dim", "seed": 0}
    status, text = octocfs.run_experiment(json.dumps(cfg))
    report = json.loads(text)
    results.append(check("run_experiment", status == 0 and report["result"]["real_dim"] == 64))

    status, _ = octocfs.run_experiment(json.dumps({"command": "octonion check", "tol": 1e-300}))
    results.append(check("assertion status", status == 1))

    try:
        octocfs.classify([[1, 1], [0, 1]], x, f=2, n=1, kappa=0.5)
        results.append(check("non-Hermitian rejected", False))
    except ValueError:
        results.append(check("non-Hermitian rejected", True))

    try:
        octocfs.run_experiment(json.dumps({"command": "octonion check", "bogus": 1}))
        results.append(check("unknown key rejected", False))
    except ValueError:
        results.append(check("unknown key rejected", True))

    print(f"smoke test: {sum(results)}/{len(results)} passed (octocfs {octocfs.__version__})")
    return 0 if all(results) else 1


if __name__ == "__main__":
    sys.exit(main())
