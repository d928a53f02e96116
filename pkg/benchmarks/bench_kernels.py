"""Compare the compiled and pure-Python kernels.

Micro-benchmarks call each kernel directly; the search benchmark runs the
same proof searches in two subprocesses, one of them forced onto the
pure-Python kernels with LEARNCOP_PURE_PYTHON=1.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import json
import os
import subprocess
import sys
import timeit
from pathlib import Path

from learncop import _pykernels

try:
    from learncop import _ckernels
except ImportError:
    _ckernels = None

HERE = Path(__file__).resolve().parent


def _v(pos, i):
    return (None, pos, i)


def _chain(n):
    """Bindings x0 -> x1 -> ... -> x(n-1) -> f(a), a long dereference chain."""
    bmap, order = {}, []
    for i in range(n - 1):
        bmap[_v((1,), i)] = _v((1,), i + 1)
        order.append(_v((1,), i))
    bmap[_v((1,), n - 1)] = ("f", ("a",))
    order.append(_v((1,), n - 1))
    return bmap, order


def _deep(depth, leaf):
    t = leaf
    for _ in range(depth):
        t = ("g", t, ("b",))
    return t


def micro(k, number):
    bmap, order = _chain(20)
    head = _v((1,), 0)
    s = ("p", _deep(8, head), _v((2,), 0))
    t = ("p", _deep(8, ("f", ("a",))), _deep(3, ("c",)))
    template = _deep(6, (None, None, 0))

    def unify_undo():
        mark = len(order)
        k.unify(s, t, bmap, order)
        k.undo_to(bmap, order, mark)

    cases = {
        "deref chain of 20": lambda: k.deref(head, bmap),
        "unify + undo": unify_undo,
        "equal (deep terms)": lambda: k.equal(s, s, bmap),
        "resolve": lambda: k.resolve(s, bmap),
        "instantiate": lambda: k.instantiate(template, (1, 2)),
    }
    return {name: min(timeit.repeat(fn, number=number, repeat=3)) / number * 1e6 for name, fn in cases.items()}


SEARCH_SNIPPET = """
import json, sys, time
sys.path.insert(0, {here!r})
from workloads import pigeonhole, reachability
from learncop import KERNEL
from learncop.search import SearchOptions, prove
from learncop.tptp import parse_string
rows = []
for name, text in (("reachability 10x8", reachability(10, 8)), ("pigeonhole 5", pigeonhole(5))):
    problem = parse_string(text)
    for mode in ("learning", "chronological"):
        t0 = time.perf_counter()
        out = prove(problem, SearchOptions(mode=mode, time_budget=600))
        rows.append({{"problem": name, "mode": mode, "outcome": type(out).__name__,
                     "seconds": time.perf_counter() - t0,
                     "extensions_applied": sum(s.extensions_applied for s in out.stats)}})
print(json.dumps({{"kernel": KERNEL, "rows": rows}}))
"""


def search(pure):
    env = dict(os.environ)
    if pure:
        env["LEARNCOP_PURE_PYTHON"] = "1"
    else:
        env.pop("LEARNCOP_PURE_PYTHON", None)
    code = SEARCH_SNIPPET.format(here=str(HERE))
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    return json.loads(out.stdout)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=20000, help="calls per micro-benchmark timing")
    args = ap.parse_args()

    py = micro(_pykernels, args.repeat)
    cy = micro(_ckernels, args.repeat) if _ckernels else None
    print(f"{'kernel':<22}{'python us':>12}{'cython us':>12}{'speedup':>10}")
    for name, t in py.items():
        if cy:
            print(f"{name:<22}{t:>12.3f}{cy[name]:>12.3f}{t / cy[name]:>9.1f}x")
        else:
            print(f"{name:<22}{t:>12.3f}{'n/a':>12}")

    print()
    slow = search(True)
    fast = search(False)
    if fast["kernel"] == slow["kernel"]:
        print("compiled kernels unavailable; both runs used the Python kernels")
    print(f"{'problem':<20}{'mode':<15}{'outcome':<9}{'extensions':>11}"
          f"{slow['kernel'] + ' s':>11}{fast['kernel'] + ' s':>11}{'speedup':>9}")
    for a, b in zip(slow["rows"], fast["rows"]):
        print(f"{a['problem']:<20}{a['mode']:<15}{a['outcome']:<9}{a['extensions_applied']:>11}"
              f"{a['seconds']:>11.2f}{b['seconds']:>11.2f}{a['seconds'] / b['seconds']:>8.2f}x")


if __name__ == "__main__":
    main()
