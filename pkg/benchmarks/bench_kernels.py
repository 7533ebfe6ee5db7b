"""Compare the compiled word kernels with the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]

Workloads are the shapes the verification suites produce: reducing long
random words, substituting basis images, and evaluating relator words.
"""

import argparse
import random
import timeit

from h2ia import _kernels_py
from h2ia.ia_alphabet import action
from h2ia.relations import enumerate_instances, expand

try:
    from h2ia import _kernels
except ImportError:
    _kernels = None


def workloads(rng):
    words = [tuple(rng.choice((1, -1)) * rng.randint(1, 8) for _ in range(400)) for _ in range(200)]
    images = tuple(tuple(rng.choice((1, -1)) * rng.randint(1, 8) for _ in range(6)) for _ in range(8))
    relators = [expand(inst) for inst in enumerate_instances("R8", pool_size=6)[:2000]]
    updates = [[action(g) for g in w] for w in relators]
    base = tuple((i,) for i in range(1, 9))
    return {
        "reduce_word": lambda k: [k.reduce_word(w) for w in words],
        "substitute": lambda k: [k.substitute(images, w) for w in words],
        "compose_chain (R8 relators)": lambda k: [k.compose_chain(base, u) for u in updates],
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    loads = workloads(random.Random(7))
    backends = [("python", _kernels_py)] + ([("cython", _kernels)] if _kernels else [])
    print(f"{'kernel':30s}" + "".join(f"{name:>12s}" for name, _ in backends) + ("     speedup" if _kernels else ""))
    for label, fn in loads.items():
        if _kernels:
            # the two backends must agree before timing means anything
            assert fn(_kernels_py) == fn(_kernels), label
        times = [min(timeit.repeat(lambda: fn(k), number=1, repeat=args.repeat)) for _, k in backends]
        row = f"{label:30s}" + "".join(f"{t * 1000:10.1f}ms" for t in times)
        if _kernels:
            row += f"{times[0] / times[1]:11.1f}x"
        print(row)
    if not _kernels:
        print("compiled extension not built; only the fallback was timed")


if __name__ == "__main__":
    main()
