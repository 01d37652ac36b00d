"""Time the compiled iteration kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--states N] [--bodies K] [--repeat R]
"""

import argparse
import importlib
import random
import timeit


def random_codes(n_states: int, n_bodies: int, seed: int) -> list[list[int]]:
    rng = random.Random(seed)
    # mostly Right edges so paths are long, with a few exits
    return [[rng.randrange(n_states) if rng.random() < 0.9 else -rng.randint(1, 3) for _ in range(n_states)]
            for _ in range(n_bodies)]


def main(argv=None) -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--states", type=int, default=64)
    parser.add_argument("--bodies", type=int, default=2000)
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    codes = random_codes(args.states, args.bodies, args.seed)
    backends = {"python": importlib.import_module("elgot_iter._kernels_py")}
    try:
        backends["cython"] = importlib.import_module("elgot_iter._kernels")
    except ImportError:
        print("compiled kernels not built; timing the fallback only")

    results = {}
    for name, mod in backends.items():
        cases = {
            "iterate_all": lambda: [mod.iterate_all(c) for c in codes],
            "bounded_chain": lambda: [mod.bounded_chain(c, 0, args.states + 1) for c in codes],
        }
        for case, fn in cases.items():
            best = min(timeit.repeat(fn, number=1, repeat=args.repeat))
            results[name, case] = best
            print(f"{name:<7} {case:<14} {best * 1000:9.2f} ms")
    if "cython" in backends:
        assert [backends["python"].iterate_all(c) for c in codes] == [backends["cython"].iterate_all(c) for c in codes]
        for case in ("iterate_all", "bounded_chain"):
            print(f"speedup {case:<14} {results['python', case] / results['cython', case]:8.1f}x")


if __name__ == "__main__":
    main()
