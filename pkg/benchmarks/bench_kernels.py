"""Time the hot kernels with numba and with the numpy fallback.

    python3 benchmarks/bench_kernels.py            # both modes, side by side
    python3 benchmarks/bench_kernels.py --repeat 5

Each mode runs in its own interpreter because MIRRORCOUNT_DISABLE_JIT is read
at import time.  The first (compiling) call is excluded from the jit timings.
"""
import argparse
import json
import os
import subprocess
import sys
import time

WORKLOADS = [
    # (label, p, a, n, lambda, k, strategy)
    ("hesse F_7^3 naive", 7, 1, 2, 3, 3, "naive"),
    ("hesse F_7^4 naive", 7, 1, 2, 3, 4, "naive"),
    ("quartic F_5^2 roots", 5, 1, 3, 1, 2, "roots"),
    ("quartic F_7^2 roots", 7, 1, 3, 2, 2, "roots"),
    ("quintic-3fold F_5 roots", 5, 1, 4, 1, 1, "roots"),
]


def _child(repeat):
    from mirrorcount import _jit
    from mirrorcount import experiment as ex

    out = {"jit": _jit.USE_JIT, "rows": []}
    for label, p, a, n, lam, k, strategy in WORKLOADS:
        cfg = ex.ExperimentConfig(p=p, a=a, n=n, lam=lam, strategy=strategy)
        value = ex.compute_count(cfg, k).value  # warm-up: compile and build tables
        best = float("inf")
        for _ in range(repeat):
            t0 = time.perf_counter()
            ex.compute_count(cfg, k)
            best = min(best, time.perf_counter() - t0)
        out["rows"].append({"label": label, "value": value, "seconds": best})
    print(json.dumps(out))


def _run_mode(disable, repeat):
    env = dict(os.environ, MIRRORCOUNT_DISABLE_JIT="1" if disable else "0")
    proc = subprocess.run([sys.executable, __file__, "--child", "--repeat", str(repeat)],
                          env=env, capture_output=True, text=True, check=True)
    return json.loads(proc.stdout.strip().splitlines()[-1])


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--child", action="store_true", help=argparse.SUPPRESS)
    args = ap.parse_args()
    if args.child:
        _child(args.repeat)
        return
    jit = _run_mode(False, args.repeat)
    numpy_only = _run_mode(True, args.repeat)
    print(f"{'workload':<26}{'N_k':>12}{'numba s':>11}{'numpy s':>11}{'speedup':>9}")
    for a, b in zip(jit["rows"], numpy_only["rows"]):
        if a["value"] != b["value"]:
            raise SystemExit(f"mismatch on {a['label']}: {a['value']} vs {b['value']}")
        speed = b["seconds"] / a["seconds"] if a["seconds"] else float("inf")
        print(f"{a['label']:<26}{a['value']:>12}{a['seconds']:>11.4f}{b['seconds']:>11.4f}{speed:>8.1f}x")


if __name__ == "__main__":
    main()
