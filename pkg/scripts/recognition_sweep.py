#!/usr/bin/env python3
"""Sweep the recognizers over a grid of field sizes and seeds.

Prints one row per (group, seed) with stage sample counts and the
verification outcome, then a per-size summary. Useful for eyeballing
how sampling budgets behave as q grows.

    python3 scripts/recognition_sweep.py --seeds 10 --trials 100
    python3 scripts/recognition_sweep.py --odd 13,1 29,1 --char2 3 4
"""
import argparse
import random
import time
from dataclasses import dataclass, field

from bbsl2 import make_matrix_blackbox, recover_char2, recover_psl2
from bbsl2.errors import ContractViolation, MonteCarloFailure


@dataclass
class SweepConfig:
    odd: list = field(default_factory=lambda: [(3, 2), (13, 1), (29, 1), (3, 4), (13, 2)])
    char2: list = field(default_factory=lambda: [2, 3, 4, 8])
    seeds: int = 5
    trials: int = 100
    center_quotient: bool = False
    transparent: bool = False


def _parse_args() -> SweepConfig:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--odd", nargs="*", metavar="p,k", help="odd prime powers as p,k pairs")
    ap.add_argument("--char2", nargs="*", type=int, metavar="n", help="degrees for SL2(2^n)")
    ap.add_argument("--seeds", type=int, default=5, help="seeds 0..N-1 per size")
    ap.add_argument("--trials", type=int, default=100, help="verification trials per run")
    ap.add_argument("--center-quotient", action="store_true", help="run the odd sizes as PSL")
    ap.add_argument("--transparent", action="store_true", help="skip string encryption")
    ns = ap.parse_args()
    cfg = SweepConfig(seeds=ns.seeds, trials=ns.trials,
                      center_quotient=ns.center_quotient, transparent=ns.transparent)
    if ns.odd is not None:
        cfg.odd = [tuple(int(x) for x in item.split(",")) for item in ns.odd]
    if ns.char2 is not None:
        cfg.char2 = ns.char2
    return cfg


def _run_one(label, make_box, recognize, seed, trials):
    box = make_box(seed)
    t0 = time.perf_counter()
    try:
        res = recognize(box, random.Random(seed), trials)
    except (MonteCarloFailure, ContractViolation) as exc:
        elapsed = time.perf_counter() - t0
        print(f"{label:>14} seed={seed:<3} FAILED after {elapsed:6.2f}s: {exc}")
        return None
    elapsed = time.perf_counter() - t0
    checks = res.verification["phi_homomorphism_checks"]
    samples = sum(s.samples_used for s in res.stages)
    print(
        f"{label:>14} seed={seed:<3} ok={checks['passes']}/{checks['trials']}"
        f" samples={samples:<6} time={elapsed:6.2f}s"
    )
    return {"elapsed": elapsed, "samples": samples,
            "exact": checks["passes"] == checks["trials"]}


def main() -> int:
    cfg = _parse_args()
    opaque = not cfg.transparent
    summaries = []
    for p, k in cfg.odd:
        label = f"{'P' if cfg.center_quotient else ''}SL2({p**k})"
        rows = [
            _run_one(
                label,
                lambda s, p=p, k=k: make_matrix_blackbox(
                    p, k, center_quotient=cfg.center_quotient, opaque=opaque, seed=s
                ),
                lambda box, rng, t, p=p, k=k: recover_psl2(box, p, k, rng, trials=t),
                seed,
                cfg.trials,
            )
            for seed in range(cfg.seeds)
        ]
        summaries.append((label, rows))
    for n in cfg.char2:
        label = f"SL2(2^{n})"
        rows = [
            _run_one(
                label,
                lambda s, n=n: make_matrix_blackbox(2, n, opaque=opaque, seed=s),
                lambda box, rng, t, n=n: recover_char2(box, n, rng, trials=t),
                seed,
                cfg.trials,
            )
            for seed in range(cfg.seeds)
        ]
        summaries.append((label, rows))

    print("\nsummary")
    worst_failures = 0
    for label, rows in summaries:
        good = [r for r in rows if r is not None and r["exact"]]
        worst_failures = max(worst_failures, len(rows) - len(good))
        if good:
            mean_t = sum(r["elapsed"] for r in good) / len(good)
            mean_s = sum(r["samples"] for r in good) / len(good)
            print(
                f"{label:>14}: {len(good)}/{len(rows)} exact,"
                f" mean {mean_t:5.2f}s, mean samples {mean_s:8.1f}"
            )
        else:
            print(f"{label:>14}: 0/{len(rows)} exact")
    return 1 if worst_failures else 0


if __name__ == "__main__":
    raise SystemExit(main())
