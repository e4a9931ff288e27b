"""Monte Carlo rates behind the statistical acceptance criteria.

Reports, over many seeds, how often the 1 -> 3 noise jump is flagged within
n_st steps, the drift-scenario final deltas, and the false-reset rate of a
matched sensor.

    python scripts/detection_study.py --seeds 40
"""
import argparse

import numpy as np

from slkf.runner import run_scenario
from slkf.sim import NoiseProfile, Scenario, VelocityProfile, builtin_scenario

JUMP = 105


def jump_detected(seed: int, n_st: int = 35) -> tuple[bool, bool]:
    rows = run_scenario(builtin_scenario("jumps", seed)).sensors["sensor1"]
    delta = np.array([r.delta for r in rows])
    window = range(JUMP + 1, JUMP + n_st + 1)
    reset = any(rows[k].event == "reset" for k in window)
    doubled = any(delta[k] > 2 * delta[:JUMP + 1].mean() for k in window)
    return reset, reset or doubled


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seeds", type=int, default=40)
    args = ap.parse_args()
    seeds = range(args.seeds)

    hits = [jump_detected(s) for s in seeds]
    print(f"jumps: reset within window {sum(h[0] for h in hits)}/{len(hits)}, "
          f"reset or doubled delta {sum(h[1] for h in hits)}/{len(hits)}")

    finals = np.array([[run_scenario(builtin_scenario("drift", s)).column(n, "delta")[-1]
                        for n in ("sensor1", "sensor2")] for s in seeds])
    m = finals.mean(axis=0)
    print(f"drift: mean final delta sensor1 {m[0]:.3f}, sensor2 {m[1]:.3f}")

    resets = []
    for s in seeds:
        sc = Scenario("matched", 300, 1.0, (NoiseProfile.constant(1.0),),
                      VelocityProfile.constant(10.0), truth_sigma_v=1.0, seed=s)
        resets.append(sum(r.event == "reset" for r in run_scenario(sc).sensors["sensor1"]))
    print(f"matched: runs without reset {sum(r == 0 for r in resets)}/{len(resets)}")


if __name__ == "__main__":
    main()
