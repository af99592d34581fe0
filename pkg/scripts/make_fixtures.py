"""Regenerate the files under tests/fixtures.

sample_weekly.csv is a synthetic weekly low/high series: a seeded
log-random walk with drift and an annual swing, shaped like a weekly
price file but corresponding to no real instrument.

degenerate.csv is a zero-width series (lo == hi) whose decomposition a
classical single-channel SSA must reproduce.  The shipped reference
(degenerate_reference.json) is computed here by plain SVD and a loop
diagonal averaging that share no code with the library, and from the
CSV text as parsed back, so rounding in the file is already priced in.

golden_decompose.json is the library's own decompose output on the
degenerate fixture; tests use it to pin the JSON schema.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import subprocess
import sys

import numpy as np

from ivssa import IntervalSeries
from ivssa.io import write_series_csv

WEEKLY_N = 249
WEEKLY_SEED = 20
DEGENERATE_N = 60
DEGENERATE_WINDOW = 24
DEGENERATE_M = 4


def weekly_sample(n: int = WEEKLY_N, seed: int = WEEKLY_SEED) -> IntervalSeries:
    rng = np.random.default_rng(seed)
    t = np.arange(n)
    log_mid = (
        math.log(850.0)
        + 0.004 * t
        + 0.06 * np.sin(2 * np.pi * t / 52.0)
        + np.cumsum(rng.normal(0.0, 0.025, n))
    )
    mid = np.exp(log_mid)
    half = mid * (0.01 + rng.uniform(0.0, 0.035, n))
    labels = tuple(f"w{i + 1:03d}" for i in range(n))
    return IntervalSeries(mid - half, mid + half, labels=labels)


def degenerate_sample(n: int = DEGENERATE_N) -> np.ndarray:
    t = np.arange(1, n + 1, dtype=float)
    return 3.0 + 0.05 * t + np.sin(2 * np.pi * t / 12.0)


def read_back_values(path: str) -> np.ndarray:
    """Parse the lo column of a narrow CSV exactly as consumers will."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return np.array([float(r[1]) for r in rows[1:]])


def classical_reference(x: np.ndarray, window: int, m: int) -> dict:
    """Plain SSA by SVD of the trajectory matrix, no shared code."""
    n = x.size
    k = n - window + 1
    traj = np.empty((window, k))
    for i in range(window):
        traj[i] = x[i : i + k]
    u, s, vt = np.linalg.svd(traj, full_matrices=False)
    lam = s**2
    d = int(np.sum(lam > 1e-10 * lam[0]))
    if d != m:
        raise SystemExit(f"fixture drift: expected rank {m}, got {d}")

    def diag_avg(mat: np.ndarray) -> list[float]:
        out = []
        for t in range(n):
            acc = 0.0
            cnt = 0
            for i in range(max(0, t - k + 1), min(window, t + 1)):
                acc += mat[i, t - i]
                cnt += 1
            out.append(acc / cnt)
        return out

    comp1 = np.outer(u[:, 0] * s[0], vt[0])
    partial = sum(np.outer(u[:, i] * s[i], vt[i]) for i in range(m))
    return {
        "window": window,
        "m": m,
        "eigenvalues": [float(v) for v in lam[:d]],
        "component_1": diag_avg(comp1),
        "trendline": diag_avg(partial),
    }


def main() -> None:
    default_out = os.path.join(
        os.path.dirname(os.path.abspath(__file__)), "..", "tests", "fixtures"
    )
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=os.path.normpath(default_out))
    args = ap.parse_args()
    os.makedirs(args.out, exist_ok=True)

    weekly_path = os.path.join(args.out, "sample_weekly.csv")
    write_series_csv(weekly_path, weekly_sample())
    print(f"wrote {weekly_path}")

    degenerate_path = os.path.join(args.out, "degenerate.csv")
    x = degenerate_sample()
    write_series_csv(degenerate_path, IntervalSeries(x, x.copy()))
    print(f"wrote {degenerate_path}")

    ref = classical_reference(
        read_back_values(degenerate_path), DEGENERATE_WINDOW, DEGENERATE_M
    )
    ref_path = os.path.join(args.out, "degenerate_reference.json")
    with open(ref_path, "w") as fh:
        json.dump(ref, fh, indent=2)
        fh.write("\n")
    print(f"wrote {ref_path}")

    # relative --input with cwd=out keeps the recorded path location free
    golden_path = os.path.join(args.out, "golden_decompose.json")
    subprocess.run(
        [
            sys.executable,
            "-m",
            "ivssa",
            "decompose",
            "--input",
            "degenerate.csv",
            "--window",
            str(DEGENERATE_WINDOW),
            "--grouping",
            f"fixed:{DEGENERATE_M}",
            "--out",
            "golden_decompose.json",
        ],
        check=True,
        cwd=args.out,
    )
    print(f"wrote {golden_path}")


if __name__ == "__main__":
    main()
