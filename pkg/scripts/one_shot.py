"""One end-to-end run on a single interval series, printed as text.

Either reads a narrow CSV (label,lo,hi) or simulates scenario A/B and
works on its x series.  Decomposes, picks m by residual whiteness,
reports the eigenvalue spectrum and KS trace, and forecasts 12 steps.
With simulated input the trendline is also scored against the true mean
curve (the Hausdorff mean HR).
"""

from __future__ import annotations

import argparse

import numpy as np

from ivssa import (
    Grouping,
    decompose,
    forecast_recurrent,
    hausdorff_residual_mean,
    read_csv,
    recurrence_coefficients,
    select_from_decomposition,
    simulate_scenario,
    trendline,
)
from ivssa.core import IntervalSeries, ParameterError
from ivssa.simulation import ScenarioConfig


def load(args) -> tuple[IntervalSeries, IntervalSeries | None]:
    if args.input:
        series = read_csv(args.input)
        if len(series) != 1:
            raise ParameterError("demo expects a univariate (narrow) CSV")
        return series[0], None
    cfg = ScenarioConfig.from_name(args.scenario, args.n, seed=args.seed)
    data = simulate_scenario(cfg)
    return data.x, data.x_mean


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--input", help="narrow CSV; omit to simulate")
    ap.add_argument("--scenario", choices=("A", "B"), default="A")
    ap.add_argument("--n", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--horizon", type=int, default=12)
    ap.add_argument("--alpha", type=float, default=0.05)
    args = ap.parse_args()

    y, truth = load(args)
    n = len(y)
    dec = decompose(y)
    lam = dec.eig.values[: dec.d]
    share = np.cumsum(lam) / lam.sum()
    print(f"n = {n}, window = {dec.window}, numerical rank d = {dec.d}")
    print("leading eigenvalues (cumulative share):")
    for i in range(min(6, dec.d)):
        print(f"  {i + 1}: {lam[i]:12.5g}   {share[i]:.4f}")

    sel = select_from_decomposition(dec, y, alpha=args.alpha)
    crit = sel.critical_value
    print(f"\nwhiteness selection: m = {sel.m} at alpha = {args.alpha}")
    for m, stat in enumerate(sel.ks_trace, start=1):
        verdict = "accept" if stat <= crit else "reject"
        print(f"  m = {m}: KS = {stat:.4f}  ({verdict} at {crit:.4f})")

    grouping = Grouping.leading(sel.m)
    trend = trendline(dec, grouping)[0]
    if truth is not None:
        hr = hausdorff_residual_mean(truth, trend)
        print(f"\nHR against the true mean curve: {hr:.4f}")

    coef = recurrence_coefficients(dec.eig, grouping)
    fc = forecast_recurrent(trend, coef, args.horizon)
    print(f"\nrecurrence order {coef.order}, verticality {coef.verticality:.3g}")
    print(f"last observed: [{y.lo[-1]:.4f}, {y.hi[-1]:.4f}]")
    print(f"{args.horizon}-step forecast:")
    for t in range(args.horizon):
        print(f"  t = {n + t + 1}: [{fc.values.lo[t]:.4f}, {fc.values.hi[t]:.4f}]")


if __name__ == "__main__":
    main()
