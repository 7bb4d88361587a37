#!/usr/bin/env python3
"""Regenerates monthly_sunspots_1749_1983.csv.

The original monthly Zurich sunspot series (Jan 1749 - Dec 1983, 2,820
points) is no longer hosted at its historical URL. This script builds a
monthly stand-in from the annual Zurich/Wolf numbers that ship with
statsmodels (same World Data Center Zurich observational series):

  1. take the annual means for 1749..1983 (235 years),
  2. PCHIP-interpolate them to monthly resolution (anchored mid-year),
  3. add seeded Gaussian month-to-month variation whose standard
     deviation scales with the activity level (sigma = 2 + 0.18*level),
     mimicking the heteroscedastic scatter of the real monthly series,
  4. clip at zero (sunspot numbers are nonnegative).

Deterministic: fixed RNG seed, fixed formatting. See data/README.md.
"""

import numpy as np
from scipy.interpolate import PchipInterpolator
import statsmodels.api as sm

SEED = 17490112  # first month of the series, as a date


def main() -> None:
    annual = sm.datasets.sunspots.load_pandas().data
    annual = annual[(annual.YEAR >= 1749) & (annual.YEAR <= 1983)]
    years = annual.YEAR.to_numpy()
    values = annual.SUNACTIVITY.to_numpy()
    assert len(values) == 235

    # Anchor each annual mean at mid-year; pad one year each side so the
    # interpolant is defined on every month of 1749..1983.
    anchor_t = np.concatenate(([years[0] - 0.5], years + 0.5, [years[-1] + 1.5]))
    anchor_v = np.concatenate(([values[0]], values, [values[-1]]))
    interp = PchipInterpolator(anchor_t, anchor_v)

    month_t = np.array([y + (m + 0.5) / 12.0 for y in years for m in range(12)])
    level = np.clip(interp(month_t), 0.0, None)

    rng = np.random.default_rng(SEED)
    noise = rng.standard_normal(level.size) * (2.0 + 0.18 * level)
    monthly = np.clip(level + noise, 0.0, None)
    assert monthly.size == 2820

    labels = [f"{y}-{m + 1:02d}" for y in range(1749, 1984) for m in range(12)]
    with open("monthly_sunspots_1749_1983.csv", "w", encoding="utf-8") as f:
        f.write("month,sunspots\n")
        for label, v in zip(labels, monthly):
            f.write(f"{label},{v:.4f}\n")


if __name__ == "__main__":
    main()
