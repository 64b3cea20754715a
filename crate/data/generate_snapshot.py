#!/usr/bin/env python3
"""Regenerate data/usdtry_2022.csv.

The file is a reconstruction of the USD/TRY daily close path between
2022-05-15 and 2022-12-13 (213 calendar days). The vendor's historical
table is not redistributable, so the level path is rebuilt from
approximate month-level anchor quotes plus the two large June moves,
with seeded quote noise on top. It is NOT the vendor's series; it only
mimics its shape (steady depreciation crawl, a volatile first third,
occasional unchanged quotes).

Output is deterministic for a fixed seed. Rates are rounded to 4 dp.
"""

import csv
import datetime as dt
import pathlib

import numpy as np

SEED = 20221213
START = dt.date(2022, 5, 15)
DAYS = 213

# (date, approximate close) anchors; log-linear interpolation between them.
ANCHORS = [
    ("2022-05-15", 15.43),
    ("2022-05-31", 16.33),
    ("2022-06-06", 16.62),
    ("2022-06-07", 16.97),  # June depreciation jump
    ("2022-06-22", 17.36),
    ("2022-06-23", 16.92),  # post-regulation appreciation
    ("2022-06-30", 16.70),
    ("2022-07-15", 17.45),
    ("2022-07-31", 17.93),
    ("2022-08-31", 18.18),
    ("2022-09-30", 18.50),
    ("2022-10-31", 18.60),
    ("2022-11-30", 18.63),
    ("2022-12-13", 18.64),
]


def main() -> None:
    rng = np.random.default_rng(SEED)
    dates = [START + dt.timedelta(days=i) for i in range(DAYS)]
    day_index = np.arange(DAYS, dtype=float)

    anchor_x = np.array(
        [(dt.date.fromisoformat(d) - START).days for d, _ in ANCHORS], dtype=float
    )
    anchor_y = np.log(np.array([v for _, v in ANCHORS]))
    trend = np.interp(day_index, anchor_x, anchor_y)

    # Quote noise: Student-t(4), scale decaying from the volatile early
    # period toward the quiet autumn crawl.
    scale = 0.0016 * np.exp(-day_index / 60.0) + 0.0011
    noise = scale * rng.standard_t(4, size=DAYS) / np.sqrt(2.0)

    rates = np.exp(trend + noise)
    rates = np.round(rates, 4)

    # Unchanged quotes on a handful of (mostly weekend) days.
    for i in range(1, DAYS):
        weekend = dates[i].weekday() >= 5
        if rng.random() < (0.14 if weekend else 0.03):
            rates[i] = rates[i - 1]

    out = pathlib.Path(__file__).with_name("usdtry_2022.csv")
    with out.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["date", "rate"])
        for d, r in zip(dates, rates):
            writer.writerow([d.isoformat(), f"{r:.4f}"])


if __name__ == "__main__":
    main()
