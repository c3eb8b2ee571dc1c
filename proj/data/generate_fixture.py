#!/usr/bin/env python3
"""Writes the bundled 48 h synthetic fixture into data/fixture/.

Synthetic, non-measured data: sinusoidal office loads, a clear-sky PV curve,
day-ahead-like prices and a generation mix that is coal-heavy at night and
wind-rich in the evening. Contracted powers, sharing coefficients and the
battery are those of the four-building case study.
"""

import csv
import json
import math
from datetime import datetime, timedelta
from pathlib import Path

HOURS = 48
START = datetime(2022, 3, 3)
OUT = Path(__file__).resolve().parent / "fixture"

BUILDINGS = [
    # id, contracted kW, load peak kWh, sharing coefficient
    ("B1", 70.0, 38.0, 0.35),
    ("B2", 43.65, 18.0, 0.15),
    ("B3", 20.785, 1.5, 0.02),
    ("B4", 75.0, 52.0, 0.48),
]


def bump(hour, centre, width):
    return math.exp(-(((hour - centre) / width) ** 2))


def office(hour, day):
    plateau = min(1.0, max(0.0, math.sin(math.pi * (hour - 6.0) / 15.0)))
    return (0.25 + 0.75 * plateau) * (1.0 + 0.04 * day)


def pv(hour, day):
    return max(0.0, 80.0 * math.sin(math.pi * (hour - 7.0) / 12.0)) * (1.0 - 0.15 * day)


def spot(hour, day):
    # EUR/kWh before VAT: cheap nights, morning and evening peaks.
    base = 0.10 + 0.08 * bump(hour, 9, 2) + 0.14 * bump(hour, 20, 2) - 0.02 * bump(hour, 14, 2.5)
    return base * (1.0 + 0.05 * day)


def mix(hour, day):
    # MWh per source for one hour of the national schedule.
    night = bump(hour, 3, 3.5)
    evening = bump(hour, 20, 2.5)
    midday = bump(hour, 13, 3)
    return {
        "hard coal": 2400 * night + 600,
        "combined cycle": 3000 + 1500 * night - 1000 * evening,
        "nuclear": 7000,
        "wind": 3000 + 9000 * evening + 500 * day,
        "solar pv": 9000 * midday,
        "hydropower": 2000 + 800 * evening,
    }


def fmt(x, digits=4):
    return f"{x:.{digits}f}"


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    stamps = [START + timedelta(hours=t) for t in range(HOURS)]
    iso = [s.strftime("%Y-%m-%dT%H:%M:%S") for s in stamps]

    with open(OUT / "loads.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["ts"] + [b[0] for b in BUILDINGS])
        for t in range(HOURS):
            h, d = t % 24, t // 24
            w.writerow([iso[t]] + [fmt(b[2] * office(h, d)) for b in BUILDINGS])

    with open(OUT / "prices.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["ts", "buy", "sell"])
        for t in range(HOURS):
            p = spot(t % 24, t // 24)
            w.writerow([iso[t], fmt(p, 5), fmt(0.5 * p, 5)])

    with open(OUT / "pv.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["ts", "pv_kwh"])
        for t in range(HOURS):
            w.writerow([iso[t], fmt(pv(t % 24, t // 24))])

    sources = list(mix(0, 0).keys())
    with open(OUT / "mix.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["ts"] + sources)
        for t in range(HOURS):
            m = mix(t % 24, t // 24)
            w.writerow([iso[t]] + [fmt(m[s], 1) for s in sources])

    config = {
        "name": "synthetic-48h",
        "note": "synthetic data for tests and examples; not measured case-study data",
        "timestamp_column": "ts",
        "loads_file": "loads.csv",
        "prices": {"file": "prices.csv", "buy_column": "buy", "sell_column": "sell",
                   "buy_includes_vat": False},
        "vat_rate": 0.21,
        "pv": {"file": "pv.csv", "column": "pv_kwh"},
        "grid_intensity": {"mix_file": "mix.csv"},
        "participants": [
            {"id": b[0], "max_import_kw": b[1], "sharing_coefficient": b[3]} for b in BUILDINGS
        ],
        "bess": {
            "p_ch_max_kw": 90.0, "p_dis_max_kw": 90.0,
            "soc_min_kwh": 31.65, "soc_max_kwh": 189.9,
            "eta_ch": 0.95, "eta_dis": 0.95,
            "soc_initial_kwh": 150.0, "soc_final_kwh": 150.0,
            "calendar_cost_per_hour": 0.0, "throughput_cost_per_kwh": 0.0,
        },
        "compensation_cap": False,
        "window_hours": 24,
    }
    with open(OUT / "config.json", "w") as f:
        json.dump(config, f, indent=2)
        f.write("\n")


if __name__ == "__main__":
    main()
