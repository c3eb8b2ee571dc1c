#!/usr/bin/env python3
"""Solve exported LP files with HiGHS and check the solutions with `lecopt verify`.

Exits 77 (skip) when highspy is not installed.
"""

import argparse
import pathlib
import subprocess
import sys

SCENARIOS = [
    ("price", "static"),
    ("price", "variable"),
    ("environment", "static"),
    ("environment", "variable"),
]


def solve_with_highs(highspy, lp_path):
    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    h.setOptionValue("mip_rel_gap", 1e-9)
    h.setOptionValue("mip_feasibility_tolerance", 1e-9)
    h.setOptionValue("primal_feasibility_tolerance", 1e-9)
    if h.readModel(str(lp_path)) != highspy.HighsStatus.kOk:
        raise RuntimeError(f"HiGHS could not read {lp_path}")
    h.run()
    status = h.getModelStatus()
    if status != highspy.HighsModelStatus.kOptimal:
        raise RuntimeError(f"HiGHS status {h.modelStatusToString(status)} for {lp_path}")
    lp = h.getLp()
    values = h.getSolution().col_value
    return h.getInfo().objective_function_value, dict(zip(lp.col_names_, values))


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--lecopt", required=True)
    parser.add_argument("--config", required=True)
    parser.add_argument("--workdir", required=True)
    parser.add_argument("--days", type=int, default=2)
    args = parser.parse_args()

    try:
        import highspy
    except ImportError:
        print("highspy not installed; skipping")
        return 77

    work = pathlib.Path(args.workdir)
    work.mkdir(parents=True, exist_ok=True)
    failures = 0
    for day in range(args.days):
        for objective, sharing in SCENARIOS:
            tag = f"{objective}_{sharing}_day{day}"
            lp_path = work / f"{tag}.lp"
            common = ["--config", args.config, "--objective", objective, "--sharing", sharing,
                      "--day", str(day)]
            subprocess.run([args.lecopt, "export-lp", *common, "--out", str(lp_path)], check=True)
            objective_value, values = solve_with_highs(highspy, lp_path)
            sol_path = work / f"{tag}.sol"
            with open(sol_path, "w") as out:
                for name, value in values.items():
                    # Snap binaries HiGHS reports within its integrality tolerance.
                    if abs(value - round(value)) < 1e-9:
                        value = float(round(value))
                    out.write(f"{name} {value!r}\n")
            verify = subprocess.run([args.lecopt, "verify", *common, "--solution", str(sol_path)],
                                    capture_output=True, text=True)
            ok = verify.returncode == 0
            failures += 0 if ok else 1
            print(f"{'PASS' if ok else 'FAIL'}  {tag}: HiGHS objective {objective_value:.9g}")
            if not ok:
                print(verify.stdout + verify.stderr)
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
