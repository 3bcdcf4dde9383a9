#!/usr/bin/env python3
"""Solve an LP file with HiGHS and write the placer's solution format.

Usage: highs_solve.py <model.lp> <solution.txt>

Used as `sfc-placer solve --backend "external:python3 tools/highs_solve.py"`.
The output holds `=obj= <value>` followed by one `<var> <value>` line per
nonzero column, or the single line `=infeasible=`.
"""
import os
import sys

import highspy


def main() -> int:
    if len(sys.argv) != 3:
        print(__doc__.strip().splitlines()[2], file=sys.stderr)
        return 2
    lp_path, out_path = sys.argv[1], sys.argv[2]
    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    h.setOptionValue("mip_rel_gap", 0.0)
    h.setOptionValue("mip_abs_gap", 0.0)
    wall_ms = os.environ.get("SFC_PLACER_MAX_WALL_MS")
    if wall_ms:
        h.setOptionValue("time_limit", int(wall_ms) / 1000.0)
    if h.readModel(lp_path) != highspy.HighsStatus.kOk:
        print(f"cannot read {lp_path}", file=sys.stderr)
        return 1
    h.run()
    status = h.getModelStatus()
    with open(out_path, "w") as out:
        if status == highspy.HighsModelStatus.kInfeasible:
            out.write("=infeasible=\n")
            return 0
        if status != highspy.HighsModelStatus.kOptimal:
            print(f"HiGHS stopped with {h.modelStatusToString(status)}", file=sys.stderr)
            return 1
        lp = h.getLp()
        values = h.getSolution().col_value
        out.write(f"=obj= {h.getInfo().objective_function_value!r}\n")
        for name, value in zip(lp.col_names_, values):
            if abs(value) > 1e-9:
                out.write(f"{name} {value!r}\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
