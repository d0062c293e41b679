#!/usr/bin/env python3
"""External backend bridge: solves an LP file with HiGHS and writes the
'status <word>' / '<name> <value>' solution file flexccs reads back.

  FLEXCCS_EXTERNAL_SOLVER="python3 tools/highs_solve.py {lp} {sol} --gap {gap} --time {time}"
"""
import argparse
import sys

import highspy


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("lp")
    ap.add_argument("sol")
    ap.add_argument("--gap", type=float, default=1e-4)
    ap.add_argument("--time", type=float, default=0.0)
    args = ap.parse_args()

    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    h.setOptionValue("mip_rel_gap", args.gap)
    if args.time > 0:
        h.setOptionValue("time_limit", args.time)
    if h.readModel(args.lp) != highspy.HighsStatus.kOk:
        print(f"highs_solve: cannot read {args.lp}", file=sys.stderr)
        return 1
    h.run()
    ms = h.getModelStatus()
    S = highspy.HighsModelStatus
    info = h.getInfo()
    has_x = info.primal_solution_status == 2  # feasible
    if ms == S.kOptimal:
        word = "optimal"
    elif ms == S.kInfeasible:
        word = "infeasible"
    elif ms in (S.kUnbounded, S.kUnboundedOrInfeasible):
        word = "unbounded"
    elif ms in (S.kTimeLimit, S.kIterationLimit, S.kSolutionLimit) and has_x:
        word = "limit"
    else:
        word = "error"

    with open(args.sol, "w") as f:
        f.write(f"status {word}\n")
        if word in ("optimal", "limit"):
            lp = h.getLp()
            x = h.getSolution().col_value
            for name, v in zip(lp.col_names_, x):
                if v != 0.0:
                    f.write(f"{name} {v!r}\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
