"""theta_S over the bundled field table against c/sqrt(3) T1 T2.

Only fields with a certified maximal order enter, so the report is the
maximal-order slice of theta_S.  Ratios are printed, not judged.
"""

import argparse
from pathlib import Path

from pgtlab import experiments as ex
from pgtlab import formats

TABLE = Path(formats.__file__).parent / "data" / "cubic_fields_1956.csv"


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--table", type=Path, default=TABLE)
    ap.add_argument("--S", default="2,3")
    ap.add_argument("--grid", default="2,4,6,8,10")
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()
    S = tuple(int(v) for v in args.S.split(","))
    axis = tuple(float(v) for v in args.grid.split(","))
    records, rejected = formats.ingest_field_table(args.table, S)
    print(f"# {len(records)} fields in C(S), {len(rejected)} rows left out")
    report = ex.run_theta_experiment(records, ex.ThetaConfig(S, (axis, axis), workers=args.workers))
    print(formats.dumps_ratio_report(report), end="")


if __name__ == "__main__":
    main()
