"""The command-line pipeline on a CSV file, end to end.

Everything the library does is also reachable through the ``qcorr`` command:
emit a seeded sample, estimate quantile correlations with intervals, run the
tail tests, and launch small campaigns.  This demo drives the CLI in-process
and shows the exact invocations to copy.
"""

import json
import tempfile
from pathlib import Path

from qcorr.cli import main

print(__doc__)

tmp = Path(tempfile.mkdtemp(prefix="qcorr_demo_"))
data = tmp / "rocket.csv"

print(f"$ qcorr sample --dgp rocket --n 8000 --seed 7 --out {data}")
main(["sample", "--dgp", "rocket", "--n", "8000", "--seed", "7", "--out", str(data)])
print(f"  wrote {data} ({sum(1 for _ in open(data)) - 1} rows)\n")

print(f"$ qcorr estimate {data} --tau 0.05 --tau 0.5 --tau 0.95 --density bh --level 0.9")
main(["estimate", str(data), "--tau", "0.05", "--tau", "0.5", "--tau", "0.95",
      "--density", "bh", "--level", "0.9"])

print(f"\n$ qcorr estimate {data} --tau 0.5 --compare-li --output json")
print("  (json output round-trips every float exactly)")
main(["estimate", str(data), "--tau", "0.5", "--compare-li", "--output", "json"])

print(f"\n$ qcorr tailtest {data} --tau 0.05 --tau 0.1 --density bh")
main(["tailtest", str(data), "--tau", "0.05", "--tau", "0.1", "--density", "bh"])

out = tmp / "campaign"
print(f"\n$ qcorr simulate --dgp normal --n 200 --tau 0.5 --reps 100 --density hk"
      f" --seed 5 --out {out}")
main(["simulate", "--dgp", "normal", "--n", "200", "--tau", "0.5", "--reps", "100",
      "--density", "hk", "--seed", "5", "--out", str(out)])
print("campaign csv:")
print((tmp / "campaign.csv").read_text())
