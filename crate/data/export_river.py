"""Export River's binary benchmark streams to CSV plus a matching schema.

    pip install river
    python data/export_river.py [phishing elec2 bananas smtp]

Writes <name>.csv and <name>.schema next to this script. Features keep
River's order and names; the label column is `class` with tokens True/False.
"""

import csv
import sys
from pathlib import Path

from river import datasets

STREAMS = {
    "phishing": datasets.Phishing,
    "elec2": datasets.Elec2,
    "bananas": datasets.Bananas,
    "smtp": datasets.SMTP,
}


def export(name: str, out_dir: Path) -> None:
    rows = list(STREAMS[name]())
    features = list(rows[0][0].keys())
    with open(out_dir / f"{name}.csv", "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(features + ["class"])
        for x, y in rows:
            w.writerow([x[k] for k in features] + [str(bool(y))])
    (out_dir / f"{name}.schema").write_text(
        f"name      = {name}\n"
        f"file      = {name}.csv\n"
        f"features  = {', '.join(features)}\n"
        "label     = class\n"
        "positive  = True\n"
        "negative  = False\n"
    )
    print(f"{name}: {len(rows)} rows, {len(features)} features")


if __name__ == "__main__":
    here = Path(__file__).resolve().parent
    for name in sys.argv[1:] or list(STREAMS):
        export(name, here)
