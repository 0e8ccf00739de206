#!/usr/bin/env python3
"""Drive the command-line interface end to end from Python.

Writes a config file, runs a criterion check, a parameter sweep over the
entropy shift, and an identity-verification run, then prints the report
files the CLI produced.
"""

import json
import pathlib
import tempfile

from blowup_lab.cli import main

CONFIG = """\
[model]
gamma = 2.0
dim = 1
regime = euler

[profile]
density = gaussian
entropy = 0.0

[solver]
t_end = 0.2
snapshot_every = 0.05

[sweep]
parameter = entropy_shift
start = 0
stop = 8
count = 5
"""

with tempfile.TemporaryDirectory() as tmp:
    tmp = pathlib.Path(tmp)
    cfg = tmp / "run.cfg"
    cfg.write_text(CONFIG)

    print("=== blowup-lab check ===")
    code = main(["check", "--config", str(cfg), "--out", str(tmp / "check")])
    report = json.loads((tmp / "check" / "report.json").read_text())
    crit = report["payload"]["criterion"]
    print(f"exit {code}: lhs={crit['lhs']:.6g} rhs={crit['rhs']:.6g} "
          f"satisfied={crit['satisfied']}")

    print("\n=== blowup-lab sweep over the entropy shift ===")
    code = main(["sweep", "--config", str(cfg), "--out", str(tmp / "sweep"),
                 "--workers", "4"])
    summary = json.loads((tmp / "sweep" / "report.json").read_text())
    for child in summary["payload"]["children"]:
        print(f"exit {code}: entropy_shift={child['value']:<4} "
              f"satisfied={child['satisfied']}")

    print("\n=== blowup-lab verify ===")
    code = main(["verify", "--config", str(cfg), "--out", str(tmp / "verify")])
    report = json.loads((tmp / "verify" / "report.json").read_text())
    print(f"exit {code}: residuals "
          f"{json.dumps(report['payload']['identities']['residuals'], indent=2)}")
    series = (tmp / "verify" / "series.csv").read_text().splitlines()
    print(f"series.csv: {len(series) - 1} rows, header: {series[0]}")
