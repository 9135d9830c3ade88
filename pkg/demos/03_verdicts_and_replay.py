"""
Verdicts, scans and certificate replay
======================================

Runs the full pipeline on a few cases, scans k=2, writes a certificate to
disk and replays it through the command line entry point.
"""

import json
import tempfile
from pathlib import Path

from fillcert import cli, decide, scan

for n, k in [(3, 2), (4, 2), (2, 2), (4, 3), (53, 3), (9, 3)]:
    v = decide(n, k)
    print(f"n={n:>2} k={k}: {v.outcome:13s} {v.detail}")

rows = scan(range(3, 33), [2])
obstructed = [r["n"] for r in rows if r["outcome"] == "Obstructed"]
print("k=2 obstructed up to 32:", obstructed)

# A certificate is plain JSON; replay re-derives every step.
v = decide(4, 3)
doc = v.to_json()
print("certificate steps:", [s["rule"] for s in doc["steps"]])
with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "cert.json"
    path.write_text(v.dumps())
    print("replay exit code:", cli.main(["replay", str(path)]))

    doc["outcome"]["detail"] = "lens_direct_search"
    path.write_text(json.dumps(doc))
    print("tampered replay exit code:", cli.main(["replay", str(path)]))
