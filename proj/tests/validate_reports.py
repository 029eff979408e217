import json
import subprocess
import sys
import tempfile
from pathlib import Path

import jsonschema

cli, schema_path, data_dir = sys.argv[1], Path(sys.argv[2]), Path(sys.argv[3])
schema = json.loads(schema_path.read_text())
validator = jsonschema.Draft202012Validator(schema)

runs = [
    ["classify", "cone-clifford?r=0.7071&n=4"],
    ["verify", "rot-hypcyl?r=1&n=5", "--timing"],
    ["classify", "cyl-spiral", "--samples", "12"],
    ["verify", "graph", "--seed", "3"],
    ["verify", str(data_dir / "perturbed_clifford_cone.json")],
    ["classify", str(data_dir / "rotational_hypcyl.json")],
]

failures = 0
with tempfile.TemporaryDirectory() as tmp:
    for i, args in enumerate(runs):
        out = Path(tmp) / f"r{i}.json"
        proc = subprocess.run([cli, *args, "--out", str(out)], capture_output=True, text=True)
        report = json.loads(out.read_text())
        errors = sorted(validator.iter_errors(report), key=str)
        ok = not errors and report["exit_code"] == proc.returncode
        print(("ok   " if ok else "FAIL ") + " ".join(args))
        for e in errors:
            print("     ", e.message)
        failures += not ok

listing = json.loads(subprocess.run([cli, "catalog", "--json"], capture_output=True, text=True, check=True).stdout)
for entry in listing:
    if set(entry) != {"name", "description", "branch", "params", "curve_based", "negative_control"}:
        print("FAIL catalog entry fields", entry.get("name"))
        failures += 1

sys.exit(1 if failures else 0)
