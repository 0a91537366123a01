"""Run the CLI with --format json and validate each output against its schema."""
import json
import pathlib
import subprocess
import sys

import jsonschema

CASES = [
    ("zeros", ["zeros", "--k", "2", "--n", "4", "--t", "0.5", "--format", "json"]),
    ("zeros", ["zeros", "--k", "3", "--n", "3", "--t", "1/5", "--tree", "full", "--format", "json"]),
    ("partition", ["partition", "--k", "2", "--n", "2", "--t", "1/5", "--format", "json"]),
    ("measure", ["measure", "--k", "2", "--n", "8", "--t", "0.4", "--phi-grid", "-3:3:0.5", "--format", "json"]),
    ("measure", ["measure", "--k", "2", "--n", "8", "--t", "0.4", "--kind", "histogram", "--bins", "16",
                 "--format", "json"]),
    ("phi_e", ["phi-e", "--k", "2", "--t-grid", "0.3:0.9:0.1", "--format", "json"]),
    ("spectra", ["spectra", "--k", "2", "--t", "0.2", "--phi", "1.0", "--n", "10", "--depth", "6",
                 "--birkhoff-length", "2000", "--birkhoff-seeds", "4"]),
    ("kappa", ["spectra", "--k", "2", "--t", "0.5", "--phi-grid", "-3:3:0.5", "--format", "json"]),
    ("radial", ["free-energy", "--k", "2", "--n", "8", "--t", "0.3", "--phi", "1.0", "--r-grid", "0.5:1.5:0.25",
                "--format", "json"]),
    ("singular", ["free-energy", "--k", "2", "--n", "12", "--t", "0.2", "--phi", "2.0", "--singular",
                  "--delta0", "0.5", "--kappa-hat", "1.2", "--format", "json"]),
    ("verify", ["verify", "--quick"]),
]


def main() -> int:
    exe, schema_dir = sys.argv[1], pathlib.Path(sys.argv[2])
    failures = 0
    for name, args in CASES:
        schema = json.loads((schema_dir / f"{name}.schema.json").read_text())
        jsonschema.Draft202012Validator.check_schema(schema)
        proc = subprocess.run([exe, *args], capture_output=True, text=True)
        if proc.returncode != 0:
            print(f"FAIL {' '.join(args)}: exit {proc.returncode}\n{proc.stderr}")
            failures += 1
            continue
        try:
            jsonschema.validate(json.loads(proc.stdout), schema)
            print(f"ok   {name}: {' '.join(args)}")
        except jsonschema.ValidationError as e:
            print(f"FAIL {name}: {e.message}")
            failures += 1
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
