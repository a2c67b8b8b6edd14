"""Runs `shiftk verify` and validates its JSON report against the shipped schema."""

import json
import subprocess
import sys

import jsonschema


def main(binary, schema_path):
    proc = subprocess.run([binary, "verify"], capture_output=True, text=True)
    if proc.returncode != 0:
        print(proc.stderr, file=sys.stderr)
        return 1
    with open(schema_path) as fh:
        schema = json.load(fh)
    report = json.loads(proc.stdout)
    jsonschema.validate(report, schema)
    print(f"verify report valid: {len(report['checks'])} checks")
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1], sys.argv[2]))
