"""Runs every polykin subcommand and validates its JSON output against schemas/."""

import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema
from referencing import Registry, Resource


def load_registry(schema_dir):
    schemas = {}
    for p in sorted(schema_dir.glob("*.schema.json")):
        s = json.loads(p.read_text())
        jsonschema.Draft202012Validator.check_schema(s)
        schemas[p.name] = s
    registry = Registry().with_resources((s["$id"], Resource.from_contents(s)) for s in schemas.values())
    return schemas, registry


def run(cli, args):
    r = subprocess.run([cli, *args], capture_output=True, text=True, check=False)
    if r.returncode != 0:
        raise SystemExit(f"{' '.join(args)} exited {r.returncode}: {r.stderr}")
    return [json.loads(line) for line in r.stdout.splitlines() if line.strip()]


def main():
    cli, root = pathlib.Path(sys.argv[1]), pathlib.Path(sys.argv[2])
    schemas, registry = load_registry(root / "schemas")

    def validate(name, doc):
        jsonschema.Draft202012Validator(schemas[name], registry=registry).validate(doc)

    checked = 0
    for cfg in sorted((root / "data" / "configs").glob("*.json")):
        validate("config.schema.json", json.loads(cfg.read_text()))
        checked += 1
    validate("manifest.schema.json", json.loads((root / "data" / "table1" / "manifest.json").read_text()))
    checked += 1

    with tempfile.TemporaryDirectory() as tmp:
        t = pathlib.Path(tmp)
        for doc in run(cli, ["check", "--delta", "2.017", "--zeta", "0.537", "--hyp", "H1,H2,H3,H4,H5"]):
            validate("verdict.schema.json", doc)
            checked += 1
        for doc in run(cli, ["check", "--deltas", "2,3", "--zeta", "0.5", "--hyp", "H6,H7"]):
            validate("verdict.schema.json", doc)
            checked += 1
        for kind in ("k2", "k1norm"):
            for doc in run(cli, ["diag", "--kind", kind, "--delta", "3", "--zeta", "0.5", "--out", str(t / f"{kind}.csv")]):
                validate("diag_summary.schema.json", doc)
                checked += 1
        cfg = json.loads((root / "data" / "configs" / "two_temperature_delta2.json").read_text())
        cfg["relax"].update({"N": 2000, "t_end": 0.5})
        (t / "small.json").write_text(json.dumps(cfg))
        for doc in run(cli, ["relax", "--config", str(t / "small.json"), "--out", str(t / "ts.csv")]):
            validate("relax_summary.schema.json", doc)
            checked += 1
        for doc in run(cli, ["fit", "--manifest", str(root / "data" / "table1" / "manifest.json"), "--out", str(t / "fit.csv")]):
            validate("fit_summary.schema.json", doc)
            checked += 1
        for doc in run(cli, ["table1", "--out", str(t / "t1.csv")]):
            validate("fit_summary.schema.json", doc)
            checked += 1

    print(f"validated {checked} documents")


if __name__ == "__main__":
    main()
