#!/usr/bin/env python3
"""Validate bundled fixtures and CLI outputs against schemas/v1."""
import json
import pathlib
import subprocess
import sys

import jsonschema
from referencing import Registry, Resource

schema_dir = pathlib.Path(sys.argv[1])
fixture_dir = pathlib.Path(sys.argv[2])
cli = sys.argv[3]

schemas = {p.name: json.loads(p.read_text()) for p in schema_dir.glob("*.json")}
registry = Registry().with_resources((s["$id"], Resource.from_contents(s)) for s in schemas.values())


def validator(name):
    return jsonschema.Draft202012Validator(schemas[name], registry=registry)


def kind_of(doc):
    if "question" in doc:
        return "query"
    if "complex" in doc:
        return "homology"
    return "diagram"


outputs = {"query": ("decide", "verdict.json"), "diagram": ("diagram-normalize", "normalize.json")}
failures = 0
checked = 0
for path in sorted(fixture_dir.glob("*.json")):
    doc = json.loads(path.read_text())
    kind = kind_of(doc)
    for err in validator(kind + ".json").iter_errors(doc):
        failures += 1
        print(f"{path.name}: input {err.json_path}: {err.message}")
    if kind in outputs:
        sub, out_schema = outputs[kind]
        run = subprocess.run([cli, sub, str(path), "--trace"] if kind == "diagram" else [cli, sub, str(path)],
                             capture_output=True, text=True)
        out = json.loads(run.stdout)
        for err in validator(out_schema).iter_errors(out):
            failures += 1
            print(f"{path.name}: output {err.json_path}: {err.message}")
    checked += 1

bad = subprocess.run([cli, "decide", str(schema_dir / "error.json")], capture_output=True, text=True)
for err in validator("error.json").iter_errors(json.loads(bad.stdout)):
    failures += 1
    print(f"error document: {err.json_path}: {err.message}")

print(f"{checked} fixtures checked, {failures} schema violations")
sys.exit(1 if failures else 0)
