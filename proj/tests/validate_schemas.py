"""Runs the pyts binary over the corpus and validates every JSON output
against the shipped schemas.

    python3 validate_schemas.py <pyts binary> <repo root>
"""

import json
import pathlib
import subprocess
import sys

from jsonschema import Draft202012Validator
from referencing import Registry, Resource


def load_registry(schema_dir):
    resources = []
    schemas = {}
    for path in sorted(schema_dir.glob("*.schema.json")):
        doc = json.loads(path.read_text())
        Draft202012Validator.check_schema(doc)
        schemas[path.name] = doc
        resources.append((doc["$id"], Resource.from_contents(doc)))
    return schemas, Registry().with_resources(resources)


def run(binary, *args):
    proc = subprocess.run([binary, *args], capture_output=True, text=True)
    return proc.returncode, proc.stdout


def main():
    binary, root = sys.argv[1], pathlib.Path(sys.argv[2])
    schemas, registry = load_registry(root / "schemas")
    corpus = root / "corpus"
    data = root / "tests" / "data"

    def validator(name):
        return Draft202012Validator(schemas[name], registry=registry)

    failures = 0
    checked = 0

    def validate(name, doc, what):
        nonlocal failures, checked
        checked += 1
        errors = list(validator(name).iter_errors(doc))
        for e in errors[:3]:
            print(f"FAIL {what}: {e.message} at {list(e.absolute_path)}")
        failures += bool(errors)

    for src in sorted(corpus.glob("*.py")):
        code, out = run(binary, "elaborate", "--format", "json", str(src))
        if code != 0:
            print(f"FAIL elaborate {src.name}: exit {code}")
            failures += 1
            continue
        validate("elaboration.schema.json", json.loads(out), f"elaborate {src.name}")
        code, out = run(binary, "relations", "--format", "json", str(src))
        validate("relation_edge.schema.json", json.loads(out), f"relations {src.name}")

    for subject in ("Sub1", "Sub2", "Sub3"):
        _, out = run(binary, "check", "--format", "json", "--subject", subject, "--target", "MyProtocol",
                     str(corpus / "protocols.py"))
        validate("conformance_report.schema.json", json.loads(out), f"check {subject}")

    _, out = run(binary, "dump-prelude", "--format", "json")
    for d in json.loads(out)["definitions"]:
        validate("definition.schema.json", d, f"prelude {d['name']}")

    for oracle in sorted(data.glob("*.oracle.json")):
        validate("oracle.schema.json", json.loads(oracle.read_text()), oracle.name)
        src = corpus / oracle.name.replace(".oracle.json", ".py")
        _, out = run(binary, "oracle-diff", "--format", "json", "--oracle", str(oracle), str(src))
        validate("oracle_diff.schema.json", json.loads(out), f"oracle-diff {src.name}")

    print(f"{checked} documents checked, {failures} invalid")
    return 1 if failures or checked == 0 else 0


if __name__ == "__main__":
    sys.exit(main())
