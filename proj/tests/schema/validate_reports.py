"""Runs the CLI on a small simulated corpus and validates every JSON output
against the schemas shipped in docs/."""

import json
import pathlib
import shutil
import subprocess
import sys

import jsonschema


def main() -> int:
    binary, docs, work = sys.argv[1], pathlib.Path(sys.argv[2]), pathlib.Path(sys.argv[3])
    shutil.rmtree(work, ignore_errors=True)
    work.mkdir(parents=True)

    def cli(*args: str) -> None:
        subprocess.run([binary, *args], check=True, stderr=subprocess.DEVNULL)

    data = work / "data"
    cli("simulate", "--labels", "4", "--dim", "8", "--instances", "200", "--seed", "3",
        "--subjective", "0.1", "--out", str(data))
    j, e = str(data / "judgments.jsonl"), str(data / "embeddings.bin")
    cli("audit", "-j", j, "-e", e, "--metric", "both", "--out", str(work / "audit_both.json"))
    cli("audit", "-j", j, "--out", str(work / "audit_entropy.json"))
    cli("filter", "-j", j, "--strategy", "entropy", "--fraction", "0.2", "--out", str(work / "ent.jsonl"))
    cli("filter", "-j", j, "--strategy", "random_judgments", "--fraction", "0.2", "--seed", "4",
        "--out", str(work / "rnd.jsonl"))
    cli("evaluate", "-j", j, "-e", e, "--strategy", "silhouette", "--fraction", "0.1", "--seed", "2",
        "--out", str(work / "eval.json"))
    cli("sweep", "-j", j, "-e", e, "--strategies", "entropy,random_instances", "--fractions", "0,0.2,1",
        "--seeds", "2", "--seed", "5", "--out-csv", str(work / "sweep.csv"))

    checks = {
        "audit_report": ["audit_both.json", "audit_entropy.json"],
        "removal_log": ["ent.removal.json", "rnd.removal.json"],
        "sweep_result": ["eval.json", "sweep.json"],
        "noise_mask": ["data/mask.json"],
    }
    failures = 0
    for schema_name, files in checks.items():
        schema = json.loads((docs / f"{schema_name}.schema.json").read_text())
        jsonschema.Draft202012Validator.check_schema(schema)
        validator = jsonschema.Draft202012Validator(schema)
        for name in files:
            errors = list(validator.iter_errors(json.loads((work / name).read_text())))
            for err in errors[:5]:
                print(f"{name}: {err.json_path}: {err.message}")
            failures += bool(errors)
            print(f"{'ok  ' if not errors else 'FAIL'} {name} against {schema_name}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
