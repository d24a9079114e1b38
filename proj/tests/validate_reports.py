"""Generate one report of every kind with the ssgp tool and validate it against the schema."""
import json
import pathlib
import subprocess
import sys
import tempfile

try:
    import jsonschema
except ImportError:
    print("jsonschema not installed; skipping")
    sys.exit(77)

tool, schema_path = sys.argv[1], sys.argv[2]
schema = json.loads(pathlib.Path(schema_path).read_text())
jsonschema.Draft202012Validator.check_schema(schema)

with tempfile.TemporaryDirectory() as tmp:
    out = pathlib.Path(tmp)
    cfg = out / "c.json"
    cfg.write_text(json.dumps({"params": {"hurst": 0.7, "gamma": 0.2}, "n": 32,
                               "replications": 60, "output_dir": str(out / "clt")}))
    runs = [
        ["--config", str(cfg), "clt"],
        ["--format", "json", "--out", str(out), "check-decomposition", "--H", "0.5",
         "--gamma", "0.5", "--points", "3"],
        ["--format", "json", "--out", str(out), "converge", "--ns", "16,32"],
        ["--format", "json", "--out", str(out), "bounds", "--ns", "4,8"],
        ["--format", "json", "--out", str(out), "sigma2", "--alpha", "1.2", "--q", "2"],
        ["--format", "json", "--out", str(out), "cov", "--s", "1", "--t", "2"],
        ["--format", "json", "--out", str(out), "simulate", "--n", "4", "--M", "2"],
        ["--format", "json", "--out", str(out), "hermvar", "--n", "8"],
    ]
    for args in runs:
        subprocess.run([tool, *args], check=True, stdout=subprocess.DEVNULL)
    reports = sorted(out.rglob("*.json"))
    reports = [p for p in reports if p.name != "c.json"]
    kinds = set()
    for path in reports:
        doc = json.loads(path.read_text())
        jsonschema.validate(doc, schema)
        kinds.add(doc["kind"])
        print(f"valid: {path.name} ({doc['kind']})")
    expected = {"clt_experiment", "decomposition_check", "variance_convergence", "bound_check",
                "sigma2", "covariance", "paths", "hermite_variation"}
    missing = expected - kinds
    if missing:
        print("missing report kinds:", sorted(missing))
        sys.exit(1)
