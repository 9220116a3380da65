"""End-to-end checks of the hkq executable: exit codes, schema validity and
byte-stable golden reports."""

import argparse
import json
import os
import subprocess
import sys
import tempfile
from pathlib import Path

import jsonschema


def strip_timing(node):
    if isinstance(node, dict):
        return {k: strip_timing(v) for k, v in node.items() if k != "timing_ms"}
    if isinstance(node, list):
        return [strip_timing(v) for v in node]
    return node


class Checker:
    def __init__(self, hkq, schema):
        self.hkq = hkq
        self.validator = jsonschema.Draft202012Validator(schema)
        self.failures = []

    def run(self, args, env=None):
        full_env = dict(os.environ)
        full_env.pop("HKQ_MAX_BASIS", None)
        full_env.pop("HKQ_MAX_DEGREE", None)
        full_env.update(env or {})
        proc = subprocess.run([self.hkq, *args], capture_output=True, env=full_env, timeout=600)
        return proc.returncode, proc.stdout, proc.stderr

    def expect(self, cond, what):
        print(("ok   " if cond else "FAIL ") + what)
        if not cond:
            self.failures.append(what)

    def report(self, args, code, env=None):
        rc, out, err = self.run(args, env)
        label = "hkq " + " ".join(args)
        self.expect(rc == code, f"{label}: exit {rc}, want {code} ({err.decode().strip()})")
        try:
            doc = json.loads(out)
        except json.JSONDecodeError as e:
            self.expect(False, f"{label}: output is not JSON ({e})")
            return None, out
        errors = sorted(self.validator.iter_errors(doc), key=str)
        self.expect(not errors, f"{label}: schema valid" + (f" ({errors[0].message})" if errors else ""))
        self.expect(doc.get("exit_code") == code, f"{label}: exit_code field is {code}")
        return doc, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--hkq", required=True)
    ap.add_argument("--schema", required=True)
    ap.add_argument("--golden", required=True)
    opts = ap.parse_args()

    c = Checker(opts.hkq, json.loads(Path(opts.schema).read_text()))
    golden = Path(opts.golden)

    for xi in ["1,1,1", "1,1,1,2", "1,2,4,8,16"]:
        path = golden / ("report_" + xi.replace(",", "_") + ".json")
        expected = path.read_bytes()
        first, _ = c.report(["report", "--xi", xi], 0)
        second, _ = c.report(["report", "--xi", xi], 0)
        c.expect(first is not None and strip_timing(first) == strip_timing(second), f"report {xi}: repeat runs agree")
        c.expect(first is not None and strip_timing(first) == json.loads(expected), f"report {xi}: matches golden")
        _, raw = c.report(["report", "--xi", xi, "--omit-timing"], 0)
        c.expect(raw == expected, f"report {xi}: --omit-timing output is byte-identical to golden")

    doc, _ = c.report(["report", "--xi", "1,1,1,2"], 0)
    if doc:
        c.expect(doc["summary"]["betti"] == [1, 4], "report 1,1,1,2: betti [1,4]")
        c.expect(doc["summary"]["shorts"] == 8, "report 1,1,1,2: 8 shorts")
        c.expect(doc["summary"]["certificates"] == 7, "report 1,1,1,2: 7 certificates")
        c.expect(all(s["passed"] for s in doc["stages"]), "report 1,1,1,2: all stages pass")

    doc, raw = c.report(["shorts", "--xi", "1,1,1,1", "--omit-timing"], 3)
    if doc:
        c.expect(doc["error"]["witness"] == "{1,2}", "shorts 1,1,1,1: witness {1,2}")
        c.expect(raw == (golden / "shorts_1_1_1_1.json").read_bytes(), "shorts 1,1,1,1: matches golden")
    doc, _ = c.report(["report", "--xi", "1,1,1,1"], 3)
    doc, _ = c.report(["shorts", "--xi", "1,2,4,8"], 0)
    if doc:
        c.expect(doc["summary"]["shorts"] == 8, "shorts 1,2,4,8: 8 shorts")

    for bad in ["1.5,1,1", "1,1", "1,-1,1", "1,a,1", "1,1/0,1"]:
        c.report(["shorts", "--xi", bad], 2)
    c.report(["report", "--xi", "1,1,1,2", "--max-basis", "5"], 4)
    c.report(["report", "--xi", "1,1,1,2"], 4, env={"HKQ_MAX_BASIS": "5"})
    c.report(["certify", "--xi", "1,1,1,2", "--subset", "{1,4}"], 2)
    c.report(["localize-demo", "--fixture", "nonexistent"], 2)

    doc, _ = c.report(["localize-demo", "--fixture", "segre"], 0)
    if doc:
        segre = doc["summary"]["maps"]["segre"]
        c.expect(segre == {"rationalized_iso": True, "integral_surjective": False},
                 "localize-demo segre: rationalized iso, not integrally surjective")
    for name in ["line", "product"]:
        c.report(["localize-demo", "--fixture", name], 0)

    doc, _ = c.report(["certify", "--xi", "1,1,1,2"], 0)
    if doc:
        items = doc["stages"][0]["data"]["items"]
        c.expect(len(items) == 7 and all(i["reverified_after_reload"] for i in items),
                 "certify 1,1,1,2: 7 certificates survive a reload")
    c.report(["certify", "--xi", "1,2,4,8", "--subset", "{1,3}", "--force-fallback"], 0)
    doc, _ = c.report(["betti", "--xi", "1,2,4,8,16,32"], 0)
    if doc:
        c.expect(doc["summary"]["betti"] == [1, 6, 16, 26], "betti n=6: [1,6,16,26]")
    c.report(["present", "--xi", "1,1,1,2"], 0)
    c.report(["verify", "--xi", "1,2,4,8", "--no-second-iso"], 0)

    rc, out, _ = c.run(["report", "--xi", "1,1,1,2", "--format", "text"])
    c.expect(rc == 0 and b"betti: [1,4]" in out, "text format renders the same data")
    with tempfile.TemporaryDirectory() as tmp:
        target = Path(tmp) / "r.json"
        rc, out, _ = c.run(["shorts", "--xi", "1,2,4", "--out", str(target)])
        c.expect(rc == 0 and out == b"" and json.loads(target.read_text())["passed"], "--out writes the report")
    rc, _, _ = c.run(["shorts"])
    c.expect(rc == 2, "missing --xi is a usage error")
    rc, _, _ = c.run(["shorts", "--xi", "1,1,1", "--format", "yaml"])
    c.expect(rc == 2, "unknown format is a usage error")
    rc, _, _ = c.run(["--help"])
    c.expect(rc == 0, "--help exits 0")

    if c.failures:
        print(f"{len(c.failures)} check(s) failed", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
