#!/usr/bin/env python3
"""End-to-end checks of the bergman-lab command line.

usage: test_cli.py <bergman-lab binary> <schema dir>
"""
import json
import os
import subprocess
import sys
import tempfile
import unittest
from pathlib import Path

try:
    import jsonschema
except ImportError:  # validation tests are skipped without it
    jsonschema = None

BIN = None
SCHEMAS = None


def run(*args, env=None, check=True):
    proc = subprocess.run([BIN, *args], capture_output=True, text=True, env=env)
    if check and proc.returncode != 0:
        raise AssertionError(f"{args} exited {proc.returncode}: {proc.stderr}")
    return proc


def report(*args, **kw):
    return json.loads(run(*args, **kw).stdout)


# cheap invocations, one or more per subcommand
CASES = {
    "a2": [["--weight", "alpha:0.5", "--refinements", "2"]],
    "lattice": [[]],
    "kernel-bounds": [[]],
    "space-report": [[]],
    "toeplitz": [["--weight", "alpha:0", "--symbol", "dsl:r^2", "--N", "3"]],
    "schatten": [["--symbol", "dsl:(1-r^2)^2"]],
    "berezin": [["--symbol", "dsl:r^2"], ["--flavor", "analytic", "--symbol", "dsl:r^2"]],
    "carleson": [["--symbol", "dsl:r^2"]],
    "reverse-carleson": [[]],
    "frame": [[]],
    "atomic": [[]],
    "invertibility": [["--symbol", "dsl:1-r^2"], ["--coeffs", "0;1"]],
    "block-check": [[], ["--symbol", "re"]],
    "suite": [["--only", "11"]],
}


class Examples(unittest.TestCase):
    def test_toeplitz_diagonal(self):
        r = report("toeplitz", "--weight", "alpha:0", "--symbol", "dsl:r^2", "--N", "3")
        want = [1 / 2, 2 / 3, 3 / 4, 4 / 5, 2 / 3, 3 / 4, 4 / 5]
        got = r["result"]["diagonal"]
        self.assertEqual(len(got), len(want))
        for g, w in zip(got, want):
            self.assertAlmostEqual(g, w, places=10)

    def test_a2_has_estimate_and_trend(self):
        r = report("a2", "--weight", "alpha:0.5", "--refinements", "3")["result"]
        self.assertGreater(r["estimate"], 1.0)
        self.assertEqual(len(r["refinement_trend"]["levels"]), 3)
        self.assertEqual(r["refinement_trend"]["verdict"], "stable")

    def test_report_embeds_config(self):
        r = report("toeplitz", "--symbol", "dsl:r^2", "--N", "3")
        self.assertEqual(r["config"]["subcommand"], "toeplitz")
        self.assertEqual(r["config"]["N"], 3)
        self.assertEqual(r["config"]["symbol"], "dsl:r^2")


class Errors(unittest.TestCase):
    def test_missing_config(self):
        p = run("run", "--config", "definitely-missing.json", check=False)
        self.assertEqual(p.returncode, 2)
        self.assertIn("missing", p.stderr)

    def test_bad_flag_value(self):
        self.assertEqual(run("toeplitz", "--N", "x", check=False).returncode, 2)

    def test_unknown_flag(self):
        self.assertEqual(run("toeplitz", "--bogus", "1", check=False).returncode, 2)

    def test_unknown_subcommand(self):
        self.assertEqual(run("nonsense", check=False).returncode, 2)

    def test_bad_symbol(self):
        p = run("toeplitz", "--symbol", "dsl:r^", check=False)
        self.assertEqual(p.returncode, 2)
        self.assertTrue(p.stderr.strip())

    def test_unknown_config_key(self):
        with tempfile.TemporaryDirectory() as d:
            cfg = Path(d) / "c.json"
            cfg.write_text(json.dumps({"subcommand": "space-report", "nope": 1}))
            self.assertEqual(run("run", "--config", str(cfg), check=False).returncode, 2)


class Determinism(unittest.TestCase):
    def test_identical_bytes(self):
        for sub, argsets in CASES.items():
            for args in argsets:
                with self.subTest(sub=sub, args=args):
                    a = run(sub, *args).stdout
                    b = run(sub, *args).stdout
                    self.assertEqual(a, b)

    def test_thread_count_does_not_change_output(self):
        env = dict(os.environ, BERGMAN_LAB_THREADS="1")
        for sub in ("space-report", "berezin", "frame"):
            args = CASES[sub][0]
            with self.subTest(sub=sub):
                self.assertEqual(run(sub, *args).stdout, run(sub, *args, env=env).stdout)

    def test_config_round_trip(self):
        first = run("toeplitz", "--symbol", "dsl:r^2", "--N", "4").stdout
        with tempfile.TemporaryDirectory() as d:
            cfg = Path(d) / "c.json"
            cfg.write_text(json.dumps(json.loads(first)["config"]))
            again = run("run", "--config", str(cfg)).stdout
        self.assertEqual(first, again)

    def test_output_file(self):
        with tempfile.TemporaryDirectory() as d:
            out = Path(d) / "r.json"
            run("space-report", "--output", str(out))
            # the config records the output path, the result must match
            self.assertEqual(json.loads(out.read_text())["result"], report("space-report")["result"])


class Csv(unittest.TestCase):
    def test_csv_rows(self):
        text = run("toeplitz", "--symbol", "dsl:r^2", "--N", "3", "--format", "csv").stdout
        lines = [ln for ln in text.splitlines() if ln]
        self.assertGreater(len(lines), 1)
        width = len(lines[0].split(","))
        for ln in lines[1:]:
            self.assertEqual(len(ln.split(",")), width)


@unittest.skipIf(jsonschema is None, "jsonschema not installed")
class Schemas(unittest.TestCase):
    def test_every_subcommand_validates(self):
        for sub, argsets in CASES.items():
            schema = json.loads((SCHEMAS / f"{sub}.schema.json").read_text())
            for args in argsets:
                with self.subTest(sub=sub, args=args):
                    jsonschema.validate(report(sub, *args), schema)

    def test_schema_rejects_wrong_subcommand(self):
        schema = json.loads((SCHEMAS / "lattice.schema.json").read_text())
        with self.assertRaises(jsonschema.ValidationError):
            jsonschema.validate(report("space-report"), schema)


if __name__ == "__main__":
    if len(sys.argv) < 3:
        sys.exit(__doc__)
    BIN = sys.argv[1]
    SCHEMAS = Path(sys.argv[2])
    unittest.main(argv=sys.argv[:1], verbosity=2)
