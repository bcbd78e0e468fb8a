"""End-to-end checks of the dirsup_cli binary. Usage: cli_test.py <path-to-cli>"""

import json
import math
import os
import subprocess
import sys
import tempfile
import unittest

CLI = None


def run(*args, check=True):
    proc = subprocess.run([CLI, *map(str, args)], capture_output=True, text=True)
    if check and proc.returncode != 0:
        raise AssertionError(f"{args} exited {proc.returncode}: {proc.stderr}")
    return proc


class CliTest(unittest.TestCase):
    def test_sieve(self):
        self.assertEqual(run("sieve", "--limit", 30).stdout.split(), "2 3 5 7 11 13 17 19 23 29".split())
        self.assertEqual(run("sieve", "--limit", 1000000, "--count").stdout.strip(), "78498")

    def test_psi(self):
        self.assertEqual(run("psi", "--n", 20, "--m", 3).stdout.strip(), "9")
        self.assertEqual(run("psi", "--n", 20, "--m", 3, "--members").stdout.split(),
                         "2 3 4 6 8 9 12 16 18".split())
        approx = float(run("psi", "--n", 1000000, "--m", 1000, "--dickman").stdout)
        self.assertAlmostEqual(approx / 1e6, 1 - math.log(2), places=12)

    def test_rho(self):
        self.assertEqual(run("rho", "--u", 0.5).stdout.strip(), "1.0")
        self.assertAlmostEqual(float(run("rho", "--u", 2).stdout), 1 - math.log(2), places=14)
        self.assertAlmostEqual(float(run("rho", "--u", 50, "--log").stdout),
                               math.log(6.7153344966801123137e-97), places=9)

    def test_bounds(self):
        lines = [json.loads(l) for l in run("bounds", "--n", 10000, "--tau", 25, "--sigma", 0).stdout.splitlines()]
        self.assertEqual(len(lines), 5)
        for rec in lines:
            self.assertIn("formula", rec)
            self.assertTrue(math.isfinite(rec["value"]))
        l1 = lines[-1]
        # at sigma = 0 the l1 bound is |E_25(10^4)| = Psi(10^4, p_25)
        self.assertEqual(l1["value"], int(run("psi", "--n", 10000, "--m", 97).stdout))

    def test_esup_reproducible(self):
        args = ("esup", "--n", 50, "--tau", 4, "--seed", 7, "--reps", 200, "--method", "torus-grid")
        a = run(*args).stdout
        b = run(*args, "--threads", 4).stdout
        self.assertEqual(a, b)
        rec = json.loads(a)
        self.assertEqual(rec["violations"], 0)
        self.assertLessEqual(rec["lower_z"], rec["estimate"] + rec["gap"] + 1e-9 * rec["l1"])
        self.assertEqual(rec["l1"], 30.0)

    def test_usage_errors(self):
        self.assertEqual(run("psi", "--n", 20, check=False).returncode, 2)
        self.assertEqual(run("esup", "--n", 50, "--tau", 99, check=False).returncode, 2)
        self.assertEqual(run("esup", "--n", 50, "--tau", 4, "--method", "bogus", check=False).returncode, 2)
        self.assertEqual(run("experiment", "--config", "/nonexistent.json", check=False).returncode, 2)
        self.assertEqual(run(check=False).returncode, 2)

    def test_experiment(self):
        with tempfile.TemporaryDirectory() as tmp:
            cfg = os.path.join(tmp, "c.json")
            out = os.path.join(tmp, "rows.csv")
            plot = os.path.join(tmp, "plot.csv")
            with open(cfg, "w") as f:
                json.dump({"n": [64, 256], "tau": "pi(N)", "sigma": [0, 0.25], "reps": 10, "seed": 1,
                           "method": "torus-grid", "grid_budget": 64, "format": "csv",
                           "output": out, "plot_output": plot}, f)
            run("experiment", "--config", cfg)
            with open(out) as f:
                first = f.read()
            run("experiment", "--config", cfg, "--threads", 3)
            with open(out) as f:
                self.assertEqual(f.read(), first)
            rows = first.splitlines()
            self.assertEqual(rows[0].split(",")[:3], ["N", "tau", "sigma"])
            self.assertEqual(len(rows), 5)
            with open(plot) as f:
                self.assertEqual(len(f.read().splitlines()), 1 + 4 * 7)

            bad = os.path.join(tmp, "bad.json")
            with open(bad, "w") as f:
                json.dump({"n": [64], "tau": 4, "sigma": 0.7}, f)
            self.assertEqual(run("experiment", "--config", bad, check=False).returncode, 2)


if __name__ == "__main__":
    CLI = sys.argv.pop(1)
    unittest.main()
