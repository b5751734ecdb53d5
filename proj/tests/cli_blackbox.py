"""Black-box tests for the surfcert binary: exit codes, reports, cache, files.

usage: cli_blackbox.py SURFCERT SCHEMA
"""

import json
import os
import re
import subprocess
import sys
import tempfile
import unittest

import jsonschema

SURFCERT = None
SCHEMA = None

# keeps the certify round trip fast; the full-size run lives in the acceptance suite
SMALL = ["--ball-radius", "6"]
SMALL_CERT = ["--table-radius", "3", "--verify-max-m", "2", "--sup-max-power", "8",
              "--defect-samples", "8", "--triangles", "300"]


class Cli(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.cache = os.path.join(self.tmp.name, "cache")

    def tearDown(self):
        self.tmp.cleanup()

    def run_cli(self, *args, cache=None):
        cmd = [SURFCERT, "--cache-dir", cache or self.cache, *args]
        p = subprocess.run(cmd, capture_output=True, text=True, cwd=self.tmp.name)
        return p.returncode, p.stdout, p.stderr

    def report(self, *args, expect=0):
        code, out, err = self.run_cli(*args)
        self.assertEqual(code, expect, err)
        env = json.loads(out)
        jsonschema.validate(env, SCHEMA)
        return env, out, err

    def test_cross_generator(self):
        env, _, _ = self.report("cross", "a1")
        self.assertEqual(env["command"], "cross")
        self.assertEqual(env["schema_version"], 1)
        self.assertEqual(env["payload"]["crossing_number"], 0)
        self.assertTrue(env["payload"]["stabilized"])
        self.assertEqual(env["config"]["genus"], 2)

    def test_qm_example(self):
        env, _, _ = self.report("qm", "--sigma", "a1 a1", "--target", "a1 a1 a1 a1")
        self.assertEqual(env["payload"]["h_sigma"], 2)
        self.assertEqual(env["payload"]["c_sigma"], 2)
        self.assertEqual(env["payload"]["c_sigma_inv"], 0)

    def test_malformed_word(self):
        code, out, err = self.run_cli("cross", "c3")
        self.assertEqual(code, 2)
        self.assertIn("c3", err)
        self.assertEqual(out, "")

    def test_usage_errors(self):
        self.assertEqual(self.run_cli()[0], 2)
        self.assertEqual(self.run_cli("qm", "--sigma", "a1")[0], 2)
        self.assertEqual(self.run_cli("qm", "--sigma", "a1", "--target", "a1")[0], 2)
        self.assertEqual(self.run_cli("cross", "a3")[0], 2)  # genus 2 has no a3
        self.assertEqual(self.run_cli("--genus", "1", "cross", "a1")[0], 2)
        self.assertEqual(self.run_cli("--tol-geom", "abc", "cross", "a1")[0], 2)
        self.assertEqual(self.run_cli("certify", "--target", "a1 b1 A1 b1", "--m", "3..1")[0], 2)

    def test_config_file(self):
        cfg = os.path.join(self.tmp.name, "c.conf")
        with open(cfg, "w") as f:
            f.write("# comment\ngenus = 3\nseed = 7\n")
        env, _, _ = self.report("--config", cfg, "cross", "a3 b3")
        self.assertEqual(env["config"]["genus"], 3)
        self.assertEqual(env["config"]["seed"], 7)
        # flags win over the file
        env, _, _ = self.report("--config", cfg, "--seed", "9", "cross", "a1")
        self.assertEqual(env["config"]["seed"], 9)
        with open(cfg, "w") as f:
            f.write("genus = 2\nball_raduis = 5\n")
        code, _, err = self.run_cli("--config", cfg, "cross", "a1")
        self.assertEqual(code, 2)
        self.assertIn("ball_raduis", err)

    def test_help_documents_syntax(self):
        code, out, _ = self.run_cli("--help")
        self.assertEqual(code, 0)
        self.assertIn("uppercase", out)
        for sub in ["ball", "cross", "sn", "qm", "certify", "geomcheck", "scaling"]:
            self.assertIn(sub, out)

    def test_word_syntax_round_trip(self):
        for text, canon in [("a1b1", "a1 b1"), ("  a1   B2 ", "a1 B2"), ("A1 b1 a2 B2", "A1 b1 a2 B2")]:
            env, _, _ = self.report("cross", text)
            self.assertEqual(env["input"]["word"], canon)
            self.assertEqual(env["payload"]["element"], canon)

    def test_byte_stable(self):
        for args in [("cross", "a1 b1 A1 b1"), ("qm", "--sigma", "a1 b1", "--target", "a1 b1 a1 b1 a2"),
                     ("--ball-radius", "4", "ball"), ("sn", "--n", "0", "--radius", "3")]:
            a = self.run_cli(*args)
            b = self.run_cli(*args)
            self.assertEqual(a[0], 0, a[2])
            self.assertEqual(a[1], b[1])

    def test_ball_cache(self):
        env, out1, err1 = self.report("--ball-radius", "4", "ball")
        self.assertEqual(env["payload"]["layer_counts"][:4], [1, 8, 56, 392])
        self.assertNotIn("cache hit", err1)
        _, out2, err2 = self.report("--ball-radius", "4", "ball")
        self.assertIn("cache hit", err2)
        self.assertEqual(out1, out2)
        # a different tolerance is a different key
        _, _, err3 = self.report("--ball-radius", "4", "--tol-geom", "1e-8", "ball")
        self.assertNotIn("cache hit", err3)
        self.assertIn("miss", err3)

    def test_truncated_cache(self):
        _, out1, _ = self.report("--ball-radius", "4", "ball")
        files = [f for f in os.listdir(self.cache) if f.startswith("ball-")]
        self.assertEqual(len(files), 1)
        path = os.path.join(self.cache, files[0])
        with open(path, "r+b") as f:
            f.truncate(os.path.getsize(path) // 2)
        _, out2, err2 = self.report("--ball-radius", "4", "ball")
        self.assertIn("warning", err2)
        self.assertIn("rebuilt", err2)
        self.assertEqual(out1, out2)
        _, _, err3 = self.report("--ball-radius", "4", "ball")
        self.assertIn("cache hit", err3)

    def test_stale_version_ignored(self):
        self.report("--ball-radius", "3", "ball")
        name = [f for f in os.listdir(self.cache) if f.startswith("ball-")][0]
        stale = name.replace("-v", "-v0.0.0-old")
        os.rename(os.path.join(self.cache, name), os.path.join(self.cache, stale))
        _, _, err = self.report("--ball-radius", "3", "ball")
        self.assertNotIn("cache hit", err)

    def test_out_dir_naming(self):
        out = os.path.join(self.tmp.name, "out")
        code, stdout, err = self.run_cli("--out", out, "cross", "a1")
        self.assertEqual(code, 0, err)
        self.assertEqual(stdout, "")
        files = os.listdir(out)
        self.assertEqual(len(files), 1)
        self.assertRegex(files[0], r"^cross-[0-9a-f]{16}\.json$")
        with open(os.path.join(out, files[0])) as f:
            text = f.read()
        self.assertEqual(text, self.run_cli("cross", "a1")[1])
        # same command, same name; other config, other name
        self.run_cli("--out", out, "cross", "a1")
        self.assertEqual(len(os.listdir(out)), 1)
        self.run_cli("--out", out, "--seed", "2", "cross", "a1")
        self.assertEqual(len(os.listdir(out)), 2)
        self.assertFalse(any(".tmp" in f for f in os.listdir(out)))

    def test_resource_cap(self):
        code, out, err = self.run_cli("--max-elements", "100", "--ball-radius", "4", "ball")
        self.assertEqual(code, 3)
        self.assertEqual(out, "")

    def test_certify_round_trip(self):
        out = os.path.join(self.tmp.name, "out")
        code, _, err = self.run_cli(*SMALL, "--out", out, "certify", "--target", "a1 b1 A1 b1",
                                    "--n", "0", "--m", "1..4", *SMALL_CERT)
        self.assertEqual(code, 0, err)
        [name] = os.listdir(out)
        self.assertRegex(name, r"^certify-[0-9a-f]{16}\.json$")
        path = os.path.join(out, name)
        with open(path) as f:
            env = json.load(f)
        jsonschema.validate(env, SCHEMA)
        cert = env["payload"]
        self.assertEqual(cert["status"], "issued")
        self.assertEqual(cert["validity"], "table-certified")
        self.assertGreater(cert["slope"], 0)
        names = {e["name"] for e in cert["stage"]["ledger"]}
        self.assertTrue({"C1", "delta", "qi_K", "epsilon", "N", "D", "sup_Sn"} <= names)
        for b in cert["bounds"]:
            self.assertAlmostEqual(b["lower"], b["m"] * cert["slope"], places=12)
            if b["upper"]["value"] is not None:
                self.assertLessEqual(b["lower"], b["upper"]["value"])

        venv, _, _ = self.report(*SMALL, "certify", "--verify", path)
        self.assertEqual(venv["command"], "certify-verify")
        self.assertTrue(venv["payload"]["verified"])
        self.assertEqual(venv["payload"]["failures"], [])

        # tampering is caught
        env["payload"]["bounds"][0]["upper"]["factors"][0] = "a2"
        bad = os.path.join(self.tmp.name, "bad.json")
        with open(bad, "w") as f:
            json.dump(env, f)
        venv, _, err = self.report(*SMALL, "certify", "--verify", bad, expect=1)
        self.assertFalse(venv["payload"]["verified"])
        self.assertIn("verification failed", err)

        with open(bad, "w") as f:
            f.write("{ not json")
        self.assertEqual(self.run_cli(*SMALL, "certify", "--verify", bad)[0], 2)

    def test_certify_refusal(self):
        env, _, err = self.report(*SMALL, "certify", "--target", "a1", "--n", "0", "--m", "1..2",
                                  *SMALL_CERT, expect=1)
        self.assertEqual(env["payload"]["status"], "refused")
        self.assertIn("refused", err)
        self.assertTrue(env["payload"]["reasons"])

    def test_scaling_csv(self):
        out = os.path.join(self.tmp.name, "out")
        code, _, err = self.run_cli(*SMALL, "--out", out, "scaling", "--target", "a1 b1 A1 b1",
                                    "--n-list", "0,1", "--m", "1..3", *SMALL_CERT)
        self.assertEqual(code, 0, err)
        names = sorted(os.listdir(out))
        self.assertEqual(len(names), 2)
        self.assertTrue(names[0].endswith(".csv") and names[1].endswith(".json"))
        self.assertEqual(names[0][:-4], names[1][:-5])
        with open(os.path.join(out, names[1])) as f:
            env = json.load(f)
        jsonschema.validate(env, SCHEMA)
        self.assertEqual(env["payload"]["csv_file"], names[0])
        with open(os.path.join(out, names[0])) as f:
            lines = f.read().splitlines()
        self.assertEqual(lines[0], "n,m,lower,upper,slope")
        self.assertEqual(len(lines), 1 + 6)
        slopes = {}
        for line in lines[1:]:
            n, m, lower, upper, slope = line.split(",")
            slopes[int(n)] = float(slope)
            self.assertAlmostEqual(float(lower), int(m) * float(slope), places=8)
        self.assertLessEqual(slopes[1], slopes[0])

    def test_geomcheck(self):
        env, _, _ = self.report("--ball-radius", "4", "geomcheck", "--triangles", "200")
        p = env["payload"]
        self.assertLess(p["relator_trace_error"], 1e-9)
        self.assertLess(p["translation_length_spread"], 1e-9)
        self.assertEqual(len(p["generator_translation_lengths"]), 8)
        self.assertAlmostEqual(p["systole"], p["generator_translation_lengths"][0], places=9)


if __name__ == "__main__":
    SURFCERT = os.path.abspath(sys.argv[1])
    with open(sys.argv[2]) as f:
        SCHEMA = json.load(f)
    unittest.main(argv=[sys.argv[0], "-v"])
