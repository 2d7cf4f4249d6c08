"""End-to-end checks of the satgraph command-line tool.

usage: cli_test.py <satgraph binary> <data dir>
"""

import json
import os
import shutil
import socket
import subprocess
import sys
import tempfile
import time
import unittest
import urllib.error
import urllib.request

import jsonschema

CLI = None
DATA = None
NOW = "2025-01-01T00:00:00Z"


def run(*args, check=None):
    p = subprocess.run([CLI, *args], capture_output=True, text=True, timeout=120)
    if check is not None and p.returncode != check:
        raise AssertionError(f"{args}: exit {p.returncode}\nstdout: {p.stdout}\nstderr: {p.stderr}")
    return p


def query(primitive, *flags, fmt="canonical"):
    return run("query", os.path.join(DATA, "cf88-mini"), primitive, "--now", NOW, "--format", fmt, *flags)


def free_port():
    with socket.socket() as s:
        s.bind(("127.0.0.1", 0))
        return s.getsockname()[1]


class Validate(unittest.TestCase):
    def test_fixture_is_valid(self):
        out = json.loads(run("validate", os.path.join(DATA, "cf88-mini"), check=0).stdout)
        self.assertTrue(out["ok"])
        self.assertEqual(out["counts"]["items"], 4)

    def test_broken_corpus_exits_1(self):
        with tempfile.TemporaryDirectory() as tmp:
            corpus = os.path.join(tmp, "broken")
            shutil.copytree(os.path.join(DATA, "cf88-mini"), corpus)
            path = os.path.join(corpus, "versions.json")
            with open(path) as f:
                versions = json.load(f)
            versions[0]["item"] = "nowhere"
            with open(path, "w") as f:
                json.dump(versions, f)
            p = run("validate", corpus, "--format", "canonical", check=1)
            self.assertFalse(json.loads(p.stdout)["ok"])

    def test_missing_corpus_exits_2(self):
        run("validate", os.path.join(DATA, "no-such-corpus"), check=2)


class Query(unittest.TestCase):
    def test_valid_version_with_short_flags(self):
        out = json.loads(query("getValidVersion", "--item", "art6_cpt", "--at", "2001-05-20").stdout)
        self.assertEqual(out["id"], "v2")

    def test_args_json(self):
        p = query("getValidVersion", "--args", json.dumps({"item_id": "art6_cpt", "timestamp": "1999-01-01"}))
        self.assertEqual(json.loads(p.stdout)["id"], "v1")

    def test_history(self):
        out = json.loads(query("getItemHistory", "--item_id", "art6_cpt").stdout)
        self.assertEqual([a["id"] for a in out], ["act_creation", "act_ec26"])

    def test_not_found_exits_1(self):
        p = query("getTheme", "--id", "missing")
        self.assertEqual(p.returncode, 1)
        self.assertEqual(json.loads(p.stderr)["error"]["code"], "NotFound")

    def test_bad_usage_exits_2(self):
        self.assertEqual(query("getThemez", "--id", "x").returncode, 2)
        self.assertEqual(query("getTheme", "--nope", "x").returncode, 2)


class Plans(unittest.TestCase):
    def test_run_and_verify(self):
        mini = os.path.join(DATA, "cf88-mini")
        with tempfile.TemporaryDirectory() as tmp:
            for name in ("uc1", "uc2"):
                plan = os.path.join(DATA, "plans", f"{name}.plan.json")
                audit = os.path.join(tmp, f"{name}.ndjson")
                run("plan", "run", mini, plan, "--now", NOW, "--audit", audit, check=0)
                again = run("plan", "run", mini, plan, "--now", NOW, check=0).stdout
                with open(audit) as f:
                    text = f.read()
                self.assertEqual(text, again)
                self.assertTrue(json.loads(run("plan", "verify", mini, plan, audit, check=0).stdout)["ok"])

                with open(audit, "w") as f:
                    f.write(text.replace('"status":"ok"', '"status":"ko"', 1))
                report = json.loads(run("plan", "verify", mini, plan, audit, check=1).stdout)
                self.assertFalse(report["ok"])

    def test_uc1_outputs(self):
        mini = os.path.join(DATA, "cf88-mini")
        with tempfile.TemporaryDirectory() as tmp:
            audit = os.path.join(tmp, "a.ndjson")
            p = run("plan", "run", mini, os.path.join(DATA, "plans", "uc1.plan.json"), "--now", NOW, "--audit", audit,
                    "--format", "canonical", check=0)
            self.assertIn("lazer, moradia e", json.loads(p.stdout)["text"]["content"])


class Snapshot(unittest.TestCase):
    def test_snapshot_answers_like_directory(self):
        with tempfile.TemporaryDirectory() as tmp:
            snap = os.path.join(tmp, "mini.snap")
            made = json.loads(run("snapshot", os.path.join(DATA, "cf88-mini"), snap, check=0).stdout)
            checked = json.loads(run("validate", snap, check=0).stdout)
            self.assertEqual(made["digest"], checked["digest"])
            a = query("getItemHistory", "--item_id", "art6_cpt").stdout
            b = run("query", snap, "getItemHistory", "--item_id", "art6_cpt", "--now", NOW, "--format", "canonical",
                    check=0).stdout
            self.assertEqual(a, b)


CALLS = [
    ("getValidVersion", {"item_id": "art6_cpt", "timestamp": "2001-05-20"}),
    ("getTextForVersion", {"version_id": "v2", "language": "pt-BR"}),
    ("getItemHistory", {"item_id": "art6_cpt"}),
    ("traceCausality", {"version_id": "v2"}),
    ("compareVersions", {"version_id_a": "v1", "version_id_b": "v2"}),
    ("getItemHierarchy", {"item_id": "cf88_work", "depth": 2}),
    ("getItemAncestors", {"item_id": "art6_cpt"}),
    ("getThemesForItem", {"item_id": "art6"}),
    ("getVersionsInInterval", {"item_ids": ["art6_cpt"], "start_date": "1990-01-01", "end_date": "2010-01-01"}),
    ("getTemporalCoverage", {"item_id": "art6_cpt"}),
    ("getActionsBySource", {"source_work_id": "ec26_work"}),
    ("getBatchItems", {"ids": ["art6", "missing", "cf88_work"]}),
    ("getBatchTextUnits", {"requests": [{"source_node_type": "Version", "source_node_id": "v1", "language": "pt-BR"}]}),
    ("resolveItemReference", {"reference_text": "caput do artigo 6"}),
    ("resolveThemeReference", {"reference_text": "direitos sociais"}),
    ("searchTextUnits", {"lexical_query": "moradia"}),
    ("searchItems", {"lexical_query": "moradia"}),
    ("getAvailableLanguages", {}),
    ("getSupportedActionTypes", {}),
    ("getRootThemes", {}),
]


class Service(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.port = free_port()
        cls.server = subprocess.Popen(
            [CLI, "serve", os.path.join(DATA, "cf88-mini"), "--port", str(cls.port), "--now", NOW],
            stdout=subprocess.DEVNULL, stderr=subprocess.DEVNULL)
        deadline = time.time() + 30
        while True:
            try:
                urllib.request.urlopen(f"http://127.0.0.1:{cls.port}/v1/health", timeout=2)
                break
            except (urllib.error.URLError, ConnectionError):
                if time.time() > deadline:
                    cls.server.kill()
                    raise
                time.sleep(0.1)
        cls.openapi = json.loads(run("openapi", "--format", "canonical", check=0).stdout)

    @classmethod
    def tearDownClass(cls):
        cls.server.terminate()
        cls.server.wait(timeout=10)

    def post(self, primitive, args):
        req = urllib.request.Request(f"http://127.0.0.1:{self.port}/v1/{primitive}", data=json.dumps(args).encode(),
                                     headers={"Content-Type": "application/json"})
        try:
            with urllib.request.urlopen(req, timeout=10) as r:
                return r.status, r.read().decode()
        except urllib.error.HTTPError as e:
            return e.code, e.read().decode()

    def response_schema(self, primitive, status):
        op = self.openapi["paths"][f"/v1/{primitive}"]["post"]
        schema = dict(op["responses"][str(status)]["content"]["application/json"]["schema"])
        schema["components"] = self.openapi["components"]
        return schema

    def test_cli_and_http_agree_byte_for_byte(self):
        for primitive, args in CALLS:
            with self.subTest(primitive=primitive):
                status, body = self.post(primitive, args)
                self.assertEqual(status, 200, body)
                cli = query(primitive, "--args", json.dumps(args))
                self.assertEqual(cli.returncode, 0, cli.stderr)
                self.assertEqual(cli.stdout, body + "\n")

    def test_responses_match_openapi(self):
        for primitive, args in CALLS:
            with self.subTest(primitive=primitive):
                status, body = self.post(primitive, args)
                jsonschema.Draft202012Validator(self.response_schema(primitive, status)).validate(json.loads(body))

    def test_errors_match_openapi(self):
        cases = [("getTheme", {"id": "missing"}, 404), ("compareVersions", {"version_id_a": "v1", "version_id_b": "v_ec26"}, 409),
                 ("getValidVersion", {"item_id": "art6_cpt"}, 400)]
        for primitive, args, want in cases:
            status, body = self.post(primitive, args)
            self.assertEqual(status, want)
            jsonschema.Draft202012Validator(self.response_schema(primitive, status)).validate(json.loads(body))
            cli = query(primitive, "--args", json.dumps(args))
            self.assertEqual(cli.stderr.strip(), body)

    def test_every_primitive_is_documented(self):
        names = {p["name"] for p in json.loads(run("primitives", "--format", "canonical", check=0).stdout)
                 if p["class"] != "combinator"}
        self.assertEqual({f"/v1/{n}" for n in names}, {p for p in self.openapi["paths"] if p.startswith("/v1/") and
                                                      p.count("/") == 2 and p not in ("/v1/health", "/v1/openapi.json")})


if __name__ == "__main__":
    if len(sys.argv) < 3:
        sys.exit(__doc__)
    CLI, DATA = os.path.abspath(sys.argv[1]), os.path.abspath(sys.argv[2])
    unittest.main(argv=[sys.argv[0], "-v"])
