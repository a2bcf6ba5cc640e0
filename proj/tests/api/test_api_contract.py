"""Drives the HTTP API of a small finished run and validates every response
and every run artifact against the published schemas.

usage: test_api_contract.py <vfmga binary> <repo root>
"""
import json
import os
import pathlib
import socket
import subprocess
import sys
import tempfile
import time
import unittest

import jsonschema
import requests
from referencing import Registry, Resource

BINARY = pathlib.Path(sys.argv[1]) if len(sys.argv) > 1 else None
ROOT = pathlib.Path(sys.argv[2]) if len(sys.argv) > 2 else None


def load_registry(schema_dir):
    resources = []
    for path in sorted(schema_dir.rglob("*.schema.json")):
        doc = json.loads(path.read_text())
        resources.append((doc["$id"], Resource.from_contents(doc)))
    return Registry().with_resources(resources)


def free_port():
    with socket.socket() as s:
        s.bind(("127.0.0.1", 0))
        return s.getsockname()[1]


class Server:
    def __init__(self, config, run_dir):
        self.port = free_port()
        env = dict(os.environ, VFMGA_PORT=str(self.port), VFMGA_RUN_DIR=str(run_dir))
        self.proc = subprocess.Popen([str(BINARY), "--config", str(config), "serve"], env=env,
                                     stdout=subprocess.DEVNULL, stderr=subprocess.PIPE)
        self.base = f"http://127.0.0.1:{self.port}"
        deadline = time.time() + 30
        while time.time() < deadline:
            try:
                requests.get(self.base + "/healthz", timeout=1)
                return
            except requests.ConnectionError:
                if self.proc.poll() is not None:
                    raise RuntimeError(self.proc.stderr.read().decode())
                time.sleep(0.1)
        raise RuntimeError("server did not start")

    def stop(self):
        self.proc.terminate()
        self.proc.wait(timeout=10)
        self.proc.stderr.close()


class ApiContract(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.registry = load_registry(ROOT / "schemas")
        cls.tmp = tempfile.TemporaryDirectory()
        cls.run_dir = pathlib.Path(cls.tmp.name) / "run"
        cls.config = ROOT / "fixtures" / "run-reduced.json"
        subprocess.run([str(BINARY), "--config", str(cls.config), "--out-dir", str(cls.run_dir), "all"],
                       check=True, stderr=subprocess.DEVNULL)
        cls.server = Server(cls.config, cls.run_dir)

    @classmethod
    def tearDownClass(cls):
        cls.server.stop()
        cls.tmp.cleanup()

    def check(self, doc, schema_id):
        schema = self.registry.contents(schema_id)
        jsonschema.Draft202012Validator(schema, registry=self.registry).validate(doc)

    def call(self, method, path, schema_id, status=200, server=None, **kwargs):
        server = server or self.server
        r = requests.request(method, server.base + path, timeout=30, **kwargs)
        self.assertEqual(r.status_code, status, r.text)
        self.assertTrue(r.headers["Content-Type"].startswith("application/json"))
        body = r.json()
        self.check(body, schema_id)
        return body

    def test_artifacts_match_schemas(self):
        for name, schema in [("manifest.json", "manifest.schema.json"),
                             ("alternatives.json", "alternatives.schema.json"),
                             ("ranges.json", "ranges.schema.json"),
                             ("preferences.json", "preferences.schema.json"),
                             ("classification.json", "classification.schema.json"),
                             ("dendrogram.json", "dendrogram.schema.json")]:
            with self.subTest(name=name):
                self.check(json.loads((self.run_dir / name).read_text()), schema)

    def test_read_endpoints(self):
        health = self.call("GET", "/healthz", "api/healthz.schema.json")
        self.assertGreater(health["alternatives"], 0)
        everything = self.call("GET", "/alternatives", "api/alternatives.schema.json")
        self.assertEqual(everything["count"], health["alternatives"])
        top = self.call("GET", "/alternatives?top=0.25&stakeholder=finance", "api/alternatives.schema.json")
        self.assertEqual(top["count"], int(0.25 * health["alternatives"] + 1e-9))
        self.assertEqual([a["rank"] for a in top["alternatives"]], sorted(a["rank"] for a in top["alternatives"]))
        union = self.call("GET", "/alternatives?top=0.1", "api/alternatives.schema.json")
        self.assertGreaterEqual(union["count"], 1)
        ranking = self.call("GET", "/rankings/finance", "api/ranking.schema.json")
        self.assertEqual(len(ranking["entries"]), health["alternatives"])
        classification = self.call("GET", "/analysis/classification", "classification.schema.json")
        stored = json.loads((self.run_dir / "classification.json").read_text())
        self.assertEqual(classification, stored)
        clustering = self.call("GET", "/analysis/clustering", "dendrogram.schema.json")
        self.assertEqual(clustering, json.loads((self.run_dir / "dendrogram.json").read_text()))

    def test_whatif(self):
        stored = self.call("GET", "/rankings/sustainability", "api/ranking.schema.json")
        same = self.call("POST", "/whatif", "api/whatif.schema.json", json={"stakeholder": "sustainability", "top": 1000})
        self.assertEqual(same["kendall_distance"], 0.0)
        self.assertEqual([e["alternative"] for e in same["entries"]], [e["alternative"] for e in stored["entries"]])
        moved = self.call("POST", "/whatif", "api/whatif.schema.json", json={"stakeholder": "sustainability", "gamma": 1.0})
        self.assertEqual(moved["preferences"]["gamma"], 1.0)
        self.assertLessEqual(len(moved["entries"]), 10)

    def test_errors(self):
        self.call("GET", "/rankings/nobody", "api/error.schema.json", status=404)
        self.call("GET", "/nowhere", "api/error.schema.json", status=404)
        self.call("GET", "/alternatives?top=2", "api/error.schema.json", status=400)
        self.call("POST", "/whatif", "api/error.schema.json", status=422,
                  json={"stakeholder": "finance", "weights": {"om_cost": 0.5}})
        self.call("POST", "/sessions", "api/error.schema.json", status=400, data="{not json")
        self.call("GET", "/sessions/session-9999/question", "api/error.schema.json", status=404)
        self.call("DELETE", "/healthz", "api/error.schema.json", status=405)

    def test_session_protocol_and_persistence(self):
        created = self.call("POST", "/sessions", "api/session-created.schema.json", status=201,
                            json={"stakeholder": "contract-test"})
        sid = created["session"]
        question = created["question"]
        self.assertEqual(question["type"], "rank-order")
        self.assertEqual(len(question["attributes"]), 11)
        order = [a["id"] for a in question["attributes"]]

        bad = self.call("POST", f"/sessions/{sid}/answer", "api/session-question.schema.json", status=422,
                        json={"order": order[:-1]})
        self.assertEqual(bad["question"], question)
        step = self.call("POST", f"/sessions/{sid}/answer", "api/session-question.schema.json", json={"order": order})
        self.assertEqual(step["phase"], "swing-rating")
        ratings = {a: max(0, 100 - 10 * i) for i, a in enumerate(order)}
        step = self.call("POST", f"/sessions/{sid}/answer", "api/session-question.schema.json", json={"ratings": ratings})

        # Restart mid-protocol: the pending question must survive.
        pending = step["question"]
        self.server.stop()
        type(self).server = Server(self.config, self.run_dir)
        resumed = self.call("GET", f"/sessions/{sid}/question", "api/session-question.schema.json")
        self.assertEqual(resumed["question"], pending)

        while step["phase"] == "savf-bisection":
            q = step["question"]
            self.call("POST", f"/sessions/{sid}/answer", "api/session-question.schema.json", status=422,
                      json={"state": q["upper"]})
            state = q["lower"] + 0.4 * (q["upper"] - q["lower"])
            step = self.call("POST", f"/sessions/{sid}/answer", "api/session-question.schema.json", json={"state": state})
        while step["phase"] == "compensation-check":
            step = self.call("POST", f"/sessions/{sid}/answer", "api/session-question.schema.json",
                             json={"response": "rejected"})
        self.assertEqual(step["phase"], "complete")
        self.assertIsNone(step["question"])
        self.assertEqual(step["preferences"]["gamma"], 0.2)
        self.assertAlmostEqual(sum(step["preferences"]["weights"].values()), 1.0, places=12)

        status = self.call("GET", f"/sessions/{sid}", "api/session-status.schema.json")
        self.assertTrue(status["complete"])
        self.call("GET", "/rankings/contract-test", "api/ranking.schema.json")
        self.call("POST", f"/sessions/{sid}/answer", "api/error.schema.json", status=409, json={"response": "accepted"})
        record = json.loads((self.run_dir / "sessions" / f"{sid}.json").read_text())
        self.check(record, "session.schema.json")


if __name__ == "__main__":
    unittest.main(argv=sys.argv[:1], verbosity=2)
