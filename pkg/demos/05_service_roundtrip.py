"""Drive the HTTP service end to end: read, mutate, long-poll, save.

The service serializes mutations through a single writer and stamps every
response with a monotone revision, which is what the browser UI polls.
"""

import json
import tempfile
import urllib.request
from pathlib import Path

from padkit import mini3_corpus
from padkit.service import serve_in_background


def get(base, path):
    with urllib.request.urlopen(base + path, timeout=10) as response:
        return json.loads(response.read())


def get_text(base, path):
    with urllib.request.urlopen(base + path, timeout=10) as response:
        return response.read().decode()


def post(base, path, payload):
    request = urllib.request.Request(
        base + path, data=json.dumps(payload).encode(),
        headers={"Content-Type": "application/json"}, method="POST",
    )
    with urllib.request.urlopen(request, timeout=10) as response:
        return json.loads(response.read())


server = serve_in_background(mini3_corpus())
host, port = server.server_address[:2]
base = f"http://{host}:{port}"
print(f"service up at {base}, revision 0")

stats = get(base, "/api/stats")
print("u_a over the wire:", {r["label"]: r["percent"] for r in stats["tables"]["u_a"]["rows"]})

added = post(base, "/api/codes", {"kind": "A", "text": "power capping sweep", "ru": "RU9"})
print(f"added code {added['node']['label']} -> revision {added['revision']}")

buddy = post(base, "/api/codes", {"kind": "A", "text": "frequency sweep", "ru": "RU9"})
grouped = post(base, "/api/group", {
    "subject": buddy["node"]["id"],
    "neighbor": added["node"]["id"],
    "category_text": "parameter sweeps",
})
print(f"grouped into {grouped['category']['label']} -> revision {grouped['revision']}")

changed = get(base, f"/api/changes?since=0&timeout=1")
print(f"long-poll since 0 returned revision {changed['revision']}")

dag = get_text(base, "/api/graphs/dag.dot")
print(f"DAG now has {dag.count('->')} aggregated edges")

with tempfile.TemporaryDirectory() as tmp:
    target = Path(tmp) / "session.json"
    saved = post(base, "/api/save", {"path": str(target)})
    print(f"saved snapshot to {saved['path']} ({target.stat().st_size} bytes)")

server.shutdown_service()
print("service stopped")
