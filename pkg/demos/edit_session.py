#!/usr/bin/env python3
"""Drive the session service through a full edit loop, stdlib only.

Starts ``docweave serve`` as a subprocess against the bundled scripted
fixtures, then walks the workflow a frontend would: create a session, wait
for the plan, edit the spec with optimistic concurrency, ask the chat agent
for an edit and accept it, re-execute, and fetch the finished document.

    python3 demos/edit_session.py [output-dir]
"""

import json
import pathlib
import shutil
import socket
import subprocess
import sys
import tempfile
import time
import urllib.error
import urllib.request

ROOT = pathlib.Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures" / "scripted" / "pi-session"


def call(method, url, body=None, headers=None):
    data = json.dumps(body).encode() if body is not None else None
    req = urllib.request.Request(url, data=data, method=method)
    req.add_header("content-type", "application/json")
    for name, value in (headers or {}).items():
        req.add_header(name, value)
    try:
        with urllib.request.urlopen(req) as resp:
            headers_out = {k.lower(): v for k, v in resp.headers.items()}
            return resp.status, headers_out, resp.read()
    except urllib.error.HTTPError as err:
        return err.code, {k.lower(): v for k, v in err.headers.items()}, err.read()


def wait_job(base, session, job, timeout=30.0):
    deadline = time.time() + timeout
    while time.time() < deadline:
        _, _, raw = call("GET", f"{base}/sessions/{session}")
        record = json.loads(raw)
        job_state = record.get("job") or {}
        if job_state.get("id") == job and job_state.get("status") in ("done", "failed"):
            if job_state["status"] == "failed":
                sys.exit(f"job {job} failed: {job_state.get('error')}")
            return record
        time.sleep(0.05)
    sys.exit(f"job {job} did not finish within {timeout}s")


def main():
    out = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else "demos/out")
    out.mkdir(parents=True, exist_ok=True)
    data_dir = tempfile.mkdtemp(prefix="docweave-demo-")

    with socket.socket() as probe:
        probe.bind(("127.0.0.1", 0))
        port = probe.getsockname()[1]
    base = f"http://127.0.0.1:{port}"

    server = subprocess.Popen(
        [
            sys.executable, "-m", "docweave.cli", "serve",
            "--addr", f"127.0.0.1:{port}",
            "--data-dir", data_dir,
            "--fixtures", str(FIXTURES),
        ],
        cwd=ROOT,
    )
    try:
        for _ in range(200):
            try:
                status, _, _ = call("GET", f"{base}/healthz")
                if status == 200:
                    break
            except OSError:
                time.sleep(0.05)
        else:
            sys.exit("service never came up")

        print(f"service listening on {base}")

        # 1. A topic becomes a planned session.
        status, _, raw = call("POST", f"{base}/sessions", {"topic": "What is π?"})
        assert status == 201, raw
        created = json.loads(raw)
        session = created["id"]
        wait_job(base, session, created["job"]["id"])
        print(f"planned session {session}")

        # 2. Read the spec; the ETag is the revision number.
        status, headers, raw = call("GET", f"{base}/sessions/{session}/docspec")
        spec = json.loads(raw)["spec"]
        etag = headers["etag"].strip('"')
        unit = spec["units"][0]
        print(f"revision {etag}: unit {unit['id']!r}, "
              f"slider max {unit['interaction']['state'][0]['max']}")

        # 3. A direct edit, guarded by If-Match so stale writers lose.
        unit["interaction"]["state"][0]["step"] = 0.25
        status, headers, raw = call(
            "PUT", f"{base}/sessions/{session}/docspec", spec,
            headers={"If-Match": etag},
        )
        assert status == 200, raw
        edit = json.loads(raw)
        changed = edit["diff"]["units"]["edited"][0]["changes"][0]
        print(f"manual edit accepted as revision {edit['revision']}: "
              f"{changed['path']} -> {changed['to']}")

        # A writer still holding the old revision is refused.
        status, _, raw = call(
            "PUT", f"{base}/sessions/{session}/docspec", spec,
            headers={"If-Match": etag},
        )
        assert status == 409, raw
        print(f"stale writer refused: {json.loads(raw)['error']}")

        # 4. Ask the chat agent for an edit, then accept its diff.
        status, _, raw = call(
            "POST", f"{base}/sessions/{session}/chat",
            {"message": "Widen the radius slider to 10"},
        )
        proposal = json.loads(raw)["turn"]
        assert proposal["status"] == "proposed", raw
        print(f"chat proposal: {proposal['explanation']}")

        status, _, raw = call(
            "POST", f"{base}/sessions/{session}/chat/{proposal['turn']}/accept"
        )
        accepted = json.loads(raw)
        assert status == 200, raw
        print(f"accepted as revision {accepted['revision']}")

        # 5. Execute against the edited spec and evaluate the result.
        status, _, raw = call(
            "POST", f"{base}/sessions/{session}/execute",
            {"mode": "deterministic"},
        )
        assert status == 202, raw
        wait_job(base, session, json.loads(raw)["job"]["id"])

        status, headers, raw = call("GET", f"{base}/sessions/{session}/document")
        assert status == 200
        document = raw.decode()
        assert 'max="10"' in document, "edited bound should reach the widget"
        target = out / "edited-session.html"
        target.write_text(document)
        print(f"document from revision {headers['x-revision']}: "
              f"{len(raw)} bytes -> {target}")

        status, _, raw = call("POST", f"{base}/sessions/{session}/evaluate")
        verdict = json.loads(raw)
        print(f"evaluation: verdict {verdict['verdict']}, "
              f"coherence {verdict['report']['coherence_score']}/5")

        # 6. Everything above is on disk; a restarted service would reload it.
        revisions = json.loads(
            call("GET", f"{base}/sessions/{session}")[2]
        )["revisions"]
        trail = " -> ".join(f"{r['revision']} ({r['origin']})" for r in revisions)
        print(f"session history: {trail}, persisted under {data_dir}")
    finally:
        server.terminate()
        server.wait(timeout=10)
        shutil.rmtree(data_dir, ignore_errors=True)


if __name__ == "__main__":
    main()
