#!/usr/bin/env python3
"""Record API responses for the frontend test suite.

Analyzes the bundled scenario in a throwaway store and saves the exact JSON
bodies the UI tests replay. Re-run after changing the API or the scenario:

    python scripts/record_ui_fixtures.py
"""

import json
import sys
import tempfile
from pathlib import Path

from fastapi.testclient import TestClient

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "tests"))

from usecase import GAP_SECONDS, MERGE_MIN_COUNT, usecase_bytes  # noqa: E402

from agdash.api import create_app  # noqa: E402
from agdash.store import Store  # noqa: E402

FIXTURES = ROOT / "frontend" / "test" / "fixtures"

EXFIL_MONGODB_NODE = "Data Exfiltration|mongodb|8"


def main() -> None:
    FIXTURES.mkdir(parents=True, exist_ok=True)
    with tempfile.TemporaryDirectory() as tmp:
        client = TestClient(create_app(Store(Path(tmp) / "fixtures.db")))
        upload = client.post(
            "/runs",
            params={
                "gap_threshold": GAP_SECONDS,
                "merge_min_count": MERGE_MIN_COUNT,
                "filename": "usecase_alerts.json",
            },
            content=usecase_bytes(),
        )
        upload.raise_for_status()
        run_id = upload.json()["run_id"]

        requests = {
            "runs.json": "/runs",
            "config.json": "/config",
            "graph.json": f"/runs/{run_id}/graph",
            "graph_exfil.json": f"/runs/{run_id}/graph?micro=Data+Exfiltration",
            "redirect_exfil.json": f"/runs/{run_id}/redirect?micro=Data+Exfiltration",
            "timeline_attacker.json": f"/runs/{run_id}/timeline?perspective=attacker",
            "timeline_victim.json": f"/runs/{run_id}/timeline?perspective=victim",
            "timeline_victim22.json": f"/runs/{run_id}/timeline?perspective=victim&host=10.0.0.22",
            "timeline_victim22_window.json": (
                f"/runs/{run_id}/timeline?perspective=victim&host=10.0.0.22"
                "&from_ts=2018-11-04T00%3A00%3A00%2B00%3A00&to_ts=2018-11-04T02%3A00%3A00%2B00%3A00"
            ),
            "graph_victim22_window.json": (
                f"/runs/{run_id}/graph?victim_ip=10.0.0.22"
                "&from_ts=2018-11-04T00%3A00%3A00%2B00%3A00&to_ts=2018-11-04T02%3A00%3A00%2B00%3A00"
            ),
            "matrix.json": f"/runs/{run_id}/matrix",
            "matrix_victim20.json": f"/runs/{run_id}/matrix?victim_ip=10.0.0.20",
            "signatures_exfil_mongodb.json": (
                f"/runs/{run_id}/nodes/{EXFIL_MONGODB_NODE.replace(' ', '%20').replace('|', '%7C')}/signatures"
            ),
        }
        manifest = {"run_id": run_id, "requests": {}}
        for name, url in requests.items():
            response = client.get(url)
            response.raise_for_status()
            (FIXTURES / name).write_bytes(response.content)
            manifest["requests"][name] = url
            print(f"recorded {name} <- {url}")
        (FIXTURES / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
        print(f"run id: {run_id}")


if __name__ == "__main__":
    main()
