#!/usr/bin/env python3
"""Capture real server responses for the UI end-to-end test.

Runs the Python session server in-process and records every JSON body for
the scripted scenario (load the pump model, power on, step up twice, power
off). The vitest end-to-end test replays these bodies through a fetch stub,
so every value the UI shows is compared against genuine server output.

Run from the repository root after changing the server or the pump model:

    python3 frontend/scripts/gen_ui_fixtures.py
"""

import json
from pathlib import Path

from fastapi.testclient import TestClient

from emuc.server import create_app

REPO = Path(__file__).resolve().parents[2]
OUT = REPO / "frontend" / "tests" / "fixtures" / "minimed_scenario.json"


def main() -> None:
    source = (REPO / "models" / "minimed.emuc").read_text()
    client = TestClient(create_app(default_model_source=source,
                                   default_model_name="minimed"))
    steps = []

    res = client.get("/api/default-model")
    steps.append({"request": {"method": "GET", "path": "/api/default-model"},
                  "status": res.status_code, "body": res.json()})

    res = client.post("/api/sessions", json={"source": source})
    snap = res.json()
    sid = snap["session_id"]
    steps.append({"request": {"method": "POST", "path": "/api/sessions"},
                  "status": res.status_code, "body": snap})

    for trigger in ["click_on_off", "click_UP", "click_UP", "click_on_off"]:
        res = client.post(f"/api/sessions/{sid}/fire",
                          json={"trigger": trigger})
        steps.append({
            "request": {"method": "POST",
                        "path": f"/api/sessions/{sid}/fire",
                        "trigger": trigger},
            "status": res.status_code,
            "body": res.json(),
        })

    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps(steps, indent=2) + "\n")
    print(f"wrote {OUT} ({len(steps)} captured responses)")


if __name__ == "__main__":
    main()
