"""Record HTTP fixtures for the web UI contract tests.

Drives the real service in-process with a scripted provider and dumps
each response body under frontend/test/fixtures/, so the UI tests pin
the exact wire format the service produces.
"""

import json
import sys
from pathlib import Path

from fastapi.testclient import TestClient

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "tests"))

from conftest import (  # noqa: E402
    CONTEXT_PARAGRAPH,
    TUTOR_REPLIES,
    appendix_b_responses,
    assessment_json,
    kc_json,
    matrix_reply,
)
from socratic_tutor import Store, scripted_provider  # noqa: E402
from socratic_tutor.service import create_app  # noqa: E402

FIXTURES = ROOT / "frontend" / "test" / "fixtures"

KC_NAMES = ["Reinforcement", "Punishment", "Extinction", "Shaping", "Chaining"]

SELECTIONS = {
    "domain": "Psychology",
    "subdomain": "Educational Psychology",
    "objective": "To understand the impact of motivation on student learning.",
    "context": "Explore the role of extrinsic rewards in student motivation.",
    "concepts": "Behavior Reinforcement",
    "target": "College Students",
    "environment": "Online Discussions",
    "pedagogy": "Socratic",
}


def script():
    entries = [("*", "\n".join(kc_json(name) for name in KC_NAMES))]
    entries += [("*", matrix_reply(name)) for name in KC_NAMES]
    entries.append(("*", CONTEXT_PARAGRAPH))
    for classification, wh in (("Correct", "How"), ("Partial", "Why")):
        entries.append(("*", assessment_json(classification)))
        entries.append(("*", TUTOR_REPLIES[wh]))
    entries.append(("*", "You connected reinforcement to concrete practice."))
    return entries


def themes_script():
    return [
        ("*", '["Instant Feedback", "Engagement"]'),
        ("*", '["Latency"]'),
        ("*", '["Instant Feedback"]'),
        ("*", '["Engagement", "Latency"]'),
    ]


def dump(name, payload):
    path = FIXTURES / name
    if isinstance(payload, str):
        path.write_text(payload, encoding="utf-8")
    else:
        path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    print(f"wrote {path.relative_to(ROOT)}")


def main(tmp_root: Path):
    FIXTURES.mkdir(parents=True, exist_ok=True)
    store = Store(tmp_root / "data")
    app = create_app(store, scripted_provider(script()))
    client = TestClient(app)

    dump("tree_domain.json", client.post("/tree/expand", json={"level": "domain"}).json())
    dump(
        "tree_incomplete_error.json",
        client.post(
            "/tree/expand", json={"level": "objective", "selections": {"domain": "Psychology"}}
        ).json(),
    )

    created = client.post("/scenarios", json={"mode": "tree", "selections": SELECTIONS}).json()
    dump("scenario_created.json", created)
    scenario_id = created["id"]

    dump("kcs.json", client.post(f"/scenarios/{scenario_id}/kcs").json())
    dump("matrix.json", client.post(f"/scenarios/{scenario_id}/matrix").json())
    dump("scenario_list.json", client.get("/scenarios").json())

    session = client.post(
        "/sessions", json={"scenario_id": scenario_id, "kc_index": 0, "wh_type": "What"}
    ).json()
    dump("session_created.json", session)
    session_id = session["session_id"]

    dump(
        "message_exchange.json",
        client.post(f"/sessions/{session_id}/messages", json={"text": "It rewards behavior."}).json(),
    )
    stream = client.post(
        f"/sessions/{session_id}/messages",
        json={"text": "Maybe timing matters?"},
        headers={"accept": "text/event-stream"},
    )
    dump("message_stream.txt", stream.text)
    dump("session_ended.json", client.post(f"/sessions/{session_id}/end").json())
    dump("session_view.json", client.get(f"/sessions/{session_id}").json())

    for response in appendix_b_responses():
        body = {"participant_id": response.participant_id, "q11": response.q11, "q12": response.q12}
        body.update(response.scores())
        client.post("/surveys", json=body)
    dump("likert.json", client.get("/analytics/likert").json())

    themes_store = Store(tmp_root / "themes-data")
    themes_app = create_app(themes_store, scripted_provider(themes_script()))
    for response in appendix_b_responses()[:2]:
        themes_store.save_survey(response)
    dump("themes.json", TestClient(themes_app).get("/analytics/themes").json())

    dump(
        "survey_error.json",
        client.post(
            "/surveys",
            json={"participant_id": "PX", **{f"q{i}": 4 for i in range(1, 10)}, "q10": 9},
        ).json(),
    )


if __name__ == "__main__":
    import tempfile

    with tempfile.TemporaryDirectory() as tmp:
        main(Path(tmp))
