import pytest
from fastapi.testclient import TestClient

from qdisk.service import create_app


@pytest.fixture()
def client():
    return TestClient(create_app(seed=5))


def step(client, line):
    response = client.post("/step", content=line)
    assert response.status_code == 200, response.text
    return response.json()


class TestStep:
    def test_declare_and_inspect(self, client):
        payload = step(client, "qubit a 0.5 0.5")
        assert payload["state"]["naive"] == [0.5, 0.5]
        assert payload["report"]["classification"] == "Sound"

    def test_measure_returns_committed_draw(self, client):
        step(client, "epr a b")
        payload = step(client, "measure a b")
        outcomes = payload["outcomes"]
        assert len(outcomes) == 2
        assert outcomes[0]["window_angle"] == outcomes[1]["window_angle"]
        assert 0.0 <= outcomes[0]["window_angle"] < 1.0

    def test_comment_line_is_skipped(self, client):
        assert step(client, "# nothing") == {"skipped": True}

    def test_parse_error_is_400(self, client):
        response = client.post("/step", content="frobnicate")
        assert response.status_code == 400
        assert "error" in response.json()

    def test_runtime_error_is_409(self, client):
        response = client.post("/step", content="cancel")
        assert response.status_code == 409

    def test_bb84_payload(self, client):
        payload = step(client, "bb84 8")
        rounds = payload["data"]["bb84"]["rounds"]
        assert len(rounds) == 8
        for row in rounds:
            if row["sifted"]:
                assert row["bob_outcome"] == row["alice_bit"]

    def test_teleport_payload(self, client):
        payload = step(client, "teleport full 0.72")
        info = payload["data"]["teleport"]
        total = sum(r["fraction"] for r in info["bob_regions"])
        assert total == pytest.approx(1.0, abs=1e-9)


class TestStateAndAudit:
    def test_initial_state_is_empty(self, client):
        state = client.get("/state").json()
        assert state["n_qubits"] == 0

    def test_audit_accumulates(self, client):
        step(client, "qubit a 0.6666667 0.3333333")
        step(client, "gate H a")
        reports = client.get("/audit").json()
        assert [r["classification"] for r in reports] == ["Sound", "Breakdown"]

    def test_transcript_roundtrip(self, client):
        step(client, "qubit a 1 0")
        text = client.get("/transcript").text
        assert "[001] qubit a 1 0" in text

    def test_render_endpoint(self, client):
        step(client, "qubit a 0.7 0.3")
        response = client.get("/render", params={"layout": "side", "window": 0.25})
        assert response.status_code == 200
        assert response.text.startswith("<svg")

    def test_render_without_state_is_409(self, client):
        assert client.get("/render").status_code == 409

    def test_reset_clears_session(self, client):
        step(client, "qubit a 1 0")
        client.post("/reset", params={"seed": 11})
        assert client.get("/state").json()["n_qubits"] == 0


class TestReplayDeterminism:
    LINES = [
        "qubit a 0.5 0.5",
        "gate H a",
        "cancel",
        "epr b c",
        "measure b",
        "audit",
        "bb84 12 eve",
        "teleport full 0.72",
    ]

    def test_same_seed_reproduces_every_payload(self):
        def run():
            client = TestClient(create_app(seed=77))
            return [step(client, line) for line in self.LINES]

        assert run() == run()
