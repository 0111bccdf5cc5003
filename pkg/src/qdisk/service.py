"""Local HTTP service exposing the scenario engine to the teaching UI.

Endpoints mirror scenario commands one-to-one: POST /step takes one script
line as plain text, GET /state and GET /audit expose the session. The UI
never re-implements disk arithmetic; everything it displays comes from
these responses.
"""
from __future__ import annotations

import argparse
import dataclasses

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse

from .render import RenderSpec, render_svg
from .scenario import DualTrackSession, ScenarioParseError, ScenarioRuntimeError, StepResult
from .verify import StepReport


def _report_json(report: StepReport) -> dict:
    return dataclasses.asdict(report)


def _result_json(result: StepResult) -> dict:
    data = {}
    if "cancel" in result.data:
        data["cancel"] = dataclasses.asdict(result.data["cancel"])
    if "qber" in result.data:
        data["bb84"] = {
            "qber": result.data["qber"],
            "key_alice": result.data["key_alice"],
            "key_bob": result.data["key_bob"],
            "rounds": [
                {
                    "index": r.index,
                    "alice_bit": r.alice_bit,
                    "alice_basis": r.alice_basis.value,
                    "eve_basis": r.eve_basis.value if r.eve_basis else None,
                    "bob_basis": r.bob_basis.value,
                    "bob_outcome": r.bob_outcome,
                    "sifted": r.sifted,
                }
                for r in result.data["rounds"]
            ],
        }
    if "teleport" in result.data:
        t = result.data["teleport"]
        data["teleport"] = {
            "stage": t.stage,
            "input": list(t.input_qubit),
            "m_inner": t.m_inner,
            "m_outer": t.m_outer,
            "corrections": list(t.corrections_applied),
            "outcome_probability": t.outcome_probability,
            "bob_regions": [
                {"fraction": r.fraction, "colors": "".join(c.value for c in r.colors), "sign": r.sign}
                for r in t.bob_final_disk.regions
            ],
            "bob_exact": [float(a) for a in t.bob_final_exact.amplitudes],
        }
    return {
        "step": result.step_index,
        "command": result.raw,
        "detail": result.detail,
        "report": _report_json(result.report) if result.report else None,
        "outcomes": [
            {
                "qubit": o.qubit,
                "color": o.color.value,
                "probability": o.probability,
                "window_angle": o.window_angle,
            }
            for o in result.outcomes
        ],
        "artifact": result.artifact_name,
        "data": data,
    }


def create_app(seed: int = 0) -> FastAPI:
    app = FastAPI(title="qdisk service", version="0.1.0")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    sessions = {"current": DualTrackSession(seed=seed)}

    @app.post("/step")
    async def step(request: Request):
        line = (await request.body()).decode("utf-8")
        session = sessions["current"]
        try:
            result = session.run_line(line)
        except ScenarioParseError as exc:
            return JSONResponse({"error": str(exc)}, status_code=400)
        except ScenarioRuntimeError as exc:
            return JSONResponse({"error": str(exc)}, status_code=409)
        if result is None:
            return {"skipped": True}
        payload = _result_json(result)
        payload["state"] = session.state_summary()
        return payload

    @app.get("/state")
    def state():
        return sessions["current"].state_summary()

    @app.get("/audit")
    def audit():
        return [_report_json(r) for r in sessions["current"].reports]

    @app.get("/transcript")
    def transcript():
        return PlainTextResponse(sessions["current"].transcript_text())

    @app.get("/render")
    def render(layout: str = "side", window: float | None = None, signs: bool = True):
        session = sessions["current"]
        if session.disk is None:
            return JSONResponse({"error": "no qubits declared yet"}, status_code=409)
        try:
            svg = render_svg(session.disk, RenderSpec(layout=layout, window_angle=window, show_signs=signs))
        except Exception as exc:  # bad layout for current register
            return JSONResponse({"error": str(exc)}, status_code=400)
        return PlainTextResponse(svg, media_type="image/svg+xml")

    @app.post("/reset")
    def reset(seed: int = 0):
        sessions["current"] = DualTrackSession(seed=seed)
        return {"seed": seed}

    return app


def main(argv: list[str] | None = None) -> None:
    import uvicorn

    parser = argparse.ArgumentParser(prog="qdisk-service")
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8321)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)
    uvicorn.run(create_app(seed=args.seed), host=args.host, port=args.port, log_level="warning")


if __name__ == "__main__":
    main()
