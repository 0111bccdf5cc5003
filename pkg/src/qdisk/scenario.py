"""Line-oriented scenario scripts and the dual-track session that runs them.

Grammar (one command per line, `#` starts a comment):

    qubit <name> <blue_frac> <orange_frac> [-]   declare a qubit; minus = negative orange sign
    pair <n1> <n2> <a00> <a01> <a11> <a10>       declare two qubits from Gray-order areas
    epr <n1> <n2>                                declare a correlated pair
    gate <X|Z|H> <name>                          apply a single-qubit gate
    cnot <control> <target>                      controlled X
    measure <name> [<name> ...]                  spin the shared window once
    cancel                                       remove opposing equal slices
    audit                                        record a disk-vs-exact comparison
    render <svg|text> <file> [stacked|side]      write a diagram artifact
    bb84 <rounds> [eve]                          run the key-agreement protocol
    teleport <classical|full> <blue_frac> [-]    run a teleportation session

Fractions, not amplitudes, appear at the surface: scripts speak the disk
language. Every executed step is compared against the exact track, and
measurements on both tracks share the same seeded draws.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from .exact import GATES, RealState, SimulationError, apply_gate, collapse, make_state, tensor_states
from .disks import DiskSystem, ORANGE, canonical_text, decode, encode_pair, encode_qubit, tensor
from .dynamics import MeasurementOutcome, apply_controlled_disk, apply_gate_disk, cancel, spin_window
from .render import RenderSpec, SIDE_BY_SIDE, STACKED, render_svg, render_text
from .verify import StepReport, compare
from . import protocols


class ScenarioParseError(ValueError):
    def __init__(self, message: str, line_no: int):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class ScenarioRuntimeError(RuntimeError):
    def __init__(self, message: str, step_index: int):
        super().__init__(f"step {step_index}: {message}")
        self.step_index = step_index


@dataclass(frozen=True)
class Command:
    kind: str
    args: dict
    line_no: int
    raw: str


@dataclass(frozen=True)
class Scenario:
    name: str
    commands: tuple[Command, ...]


def _want(parts: list[str], n_min: int, n_max: int, usage: str, line_no: int) -> None:
    if not n_min <= len(parts) - 1 <= n_max:
        raise ScenarioParseError(f"usage: {usage}", line_no)


def _number(token: str, line_no: int) -> float:
    try:
        return float(token)
    except ValueError:
        raise ScenarioParseError(f"expected a number, got {token!r}", line_no) from None


def parse_line(raw: str, line_no: int, declared: set[str]) -> Command | None:
    """Parse one scenario line against the names declared so far."""
    text = raw.split("#", 1)[0].strip()
    if not text:
        return None
    parts = text.split()
    kind = parts[0]

    def need_declared(name: str) -> str:
        if name not in declared:
            raise ScenarioParseError(f"unknown qubit {name!r}", line_no)
        return name

    def need_fresh(name: str) -> str:
        if name in declared:
            raise ScenarioParseError(f"qubit {name!r} already declared", line_no)
        return name

    if kind == "qubit":
        _want(parts, 3, 4, "qubit <name> <blue_frac> <orange_frac> [-]", line_no)
        if len(parts) == 5 and parts[4] != "-":
            raise ScenarioParseError("trailing token must be '-'", line_no)
        args = {
            "name": need_fresh(parts[1]),
            "blue": _number(parts[2], line_no),
            "orange": _number(parts[3], line_no),
            "minus": len(parts) == 5,
        }
        return Command("qubit", args, line_no, text)
    if kind == "pair":
        _want(parts, 6, 6, "pair <n1> <n2> <a00> <a01> <a11> <a10>", line_no)
        n1, n2 = need_fresh(parts[1]), parts[2]
        if n2 == n1 or n2 in declared:
            raise ScenarioParseError(f"qubit {n2!r} already declared", line_no)
        areas = tuple(_number(tok, line_no) for tok in parts[3:7])
        if any(a < 0 for a in areas):
            raise ScenarioParseError("pair areas must be nonnegative", line_no)
        return Command("pair", {"names": (n1, n2), "areas": areas}, line_no, text)
    if kind == "epr":
        _want(parts, 2, 2, "epr <n1> <n2>", line_no)
        n1, n2 = need_fresh(parts[1]), parts[2]
        if n2 == n1 or n2 in declared:
            raise ScenarioParseError(f"qubit {n2!r} already declared", line_no)
        return Command("epr", {"names": (n1, n2)}, line_no, text)
    if kind == "gate":
        _want(parts, 2, 2, "gate <X|Z|H> <name>", line_no)
        if parts[1] not in ("X", "Z", "H"):
            raise ScenarioParseError(f"unknown gate {parts[1]!r}", line_no)
        return Command("gate", {"gate": parts[1], "name": need_declared(parts[2])}, line_no, text)
    if kind == "cnot":
        _want(parts, 2, 2, "cnot <control> <target>", line_no)
        control, target = need_declared(parts[1]), need_declared(parts[2])
        if control == target:
            raise ScenarioParseError("control and target must differ", line_no)
        return Command("cnot", {"control": control, "target": target}, line_no, text)
    if kind == "measure":
        _want(parts, 1, 32, "measure <name> [<name> ...]", line_no)
        names = [need_declared(tok) for tok in parts[1:]]
        if len(set(names)) != len(names):
            raise ScenarioParseError("measured qubits must be distinct", line_no)
        return Command("measure", {"names": names}, line_no, text)
    if kind == "cancel":
        _want(parts, 0, 0, "cancel", line_no)
        return Command("cancel", {}, line_no, text)
    if kind == "audit":
        _want(parts, 0, 0, "audit", line_no)
        return Command("audit", {}, line_no, text)
    if kind == "render":
        _want(parts, 2, 3, "render <svg|text> <file> [stacked|side]", line_no)
        fmt = parts[1]
        if fmt not in ("svg", "text"):
            raise ScenarioParseError(f"unknown render format {fmt!r}", line_no)
        filename = parts[2]
        if "/" in filename or "\\" in filename or filename in (".", ".."):
            raise ScenarioParseError(f"artifact name {filename!r} must be a bare file name", line_no)
        layout = SIDE_BY_SIDE
        if len(parts) == 4:
            if parts[3] not in ("stacked", "side"):
                raise ScenarioParseError(f"unknown layout {parts[3]!r}", line_no)
            layout = STACKED if parts[3] == "stacked" else SIDE_BY_SIDE
        return Command("render", {"fmt": fmt, "file": filename, "layout": layout}, line_no, text)
    if kind == "bb84":
        _want(parts, 1, 2, "bb84 <rounds> [eve]", line_no)
        try:
            rounds = int(parts[1])
        except ValueError:
            raise ScenarioParseError(f"rounds must be an integer, got {parts[1]!r}", line_no) from None
        if rounds < 1:
            raise ScenarioParseError("rounds must be >= 1", line_no)
        eve = len(parts) == 3
        if eve and parts[2] != "eve":
            raise ScenarioParseError(f"unknown flag {parts[2]!r}", line_no)
        return Command("bb84", {"rounds": rounds, "eve": eve}, line_no, text)
    if kind == "teleport":
        _want(parts, 2, 3, "teleport <classical|full> <blue_frac> [-]", line_no)
        mode = parts[1]
        if mode not in (protocols.CLASSICAL, protocols.FULL):
            raise ScenarioParseError(f"unknown teleport mode {mode!r}", line_no)
        blue = _number(parts[2], line_no)
        if not 0.0 <= blue <= 1.0:
            raise ScenarioParseError("blue fraction must lie in [0, 1]", line_no)
        if len(parts) == 4 and parts[3] != "-":
            raise ScenarioParseError("trailing token must be '-'", line_no)
        return Command("teleport", {"mode": mode, "blue": blue, "minus": len(parts) == 4}, line_no, text)
    raise ScenarioParseError(f"unknown command {kind!r}", line_no)


def _declared_by(command: Command) -> tuple[str, ...]:
    if command.kind == "qubit":
        return (command.args["name"],)
    if command.kind in ("pair", "epr"):
        return command.args["names"]
    return ()


def parse_scenario(text: str, name: str = "scenario") -> Scenario:
    declared: set[str] = set()
    commands: list[Command] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        command = parse_line(raw, line_no, declared)
        if command is None:
            continue
        declared.update(_declared_by(command))
        commands.append(command)
    return Scenario(name, tuple(commands))


@dataclass
class StepResult:
    step_index: int
    raw: str
    detail: str = ""
    report: StepReport | None = None
    outcomes: list[MeasurementOutcome] = field(default_factory=list)
    artifact_name: str | None = None
    data: dict = field(default_factory=dict)


class DualTrackSession:
    """Executes scenario commands on the disk track and the exact track.

    All randomness (window spins, protocol dice) comes from one
    random.Random stream seeded at construction, so a session's transcript
    and artifacts are byte-reproducible from the seed.
    """

    def __init__(self, seed: int = 0):
        self.seed = seed
        self.rng = random.Random(seed)
        self.disk: DiskSystem | None = None
        self.exact: RealState | None = None
        self.names: dict[str, int] = {}
        self.reports: list[StepReport] = []
        self.transcript: list[str] = []
        self.artifacts: dict[str, str] = {}
        self.step_count = 0

    # -- command execution ------------------------------------------------

    def run_line(self, raw: str) -> StepResult | None:
        """Parse and execute one line in the current session context."""
        command = parse_line(raw, self.step_count + 1, set(self.names))
        if command is None:
            return None
        return self.execute(command)

    def execute(self, command: Command) -> StepResult:
        self.step_count += 1
        result = StepResult(step_index=self.step_count, raw=command.raw)
        handler = getattr(self, f"_do_{command.kind}")
        try:
            handler(command, result)
        except SimulationError as exc:
            raise ScenarioRuntimeError(str(exc), self.step_count) from exc
        if self.disk is not None and result.report is None:
            result.report = compare(self.disk, self.exact, self.step_count, note=command.raw)
        if result.report is not None:
            self.reports.append(result.report)
        line = f"[{result.step_index:03d}] {command.raw}"
        if result.detail:
            line += f" -> {result.detail}"
        if self.disk is not None:
            line += f" | disk: {render_text(self.disk)}"
        self.transcript.append(line)
        if result.data.get("block"):
            self.transcript.append(result.data["block"])
        return result

    def _index(self, name: str, step: int) -> int:
        if name not in self.names:
            raise ScenarioRuntimeError(f"unknown qubit {name!r}", step)
        return self.names[name]

    def _attach(self, names: tuple[str, ...], disk: DiskSystem, state: RealState) -> None:
        base = 0 if self.disk is None else self.disk.n_qubits
        for offset, name in enumerate(names):
            self.names[name] = base + offset
        if self.disk is None:
            self.disk, self.exact = disk, state
        else:
            self.disk = tensor(self.disk, disk)
            self.exact = tensor_states(self.exact, state)

    # -- handlers ----------------------------------------------------------

    def _do_qubit(self, command: Command, result: StepResult) -> None:
        blue, orange = command.args["blue"], command.args["orange"]
        alpha = math.sqrt(max(0.0, blue))
        beta = math.sqrt(max(0.0, orange))
        if command.args["minus"]:
            beta = -beta
        self._attach((command.args["name"],), encode_qubit(alpha, beta), make_state([alpha, beta]))

    def _do_pair(self, command: Command, result: StepResult) -> None:
        a00, a01, a11, a10 = command.args["areas"]
        amps_gray = [math.sqrt(a) for a in (a00, a01, a11, a10)]
        disk, _ = encode_pair(amps_gray)
        state = make_state([amps_gray[0], amps_gray[1], amps_gray[3], amps_gray[2]])
        self._attach(command.args["names"], disk, state)

    def _do_epr(self, command: Command, result: StepResult) -> None:
        self._attach(command.args["names"], protocols.epr_disk(), protocols.epr_state())

    def _require_state(self, result: StepResult) -> None:
        if self.disk is None:
            raise ScenarioRuntimeError("no qubits declared yet", result.step_index)

    def _do_gate(self, command: Command, result: StepResult) -> None:
        self._require_state(result)
        gate = GATES[command.args["gate"]]
        target = self._index(command.args["name"], result.step_index)
        self.disk = apply_gate_disk(self.disk, gate, target)
        self.exact = apply_gate(self.exact, gate, target)

    def _do_cnot(self, command: Command, result: StepResult) -> None:
        self._require_state(result)
        control = self._index(command.args["control"], result.step_index)
        target = self._index(command.args["target"], result.step_index)
        self.disk = apply_controlled_disk(self.disk, GATES["X"], control, target)
        self.exact = apply_gate(self.exact, GATES["X"], target, control=control)

    def _do_measure(self, command: Command, result: StepResult) -> None:
        self._require_state(result)
        names = command.args["names"]
        indices = [self._index(name, result.step_index) for name in names]
        draw = self.rng.random()
        outcomes, self.disk = spin_window(self.disk, indices, draw)
        for outcome in outcomes:
            self.exact = collapse(self.exact, outcome.qubit, int(outcome.color is ORANGE))
        result.outcomes = outcomes
        fields = " ".join(
            f"{name}={out.color.value} p={out.probability:.9f}"
            for name, out in zip(names, outcomes)
        )
        result.detail = f"{fields} angle={draw:.9f}"

    def _do_cancel(self, command: Command, result: StepResult) -> None:
        self._require_state(result)
        self.disk, report = cancel(self.disk)
        result.data["cancel"] = report
        result.detail = (
            f"pairs={report.cancelled_pairs} removed={report.removed_fraction:.9f} "
            f"factor={report.renormalization_factor:.9f} sound={str(report.sound).lower()}"
        )

    def _do_audit(self, command: Command, result: StepResult) -> None:
        self._require_state(result)
        report = compare(self.disk, self.exact, self.step_count, note=command.raw)
        result.report = report
        result.detail = f"gap={report.max_abs_gap:.9f} class={report.classification}"

    def _do_render(self, command: Command, result: StepResult) -> None:
        self._require_state(result)
        if command.args["fmt"] == "svg":
            spec = RenderSpec(layout=command.args["layout"])
            content = render_svg(self.disk, spec)
        else:
            content = render_text(self.disk) + "\n"
        name = command.args["file"]
        self.artifacts[name] = content
        result.artifact_name = name
        result.detail = f"wrote {name}"

    def _do_bb84(self, command: Command, result: StepResult) -> None:
        params = protocols.BB84Params(
            rounds=command.args["rounds"],
            eve_present=command.args["eve"],
            seed=self.rng.getrandbits(32),
        )
        rounds, key_a, key_b, qber = protocols.bb84_run(params)
        block = protocols.format_bb84_transcript(rounds, key_a, key_b, qber)
        result.data.update(
            {
                "rounds": rounds,
                "key_alice": key_a,
                "key_bob": key_b,
                "qber": qber,
                "block": block,
            }
        )
        result.detail = f"rounds={params.rounds} eve={str(params.eve_present).lower()} qber={qber:.8f}"

    def _do_teleport(self, command: Command, result: StepResult) -> None:
        blue = command.args["blue"]
        if command.args["mode"] == protocols.CLASSICAL:
            transcript = protocols.teleport_classical(blue, self.rng.random())
        else:
            alpha = math.sqrt(blue)
            beta = math.sqrt(1.0 - blue)
            if command.args["minus"]:
                beta = -beta
            transcript = protocols.teleport_full(
                alpha, beta, random_draws=(self.rng.random(), self.rng.random())
            )
        result.data["teleport"] = transcript
        result.data["block"] = protocols.format_teleport_transcript(transcript)
        inner = "-" if transcript.m_inner is None else str(transcript.m_inner)
        result.detail = (
            f"stage={transcript.stage} m_inner={inner} m_outer={transcript.m_outer} "
            f"p={transcript.outcome_probability:.9f}"
        )

    # -- outputs ------------------------------------------------------------

    def transcript_text(self) -> str:
        return "\n".join(self.transcript) + ("\n" if self.transcript else "")

    def state_summary(self) -> dict:
        """JSON-safe snapshot of the current register, for the service/UI."""
        from .dynamics import naive_probabilities
        from .exact import probabilities

        if self.disk is None:
            return {"n_qubits": 0, "names": {}, "regions": [], "naive": [], "exact": [], "text": ""}
        return {
            "n_qubits": self.disk.n_qubits,
            "names": dict(self.names),
            "regions": [
                {
                    "fraction": r.fraction,
                    "colors": "".join(c.value for c in r.colors),
                    "sign": r.sign,
                }
                for r in self.disk.regions
            ],
            "naive": [float(p) for p in naive_probabilities(self.disk)],
            "exact": [float(p) for p in probabilities(self.exact)],
            "text": render_text(self.disk),
            "canonical": canonical_text(self.disk),
        }
