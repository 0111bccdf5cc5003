import math
import random

from qdisk.disks import BLUE, ORANGE, DiskSystem, Region


def random_state_vector(rng: random.Random, n_qubits: int) -> list[float]:
    """Random signed-real unit vector, bounded away from the zero vector."""
    while True:
        vec = [rng.gauss(0.0, 1.0) for _ in range(2**n_qubits)]
        norm = math.sqrt(sum(v * v for v in vec))
        if norm > 1e-3:
            return [v / norm for v in vec]


def disk(*triples) -> DiskSystem:
    """Build a DiskSystem from (fraction, colors-string, sign) triples."""
    regions = tuple(
        Region(f, tuple(BLUE if ch == "B" else ORANGE for ch in colors), sign)
        for f, colors, sign in triples
    )
    return DiskSystem(len(triples[0][1]), regions)


def fig3_disk() -> DiskSystem:
    return disk((1 / 3, "BB", 1), (1 / 6, "BO", 1), (1 / 3, "OO", 1), (1 / 6, "OB", 1))


def fig5_disk() -> DiskSystem:
    return disk((0.1, "BB", 1), (0.3, "BO", 1), (0.2, "OO", 1), (0.4, "OB", 1))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One line per acceptance check at the end of the run."""
    rows = []
    for status in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(status, []):
            if "test_acceptance" in report.nodeid and report.when == "call":
                name = report.nodeid.split("::")[-1]
                rows.append((name, "PASS" if status == "passed" else "FAIL"))
    if rows:
        terminalreporter.write_line("")
        terminalreporter.write_line("acceptance criteria:")
        for name, verdict in sorted(rows):
            terminalreporter.write_line(f"  {name}: {verdict}")
