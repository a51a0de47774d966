"""Shared sink for acceptance-criterion pass/fail lines (printed by conftest)."""

LINES: list[str] = []


def record(criterion: int, ok: bool, detail: str) -> None:
    status = "PASS" if ok else "FAIL"
    LINES.append(f"[{status}] criterion {criterion}: {detail}")
