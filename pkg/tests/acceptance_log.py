"""Shared record of acceptance results, printed in the pytest terminal summary."""

LINES: list[str] = []


def record(number: int, ok: bool, detail: str) -> bool:
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}"
    LINES.append(line)
    print(line)
    return ok
