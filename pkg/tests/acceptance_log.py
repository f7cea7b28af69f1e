"""Shared record of acceptance verdicts, filled by test_acceptance."""

RESULTS: dict = {}


def record(number: int, label: str, ok: bool) -> bool:
    RESULTS[number] = (bool(ok), label)
    print(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {label}")
    return ok
