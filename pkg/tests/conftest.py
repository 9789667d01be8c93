import pytest

# criterion -> list of (name, passed, detail); filled by test_acceptance
ACCEPTANCE: dict[int, list] = {}


def record(criterion: int, name: str, passed: bool, detail: str) -> bool:
    ACCEPTANCE.setdefault(criterion, []).append((name, bool(passed), detail))
    return bool(passed)


@pytest.fixture
def acceptance():
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for cid in sorted(ACCEPTANCE):
        rows = ACCEPTANCE[cid]
        failed = [r for r in rows if not r[1]]
        status = "PASS" if not failed else "FAIL"
        note = "; ".join(f"{name}: {detail}" for name, _, detail in failed)
        tr.write_line(f"criterion {cid:>2}: {status}  ({len(rows) - len(failed)}/{len(rows)} checks)"
                      + (f"  {note}" if note else ""))
