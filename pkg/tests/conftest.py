import pytest

# criterion id -> (passed, detail); filled by the acceptance tests
ACCEPTANCE_RESULTS: dict[str, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_RESULTS, key=lambda k: int(k.split()[0])):
        ok, detail = ACCEPTANCE_RESULTS[key]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {key}: {detail}")


@pytest.fixture
def report():
    def record(key: str, ok: bool, detail: str) -> bool:
        ACCEPTANCE_RESULTS[key] = (bool(ok), detail)
        print(f"[{'PASS' if ok else 'FAIL'}] criterion {key}: {detail}")
        return bool(ok)

    return record
