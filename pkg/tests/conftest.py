import pytest

_ACCEPTANCE: list[tuple[int, str, bool, str]] = []


class AcceptanceLog:
    def record(self, number: int, name: str, passed: bool, detail: str = "") -> None:
        _ACCEPTANCE.append((number, name, passed, detail))
        print(f"[criterion {number}] {'PASS' if passed else 'FAIL'} {name}: {detail}")


@pytest.fixture(scope="session")
def acceptance():
    return AcceptanceLog()


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, name, passed, detail in sorted(_ACCEPTANCE):
        terminalreporter.write_line(f"{number:>2}. {'PASS' if passed else 'FAIL'}  {name}  ({detail})")
