import io
import sys
from contextlib import redirect_stderr, redirect_stdout
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from rupert import cli  # noqa: E402
from rupert.solids import full_catalogue  # noqa: E402

DATA = Path(__file__).parent / "data"
KNOWN = DATA / "known"

# one line per acceptance criterion, printed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def catalogue():
    return full_catalogue()


@pytest.fixture
def rupert_home(tmp_path, monkeypatch):
    home = tmp_path / "home"
    monkeypatch.setenv("RUPERT_HOME", str(home))
    return home


class CliResult:
    def __init__(self, code, out, err):
        self.code, self.out, self.err = code, out, err


def run_cli(*argv) -> CliResult:
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = cli.main([str(a) for a in argv])
    return CliResult(code, out.getvalue(), err.getvalue())


@pytest.fixture
def rupert(rupert_home):
    """Run the CLI in-process with a private registry holding every shipped manifest."""
    assert run_cli("ingest", "--shipped", "all").code == 0
    return run_cli


@pytest.fixture
def rupert_fresh(rupert_home):
    return run_cli


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
