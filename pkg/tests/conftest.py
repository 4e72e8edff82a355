import pytest

# one summary line per acceptance criterion at the end of the run
_criteria = {}


def pytest_runtest_logreport(report):
    name = report.nodeid.rsplit("::", 1)[-1]
    if "test_acceptance" not in report.nodeid or not name.startswith("test_criterion_"):
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _criteria[name] = "PASS" if report.outcome == "passed" else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_criteria):
        number = int(name.split("_")[2])
        label = " ".join(name.split("_")[3:])
        terminalreporter.write_line(f"criterion {number:2d} {_criteria[name]}  {label}")


@pytest.fixture
def tmp_instance(tmp_path):
    from alpha_cut import serialize_instance

    def write(inst, name="instance.json"):
        path = tmp_path / name
        path.write_text(serialize_instance(inst))
        return str(path)

    return write
