import pytest

CRITERIA = {
    1: "certificate soundness on the generated corpus",
    2: "agreement with brute force on GF(3) dim 2",
    3: "representing operator identities",
    4: "restricted forms are scalar multiples on root spaces",
    5: "radical tail on common-radical families",
    6: "radical dimension under Q -> Q(t)",
    7: "ultrafilter implications on stable-tail families",
    8: "negligible subspace equals st-form radical",
    9: "GF(2) hyperbolic plane obstruction",
    10: "byte-identical certificates across runs",
}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(n): acceptance criterion n")
    config._acceptance = {}
    config._acceptance_notes = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    n = marker.args[0]
    results = item.config._acceptance
    if rep.when == "call" or rep.failed:
        ok = rep.passed and not rep.failed
        results[n] = results.get(n, True) and ok


@pytest.fixture
def acceptance_note(request):
    """Attach a short note to the criterion of the running test."""
    marker = request.node.get_closest_marker("acceptance")

    def note(text):
        request.config._acceptance_notes.setdefault(marker.args[0], []).append(text)

    return note


def pytest_terminal_summary(terminalreporter, config):
    results = config._acceptance
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        if n not in results:
            continue
        status = "PASS" if results[n] else "FAIL"
        notes = "; ".join(config._acceptance_notes.get(n, []))
        line = f"criterion {n:2d}: {status}  {CRITERIA[n]}"
        terminalreporter.write_line(line + (f"  [{notes}]" if notes else ""))
