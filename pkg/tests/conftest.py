import os

import pytest
from hypothesis import HealthCheck, settings

from curvelab.uroots import check_isol, record_rootsets

settings.register_profile(
    "default",
    deadline=None,
    derandomize=True,
    max_examples=int(os.environ.get("CURVELAB_HYPOTHESIS_EXAMPLES", "40")),
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("default")


@pytest.fixture(autouse=True)
def isol_guard(request):
    """Run the Isol 1-3 checker on every well-isolated RootSet a test produces."""
    from tests.acceptance_log import ISOL

    with record_rootsets() as box:
        yield box
    bad = []
    for rs in box:
        v = check_isol(rs)
        if v:
            bad.append((request.node.nodeid, v))
    ISOL["rootsets"] += len(box)
    ISOL["violations"].extend(bad)
    assert not bad, f"Isol 1-3 violated: {bad[:3]}"


def pytest_terminal_summary(terminalreporter):
    from tests.acceptance_log import ISOL, RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(RESULTS):
        ok, detail = RESULTS[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
    n, bad = ISOL["rootsets"], len(ISOL["violations"])
    terminalreporter.write_line(f"Isol 1-3 over the whole session: {n} RootSets checked, {bad} violations")
