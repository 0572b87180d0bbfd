"""Suite-wide witness audit and the acceptance summary.

Every witness an engine returns anywhere in the suite is re-checked here with the
plain axiom checkers (and, for set rankings, the relation verifier), independent
of the engine's own check. The acceptance module runs last so it can read the
tally accumulated by the rest of the suite.
"""

import pytest

from choicesat import audit
from choicesat import axioms as ax
from choicesat.setrank import verify_set_witness

AUDIT = {"rule": 0, "setrank": 0, "failures": []}
ACCEPTANCE: dict[int, str] = {}


def _observe(kind, witness, **context):
    if kind == "rule":
        ok = all(ax.evaluate(lit, witness, context["decisive"]).satisfied for lit in context["literals"])
    else:
        ok = verify_set_witness(witness, context["gf"], context["ind"]) == []
    AUDIT[kind] += 1
    if not ok:
        AUDIT["failures"].append((kind, witness))
        raise AssertionError(f"audit: {kind} witness fails its certificate check")


@pytest.fixture(scope="session", autouse=True)
def witness_audit():
    audit.add_observer(_observe)
    yield AUDIT
    audit.remove_observer(_observe)


def pytest_collection_modifyitems(items):
    items.sort(key=lambda item: item.fspath.basename == "test_acceptance.py")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[number])
    terminalreporter.write_line(
        f"witnesses audited: {AUDIT['rule']} rules, {AUDIT['setrank']} set rankings,"
        f" {len(AUDIT['failures'])} failures"
    )


@pytest.fixture(scope="session")
def acceptance():
    return ACCEPTANCE
