"""Every registered property check must hold on the shipped corpus.

The battery itself runs once per session (see the prop_report fixture);
each test here reads off one outcome so failures name the exact check.
"""

import pytest

from invgen.properties import PROPERTY_CHECKS

ALL_CHECKS = [(suite, name) for suite, name, _fn in PROPERTY_CHECKS]


def test_registry_covers_every_suite():
    suites = {suite for suite, _, _ in PROPERTY_CHECKS}
    assert suites == {
        "group_core",
        "invariable",
        "chebotarev",
        "modlin",
        "genlift",
        "crowns",
        "harness",
    }
    assert len(PROPERTY_CHECKS) == len(set(ALL_CHECKS))


@pytest.mark.parametrize("suite,name", ALL_CHECKS)
def test_property(prop_report, suite, name):
    outcome = next(
        o for o in prop_report.outcomes if (o.suite, o.name) == (suite, name)
    )
    assert outcome.checked > 0
    assert outcome.passed, outcome.violations[:5]


def test_report_is_serializable(prop_report):
    import json

    data = json.loads(prop_report.to_json())
    assert data["passed"] is True
    assert len(data["checks"]) == len(PROPERTY_CHECKS)
