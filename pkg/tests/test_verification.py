import json

import pytest

from diagrams import Character
from errors import VerificationFailure, WallCrossingError
from verification import agreement, exhaustive, package_certificate, require


def test_agreement_passes_on_identical_pipelines():
    verdict = agreement("squares", range(10), lambda k: k * k, lambda k: k ** 2)
    assert verdict == {"name": "squares", "passed": True, "checked": 10, "first_failure": None}


def test_agreement_reports_first_disagreement():
    verdict = agreement("off by one", [(0, 0), (1, 2), (3, 4)], lambda k: sum(k), lambda k: 3)
    assert not verdict["passed"]
    assert verdict["checked"] == 1
    assert verdict["first_failure"] == {"key": [0, 0], "left": 0, "right": 3}


def test_exhaustive_describes_the_failing_case():
    verdict = exhaustive(
        "in block",
        [Character((0, 1)), Character((0, 5))],
        lambda chi: chi.in_block(4),
        describe=lambda chi: {"chi": chi},
    )
    assert not verdict["passed"]
    assert verdict["first_failure"] == {"case": {"chi": [0, 5]}}


def test_exhaustive_on_nothing_passes():
    assert exhaustive("empty", [], lambda case: False)["passed"]


def test_package_certificate_is_json():
    good = agreement("a", [1], str, str)
    bad = exhaustive("b", [1], lambda case: False)
    certificate = package_certificate({"v": [4, 3]}, [good, bad])
    assert not certificate["passed"]
    assert certificate["certificate"]["subject"] == {"v": [4, 3]}
    assert json.loads(json.dumps(certificate)) == certificate


def test_require():
    report = {"name": "ok", "passed": True}
    assert require(report) is report
    with pytest.raises(VerificationFailure) as info:
        require({"name": "windows", "passed": False, "first_failure": {"case": 3}})
    assert isinstance(info.value, WallCrossingError)
    assert info.value.report["name"] == "windows"
    assert "windows failed" in str(info.value)
