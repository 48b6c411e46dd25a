"""
Verification helpers for exact identities
Two independent pipelines are evaluated on the same keys and must agree;
exhaustive checks run a predicate over every case. Both produce verdict
dicts that can be packaged into a machine-readable certificate.
"""

import logging
from typing import Any, Callable, Dict, Iterable, Optional

from errors import VerificationFailure

logger = logging.getLogger(__name__)


def _verdict(name: str, checked: int, first_failure: Optional[Dict]) -> Dict:
    return {
        "name": name,
        "passed": first_failure is None,
        "checked": checked,
        "first_failure": first_failure,
    }


def agreement(
    name: str,
    keys: Iterable,
    left: Callable[[Any], Any],
    right: Callable[[Any], Any],
) -> Dict:
    """
    Evaluate both pipelines on every key, stop at the first disagreement

    Returns:
        verdict dict; first_failure holds the key and both values
    """
    checked = 0
    for key in keys:
        checked += 1
        lhs, rhs = left(key), right(key)
        if lhs != rhs:
            logger.info("%s disagrees at %s: %s != %s", name, key, lhs, rhs)
            return _verdict(name, checked, {"key": _jsonable(key), "left": _jsonable(lhs), "right": _jsonable(rhs)})
    logger.debug("%s agrees on %d keys", name, checked)
    return _verdict(name, checked, None)


def exhaustive(
    name: str,
    cases: Iterable,
    predicate: Callable[[Any], bool],
    describe: Callable[[Any], Any] = None,
) -> Dict:
    """Run predicate over every case; the first case returning False is reported."""
    checked = 0
    for case in cases:
        checked += 1
        if not predicate(case):
            detail = describe(case) if describe else case
            logger.info("%s fails at %s", name, detail)
            return _verdict(name, checked, {"case": _jsonable(detail)})
    logger.debug("%s holds on %d cases", name, checked)
    return _verdict(name, checked, None)


def package_certificate(subject: Dict, checks: Iterable[Dict]) -> Dict:
    """Wrap verdicts for one subject into a certificate."""
    checks = list(checks)
    return {
        "certificate": {
            "subject": subject,
            "checks": checks,
        },
        "passed": all(check["passed"] for check in checks),
    }


def require(report: Dict) -> Dict:
    if not report.get("passed", False):
        raise VerificationFailure(report)
    return report


def _jsonable(value: Any) -> Any:
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if hasattr(value, 'to_json'):
        return value.to_json()
    if isinstance(value, (bool, str)) or value is None:
        return value
    if isinstance(value, int):
        return value
    return str(value)
