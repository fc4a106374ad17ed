"""One line per acceptance criterion, at the default configuration."""

import pytest

from twistsection.acceptance import CHECKS, run_check
from twistsection.report import RunConfig

CONFIG = RunConfig().validate()


@pytest.mark.parametrize("name,fn", CHECKS, ids=[name for name, _ in CHECKS])
def test_criterion(name, fn):
    rec = run_check(name, fn, CONFIG)
    print(f"\n{'PASS' if rec.status == 'pass' else 'FAIL'} {name}: measured={rec.measured} "
          f"threshold={rec.threshold} {rec.detail}")
    assert rec.status == "pass", rec.detail
