"""The twelve acceptance criteria at their stated tolerances.

Each test prints its check lines and a one-line verdict.  Two literal targets
are contradicted by direct computation; they stay as strict xfails next to the
corrected checks, which must pass.
"""

import functools
import time

import pytest

from cylstokes.acceptance import CRITERIA, KNOWN

SECONDS_PER_ITEM = 30.0
SECONDS_TOTAL = 180.0


@functools.lru_cache(maxsize=None)
def results(k):
    t0 = time.perf_counter()
    checks = CRITERIA[k]()
    return checks, time.perf_counter() - t0


@pytest.mark.parametrize("k", sorted(CRITERIA))
def test_criterion(k, capsys):
    checks, seconds = results(k)
    hard = [c for c in checks if c.note != KNOWN]
    ok = all(c.passed for c in hard)
    with capsys.disabled():
        print()
        for c in checks:
            print("    " + c.line())
        print(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'} ({len(hard)} checks, {seconds:.1f} s)")
    assert hard, "every criterion needs at least one binding check"
    assert ok, "; ".join(c.line() for c in hard if not c.passed)
    assert seconds < SECONDS_PER_ITEM


def _known(k, prefix):
    checks, _ = results(k)
    picked = [c for c in checks if c.check_id.startswith(prefix)]
    assert picked
    return picked


@pytest.mark.xfail(strict=True, reason="the literal U_ex gap-stress target has the wrong gauge constant and sign; "
                                       "criterion 8 passes with the corrected form")
def test_criterion_08_literal_extensional_form():
    assert all(c.passed for c in _known(8, "8.narrow_ex[literal]"))


@pytest.mark.xfail(strict=True, reason="Green's identity pairs psi_3 with sigma[h_2] over both cylinders, "
                                       "giving twice the dD_2 pairing; criterion 11 passes in that form")
def test_criterion_11_literal_reciprocity():
    assert all(c.passed for c in _known(11, "11.reciprocity[dD_2 both sides]"))


def test_suite_runtime():
    total = sum(results(k)[1] for k in CRITERIA)
    print(f"\nacceptance suite: {total:.1f} s")
    assert total < SECONDS_TOTAL
