"""End-to-end acceptance suite.

Each test runs one of the heavyweight verification checks, asserts it passed
within its runtime limit, and registers one PASS/FAIL line printed in the
terminal summary.
"""

import pathlib

from kloosterman.verification import (
    check_bruhat,
    check_counts,
    check_gl2_oracle,
    check_gl3_oracle,
    check_gl4_consistency,
    check_long_unit_values,
    check_power_saving,
    check_shift_invariance,
    check_star_unit_values,
    check_weil,
)

from conftest import record_criterion

FIXTURE = pathlib.Path(__file__).parent / "fixtures" / "delta_scan.csv"


def _assert(number, result, max_seconds=None):
    record_criterion(number, result.name, result.passed, result.detail)
    assert result.passed, result.detail
    if max_seconds is not None:
        assert result.seconds < max_seconds, (
            f"criterion {number} took {result.seconds:.1f}s (limit {max_seconds}s)"
        )


def test_criterion_01_star_unit_values():
    _assert(1, check_star_unit_values(), max_seconds=60)


def test_criterion_02_long_unit_values():
    _assert(2, check_long_unit_values(), max_seconds=60)


def test_criterion_03_rank_one_oracle():
    _assert(3, check_gl2_oracle(), max_seconds=120)


def test_criterion_04_rank_two_oracle():
    _assert(4, check_gl3_oracle(), max_seconds=600)


def test_criterion_05_counting_formulas():
    _assert(5, check_counts())


def test_criterion_06_bruhat_factorizations():
    _assert(6, check_bruhat(), max_seconds=60)


def test_criterion_07_representative_shift_invariance():
    _assert(7, check_shift_invariance())


def test_criterion_08_weil_bound_exhaustive():
    _assert(8, check_weil())


def test_criterion_09_gl4_consistency():
    _assert(9, check_gl4_consistency())


def test_criterion_10_power_saving_scan():
    _assert(10, check_power_saving(fixture_path=str(FIXTURE)))
