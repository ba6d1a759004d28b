from fractions import Fraction

import pytest

from mersennetau import arith
from mersennetau.errors import IncompleteDataError
from mersennetau.factoring import FactorPolicy
from mersennetau.mersenne import (MINUS, PLUS, compare_lower_bound,
                                  conjecture1_table, conjecture2_scan,
                                  f_prime_sum, f_sum, factor_mersenne,
                                  hcm_indices, mersenne_row,
                                  omega_decomposition_check, omega_mersenne,
                                  phi2_divisor_set, ratio_series, tau_lookup,
                                  tau_mersenne, tau_upper_bound_check,
                                  theorem3_bound_check)
from mersennetau.store import BFileKind, FactorStore

from reference_data import RECORD_ROWS


@pytest.fixture(scope="module")
def store():
    return FactorStore()


def test_divisor_sets():
    assert phi2_divisor_set(6, MINUS) == [1, 2, 3, 6]
    assert phi2_divisor_set(6, PLUS) == [4, 12]
    assert phi2_divisor_set(1, MINUS) == [1]
    assert phi2_divisor_set(1, PLUS) == [2]


def test_factor_mersenne_examples(store):
    assert factor_mersenne(6, MINUS, store).factors == {3: 2, 7: 1}
    assert factor_mersenne(1, MINUS, store).factors == {}
    assert factor_mersenne(6, PLUS, store).factors == {5: 1, 13: 1}


def test_assembly_reconstructs(store):
    for n in range(1, 65):
        fac = factor_mersenne(n, MINUS, store)
        assert fac.complete
        assert fac.value() == (1 << n) - 1
        fac = factor_mersenne(n, PLUS, store)
        assert fac.complete
        assert fac.value() == (1 << n) + 1


def test_tau_mersenne_examples(store):
    assert tau_mersenne(12, MINUS, store) == 24
    assert tau_mersenne(18, MINUS, store) == 32
    assert tau_mersenne(10, MINUS, store) == 8  # 1023 = 3 * 11 * 31


def test_tau_mersenne_incomplete_names_blockers():
    starved = FactorStore(FactorPolicy(trial_bound=10, rho_budget=0, p_minus_1_bound=0))
    with pytest.raises(IncompleteDataError) as err:
        tau_mersenne(101, MINUS, starved)
    assert err.value.missing == [101]


def test_omega_mersenne(store):
    assert omega_mersenne(10, MINUS, store) == (3, True)
    starved = FactorStore(FactorPolicy(trial_bound=10, rho_budget=0, p_minus_1_bound=0))
    count, exact = omega_mersenne(101, MINUS, starved)
    assert not exact and count >= 1


def test_f_sums(store):
    assert f_sum(4, store) == 9  # 1 + 2 + 2 + 4
    assert f_prime_sum(4) == 18  # 2 + 4 + 4 + 8
    with pytest.raises(ValueError):
        f_sum(0, store)


def test_ratio_series(store):
    series = ratio_series(2, store)
    assert series.f == [1, 3, 5, 9]
    assert series.f_prime == [2, 6, 10, 18]
    assert series.ratio == [Fraction(3, 1), Fraction(3, 1)]
    series = ratio_series(10, store)
    assert series.ratio[1] == Fraction(9, 3)
    assert all(4 * f >= fp for f, fp in zip(series.f, series.f_prime))


def test_hcm_indices_to_100(store):
    rows = hcm_indices(100, store)
    assert [r.n for r in rows] == [1, 2, 4, 6, 8, 12, 18, 20, 24, 36, 48, 60, 72, 84]


def test_hcm_indices(store):
    rows = hcm_indices(24, store)
    assert [r.n for r in rows] == [1, 2, 4, 6, 8, 12, 18, 20, 24]
    by_n = {r.n: r for r in rows}
    assert by_n[20].tau_minus == 48 and by_n[20].ratio_plus == Fraction(1, 5)
    assert by_n[1].tau_minus == 1 and by_n[1].ratio_plus == Fraction(2)
    taus = [r.tau_minus for r in rows]
    assert taus == sorted(taus) and len(set(taus)) == len(taus)


def test_compare_lower_bound(store):
    assert compare_lower_bound(6, store)
    assert compare_lower_bound(1, store)
    assert all(compare_lower_bound(k, store) for k in range(1, 41))


def test_tau_upper_bound(store):
    assert tau_upper_bound_check(6, store)   # 6 <= 6^2
    assert tau_upper_bound_check(2, store)   # 2 <= 2
    assert all(tau_upper_bound_check(n, store) for n in range(2, 41))
    with pytest.raises(ValueError):
        tau_upper_bound_check(1, store)


def test_omega_decomposition(store):
    assert omega_decomposition_check(6, store) == (2, 3, 1)
    assert omega_decomposition_check(2, store)[2] == 0
    # n = 54: the intrinsic prime 3 appears at d = 6, 18 and 54, so the
    # defect is 3, above omega(54) = 2 but within big_omega(54) = 4.
    lhs, rhs, defect = omega_decomposition_check(54, store)
    assert defect == 3
    assert defect > arith.omega(54)
    assert defect <= arith.big_omega(54)
    assert omega_decomposition_check(120, store)[2] <= 3


def test_conjecture1_table(store):
    rows = conjecture1_table(20, store)
    assert rows == [(1, Fraction(2)), (2, Fraction(1)), (4, Fraction(1, 2)),
                    (6, Fraction(2, 3)), (8, Fraction(1, 4)), (12, Fraction(1, 3)),
                    (18, Fraction(8, 9)), (20, Fraction(1, 5))]


def test_conjecture2_scan_native(store):
    result = conjecture2_scan(40, store, c=10.0)
    assert result.exceptions == []
    assert result.argmax_d == 2
    assert abs(result.sup_ratio - 1.4427) < 5e-5
    low = conjecture2_scan(40, store, c=0.5)
    assert set(low.exceptions) >= {2, 11, 18, 20, 21, 23, 25, 28, 29, 35, 36, 37, 39}
    assert low.exceptions == [2, 3, 4, 5, 6, 7, 11, 18, 20, 21, 23, 25, 28, 29,
                              35, 36, 37, 39]


def test_theorem3_bound(store):
    assert theorem3_bound_check(6, store)   # tau(65) = 4 >= 2^(tau(3)-2) = 1
    assert theorem3_bound_check(1, store)   # degenerate: bound floors at 1
    assert all(theorem3_bound_check(n, store) for n in range(1, 41))


def test_mersenne_row(store):
    row = mersenne_row(12, MINUS, store)  # 4095 = 3^2 * 5 * 7 * 13
    assert (row.n, row.tau, row.omega, row.complete) == (12, 24, 4, True)
    starved = FactorStore(FactorPolicy(trial_bound=10, rho_budget=0, p_minus_1_bound=0))
    row = mersenne_row(101, MINUS, starved)
    assert row.tau is None and not row.complete and row.omega >= 1


def test_tau_lookup_prefers_imported(store, tmp_path):
    table_store = FactorStore()
    path = tmp_path / "tau.txt"
    path.write_text("10 8\n11 99\n", encoding="utf-8")
    table_store.attach_bfile(BFileKind.TAU_MERSENNE_MINUS, path)
    assert tau_lookup(10, MINUS, table_store) == 8
    # Imported values win over native computation (11 would natively be 4).
    assert tau_lookup(11, MINUS, table_store) == 99
    assert tau_lookup(12, MINUS, table_store) == 24  # falls back to native


def test_hcm_indices_with_fixtures(data_dir):
    store = FactorStore()
    store.attach_bfile(BFileKind.TAU_MERSENNE_MINUS,
                       data_dir / "tau_mersenne_minus_1080.txt")
    store.attach_bfile(BFileKind.TAU_MERSENNE_PLUS,
                       data_dir / "tau_mersenne_plus_records.txt")
    rows = hcm_indices(1080, store)
    assert [r.n for r in rows] == [n for n, _, _ in RECORD_ROWS]
    assert [r.tau_minus for r in rows] == [t for _, t, _ in RECORD_ROWS]


def test_hcm_indices_missing_data_is_loud():
    store = FactorStore(FactorPolicy(trial_bound=10, rho_budget=0, p_minus_1_bound=0))
    with pytest.raises(IncompleteDataError) as err:
        hcm_indices(140, store)
    assert 137 in err.value.missing
