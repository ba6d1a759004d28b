"""Exact divisor statistics of Mersenne numbers 2^n +/- 1.

The package factors 2^n +/- 1 through the cyclotomic decomposition
2^n - 1 = prod over d | n of Phi_d(2), computes tau / omega statistics
and the summatory functions f and f', enumerates record-breaking
("highly composite Mersenne") indices, and ships a CLI that reproduces
the reference tables and figure series.
"""

from .arith import (PrimeTable, big_omega, chebyshev_theta, dirichlet_mean,
                    divisors, euler_phi, moebius, multiplicative_order, omega,
                    prime_pi, primorial, tau)
from .cyclotomic import (CyclotomicValue, bang_primitive_divisor, factor_phi2,
                         has_primitive_prime_divisor, intrinsic_prime,
                         omega_phi2, phi2, primitive_part,
                         product_identity_check)
from .errors import IncompleteDataError, StoreCorruptionError, StoreParseError
from .factoring import (FactorPolicy, Factorization, Verdict, factor,
                        is_probable_prime, perfect_power, pollard_p_minus_1,
                        pollard_rho, trial_division)
from .hcn import (HcnRecord, enumerate_hcn, hcn_tau_exponent, largest_hcn_leq,
                  tau_jump)
from .mersenne import (MINUS, PLUS, HcmRow, MersenneRow, SummarySeries,
                       compare_lower_bound, conjecture1_table,
                       conjecture2_scan, f_prime_sum, f_sum, factor_mersenne,
                       hcm_indices, mersenne_row, omega_decomposition_check,
                       omega_mersenne, ratio_series, tau_mersenne,
                       tau_upper_bound_check, theorem3_bound_check)
from .store import (BFile, BFileKind, FactorStore, Kind, StoreKey,
                    StoreRecord, import_bfile)

__version__ = "0.1.0"
