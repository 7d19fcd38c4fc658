"""Exact coefficients of log(e^{A_1}...e^{A_K}) and their denominators.

The interesting object is the common denominator of the degree-n
coefficients: it equals n! * d_n for an explicit integer sequence d_n
built from base-p digit sums, and this package computes both sides of
that equality exactly and verifies everything that is checkable at small
degrees.
"""

from .bch import (
    CommonDenominatorError,
    CongruenceReport,
    DenominatorReport,
    GoldbergDegreeResult,
    TableEntry,
    check_corollary_prime,
    check_corollary_prime_plus_one,
    coefficient_value_table,
    degree_coefficients,
    degree_report,
    goldberg_check,
    numerator_over_common,
    table11,
)
from .errors import BudgetError
from .freealgebra import (
    DegreeTable,
    TruncatedSeries,
    Word,
    all_words,
    bch_coeff_word,
    bch_series,
    series_exp_generator,
    series_log1p,
    series_multiply,
    staircase_coeff,
)
from .numtheory import (
    PadicExpansion,
    PrimeFactorization,
    Dn_bruteforce,
    bernoulli_numbers,
    bernoulli_poly_denominator,
    common_denominator,
    compositions,
    compositions_into,
    compute_dn,
    constructive_partition,
    digit_sum,
    factorial_valuation,
    goldberg_denominator,
    hp_min,
    is_prime,
    multinomial_valuation,
    padic_expansion,
    padic_valuation,
    primes_below,
    squarefree_kernel,
)

__version__ = "0.1.0"

__all__ = [
    "BudgetError",
    "CommonDenominatorError",
    "CongruenceReport",
    "DegreeTable",
    "DenominatorReport",
    "Dn_bruteforce",
    "GoldbergDegreeResult",
    "PadicExpansion",
    "PrimeFactorization",
    "TableEntry",
    "TruncatedSeries",
    "Word",
    "all_words",
    "bch_coeff_word",
    "bch_series",
    "bernoulli_numbers",
    "bernoulli_poly_denominator",
    "check_corollary_prime",
    "check_corollary_prime_plus_one",
    "coefficient_value_table",
    "common_denominator",
    "compositions",
    "compositions_into",
    "compute_dn",
    "constructive_partition",
    "degree_coefficients",
    "degree_report",
    "digit_sum",
    "factorial_valuation",
    "goldberg_check",
    "goldberg_denominator",
    "hp_min",
    "is_prime",
    "multinomial_valuation",
    "numerator_over_common",
    "padic_expansion",
    "padic_valuation",
    "primes_below",
    "series_exp_generator",
    "series_log1p",
    "series_multiply",
    "squarefree_kernel",
    "staircase_coeff",
    "table11",
]
