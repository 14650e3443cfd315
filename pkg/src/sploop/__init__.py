"""SP numbers (a prime times a square larger than 1), the loop Q they
form under a • b = N(|a - b|), and verifiers for the structure's claims.
"""

from .analytics import (
    DENSITY_TARGET,
    DensityRow,
    DigitCensus,
    HurwitzEval,
    density_table,
    digit1_constant,
    digit_census,
    gap_histogram,
    hurwitz_zeta2,
)
from .errors import (
    CacheChecksumError,
    CacheError,
    CacheMagicError,
    CacheTruncatedError,
    CacheVersionError,
    CapacityError,
    ChainBrokenError,
    DomainError,
    MembershipError,
    NotFoundError,
    SearchBudgetError,
    SploopError,
    ValidationError,
)
from .loop_algebra import (
    CayleyTable,
    SubLoop,
    cayley_table,
    find_nonassoc_witness,
    fixed_point,
    lop,
    sub_loop,
)
from .sieve import QIndex, SpSieve, build_sieve, load_cache, save_cache
from .spcore import SpDecomposition, factorize, is_prime, is_sp, sp_decompose
from .theorems import (
    GapRun,
    SpAp,
    SpPair,
    check_adjacency,
    check_twin_shift,
    construct_sp_ap,
    find_gap_run,
    find_prime_ap,
    gap_pairs,
    scan_bertrand,
    search_equal_triple,
    sp_ap_from_terms,
    verify_bullet_chain,
)

__version__ = "0.1.0"

__all__ = [
    "DENSITY_TARGET",
    "CacheChecksumError",
    "CacheError",
    "CacheMagicError",
    "CacheTruncatedError",
    "CacheVersionError",
    "CapacityError",
    "CayleyTable",
    "ChainBrokenError",
    "DensityRow",
    "DigitCensus",
    "DomainError",
    "GapRun",
    "HurwitzEval",
    "MembershipError",
    "NotFoundError",
    "QIndex",
    "SearchBudgetError",
    "SpAp",
    "SpDecomposition",
    "SpPair",
    "SpSieve",
    "SploopError",
    "SubLoop",
    "ValidationError",
    "build_sieve",
    "cayley_table",
    "check_adjacency",
    "check_twin_shift",
    "construct_sp_ap",
    "density_table",
    "digit1_constant",
    "digit_census",
    "factorize",
    "find_gap_run",
    "find_nonassoc_witness",
    "find_prime_ap",
    "fixed_point",
    "gap_histogram",
    "gap_pairs",
    "hurwitz_zeta2",
    "is_prime",
    "is_sp",
    "load_cache",
    "lop",
    "save_cache",
    "scan_bertrand",
    "search_equal_triple",
    "sp_ap_from_terms",
    "sp_decompose",
    "sub_loop",
    "verify_bullet_chain",
]
