"""High-precision prime zeta and almost-prime zeta functions.

The accelerated evaluators reduce everything to Riemann zeta values and a
finite product over small primes; a sieve-based oracle provides independent
direct sums for checking them.
"""

from .almost_prime import (
    almost_prime_zeta,
    almost_prime_zeta_moebius,
    almost_prime_zeta_prime,
    odd_index_sum,
)
from .constants import (
    B,
    B_moebius,
    L,
    factorial_reciprocal_identity,
    hurwitz_almost_prime,
    hurwitz_almost_prime_prime,
    log2_component,
    squared_prime_constant,
    tau,
    zeta_partial_fraction_sum,
)
from .errors import DivergenceError, DomainError, PrecisionError, ResourceError
from .partitions import partitions_of
from .prime_zeta import (
    log_weighted_prime_sum,
    log_weighted_rational_sum,
    prime_zeta,
    prime_zeta_moment,
    prime_zeta_moment_total,
    prime_zeta_prime,
)
from .sieve import build_sieve, enumerate_almost_primes
from .zeta_core import PrecisionContext, zeta, zeta_prime

__version__ = "0.1.0"


def clear_caches() -> None:
    """Drop memoized zeta, prime zeta and almost-prime values (for cold timings)."""
    from . import almost_prime, zeta_core
    from .prime_zeta import CACHE

    CACHE.clear()
    with almost_prime._seq_lock:
        almost_prime._seq_cache.clear()
    with zeta_core._tail_lock:
        zeta_core._tail_cache.clear()
