"""Finite-blocklength channel code laboratory (C++ core)."""

from ._fblab import (  # noqa: F401
    __version__,
    analyze,
    beta_alpha,
    capacity,
    cli,
    generate_code,
    kl,
    selftest_payload,
    tv,
    wasserstein,
)

__all__ = [
    "analyze",
    "beta_alpha",
    "capacity",
    "cli",
    "generate_code",
    "kl",
    "selftest_payload",
    "tv",
    "wasserstein",
]
