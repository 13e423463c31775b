from ._stats import assert_chi_square_fits, assert_tv_below, assert_within_sigma

__all__ = [
    "assert_chi_square_fits",
    "assert_tv_below",
    "assert_within_sigma",
]
