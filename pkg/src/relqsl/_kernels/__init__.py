"""Hot kernels for the chi integral.

The compiled extension is preferred; the numpy implementation is used when it
was not built. ``BACKEND`` names the one in use.
"""
try:
    from ._ckernels import boost_weight, chi_mc_values, chi_panel

    BACKEND = "cython"
except ImportError:  # extension not built
    from ._pykernels import boost_weight, chi_mc_values, chi_panel

    BACKEND = "python"

__all__ = ["BACKEND", "boost_weight", "chi_mc_values", "chi_panel"]
