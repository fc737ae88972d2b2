"""Build the optional compiled kernels.

The package works without them: ``relqsl._kernels`` falls back to the numpy
implementation when the extension cannot be imported.
"""
import os
import sys

from setuptools import setup

ext_modules = []
if os.environ.get("RELQSL_NO_EXT") != "1":
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        sys.stderr.write("relqsl: Cython/numpy unavailable, building pure-Python only\n")
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "relqsl._kernels._ckernels",
                    ["src/relqsl/_kernels/_ckernels.pyx"],
                    include_dirs=[np.get_include()],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={
                "language_level": 3,
                "boundscheck": False,
                "wraparound": False,
                "cdivision": True,
            },
        )

setup(ext_modules=ext_modules)
