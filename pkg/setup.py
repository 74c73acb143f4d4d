"""Build the optional compiled kernels.

The package works without them (``signsum._fallback`` is used); set
``SIGNSUM_NO_EXT=1`` to skip compilation entirely.
"""
import os
import sys

from setuptools import setup

ext_modules = []
if not os.environ.get("SIGNSUM_NO_EXT"):
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension

        openmp = [] if sys.platform == "darwin" else ["-fopenmp"]
        ext_modules = cythonize(
            [
                Extension(
                    "signsum._kernels",
                    ["src/signsum/_kernels.pyx"],
                    include_dirs=[np.get_include()],
                    extra_compile_args=["-O3"] + openmp,
                    extra_link_args=openmp,
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError as exc:  # pragma: no cover
        print(f"signsum: building without compiled kernels ({exc})", file=sys.stderr)

setup(ext_modules=ext_modules)
