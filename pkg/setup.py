"""Build script for the optional compiled kernel.

The package is pure Python except for ecscalar._speedups, a small Cython
extension for the differential-evolution crossover inner loop.  If Cython
(or a C compiler) is unavailable the package still works: ecscalar.kernels
falls back to ecscalar._fallback at import time.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "ecscalar._speedups",
                ["src/ecscalar/_speedups.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
