"""Build script for the optional compiled kernel extension.

The package is pure Python except for ``varfields.kernels._ckernels``,
a Cython twin of ``varfields.kernels._pykernels``.  The extension is
marked optional: if no compiler (or no Cython) is available the install
still succeeds and the package falls back to the pure-Python kernels at
import time.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "varfields.kernels._ckernels",
                ["src/varfields/kernels/_ckernels.pyx"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
