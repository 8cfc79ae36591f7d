"""Build the optional Cython kernel extension.

The package works without it: ``initial_integrals.kernels`` falls back to
the pure-Python kernels when the extension is missing.
"""

import os

from setuptools import setup

ext_modules = []
if os.environ.get("INITIAL_INTEGRALS_NO_EXT", "") in ("", "0"):
    try:
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "initial_integrals._kernels",
                    ["src/initial_integrals/_kernels.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
