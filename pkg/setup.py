"""Build the optional Cython kernels.

If Cython is missing or the compiler fails, the package installs without the
extension and falls back to the numpy implementation at import time.
"""
import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("CQEDKIT_NO_EXT"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [
                Extension(
                    "cqedkit._kernels",
                    ["src/cqedkit/_kernels.pyx"],
                    extra_compile_args=["-O3"],
                    optional=True,
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
