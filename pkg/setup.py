"""Builds the optional compiled search kernel; the package works without it."""

import os

from setuptools import setup

ext_modules = []
if os.environ.get("HOMALG_NO_EXTENSION", "") not in ("1", "true", "yes"):
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [Extension("homalg.search._ckernel", ["src/homalg/search/_ckernel.pyx"], extra_compile_args=["-O3"])],
            compiler_directives={"language_level": "3"},
            quiet=True,
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
