"""Build script: compiles the optional fast kernel extension.

The package works without the extension (a pure-Python kernel module is
selected at import time); set GRIDPOS_NO_EXT=1 to skip compilation.
"""

import os

from setuptools import Extension, setup


def _extensions():
    if os.environ.get("GRIDPOS_NO_EXT", "").strip() not in ("", "0"):
        return []
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension(
        "gridpos._speedups",
        ["src/gridpos/_speedups.pyx"],
        extra_compile_args=["-O3"],
    )
    return cythonize([ext], language_level="3")


setup(ext_modules=_extensions())
