"""Build script for the optional compiled kernels.

The package works without the extension (a NumPy fallback is selected at
import time), so a failed compile downgrades to a warning instead of
aborting the install.
"""

import sys

from setuptools import Extension, setup


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        print("hexblur: Cython not available, skipping compiled kernels", file=sys.stderr)
        return []
    ext = Extension(
        "hexblur._kernels",
        ["src/hexblur/_kernels.pyx"],
        # fp-contract off: the fallback backend must produce bit-identical
        # doubles, and FMA fusion would silently break that.
        extra_compile_args=["-O3", "-ffp-contract=off"],
    )
    return cythonize(
        [ext],
        compiler_directives={
            "language_level": 3,
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
            "initializedcheck": False,
        },
    )


setup(ext_modules=extensions())
