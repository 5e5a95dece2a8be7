"""Build script: compiles the optional accelerator extension.

The package is fully functional without the extension (a pure numpy
fallback is selected at import time); the build therefore tolerates a
missing or failing C toolchain instead of aborting the install.
"""

import sys

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/entcalc/_kernel/_core.pyx"],
        language_level=3,
    )
except Exception as exc:  # no Cython or no compiler: install fallback only
    print(f"entcalc: skipping compiled kernel ({exc})", file=sys.stderr)

setup(ext_modules=ext_modules)
