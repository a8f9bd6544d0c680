"""Build script.

The compiled kernel extension is optional: source distributions work on any
interpreter by falling back to the pure-Python kernels.  Set
TRANSVERSAL_SKIP_EXT=1 to force a pure-Python install even when Cython is
available.
"""

import os

from setuptools import setup

PYX = "src/transversal/_kernels/_ckern.pyx"

ext_modules = []
if not os.environ.get("TRANSVERSAL_SKIP_EXT") and os.path.exists(PYX):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize([PYX], language_level=3)
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
