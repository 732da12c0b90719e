"""Builds the optional compiled Laurent kernels when Cython is available."""

import os

from setuptools import setup

ext_modules = []
if not os.environ.get("HEISCAT_PURE"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        pass
    else:
        ext_modules = cythonize(["src/heiscat/_ckernels.pyx"], quiet=True)

setup(ext_modules=ext_modules)
