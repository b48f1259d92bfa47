import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("VOLTEQ_SKIP_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [Extension("volteq.kernels._core", ["src/volteq/kernels/_core.pyx"])],
            language_level=3,
        )
    except ImportError:
        # No Cython at build time: the package falls back to the pure
        # NumPy kernels selected at import.
        ext_modules = []

setup(ext_modules=ext_modules)
