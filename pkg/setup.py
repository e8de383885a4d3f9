"""Build the optional Cython kernels; everything else lives in pyproject.toml."""

import numpy
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # the pure-Python kernels take over
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("grovercost._kernels", ["src/grovercost/_kernels.pyx"], include_dirs=[numpy.get_include()],
                   define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")])],
        language_level=3,
    )

setup(ext_modules=ext_modules)
