"""Build the optional compiled convolution kernel.

The package is fully functional without it (a pure-Python fallback is
selected at import time), so a failed extension build only costs speed.
"""

import os

from setuptools import setup

ext_modules = []
if not os.environ.get("LOOPDIRAC_SKIP_EXT"):
    try:
        import numpy
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "loopdirac._kernels",
                    ["src/loopdirac/_kernels.pyx"],
                    include_dirs=[numpy.get_include()],
                    language="c++",
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                )
            ],
            language_level=3,
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
