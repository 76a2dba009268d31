"""Build the optional Cython kernels.

Without Cython or a C compiler the package still installs and runs on the
pure-Python kernels in ``interpsub._kernels_py``.
"""
import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("INTERPSUB_NO_EXT"):
    try:
        import numpy as np
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "interpsub._kernels",
                    ["src/interpsub/_kernels.pyx"],
                    include_dirs=[np.get_include()],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        print("Cython/numpy unavailable; installing pure-Python kernels only")

setup(ext_modules=ext_modules)
