"""Build the optional Cython kernels.

Set GRADDIV_NO_EXT=1 to skip compilation; the package then runs on the
numpy fallback in graddiv._pykernels.
"""
import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("GRADDIV_NO_EXT"):
    try:
        import numpy as np
        from Cython.Build import cythonize
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "graddiv._ckernels",
                    ["src/graddiv/_ckernels.pyx"],
                    include_dirs=[np.get_include()],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={
                "language_level": "3",
                "boundscheck": False,
                "wraparound": False,
                "cdivision": True,
            },
        )

setup(ext_modules=ext_modules)
