import numpy as np
from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext = Extension(
        "zbarfit._kernels._core",
        sources=["src/zbarfit/_kernels/_core.pyx"],
        include_dirs=[np.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_9_API_VERSION")],
    )
    ext_modules = cythonize(
        [ext],
        compiler_directives={
            "language_level": 3,
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
except Exception:
    # the package runs on the pure numpy kernels when the extension
    # cannot be built; see zbarfit/_kernels/__init__.py
    ext_modules = []

setup(ext_modules=ext_modules)
