import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "curvecalc._fastkernels",
                ["src/curvecalc/_fastkernels.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    # the package falls back to the numpy kernels at import time
    extensions = []

setup(ext_modules=extensions)
