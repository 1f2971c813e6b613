"""Build script for the compiled equalizer kernel.

The package works without the extension (a pure-Python kernel is selected
at import time), but the compiled loop is roughly two orders of magnitude
faster for long symbol streams.
"""

from setuptools import Extension, setup

import numpy as np
from Cython.Build import cythonize

extensions = [
    Extension(
        "hydrolink._kernels._dfe_cy",
        ["src/hydrolink/_kernels/_dfe_cy.pyx"],
        include_dirs=[np.get_include()],
        extra_compile_args=["-O3"],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
]

setup(
    ext_modules=cythonize(extensions, compiler_directives={"language_level": "3"}),
)
