"""Build the optional Cython kernels.

The package works without them: ``robinspec.kernels`` falls back to the
pure-Python implementation when the extension is missing.
"""
from setuptools import setup

try:
    from Cython.Build import cythonize
    import numpy as np
except ImportError:  # pragma: no cover
    ext_modules = []
else:
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "robinspec._ckernels",
                ["src/robinspec/_ckernels.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
