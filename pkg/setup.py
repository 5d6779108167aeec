"""Build script for the optional compiled walk kernels.

The package works without the extension; ``qsbai._backend`` falls back to
the numpy implementation when ``qsbai._kernels`` cannot be imported.
"""
import os

from setuptools import setup

ext_modules = []
if not os.environ.get("QSBAI_NO_EXTENSION"):
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "qsbai._kernels",
                    ["src/qsbai/_kernels.pyx"],
                    include_dirs=[np.get_include()],
                    # no -ffast-math: output must stay bit-reproducible
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
