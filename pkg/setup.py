import os

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

# The compiled kernel is optional: without it the package falls back to the
# pure-Python evaluator.  Set NIMCORE_PURE=1 to force the fallback build.
extensions = []
if cythonize is not None and not os.environ.get("NIMCORE_PURE"):
    extensions = cythonize(
        [
            Extension(
                "nimcore.circuits.kernels._fast",
                ["src/nimcore/circuits/kernels/_fast.pyx"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=extensions)
