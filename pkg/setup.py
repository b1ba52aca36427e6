import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("LEAPVOTE_NO_EXT"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "leapvote._kernel",
                    ["src/leapvote/_kernel.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        # No Cython: ship without the extension; the pure-Python kernel
        # is selected automatically at import time.
        ext_modules = []

setup(ext_modules=ext_modules)
