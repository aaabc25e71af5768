import os

from setuptools import Extension, setup

# The compiled search kernel is optional; the package falls back to the
# pure-Python kernel when the extension is missing.
ext_modules = []
if not os.environ.get("ROTLABEL_NO_EXT"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [
                Extension(
                    "rotlabel._csearch",
                    ["src/rotlabel/_csearch.pyx"],
                    language="c++",
                    extra_compile_args=["-O3", "-std=c++17"],
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
