"""Builds the optional compiled kernels; everything else is declarative in
pyproject.toml. Without Cython or a C compiler the install still succeeds
and the package falls back to the pure-Python kernels."""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "alignru._kernels",
                ["src/alignru/_kernels.pyx"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
