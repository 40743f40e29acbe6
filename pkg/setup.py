"""Build script: compiles the optional bitset kernel extension."""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "kfl._kernel._speedups",
                ["src/kfl/_kernel/_speedups.pyx"],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    # no Cython available: the pure-Python kernel is used at runtime
    ext_modules = []

setup(ext_modules=ext_modules)
