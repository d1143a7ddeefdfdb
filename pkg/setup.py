"""Build script: compiles the optional Cython kernels.

If Cython or a C compiler is missing the package still installs and the
pure-Python kernels are used at runtime.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

ext_modules = []
if cythonize is not None:
    ext_modules = cythonize(
        [
            Extension(
                "spinchain._ckernels",
                ["src/spinchain/_ckernels.pyx"],
                # plain complex products; all values are finite
                extra_compile_args=["-O3", "-fcx-limited-range"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
