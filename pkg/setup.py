"""Build the optional compiled kernels.

If Cython or a compiler is unavailable the package still installs and uses the
pure-Python kernels.
"""

from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "trajint._kernels._fast",
                ["src/trajint/_kernels/_fast.pyx"],
                include_dirs=[numpy.get_include()],
            )
        ],
        compiler_directives={
            "language_level": "3str",
            "boundscheck": False,
            "wraparound": False,
        },
        quiet=True,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
