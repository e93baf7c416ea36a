from setuptools import Extension, setup

# The compiled kernels are optional: if no compiler (or no Cython) is
# available the package installs anyway and falls back to the pure-Python
# implementations in byolkit._kernels.pure.
try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "byolkit._kernels._fast",
                ["src/byolkit/_kernels/_fast.pyx"],
                optional=True,
            )
        ],
        language_level="3",
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
