from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

if cythonize is not None:
    ext_modules = cythonize(
        [
            Extension(
                "wdpdispatch._kernels._grid_cy",
                ["src/wdpdispatch/_kernels/_grid_cy.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
else:
    # No Cython at build time: ship pure Python, the numpy kernel is
    # selected at import.
    ext_modules = []

setup(ext_modules=ext_modules)
