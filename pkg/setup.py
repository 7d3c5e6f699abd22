"""Build hook for the optional compiled kernels.

If Cython or a C compiler is unavailable the extension is skipped and
``conflab.kernels`` falls back to the numpy implementations.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("conflab._kernels", ["src/conflab/_kernels.pyx"],
                   extra_compile_args=["-O3"], optional=True)],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
