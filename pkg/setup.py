import os

import numpy
from Cython.Build import cythonize
from setuptools import Extension, setup

random_lib_dir = os.path.join(os.path.dirname(numpy.random.__file__), "lib")

setup(
    ext_modules=cythonize(
        [
            Extension(
                "branchenv._kernels",
                ["src/branchenv/_kernels.pyx"],
                include_dirs=[numpy.get_include()],
                library_dirs=[random_lib_dir],
                libraries=["npyrandom"],
                extra_compile_args=["-O3"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )
)
