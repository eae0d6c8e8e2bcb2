import numpy
from Cython.Build import cythonize
from setuptools import Extension, setup

setup(
    ext_modules=cythonize(
        [
            Extension(
                "olt._kernels",
                sources=["src/olt/_kernels.pyx"],
                include_dirs=[numpy.get_include()],
                optional=True,
            )
        ]
    ),
)
