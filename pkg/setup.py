import numpy as np
from Cython.Build import cythonize
from setuptools import Extension, setup

ext = Extension(
    "wisig._smo_c",
    ["src/wisig/_smo_c.pyx"],
    include_dirs=[np.get_include()],
    extra_compile_args=["-O3"],
    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
)
# build failure degrades to the pure-python backend instead of killing install
ext.optional = True

setup(ext_modules=cythonize([ext], language_level=3))
