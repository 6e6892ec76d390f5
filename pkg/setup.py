import os

import numpy as np
from setuptools import Extension, setup

ext_modules = []
if os.environ.get("ESMHD_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
    except ImportError:  # numpy fallback still works
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [Extension("esmhd._ext", ["src/esmhd/_ext.pyx"],
                       include_dirs=[np.get_include()],
                       extra_compile_args=["-O3"],
                       define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")])],
            compiler_directives={"language_level": 3},
        )

setup(ext_modules=ext_modules)
