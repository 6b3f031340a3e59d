"""Build script: compiles the mod-p row reduction kernel when Cython is available.

The package works without the extension (a pure numpy fallback is selected at
import time), so any failure here is reported but not fatal.
"""
import sys

from setuptools import setup

ext_modules = []
try:
    import numpy as np
    from Cython.Build import cythonize
    from setuptools.extension import Extension

    extensions = [
        Extension(
            "siltkit._modp",
            ["src/siltkit/_modp.pyx"],
            include_dirs=[np.get_include()],
            define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        )
    ]
    ext_modules = cythonize(extensions, compiler_directives={"language_level": "3"})
except Exception as exc:  # pragma: no cover - build environment dependent
    sys.stderr.write(f"siltkit: skipping compiled kernel ({exc}); pure fallback will be used\n")

setup(ext_modules=ext_modules)
