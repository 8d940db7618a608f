"""Build hook for the optional compiled annealing kernel.

If Cython or a C compiler is missing the package still installs and falls
back to the pure-Python kernel at import time.
"""

import os

from setuptools import setup

ext_modules = []
if os.environ.get("SPHERICAL_THRACKLE_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        pass
    else:
        # no fast-math and no FMA contraction: the compiled kernel must stay
        # bit-identical to the Python reference
        ext = Extension(
            "spherical_thrackle._anneal",
            ["src/spherical_thrackle/_anneal.pyx"],
            extra_compile_args=["-O2", "-ffp-contract=off", "-fno-fast-math"],
        )
        ext_modules = cythonize([ext], language_level=3, quiet=True)

setup(ext_modules=ext_modules)
