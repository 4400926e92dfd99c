"""Builds the compiled stepping kernel.

The extension is optional: if Cython (or a C compiler) is unavailable the
package installs anyway and falls back to the pure-numpy kernel at import
time, at a substantial speed cost for long runs.
"""

from setuptools import Extension, setup

try:
    import numpy
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "chemotax._stepkernel",
                ["src/chemotax/_stepkernel.pyx"],
                include_dirs=[numpy.get_include()],
                # -ffp-contract=off: no FMA contraction, so the compiled
                # lane stays bit-identical to the numpy fallback.
                extra_compile_args=["-O3", "-ffp-contract=off"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
