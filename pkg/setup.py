"""Build script for the optional compiled kernel.

The package is pure Python plus one Cython extension holding the hot
evaluation loops.  If Cython or a C compiler is missing the build degrades
to the NumPy fallback (fracspline.kernels picks the backend at import).
"""

import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


def _extensions():
    try:
        import numpy
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension(
        "fracspline._kernels_cy",
        sources=["src/fracspline/_kernels_cy.pyx"],
        include_dirs=[numpy.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
    return cythonize(
        [ext],
        compiler_directives={
            "language_level": 3,
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )


class optional_build_ext(build_ext):
    """Never let a missing toolchain fail the install."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # noqa: BLE001 - any compiler failure is non-fatal
            print(f"compiled kernel skipped: {exc}", file=sys.stderr)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # noqa: BLE001
            print(f"compiled kernel skipped ({ext.name}): {exc}", file=sys.stderr)


setup(ext_modules=_extensions(), cmdclass={"build_ext": optional_build_ext})
