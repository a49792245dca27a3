"""Build script: compiles the optional Gauss-Seidel sweep kernel.

The compiled extension is a pure accelerator. If Cython or a C compiler
is unavailable the build falls through and the package installs with the
numpy fallback selected at import time.
"""

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """Build extensions, but never fail the install over them."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, misconfigured, ...
            self._warn(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            self._warn(exc)

    @staticmethod
    def _warn(exc):
        import warnings

        warnings.warn(
            "compiled kernels unavailable, falling back to numpy "
            f"implementations: {exc}"
        )


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension("sholo._kernels", ["src/sholo/_kernels.pyx"])
    return cythonize([ext], language_level=3)


setup(
    ext_modules=extensions(),
    cmdclass={"build_ext": optional_build_ext},
)
