"""Build script: compiles the optional GF(2) kernel extension.

The extension is a pure speedup; if Cython or a C compiler is missing the
install still succeeds and covtrack.kernels falls back to the pure-Python
implementation at import time.
"""

import sys

from setuptools import setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """build_ext that downgrades compile failures to a warning."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            self._warn(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            self._warn(exc)

    @staticmethod
    def _warn(exc):
        print(
            "warning: building the covtrack._gf2core extension failed (%s); "
            "the pure-Python kernels will be used" % exc,
            file=sys.stderr,
        )


ext_modules = []
try:
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [Extension("covtrack._gf2core", ["src/covtrack/_gf2core.pyx"])],
        language_level=3,
    )
except Exception as exc:  # Cython not installed
    print("warning: Cython unavailable (%s); skipping extension" % exc, file=sys.stderr)

setup(
    ext_modules=ext_modules,
    cmdclass={"build_ext": optional_build_ext},
)
