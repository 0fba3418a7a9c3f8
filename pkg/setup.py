"""Build script for the optional compiled kernel extension.

The package works without the extension (numpy fallback); set
CHANVESE_NO_EXT=1 to skip compilation entirely.
"""
import os

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None


class optional_build_ext(build_ext):
    """Skip the extension instead of failing when no compiler is usable."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # CCompilerError, DistutilsPlatformError, ...
            print(f"warning: skipping compiled kernels ({exc}); using pure fallback")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: skipping {ext.name} ({exc}); using pure fallback")


ext_modules = []
if cythonize is not None and not os.environ.get("CHANVESE_NO_EXT"):
    ext_modules = cythonize(
        [
            Extension(
                "chanvese._kernels._fast",
                ["src/chanvese/_kernels/_fast.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules, cmdclass={"build_ext": optional_build_ext})
