"""Build the optional compiled kernels; failure falls back to numpy."""
import os
import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # noqa: BLE001
            print(f"warning: compiled kernels not built ({exc}); numpy fallback in use")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # noqa: BLE001
            print(f"warning: failed to build {ext.name} ({exc})")


# OpenMP is optional: set HEISENBERG_ORBITS_OPENMP=0 to build a serial extension
use_openmp = os.environ.get("HEISENBERG_ORBITS_OPENMP", "1") != "0" and sys.platform != "darwin"
omp = ["-fopenmp"] if use_openmp else []

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("heisenberg_orbits._ckernels", ["src/heisenberg_orbits/_ckernels.pyx"],
                   extra_compile_args=["-O3", *omp], extra_link_args=omp)],
        compiler_directives={"language_level": 3},
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules, cmdclass={"build_ext": OptionalBuildExt})
