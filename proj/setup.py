"""Builds the C++ extension through CMake and drops it into the package.

The CMake side stages the module under <build>/python/famdad; this bridge
copies the built file to wherever setuptools expects the extension (the
source tree for editable installs, the wheel layout otherwise).
"""

import os
import shutil
import subprocess
import sys
from pathlib import Path

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class CMakeExtension(Extension):
    def __init__(self, name):
        super().__init__(name, sources=[])


class CMakeBuild(build_ext):
    def build_extension(self, ext):
        source_dir = Path(__file__).resolve().parent
        build_dir = Path(self.build_temp).resolve() / "cmake"
        build_dir.mkdir(parents=True, exist_ok=True)

        config = "Debug" if self.debug else "Release"
        subprocess.run(
            [
                "cmake",
                str(source_dir),
                f"-DCMAKE_BUILD_TYPE={config}",
                "-DSKBUILD=ON",
                "-DFAMDAD_BUILD_CLI=OFF",
                "-DFAMDAD_BUILD_TESTS=OFF",
                f"-DPython3_EXECUTABLE={sys.executable}",
            ],
            cwd=build_dir,
            check=True,
        )
        subprocess.run(
            ["cmake", "--build", ".", "--target", "_famdad", "--parallel",
             str(os.cpu_count() or 2)],
            cwd=build_dir,
            check=True,
        )

        staged = sorted((build_dir / "python" / "famdad").glob("_famdad*"))
        if not staged:
            raise RuntimeError("CMake build produced no _famdad module")
        dest = Path(self.get_ext_fullpath(ext.name))
        dest.parent.mkdir(parents=True, exist_ok=True)
        shutil.copy2(staged[0], dest)


setup(
    ext_modules=[CMakeExtension("famdad._famdad")],
    cmdclass={"build_ext": CMakeBuild},
)
