import subprocess
import sys
from pathlib import Path

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class CMakeExtension(Extension):
    def __init__(self, name: str, source_dir: str = "") -> None:
        super().__init__(name, sources=[])
        self.source_dir = Path(source_dir).resolve()


class CMakeBuild(build_ext):
    def build_extension(self, ext: CMakeExtension) -> None:
        ext_path = Path(self.get_ext_fullpath(ext.name)).resolve()
        ext_dir = ext_path.parent
        build_dir = Path(self.build_temp) / ext.name
        build_dir.mkdir(parents=True, exist_ok=True)

        cmake_args = [
            f"-DCMAKE_LIBRARY_OUTPUT_DIRECTORY={ext_dir}",
            f"-DPython3_EXECUTABLE={sys.executable}",
            "-DCMAKE_BUILD_TYPE=Release",
            "-DSECAGG_BUILD_TESTS=OFF",
        ]
        subprocess.run(
            ["cmake", "-S", str(ext.source_dir), "-B", str(build_dir), *cmake_args], check=True
        )
        subprocess.run(
            ["cmake", "--build", str(build_dir), "--target", "_secagg", "--parallel"], check=True
        )


setup(
    packages=["secagg"],
    package_dir={"secagg": "python/secagg"},
    ext_modules=[CMakeExtension("secagg._secagg")],
    cmdclass={"build_ext": CMakeBuild},
    zip_safe=False,
)
