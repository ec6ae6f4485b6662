from pybind11.setup_helpers import Pybind11Extension, build_ext
from setuptools import setup

ext = Pybind11Extension(
    "rpsemi._core",
    sources=[
        "python/module.cpp",
        "src/intensity.cpp",
        "src/mc.cpp",
        "src/randomop.cpp",
        "src/rng.cpp",
        "src/semigroup.cpp",
        "src/specfun.cpp",
        "src/widths.cpp",
    ],
    include_dirs=["include", "vendor"],
    cxx_std=20,
)

setup(ext_modules=[ext], cmdclass={"build_ext": build_ext})
