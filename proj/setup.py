import os

from pybind11.setup_helpers import Pybind11Extension, build_ext
from setuptools import setup

EIGEN_INCLUDE = os.environ.get("EIGEN_INCLUDE_DIR", "/usr/include/eigen3")

ext = Pybind11Extension(
    "opsent._core",
    sources=[
        "python/bindings.cpp",
        "src/kinematics.cpp",
        "src/amplitude.cpp",
        "src/entanglement.cpp",
        "src/correlations.cpp",
        "src/nelder_mead.cpp",
        "src/search.cpp",
        "src/serialization.cpp",
        "src/config.cpp",
    ],
    include_dirs=["include", "vendor", EIGEN_INCLUDE],
    cxx_std=20,
)

setup(ext_modules=[ext], cmdclass={"build_ext": build_ext})
