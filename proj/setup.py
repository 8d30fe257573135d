from pybind11.setup_helpers import Pybind11Extension, build_ext
from setuptools import setup

ext = Pybind11Extension(
    "pqcdet._pqcdet",
    [
        "src/python/bindings.cpp",
        "src/detector.cpp",
        "src/npd.cpp",
        "src/oracle.cpp",
        "src/dcr.cpp",
        "src/slab.cpp",
        "src/eme.cpp",
        "src/mesh.cpp",
        "src/format.cpp",
    ],
    include_dirs=["include", "vendor"],
    cxx_std=20,
)

setup(ext_modules=[ext], cmdclass={"build_ext": build_ext})
