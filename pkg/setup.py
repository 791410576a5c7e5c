"""Build script: compiles the hot kernels with Cython when available.

The kernel modules under src/planlab/_kernels/ are written in Cython
"pure Python" style, so the package works unchanged without the compiled
extensions -- they are a transparent accelerator.  When a compiled module
is present it shadows the .py source on import.
"""

from setuptools import setup

KERNEL_SOURCES = [
    "src/planlab/_kernels/bfs_core.py",
    "src/planlab/_kernels/mc_core.py",
]


def _extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    return cythonize(
        KERNEL_SOURCES,
        compiler_directives={"language_level": "3", "boundscheck": False},
        annotate=False,
    )


setup(ext_modules=_extensions())
