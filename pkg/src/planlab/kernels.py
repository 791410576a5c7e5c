"""Kernel backend selection.

When the package was built with Cython, compiled modules shadow the .py
sources in planlab._kernels and are picked up by the normal import below.
Setting PLANLAB_PURE=1 forces the interpreted sources (used by the parity
tests and the benchmark).
"""

from __future__ import annotations

import importlib.util
import os


def load_pure(modname: str):
    """Load the interpreted kernel source, bypassing a compiled shadow."""
    path = os.path.join(os.path.dirname(__file__), "_kernels", modname + ".py")
    spec = importlib.util.spec_from_file_location(
        f"planlab._kernels._pure_{modname}", path)
    mod = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(mod)
    return mod


if os.environ.get("PLANLAB_PURE"):
    bfs_core = load_pure("bfs_core")
    mc_core = load_pure("mc_core")
else:
    from ._kernels import bfs_core, mc_core


def _is_compiled(mod) -> bool:
    return getattr(mod, "__file__", "").endswith((".so", ".pyd"))


BFS_COMPILED = _is_compiled(bfs_core)
MC_COMPILED = _is_compiled(mc_core)


def backend_summary() -> str:
    return (f"bfs_core={'compiled' if BFS_COMPILED else 'pure'} "
            f"mc_core={'compiled' if MC_COMPILED else 'pure'}")
