"""Backend selection: compiled kernels when available, NumPy otherwise.

Set ``MOMENTUM_WALK_BACKEND=python`` (or ``compiled``) to force a lane;
forcing ``compiled`` raises if the extension was not built.
"""

import os

_forced = os.environ.get("MOMENTUM_WALK_BACKEND", "").strip().lower()

if _forced == "python":
    from . import _kernels_py as _impl
elif _forced == "compiled":
    from . import _kernels as _impl
elif _forced:
    raise ImportError(
        f"MOMENTUM_WALK_BACKEND={_forced!r}: expected 'python' or 'compiled'"
    )
else:
    try:
        from . import _kernels as _impl
    except ImportError:
        from . import _kernels_py as _impl

#: "compiled" or "python"
BACKEND = "python" if _impl.__name__.endswith("_kernels_py") else "compiled"

evolve_coherent = _impl.evolve_coherent
markov_evolve = _impl.markov_evolve
moments = _impl.moments
