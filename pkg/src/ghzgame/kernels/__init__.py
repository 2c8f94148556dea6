"""Hot loops behind the exhaustive sweeps.

The compiled extension ``_ckernels`` is used when it was built; otherwise the
numpy implementation in ``_pykernels`` is selected. Set ``GHZGAME_PURE_PYTHON=1``
to force the fallback. ``BACKEND`` names the active choice.

All kernels take ``questions`` as an int64 array of packed promise questions
(see :func:`ghzgame.game.promise_masks`). A strategy index packs player ``i``'s
two-bit code ``2*out0 + out1`` at bits ``2i, 2i+1``.
"""

import os

import numpy as np

from . import _pykernels

try:
    if os.environ.get("GHZGAME_PURE_PYTHON"):
        raise ImportError("fallback forced")
    from . import _ckernels as _impl

    BACKEND = "cython"
except ImportError:
    _impl = _pykernels
    BACKEND = "python"


def _q(questions) -> np.ndarray:
    return np.ascontiguousarray(questions, dtype=np.int64)


def strategy_win_counts(n: int, questions, backend=None) -> np.ndarray:
    """Number of questions won by each of the ``4**n`` strategies."""
    return (backend or _impl).strategy_win_counts(n, _q(questions))


def input_win_counts(n: int, questions, strategies, backend=None) -> np.ndarray:
    """For each question, how many of ``strategies`` win it."""
    return (backend or _impl).input_win_counts(n, _q(questions), _q(strategies))


def set_size_table(n: int, questions, backend=None) -> np.ndarray:
    """Counts indexed ``[k, a, b]``: questions whose first ``k`` bits have
    parity ``a`` and whose weight is ``2b`` mod 4."""
    return (backend or _impl).set_size_table(n, _q(questions))


def backends() -> dict:
    """Every importable backend, keyed by name, regardless of the active one."""
    out = {"python": _pykernels}
    try:
        from . import _ckernels
    except ImportError:
        return out
    out["cython"] = _ckernels
    return out
