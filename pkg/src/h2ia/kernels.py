"""Backend selection for the word kernels.

The compiled extension is used when it imports; ``H2IA_PURE_PYTHON=1`` forces the
pure-Python implementation (useful for debugging and for the benchmark).
"""

import os

if os.environ.get("H2IA_PURE_PYTHON", "") not in ("", "0"):
    from ._kernels_py import compose_chain, invert_word, reduce_word, substitute

    BACKEND = "python"
else:
    try:
        from ._kernels import compose_chain, invert_word, reduce_word, substitute

        BACKEND = "cython"
    except ImportError:
        from ._kernels_py import compose_chain, invert_word, reduce_word, substitute

        BACKEND = "python"

__all__ = ["BACKEND", "compose_chain", "invert_word", "reduce_word", "substitute"]
