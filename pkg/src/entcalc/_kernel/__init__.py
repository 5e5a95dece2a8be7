"""Backend selection for the numerical kernels.

Two interchangeable implementations exist: a compiled Cython extension
(`_core`) and a pure numpy fallback. The environment variable
ENTCALC_KERNEL picks one:

    auto      use the compiled extension if importable, else numpy (default)
    compiled  require the compiled extension, fail otherwise
    python    force the numpy fallback

The compiled eigensolver handles matrices up to dimension 16; larger
problems are routed to numpy transparently.
"""

from __future__ import annotations

import importlib
import os

import numpy as np

from . import fallback
from .fallback import N_ANGLES, N_TERMS, mixing_weight_gradient, mixing_weights

_COMPILED_EIG_LIMIT = 16

_choice = os.environ.get("ENTCALC_KERNEL", "auto").strip().lower()
if _choice not in ("auto", "compiled", "python"):
    raise ImportError(
        f"ENTCALC_KERNEL must be 'auto', 'compiled' or 'python', got {_choice!r}"
    )

# importlib here, not `from . import _core`: the latter is skipped by the
# import machinery whenever the attribute is already bound
_core = None
if _choice in ("auto", "compiled"):
    try:
        _core = importlib.import_module("._core", __name__)
    except ImportError:
        if _choice == "compiled":
            raise
        _core = None

_active = _core if _core is not None else fallback
BACKEND: str = _active.BACKEND


def _as_complex(matrix: np.ndarray) -> np.ndarray:
    return np.ascontiguousarray(matrix, dtype=complex)


def _as_angles(x: np.ndarray) -> np.ndarray:
    x = np.ascontiguousarray(x, dtype=float)
    if x.shape != (N_ANGLES,):
        raise ValueError(f"angle vector must have shape ({N_ANGLES},), got {x.shape}")
    return x


def eigh(matrix: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Hermitian eigendecomposition, eigenvalues descending."""
    matrix = _as_complex(matrix)
    if _active is fallback or matrix.shape[0] > _COMPILED_EIG_LIMIT:
        return fallback.eigh(matrix)
    return _active.eigh(matrix)


def product_terms(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    return _active.product_terms(_as_angles(x))


def separable_density(x: np.ndarray) -> np.ndarray:
    return _active.separable_density(_as_angles(x))


def ree_cross(x: np.ndarray, sigma: np.ndarray, clamp: float) -> float:
    return _active.ree_cross(_as_angles(x), _as_complex(sigma), float(clamp))


def ree_cross_and_grad(
    x: np.ndarray, sigma: np.ndarray, clamp: float
) -> tuple[float, np.ndarray]:
    return _active.ree_cross_and_grad(_as_angles(x), _as_complex(sigma), float(clamp))


def bures_value(x: np.ndarray, sqrt_sigma: np.ndarray) -> float:
    return _active.bures_value(_as_angles(x), _as_complex(sqrt_sigma))
