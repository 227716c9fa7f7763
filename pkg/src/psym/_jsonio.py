"""Helpers for the nested ``[re, im]`` encoding of complex arrays in JSON files."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import numpy as np


def encode_complex(arr: Any) -> list:
    """Encode a complex array as nested lists whose innermost items are ``[re, im]``."""
    a = np.asarray(arr, dtype=complex)
    return np.stack([a.real, a.imag], axis=-1).tolist()


def decode_complex(obj: Any, ndim: int) -> np.ndarray:
    """Decode an array of rank ``ndim`` stored either as plain reals or as ``[re, im]`` pairs."""
    a = np.asarray(obj, dtype=float)
    if a.ndim == ndim:
        return a.astype(complex)
    if a.ndim == ndim + 1 and a.shape[-1] == 2:
        return a[..., 0] + 1j * a[..., 1]
    raise ValueError(f"expected a rank-{ndim} array (optionally as [re, im] pairs), got shape {a.shape}")


def dump(obj: Any, path: str | Path) -> None:
    with open(path, "w") as f:
        json.dump(obj, f, indent=1)
        f.write("\n")


def load(path: str | Path) -> Any:
    with open(path) as f:
        return json.load(f)
