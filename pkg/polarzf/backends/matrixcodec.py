"""Text encoding of complex matrices.

A matrix is written as a "rows cols" header line followed by one line per
column, each entry a `re+imj` token. Tokens use the shortest round-trip
float repr, so decoding reproduces the matrix bit for bit.
"""

from __future__ import annotations

import numpy as np


def encode_entry(value: complex) -> str:
    value = complex(value)
    return f"{value.real!r}{value.imag:+}j"


def encode_matrix(matrix: np.ndarray) -> str:
    matrix = np.atleast_2d(np.asarray(matrix, dtype=complex))
    rows, cols = matrix.shape
    lines = [f"{rows} {cols}"]
    lines.extend(" ".join(encode_entry(z) for z in matrix[:, c]) for c in range(cols))
    return "\n".join(lines)


def decode_matrix(text: str) -> np.ndarray:
    """Inverse of `encode_matrix`.

    Raises:
        ValueError: On a malformed header, token or entry count
    """
    header, _, body = text.strip().partition("\n")
    try:
        rows, cols = (int(n) for n in header.split())
    except ValueError as e:
        msg = f"Malformed matrix header {header!r}"
        raise ValueError(msg) from e
    tokens = body.split()
    if len(tokens) != rows * cols:
        expected = rows * cols
        msg = f"Expected {expected} entries for a {rows}x{cols} matrix, got {len(tokens)}"
        raise ValueError(msg)
    values = [complex(t) for t in tokens]
    return np.array(values, dtype=complex).reshape((rows, cols), order="F")
