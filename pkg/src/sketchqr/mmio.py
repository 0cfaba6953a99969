"""Matrix Market reader/writer for dense real matrices.

Coordinate and array formats are supported, real or integer fields, general
symmetry only. Duplicate coordinate entries are summed, per the format's
convention. Values are written with 17 significant digits so a write/read
round trip is bit-exact for float64.
"""

from __future__ import annotations

import numpy as np

__all__ = ["read_matrix_market", "write_matrix_market"]


def _parse_header(line: str):
    parts = line.strip().lower().split()
    if len(parts) != 5 or parts[0] != "%%matrixmarket" or parts[1] != "matrix":
        raise ValueError("not a Matrix Market file (bad banner line)")
    fmt, field, symmetry = parts[2], parts[3], parts[4]
    if fmt not in ("coordinate", "array"):
        raise ValueError(f"unsupported Matrix Market format {fmt!r}")
    if field not in ("real", "integer"):
        raise ValueError(f"only real matrices are supported, got field {field!r}")
    if symmetry != "general":
        raise ValueError(f"only general symmetry is supported, got {symmetry!r}")
    return fmt, field, symmetry


def read_matrix_market(path) -> np.ndarray:
    with open(path, "r", encoding="ascii") as fh:
        banner = fh.readline()
        fmt, _, _ = _parse_header(banner)
        tokens: list[str] = []
        for line in fh:
            line = line.strip()
            if not line or line.startswith("%"):
                continue
            tokens.extend(line.split())
    if fmt == "coordinate":
        if len(tokens) < 3:
            raise ValueError("coordinate file missing size line")
        m, n, nnz = int(tokens[0]), int(tokens[1]), int(tokens[2])
        body = tokens[3:]
        if len(body) != 3 * nnz:
            raise ValueError(f"expected {3 * nnz} entry tokens, found {len(body)}")
        A = np.zeros((m, n), order="F")
        for t in range(nnz):
            i = int(body[3 * t]) - 1
            j = int(body[3 * t + 1]) - 1
            v = float(body[3 * t + 2])
            if not (0 <= i < m and 0 <= j < n):
                raise ValueError(f"entry ({i + 1}, {j + 1}) outside {m} x {n}")
            A[i, j] += v  # duplicates accumulate
        return A
    m, n = int(tokens[0]), int(tokens[1])
    body = tokens[2:]
    if len(body) != m * n:
        raise ValueError(f"expected {m * n} array values, found {len(body)}")
    vals = np.array([float(t) for t in body])
    return np.asfortranarray(vals.reshape((m, n), order="F"))


def write_matrix_market(A: np.ndarray, path, fmt: str = "array",
                        comments: list[str] | None = None) -> None:
    A = np.asarray(A, dtype=np.float64)
    if A.ndim != 2:
        raise ValueError("only 2-d matrices can be written")
    m, n = A.shape
    with open(path, "w", encoding="ascii") as fh:
        if fmt == "array":
            fh.write("%%MatrixMarket matrix array real general\n")
            for c in comments or []:
                fh.write(f"%{c}\n")
            fh.write(f"{m} {n}\n")
            for j in range(n):
                for i in range(m):
                    fh.write(f"{A[i, j]:.17g}\n")
        elif fmt == "coordinate":
            fh.write("%%MatrixMarket matrix coordinate real general\n")
            for c in comments or []:
                fh.write(f"%{c}\n")
            nz = np.nonzero(A.T)  # column-major entry order
            fh.write(f"{m} {n} {len(nz[0])}\n")
            for j, i in zip(*nz):
                fh.write(f"{i + 1} {j + 1} {A[i, j]:.17g}\n")
        else:
            raise ValueError(f"unknown Matrix Market format {fmt!r}")
