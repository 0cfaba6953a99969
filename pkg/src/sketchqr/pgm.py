"""PGM (portable graymap) image I/O.

Pixels map to floats in [0, 1] by dividing by the file's maxval, so image
matrices enter the factorizations on the same scale regardless of bit depth.
Both the ASCII (P2) and binary (P5) encodings are handled; 16-bit binary
rasters are big-endian per the format.
"""

from __future__ import annotations

import numpy as np

__all__ = ["read_pgm", "write_pgm"]


def _header_tokens(data: bytes, count: int):
    """First ``count`` whitespace-separated header tokens, '#' comments skipped.

    Returns (tokens, offset of the byte after the single whitespace that
    terminates the last token).
    """
    tokens = []
    pos = 0
    while len(tokens) < count:
        if pos >= len(data):
            raise ValueError("truncated PGM header")
        ch = data[pos : pos + 1]
        if ch in b" \t\r\n":
            pos += 1
            continue
        if ch == b"#":
            end = data.find(b"\n", pos)
            if end == -1:
                raise ValueError("unterminated comment in PGM header")
            pos = end + 1
            continue
        end = pos
        while end < len(data) and data[end : end + 1] not in b" \t\r\n":
            end += 1
        tokens.append(data[pos:end].decode("ascii"))
        pos = end
    return tokens, pos + 1  # one whitespace byte separates header from raster


def read_pgm(path) -> np.ndarray:
    with open(path, "rb") as fh:
        data = fh.read()
    (magic,), _ = _header_tokens(data, 1)
    if magic not in ("P2", "P5"):
        raise ValueError(f"not a PGM file (magic {magic!r})")
    tokens, raster_at = _header_tokens(data, 4)
    width, height, maxval = int(tokens[1]), int(tokens[2]), int(tokens[3])
    if not (0 < maxval <= 65535):
        raise ValueError(f"maxval {maxval} outside (0, 65535]")
    npix = width * height
    if magic == "P2":
        vals = np.array(data[raster_at - 1 :].split(), dtype=np.float64)
        if vals.size != npix:
            raise ValueError(f"expected {npix} pixels, found {vals.size}")
    else:
        dtype = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
        raster = data[raster_at : raster_at + npix * dtype.itemsize]
        if len(raster) != npix * dtype.itemsize:
            raise ValueError("truncated PGM raster")
        vals = np.frombuffer(raster, dtype=dtype).astype(np.float64)
    img = vals.reshape((height, width)) / float(maxval)
    return np.asfortranarray(img)


def write_pgm(A: np.ndarray, path, maxval: int = 255, binary: bool = True) -> None:
    """Quantize values (clamped to [0, 1]) to maxval levels and write PGM."""
    A = np.asarray(A, dtype=np.float64)
    if A.ndim != 2:
        raise ValueError("image must be 2-d")
    if not (0 < maxval <= 65535):
        raise ValueError(f"maxval {maxval} outside (0, 65535]")
    height, width = A.shape
    pix = np.rint(np.clip(A, 0.0, 1.0) * maxval).astype(np.uint32)
    with open(path, "wb") as fh:
        magic = b"P5" if binary else b"P2"
        fh.write(magic + b"\n%d %d\n%d\n" % (width, height, maxval))
        if binary:
            dtype = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
            fh.write(pix.astype(dtype).tobytes())
        else:
            lines = [" ".join(str(v) for v in row) for row in pix]
            fh.write(("\n".join(lines) + "\n").encode("ascii"))
