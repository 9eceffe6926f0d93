"""Binary checkpoint: enough state to continue a run bit-for-bit.

Layout (all little-endian):

    6s   magic  b"FRHC1\\0"
    u32  format version (1)
    u32  n
    f64  L, alpha, gam, lam, t
    u32  manifest JSON byte length, then that many UTF-8 bytes
    u    field payload, n^3 complex128, C order
    8s   first 8 bytes of SHA-256 of the u payload
    B    phase-correction payload, n^3 float64, C order
    8s   first 8 bytes of SHA-256 of the B payload

The manifest blob is authoritative for resuming (dt, cadence, theta, ...);
the scalar header fields exist for cheap inspection and cross-checking.
"""

import hashlib
import os
import struct
import tempfile

import numpy as np

from .manifest import RunManifest

MAGIC = b"FRHC1\x00"
VERSION = 1
_HEADER = struct.Struct("<6sII5d")


def _digest8(buf: bytes) -> bytes:
    return hashlib.sha256(buf).digest()[:8]


def save_checkpoint(path, manifest: RunManifest, t: float, u: np.ndarray, B: np.ndarray):
    n = manifest.n
    if u.shape != (n, n, n) or B.shape != (n, n, n):
        raise ValueError("payload shape does not match the manifest")
    ubuf = np.ascontiguousarray(u, dtype=np.complex128).tobytes()
    bbuf = np.ascontiguousarray(B, dtype=np.float64).tobytes()
    mbuf = manifest.to_json().encode("utf-8")
    head = _HEADER.pack(
        MAGIC, VERSION, n, manifest.L, manifest.alpha, manifest.gam,
        manifest.lam, float(t),
    )
    blob = b"".join(
        [
            head,
            struct.pack("<I", len(mbuf)),
            mbuf,
            ubuf,
            _digest8(ubuf),
            bbuf,
            _digest8(bbuf),
        ]
    )
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(os.path.abspath(path)) or ".")
    try:
        with os.fdopen(fd, "wb") as f:
            f.write(blob)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load_checkpoint(path):
    """Returns (manifest, t, u, B); raises ValueError on any corruption."""
    with open(path, "rb") as f:
        blob = f.read()
    if len(blob) < _HEADER.size + 4:
        raise ValueError("checkpoint truncated")
    magic, version, n, L, alpha, gam, lam, t = _HEADER.unpack_from(blob, 0)
    if magic != MAGIC:
        raise ValueError("not a checkpoint file (bad magic)")
    if version != VERSION:
        raise ValueError(f"unsupported checkpoint version {version}")
    off = _HEADER.size
    (mlen,) = struct.unpack_from("<I", blob, off)
    off += 4
    man = RunManifest.from_json(blob[off : off + mlen].decode("utf-8"))
    off += mlen
    if man.n != n:
        raise ValueError("header/manifest disagree on n")
    usize = n**3 * 16
    bsize = n**3 * 8
    if len(blob) != off + usize + 8 + bsize + 8:
        raise ValueError("checkpoint truncated")
    ubuf = blob[off : off + usize]
    off += usize
    if blob[off : off + 8] != _digest8(ubuf):
        raise ValueError("field payload failed its checksum")
    off += 8
    bbuf = blob[off : off + bsize]
    off += bsize
    if blob[off : off + 8] != _digest8(bbuf):
        raise ValueError("phase payload failed its checksum")
    u = np.frombuffer(ubuf, dtype=np.complex128).reshape(n, n, n).copy()
    B = np.frombuffer(bbuf, dtype=np.float64).reshape(n, n, n).copy()
    return man, float(t), u, B
