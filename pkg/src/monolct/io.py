"""File formats: PGM images, CSV and binary signals, JSON params and reports.

Binary layout (little endian): a 16-byte header ``b"LCT1"``, ``uint32 ndim``,
``uint32 H``, ``uint32 W`` (``H = N``, ``W = 1`` for 1-D data), a 16-byte
geometry block of two float64 (``dx, dy`` for images, ``dx, start`` for
signals), then interleaved float64 ``re, im`` pairs in row-major order.
"""

from __future__ import annotations

import json
import math
import struct
from pathlib import Path

import numpy as np

from .grid import Field2D, SampledSignal1D
from .lct import LctParams

MAGIC = b"LCT1"
_HEADER = struct.Struct("<4sIII")
_GEOMETRY = struct.Struct("<dd")


class FormatError(ValueError):
    """Malformed file content; ``offset`` is the byte position where parsing failed."""

    def __init__(self, message, offset=None):
        self.offset = offset
        where = f" at byte offset {offset}" if offset is not None else ""
        super().__init__(f"{message}{where}")


# PGM ------------------------------------------------------------------------------------


def _pgm_tokens(data, count, pos):
    """Read ``count`` whitespace-separated header tokens, skipping ``#`` comments."""
    tokens = []
    n = len(data)
    while len(tokens) < count:
        while pos < n and data[pos : pos + 1].isspace():
            pos += 1
        if pos < n and data[pos : pos + 1] == b"#":
            while pos < n and data[pos : pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        if pos >= n:
            raise FormatError("truncated PGM header", pos)
        start = pos
        while pos < n and not data[pos : pos + 1].isspace() and data[pos : pos + 1] != b"#":
            pos += 1
        tok = data[start:pos]
        if not tok.isdigit():
            raise FormatError(f"bad PGM header token {tok!r}", start)
        tokens.append(int(tok))
    return tokens, pos


def parse_pgm(data):
    """Decode PGM bytes into integer pixels and ``maxval``."""
    if len(data) < 2:
        raise FormatError("truncated PGM header", len(data))
    magic = data[:2]
    if magic not in (b"P5", b"P2"):
        raise FormatError(f"not a PGM file (magic {magic!r})", 0)
    (w, h, maxval), pos = _pgm_tokens(data, 3, 2)
    if w < 1 or h < 1:
        raise FormatError("PGM dimensions must be positive", pos)
    if not 0 < maxval <= 255:
        raise FormatError(f"unsupported maxval {maxval} (must be 1..255)", pos)
    if magic == b"P5":
        if pos >= len(data) or not data[pos : pos + 1].isspace():
            raise FormatError("missing whitespace after PGM header", pos)
        pos += 1
        need = w * h
        body = data[pos : pos + need]
        if len(body) < need:
            raise FormatError(f"truncated PGM raster: expected {need} bytes, got {len(body)}", pos + len(body))
        pix = np.frombuffer(body, dtype=np.uint8).reshape(h, w).astype(np.int64)
    else:
        values, _ = _pgm_tokens(data, w * h, pos)
        pix = np.array(values, dtype=np.int64).reshape(h, w)
    if pix.max(initial=0) > maxval:
        raise FormatError(f"pixel value exceeds maxval {maxval}", pos)
    return pix, maxval


def read_pgm(path):
    """Read a P5 or P2 PGM as a :class:`Field2D` with values in [0, 1]."""
    data = Path(path).read_bytes()
    pix, maxval = parse_pgm(data)
    return Field2D(pix / float(maxval), 1.0, 1.0)


def quantize(values):
    """Map [0, 1] to 0..255 with round-half-up, clamping outside values."""
    v = np.clip(np.asarray(values, dtype=float), 0.0, 1.0)
    return np.floor(v * 255.0 + 0.5).astype(np.uint8)


def encode_pgm(values):
    q = quantize(values)
    h, w = q.shape
    return f"P5\n{w} {h}\n255\n".encode("ascii") + q.tobytes()


def write_pgm(path, values):
    """Write a real array (or the real part of a Field2D) in [0, 1] as an 8-bit P5 PGM."""
    if isinstance(values, Field2D):
        values = values.samples.real
    Path(path).write_bytes(encode_pgm(values))


def read_image(path):
    """PGM, or any Pillow-readable image converted with 0.299 R + 0.587 G + 0.114 B."""
    path = Path(path)
    if path.suffix.lower() in (".pgm", ".pnm") or path.read_bytes()[:2] in (b"P5", b"P2"):
        return read_pgm(path)
    from PIL import Image

    with Image.open(path) as im:
        arr = np.asarray(im.convert("RGB"), dtype=float)
    gray = arr[..., 0] * 0.299 + arr[..., 1] * 0.587 + arr[..., 2] * 0.114
    return Field2D(gray / 255.0, 1.0, 1.0)


# CSV signals -------------------------------------------------------------------------------


def write_signal_csv(path, sig):
    with open(path, "w", encoding="ascii") as fh:
        fh.write("x,re,im\n")
        for x, z in zip(sig.x, sig.samples):
            fh.write(f"{x:.17g},{z.real:.17g},{z.imag:.17g}\n")


def read_signal_csv(path):
    """Read ``x,re,im`` rows (a header line is optional); the x column must be uniform."""
    rows = []
    with open(path, encoding="ascii") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = [p.strip() for p in line.split(",")]
            if lineno == 1 and parts[0].lower() == "x":
                continue
            if len(parts) not in (2, 3):
                raise FormatError(f"line {lineno}: expected x,re[,im]")
            try:
                rows.append([float(p) for p in parts] + ([0.0] if len(parts) == 2 else []))
            except ValueError as exc:
                raise FormatError(f"line {lineno}: {exc}") from None
    if len(rows) < 2:
        raise FormatError("signal needs at least 2 samples")
    arr = np.array(rows)
    x = arr[:, 0]
    steps = np.diff(x)
    dx = float(np.mean(steps))
    if not dx > 0 or np.max(np.abs(steps - dx)) > 1e-6 * dx:
        raise FormatError("x column must be increasing and uniformly spaced")
    return SampledSignal1D(arr[:, 1] + 1j * arr[:, 2], float(x[0]), dx)


def read_points_csv(path):
    """Half-plane points as ``x,y`` rows."""
    pts = []
    with open(path, encoding="ascii") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split(",")
            if lineno == 1 and parts[0].strip().lower() == "x":
                continue
            try:
                pts.append((float(parts[0]), float(parts[1])))
            except (ValueError, IndexError):
                raise FormatError(f"line {lineno}: expected x,y") from None
    return np.array(pts, dtype=float).reshape(-1, 2)


# binary ------------------------------------------------------------------------------------------


def encode_binary(obj):
    if isinstance(obj, SampledSignal1D):
        head = _HEADER.pack(MAGIC, 1, obj.n, 1) + _GEOMETRY.pack(obj.dx, obj.start)
        data = obj.samples
    elif isinstance(obj, Field2D):
        h, w = obj.shape
        head = _HEADER.pack(MAGIC, 2, h, w) + _GEOMETRY.pack(obj.dx, obj.dy)
        data = obj.samples.ravel()
    else:
        raise TypeError("expected SampledSignal1D or Field2D")
    pairs = np.empty(2 * data.size, dtype="<f8")
    pairs[0::2] = data.real
    pairs[1::2] = data.imag
    return head + pairs.tobytes()


def decode_binary(data):
    if len(data) < _HEADER.size:
        raise FormatError("truncated LCT1 header", len(data))
    magic, ndim, h, w = _HEADER.unpack_from(data, 0)
    if magic != MAGIC:
        raise FormatError(f"bad magic {magic!r}", 0)
    if ndim not in (1, 2):
        raise FormatError(f"unsupported ndim {ndim}", 4)
    if len(data) < _HEADER.size + _GEOMETRY.size:
        raise FormatError("truncated LCT1 geometry block", len(data))
    g1, g2 = _GEOMETRY.unpack_from(data, _HEADER.size)
    start = _HEADER.size + _GEOMETRY.size
    need = 16 * h * w
    if len(data) - start < need:
        raise FormatError(f"truncated LCT1 payload: expected {need} bytes", len(data))
    pairs = np.frombuffer(data, dtype="<f8", count=2 * h * w, offset=start)
    z = pairs[0::2] + 1j * pairs[1::2]
    if ndim == 1:
        return SampledSignal1D(z, g2, g1)
    return Field2D(z.reshape(h, w), g1, g2)


def write_binary(path, obj):
    Path(path).write_bytes(encode_binary(obj))


def read_binary(path):
    return decode_binary(Path(path).read_bytes())


# params and reports --------------------------------------------------------------------------------


def params_to_json(p):
    return json.dumps(p.to_dict(), sort_keys=True)


def params_from_json(text):
    obj = json.loads(text)
    try:
        return LctParams(obj["a"], obj["b"], obj["c"], obj["d"])
    except KeyError as exc:
        raise FormatError(f"missing parameter {exc}") from None


def _round_floats(obj, digits=12):
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            return str(x)
        return float(f"{x:.{digits}g}")
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, dict):
        return {str(k): _round_floats(v, digits) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v, digits) for v in obj]
    if isinstance(obj, np.ndarray):
        return _round_floats(obj.tolist(), digits)
    if isinstance(obj, Path):
        return str(obj)
    return obj


def dumps_report(obj):
    """Deterministic JSON: sorted keys, floats rounded to 12 significant digits."""
    return json.dumps(_round_floats(obj), sort_keys=True, indent=2) + "\n"


def write_report(path, obj):
    Path(path).write_text(dumps_report(obj), encoding="utf-8")


# monogenic fields and feature maps --------------------------------------------------------------------


def write_monogenic(stem, field):
    """Write ``<stem>_f0.lct``, ``<stem>_f1.lct``, ``<stem>_f2.lct`` and the sidecar ``<stem>.json``."""
    stem = Path(stem)
    files = []
    for k in range(field.channels.shape[0]):
        p = stem.with_name(f"{stem.name}_f{k}.lct")
        write_binary(p, field.channel(k))
        files.append(p.name)
    h, w = field.shape
    meta = {"a": field.a, "b": field.b, "x0": field.x0, "n": field.n, "H": h, "W": w, "files": files}
    write_report(stem.with_name(stem.name + ".json"), meta)
    return files


def read_monogenic(stem):
    from .monogenic import MonogenicField

    stem = Path(stem)
    meta = json.loads(stem.with_name(stem.name + ".json").read_text(encoding="utf-8"))
    chans = [read_binary(stem.with_name(name)) for name in meta["files"]]
    dx, dy = chans[0].dx, chans[0].dy
    return MonogenicField(np.stack([c.samples for c in chans]), meta["a"], meta["b"], meta["x0"], dx, dy)


def modulus_image(values, percentile=99.0):
    """Percentile-normalized modulus in [0, 1] for 8-bit display."""
    from .edge import normalize_strength

    mod = np.abs(np.asarray(values))
    if mod.ndim == 3:
        mod = np.sqrt(np.sum(mod**2, axis=0))
    return normalize_strength(mod, percentile)[0]


def write_features(stem, feats):
    """Per-channel binary files plus PGM views of the moduli; returns the written names."""
    stem = Path(stem)
    names = []
    chans = {
        "A": feats.A,
        "theta": feats.theta,
        "rho": feats.rho,
        "I1": feats.I[0],
        "I2": feats.I[1],
        "r1": feats.r[0],
        "r2": feats.r[1],
        "mask": feats.defined_mask.astype(float),
    }
    for key, arr in chans.items():
        p = stem.with_name(f"{stem.name}_{key}.lct")
        write_binary(p, Field2D(arr, feats.dx, feats.dy))
        names.append(p.name)
    for key in ("A", "theta", "rho"):
        p = stem.with_name(f"{stem.name}_{key}.pgm")
        write_pgm(p, modulus_image(chans[key]))
        names.append(p.name)
    return names
