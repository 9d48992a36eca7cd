"""Binary model file format.

All integers are little-endian.  Layout::

    magic      4 bytes  b"PLCM"
    version    u16      currently 1
    sections   6 x (u32 byte length, payload)

Sections, in order:

    header     u32 W, u32 n_max, f64 quant_scale, i64 bias
    codes      u32 count, then count x (str letter, u8 code)
    char       u32 count, then count x (str pattern, u32 m, m x i32 weight)
    type       same layout as char, patterns spelled with type letters
    dict       u32 count, then count x (str word, i32 L, i32 I, i32 R)
    end        empty

``str`` is a u32 byte length followed by UTF-8 bytes.  N-gram tables are
sorted by pattern and dictionary entries by word, so equal models always
serialize to identical bytes.
"""

from __future__ import annotations

import struct

from .textmodel import CODE_TABLE, DictEntry, ModelError, RawModel

MAGIC = b"PLCM"
VERSION = 1
_I32_MIN, _I32_MAX = -(2**31), 2**31 - 1


class ModelFormatError(ValueError):
    """Base class for unreadable model files."""


class BadMagicError(ModelFormatError):
    pass


class UnsupportedVersionError(ModelFormatError):
    pass


class TruncatedError(ModelFormatError):
    pass


class InvalidModelError(ModelFormatError):
    """Well-formed bytes that describe an invalid model."""


def _str(s: str) -> bytes:
    b = s.encode("utf-8")
    return struct.pack("<I", len(b)) + b


def _i32(value: int) -> bytes:
    if not _I32_MIN <= value <= _I32_MAX:
        raise ModelError(f"weight {value} does not fit in 32 bits")
    return struct.pack("<i", value)


def _ngram_section(table) -> bytes:
    out = [struct.pack("<I", len(table))]
    for pattern in sorted(table):
        weights = table[pattern]
        out.append(_str(pattern))
        out.append(struct.pack("<I", len(weights)))
        out.extend(_i32(w) for w in weights)
    return b"".join(out)


def save(model: RawModel) -> bytes:
    sections = [
        struct.pack("<IIdq", model.window, model.n_max, model.quant_scale, model.bias),
        struct.pack("<I", len(CODE_TABLE))
        + b"".join(_str(letter) + struct.pack("<B", code) for letter, code in CODE_TABLE.items()),
        _ngram_section(model.char_ngram_weights),
        _ngram_section(model.type_ngram_weights),
        struct.pack("<I", len(model.dict_entries))
        + b"".join(
            _str(e.word) + _i32(e.left) + _i32(e.inside) + _i32(e.right)
            for e in sorted(model.dict_entries)
        ),
        b"",
    ]
    out = [MAGIC, struct.pack("<H", VERSION)]
    for sec in sections:
        out.append(struct.pack("<I", len(sec)))
        out.append(sec)
    return b"".join(out)


class _Reader:
    def __init__(self, data: bytes | memoryview, what: str) -> None:
        self.data = memoryview(data)
        self.pos = 0
        self.what = what

    def take(self, n: int) -> memoryview:
        if n < 0 or self.pos + n > len(self.data):
            raise TruncatedError(
                f"{self.what}: need {n} bytes at offset {self.pos}, only {len(self.data) - self.pos} left"
            )
        out = self.data[self.pos : self.pos + n]
        self.pos += n
        return out

    def unpack(self, fmt: str):
        return struct.unpack(fmt, self.take(struct.calcsize(fmt)))

    def u32(self) -> int:
        return self.unpack("<I")[0]

    def string(self) -> str:
        raw = self.take(self.u32())
        try:
            return bytes(raw).decode("utf-8")
        except UnicodeDecodeError as exc:
            raise InvalidModelError(f"{self.what}: invalid UTF-8 at offset {self.pos}") from exc

    def count(self, min_item_size: int) -> int:
        n = self.u32()
        if n * min_item_size > len(self.data) - self.pos:
            raise TruncatedError(f"{self.what}: {n} items cannot fit in the remaining bytes")
        return n

    def done(self) -> None:
        if self.pos != len(self.data):
            raise InvalidModelError(f"{self.what}: {len(self.data) - self.pos} trailing bytes")


def _read_ngrams(r: _Reader) -> dict[str, tuple[int, ...]]:
    table: dict[str, tuple[int, ...]] = {}
    for _ in range(r.count(8)):
        pattern = r.string()
        m = r.count(4)
        weights = r.unpack(f"<{m}i")
        if pattern in table:
            raise InvalidModelError(f"{r.what}: duplicate pattern {pattern!r}")
        table[pattern] = weights
    return table


def load(data: bytes) -> RawModel:
    top = _Reader(data, "file")
    if bytes(top.take(4)) != MAGIC:
        raise BadMagicError("not a model file (bad magic)")
    (version,) = top.unpack("<H")
    if version != VERSION:
        raise UnsupportedVersionError(f"unsupported model version {version} (expected {VERSION})")
    names = ("header", "codes", "char", "type", "dict", "end")
    sec = {name: _Reader(top.take(top.u32()), name) for name in names}
    top.done()

    r = sec["header"]
    window, n_max, scale, bias = r.unpack("<IIdq")
    r.done()

    r = sec["codes"]
    codes = {}
    for _ in range(r.count(5)):
        letter = r.string()
        (code,) = r.unpack("<B")
        codes[letter] = code
    r.done()
    if codes != CODE_TABLE:
        raise InvalidModelError(f"character type code table {codes} differs from {CODE_TABLE}")

    char_w = _read_ngrams(sec["char"])
    sec["char"].done()
    type_w = _read_ngrams(sec["type"])
    sec["type"].done()

    r = sec["dict"]
    entries = []
    for _ in range(r.count(16)):
        word = r.string()
        entries.append(DictEntry(word, *r.unpack("<3i")))
    r.done()
    sec["end"].done()

    try:
        return RawModel(
            window=window,
            n_max=n_max,
            char_ngram_weights=char_w,
            type_ngram_weights=type_w,
            dict_entries=tuple(entries),
            bias=bias,
            quant_scale=scale,
        )
    except ModelError as exc:
        raise InvalidModelError(str(exc)) from exc


def save_file(model: RawModel, path) -> None:
    with open(path, "wb") as f:
        f.write(save(model))


def load_file(path) -> RawModel:
    with open(path, "rb") as f:
        return load(f.read())
