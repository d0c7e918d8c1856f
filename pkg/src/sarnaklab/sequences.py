"""Finite symbol windows over small alphabets, and their on-disk formats."""
from __future__ import annotations

import json
import struct
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .exceptions import ValidationError

MAX_SYMBOLS = 256
BINARY_MAGIC = b"SEQ1"
_BINARY_HEADER = struct.Struct("<4sIQ")  # magic, alphabet size, length


@dataclass(frozen=True)
class Alphabet:
    """Ordered symbol codes ``0..k-1`` with one complex label per code.

    Codes are what gets stored and counted; labels carry the arithmetic
    meaning, so ``{+1, -1}`` and ``{0, 1}`` alphabets differ only in labels.
    """

    labels: tuple[complex, ...]

    def __post_init__(self):
        labels = tuple(complex(v) for v in self.labels)
        if not 1 <= len(labels) <= MAX_SYMBOLS:
            raise ValidationError(
                f"alphabet must have between 1 and {MAX_SYMBOLS} symbols, got {len(labels)}"
            )
        if len(set(labels)) != len(labels):
            raise ValidationError("alphabet labels must be pairwise distinct")
        object.__setattr__(self, "labels", labels)

    @classmethod
    def pm1(cls) -> "Alphabet":
        return cls((1, -1))

    @classmethod
    def binary(cls) -> "Alphabet":
        return cls((0, 1))

    @classmethod
    def moebius(cls) -> "Alphabet":
        return cls((1, -1, 0))

    @property
    def size(self) -> int:
        return len(self.labels)

    @property
    def symbols(self) -> tuple[int, ...]:
        return tuple(range(self.size))

    def __len__(self) -> int:
        return self.size

    @property
    def is_real(self) -> bool:
        return all(v.imag == 0 for v in self.labels)

    @property
    def is_integer(self) -> bool:
        return self.is_real and all(float(v.real).is_integer() for v in self.labels)

    @property
    def is_pm1(self) -> bool:
        return set(self.labels) == {1, -1}

    def code_of(self, label) -> int:
        try:
            return self.labels.index(complex(label))
        except ValueError:
            raise ValidationError(f"label {label!r} is not in alphabet {self.format_labels()}")

    def label_array(self) -> np.ndarray:
        """Labels as a numpy lookup table (int64, float64 or complex128)."""
        if self.is_integer:
            return np.array([int(v.real) for v in self.labels], dtype=np.int64)
        if self.is_real:
            return np.array([v.real for v in self.labels], dtype=np.float64)
        return np.array(self.labels, dtype=np.complex128)

    def format_label(self, code: int) -> str:
        v = self.labels[code]
        if self.is_integer:
            n = int(v.real)
            return f"{n:+d}" if self._signed else str(n)
        if self.is_real:
            return repr(float(v.real))
        return repr(v)

    def format_labels(self) -> str:
        return ",".join(self.format_label(c) for c in self.symbols)

    @property
    def _signed(self) -> bool:
        return any(v.real < 0 for v in self.labels)

    def block_chars(self) -> list[str]:
        """One character per code, used for comma-free block strings."""
        if self.is_pm1 or set(self.labels) <= {1, -1, 0}:
            table = {1: "+", -1: "-", 0: "0"}
            return [table[int(v.real)] for v in self.labels]
        if self.is_integer and all(0 <= v.real <= 9 for v in self.labels):
            return [str(int(v.real)) for v in self.labels]
        digits = "0123456789abcdefghijklmnopqrstuvwxyz"
        if self.size > len(digits):
            raise ValidationError("block strings need an alphabet of at most 36 symbols")
        return list(digits[: self.size])

    def format_block(self, codes: Iterable[int]) -> str:
        chars = self.block_chars()
        return "".join(chars[c] for c in codes)

    @classmethod
    def parse(cls, text: str) -> "Alphabet":
        return cls(tuple(_parse_label(tok) for tok in text.split(",") if tok))


def _parse_label(tok: str) -> complex:
    tok = tok.strip()
    try:
        return complex(int(tok))
    except ValueError:
        return complex(tok.replace(" ", ""))


@dataclass(frozen=True, eq=False)
class SymbolSequence:
    """A finite window of symbol codes.

    ``codes[j]`` is the symbol at ambient index ``origin_offset + j``.
    The stored array is read-only.
    """

    alphabet: Alphabet
    codes: np.ndarray
    origin_offset: int = 0
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        codes = np.asarray(self.codes)
        if codes.ndim != 1 or codes.size < 1:
            raise ValidationError("a sequence window must be a non-empty 1-d array")
        if codes.dtype != np.uint8:
            if codes.size and (codes.min() < 0 or codes.max() > 255):
                raise ValidationError("symbol codes must fit in one byte")
            codes = codes.astype(np.uint8)
        if int(codes.max()) >= self.alphabet.size:
            raise ValidationError(
                f"code {int(codes.max())} outside alphabet of size {self.alphabet.size}"
            )
        codes = codes.copy() if codes.flags.writeable else codes
        codes.flags.writeable = False
        object.__setattr__(self, "codes", codes)
        object.__setattr__(self, "origin_offset", int(self.origin_offset))

    def __len__(self) -> int:
        return self.codes.size

    def __eq__(self, other) -> bool:
        if not isinstance(other, SymbolSequence):
            return NotImplemented
        return (
            self.alphabet == other.alphabet
            and self.origin_offset == other.origin_offset
            and np.array_equal(self.codes, other.codes)
        )

    __hash__ = None

    @property
    def labels(self) -> np.ndarray:
        return self.alphabet.label_array()[self.codes]

    @classmethod
    def from_labels(cls, values: Sequence, alphabet: Alphabet | None = None,
                    origin_offset: int = 0) -> "SymbolSequence":
        values = np.asarray(values)
        if alphabet is None:
            alphabet = infer_alphabet(values)
        lookup = {lab: code for code, lab in enumerate(alphabet.labels)}
        uniq, inverse = np.unique(values, return_inverse=True)
        try:
            table = np.array([lookup[complex(v)] for v in uniq], dtype=np.uint8)
        except KeyError as exc:
            raise ValidationError(f"value {exc.args[0]} is not in the alphabet") from None
        return cls(alphabet, table[inverse.ravel()], origin_offset)

    def with_meta(self, **meta) -> "SymbolSequence":
        return SymbolSequence(self.alphabet, self.codes, self.origin_offset,
                              {**self.meta, **meta})

    def __getitem__(self, item):
        if isinstance(item, slice):
            start, _, step = item.indices(len(self))
            if step != 1:
                raise ValidationError("only contiguous slices keep a window contiguous")
            return SymbolSequence(self.alphabet, self.codes[item],
                                  self.origin_offset + start, self.meta)
        return int(self.codes[item])


def infer_alphabet(values) -> Alphabet:
    """Pick the conventional alphabet for raw label values."""
    uniq = set(complex(v) for v in np.unique(np.asarray(values)))
    if uniq <= {1, -1}:
        return Alphabet.pm1()
    if uniq <= {0, 1}:
        return Alphabet.binary()
    if uniq <= {1, -1, 0}:
        return Alphabet.moebius()
    return Alphabet(tuple(sorted(uniq, key=lambda z: (z.real, z.imag))))


@dataclass(frozen=True, eq=False)
class SkewRealization:
    """The skewed process ``x_prime[j] = x[clock[j]]`` with its driver and source."""

    x_prime: SymbolSequence
    clock: np.ndarray
    y: SymbolSequence
    x: SymbolSequence


# ---------------------------------------------------------------------------
# file formats


def write_sequence(seq: SymbolSequence, path, meta: dict | None = None) -> None:
    """Write ``seq``; the ``.seqb`` extension selects the binary format."""
    path = Path(path)
    meta = {**seq.meta, **(meta or {})}
    if path.suffix == ".seqb":
        path.write_bytes(dumps_binary(seq, meta))
    else:
        path.write_text(dumps_text(seq, meta))


def read_sequence(path) -> SymbolSequence:
    path = Path(path)
    if not path.exists():
        raise ValidationError(f"input file not found: {path}")
    data = path.read_bytes()
    if data[:4] == BINARY_MAGIC:
        return loads_binary(data)
    return loads_text(data.decode("utf-8"))


def dumps_text(seq: SymbolSequence, meta: dict | None = None) -> str:
    alpha = seq.alphabet
    lines = [f"#alphabet={alpha.format_labels()} n={len(seq)} origin={seq.origin_offset}"]
    if meta:
        lines.append("#meta=" + json.dumps(meta, sort_keys=True, default=str))
    names = [alpha.format_label(c) for c in alpha.symbols]
    lines.extend(np.asarray(names, dtype=object)[seq.codes].tolist())
    return "\n".join(lines) + "\n"


def loads_text(text: str) -> SymbolSequence:
    lines = text.splitlines()
    if not lines or not lines[0].startswith("#alphabet="):
        raise ValidationError("malformed sequence file: missing '#alphabet=' header")
    try:
        fields = dict(tok.split("=", 1) for tok in lines[0][1:].split())
        alphabet = Alphabet.parse(fields["alphabet"])
        n = int(fields["n"])
        origin = int(fields.get("origin", 0))
    except (KeyError, ValueError) as exc:
        raise ValidationError(f"malformed sequence header: {exc}") from None
    meta = {}
    body = []
    for line in lines[1:]:
        if line.startswith("#meta="):
            meta = json.loads(line[6:])
        elif line.startswith("#") or not line.strip():
            continue
        else:
            body.append(line.strip())
    if len(body) != n:
        raise ValidationError(f"malformed sequence file: header says n={n}, found {len(body)} symbols")
    names = {alphabet.format_label(c): c for c in alphabet.symbols}
    try:
        codes = np.fromiter((names[tok] for tok in body), dtype=np.uint8, count=n)
    except KeyError as exc:
        # tolerate equivalent spellings such as "1" for "+1"
        lookup = {lab: c for c, lab in enumerate(alphabet.labels)}
        try:
            codes = np.fromiter((lookup[_parse_label(tok)] for tok in body), dtype=np.uint8, count=n)
        except (KeyError, ValueError):
            raise ValidationError(f"malformed sequence file: unknown symbol {exc.args[0]!r}") from None
    return SymbolSequence(alphabet, codes, origin, meta)


def dumps_binary(seq: SymbolSequence, meta: dict | None = None) -> bytes:
    """16-byte header, one byte per code, then a JSON trailer with labels and metadata."""
    header = _BINARY_HEADER.pack(BINARY_MAGIC, seq.alphabet.size, len(seq))
    trailer = json.dumps(
        {"alphabet": seq.alphabet.format_labels(), "origin": seq.origin_offset, "meta": meta or {}},
        sort_keys=True, default=str,
    ).encode()
    return header + seq.codes.tobytes() + trailer


_DEFAULT_BINARY_ALPHABETS = {2: Alphabet.pm1(), 3: Alphabet.moebius()}


def loads_binary(data: bytes) -> SymbolSequence:
    if len(data) < _BINARY_HEADER.size:
        raise ValidationError("malformed binary sequence: truncated header")
    magic, k, n = _BINARY_HEADER.unpack_from(data)
    if magic != BINARY_MAGIC:
        raise ValidationError("malformed binary sequence: bad magic")
    start = _BINARY_HEADER.size
    if len(data) < start + n:
        raise ValidationError("malformed binary sequence: truncated body")
    codes = np.frombuffer(data, dtype=np.uint8, count=n, offset=start)
    rest = data[start + n:]
    origin, meta = 0, {}
    if rest:
        info = json.loads(rest.decode())
        alphabet = Alphabet.parse(info["alphabet"])
        origin, meta = info.get("origin", 0), info.get("meta", {})
    else:
        alphabet = _DEFAULT_BINARY_ALPHABETS.get(k) or Alphabet(tuple(range(k)))
    if alphabet.size != k:
        raise ValidationError("malformed binary sequence: alphabet size mismatch")
    return SymbolSequence(alphabet, codes, origin, meta)
