"""Named-tensor checkpoint archive: reader, writer, integrity checks.

Binary layout (all integers little-endian):

    magic "BYOLTNS1"
    u64 tensor_count
    per tensor: u16 name_len, name (UTF-8), u8 dtype (0=f32, 1=f16),
                u8 rank, rank x u64 dims
    raw row-major buffers, in header order
    u64 metadata_len, metadata (UTF-8 "key=value" lines)

Writers emit tensors sorted by name and metadata sorted by key, so equal
checkpoints serialize to equal bytes.
"""

import hashlib
import io
import struct
from dataclasses import dataclass, field
from typing import Dict

import numpy as np

from .errors import ContractViolation

MAGIC = b"BYOLTNS1"

_DTYPE_CODE = {"f32": 0, "f16": 1}
_CODE_DTYPE = {code: name for name, code in _DTYPE_CODE.items()}
_NUMPY_DTYPE = {"f32": np.dtype("<f4"), "f16": np.dtype("<f2")}
_DTYPE_FROM_NUMPY = {np.dtype("float32"): "f32", np.dtype("float16"): "f16"}


class CorruptHeaderError(ContractViolation):
    """Archive magic/header structure is invalid."""


class TruncatedArchiveError(ContractViolation):
    """Archive ends before a declared buffer or block is complete."""


class NonFiniteTensorError(ContractViolation):
    """A tensor contains NaN or infinite elements."""


@dataclass(frozen=True)
class NamedTensor:
    name: str
    data: np.ndarray

    def __post_init__(self):
        if self.data.dtype not in _DTYPE_FROM_NUMPY:
            raise ContractViolation(
                f"tensor {self.name!r}: unsupported dtype {self.data.dtype}"
            )
        if not np.isfinite(self.data).all():
            raise NonFiniteTensorError(f"tensor {self.name!r} has non-finite elements")
        object.__setattr__(self, "data", np.ascontiguousarray(self.data))

    @property
    def shape(self):
        return self.data.shape

    @property
    def dtype(self):
        return _DTYPE_FROM_NUMPY[self.data.dtype]


@dataclass
class TensorCheckpoint:
    tensors: Dict[str, NamedTensor]
    metadata: Dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if not self.tensors:
            raise ContractViolation("checkpoint must contain at least one tensor")
        for key, tensor in self.tensors.items():
            if key != tensor.name:
                raise ContractViolation(
                    f"tensor map key {key!r} does not match tensor name {tensor.name!r}"
                )

    @classmethod
    def from_arrays(cls, arrays, metadata=None):
        tensors = {name: NamedTensor(name, np.asarray(arr)) for name, arr in arrays.items()}
        return cls(tensors=tensors, metadata=dict(metadata or {}))

    def names(self):
        return set(self.tensors)


def _serialize(ckpt: TensorCheckpoint) -> bytes:
    out = io.BytesIO()
    out.write(MAGIC)
    names = sorted(ckpt.tensors)
    out.write(struct.pack("<Q", len(names)))
    for name in names:
        tensor = ckpt.tensors[name]
        encoded = name.encode("utf-8")
        if len(encoded) > 0xFFFF:
            raise ContractViolation(f"tensor name too long: {name[:32]!r}...")
        out.write(struct.pack("<H", len(encoded)))
        out.write(encoded)
        out.write(struct.pack("<B", _DTYPE_CODE[tensor.dtype]))
        rank = len(tensor.shape)
        if rank > 0xFF:
            raise ContractViolation(f"tensor {name!r}: rank {rank} too large")
        out.write(struct.pack("<B", rank))
        for dim in tensor.shape:
            out.write(struct.pack("<Q", dim))
    for name in names:
        tensor = ckpt.tensors[name]
        buffer = np.ascontiguousarray(tensor.data, dtype=_NUMPY_DTYPE[tensor.dtype])
        out.write(buffer.tobytes())
    meta_lines = "".join(
        f"{key}={ckpt.metadata[key]}\n" for key in sorted(ckpt.metadata)
    ).encode("utf-8")
    out.write(struct.pack("<Q", len(meta_lines)))
    out.write(meta_lines)
    return out.getvalue()


def save_checkpoint(ckpt: TensorCheckpoint, path):
    with open(path, "wb") as handle:
        handle.write(_serialize(ckpt))


def checkpoint_fingerprint(ckpt: TensorCheckpoint) -> str:
    """SHA-256 over the canonical serialization."""
    return hashlib.sha256(_serialize(ckpt)).hexdigest()


class _Reader:
    def __init__(self, blob: bytes):
        self.blob = blob
        self.pos = 0

    def take(self, count, what):
        end = self.pos + count
        if end > len(self.blob):
            raise TruncatedArchiveError(
                f"archive ends inside {what} (needed {count} bytes at offset {self.pos})"
            )
        chunk = self.blob[self.pos : end]
        self.pos = end
        return chunk

    def u64(self, what):
        return struct.unpack("<Q", self.take(8, what))[0]

    def u16(self, what):
        return struct.unpack("<H", self.take(2, what))[0]

    def u8(self, what):
        return self.take(1, what)[0]


def load_checkpoint(path) -> TensorCheckpoint:
    with open(path, "rb") as handle:
        blob = handle.read()
    reader = _Reader(blob)
    if reader.take(len(MAGIC), "magic") != MAGIC:
        raise CorruptHeaderError(f"bad magic bytes in {path}")
    count = reader.u64("tensor count")
    headers = []
    for index in range(count):
        name_len = reader.u16(f"tensor {index} name length")
        name = reader.take(name_len, f"tensor {index} name").decode("utf-8")
        dtype_code = reader.u8(f"tensor {name!r} dtype")
        if dtype_code not in _CODE_DTYPE:
            raise CorruptHeaderError(f"tensor {name!r}: unknown dtype code {dtype_code}")
        rank = reader.u8(f"tensor {name!r} rank")
        dims = tuple(reader.u64(f"tensor {name!r} dim {d}") for d in range(rank))
        headers.append((name, _CODE_DTYPE[dtype_code], dims))
    tensors = {}
    for name, dtype, dims in headers:
        if name in tensors:
            raise CorruptHeaderError(f"duplicate tensor name {name!r}")
        numpy_dtype = _NUMPY_DTYPE[dtype]
        elements = 1
        for dim in dims:
            elements *= dim
        raw = reader.take(elements * numpy_dtype.itemsize, f"buffer of tensor {name!r}")
        array = np.frombuffer(raw, dtype=numpy_dtype).reshape(dims)
        if not np.isfinite(array).all():
            raise NonFiniteTensorError(f"tensor {name!r} has non-finite elements")
        tensors[name] = NamedTensor(name, array)
    meta_len = reader.u64("metadata length")
    meta_blob = reader.take(meta_len, "metadata block").decode("utf-8")
    if reader.pos != len(blob):
        raise CorruptHeaderError(f"{len(blob) - reader.pos} trailing bytes after metadata")
    metadata = {}
    for line in meta_blob.splitlines():
        if line:
            key, _, value = line.partition("=")
            metadata[key] = value
    return TensorCheckpoint(tensors=tensors, metadata=metadata)
