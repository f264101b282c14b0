"""Scorer checkpoint container and binary file format.

File layout: 8-byte magic, uint32 little-endian manifest length, JSON
manifest (config, best validation loss, checkpoint id, tensor directory
with name/shape/offset), then the concatenated little-endian float32
payload. The checkpoint id is a SHA-256 over the id-free manifest plus
payload, so load can verify integrity and save/load round-trips are
byte-identical.
"""

from __future__ import annotations

import hashlib
import json
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .config import ScorerConfig

MAGIC = b"MOLUCID\x01"


class CheckpointError(ValueError):
    pass


class FormatError(CheckpointError):
    pass


class ShapeMismatchError(CheckpointError):
    pass


@dataclass(frozen=True)
class ScorerCheckpoint:
    config: ScorerConfig
    params: dict[str, np.ndarray]  # float64 in memory
    checkpoint_id: str
    best_val_loss: float


def _manifest_and_payload(
    config: ScorerConfig, params: dict[str, np.ndarray], best_val_loss: float
) -> tuple[dict, bytes]:
    names = sorted(params)
    tensors = []
    chunks = []
    offset = 0
    for name in names:
        data = np.ascontiguousarray(params[name], dtype="<f4").tobytes()
        tensors.append(
            {"name": name, "shape": list(params[name].shape), "offset": offset}
        )
        chunks.append(data)
        offset += len(data)
    manifest = {
        "config": config.to_dict(),
        "best_val_loss": best_val_loss,
        "tensors": tensors,
    }
    return manifest, b"".join(chunks)


def compute_checkpoint_id(
    config: ScorerConfig, params: dict[str, np.ndarray], best_val_loss: float
) -> str:
    manifest, payload = _manifest_and_payload(config, params, best_val_loss)
    digest = hashlib.sha256()
    digest.update(json.dumps(manifest, sort_keys=True).encode())
    digest.update(payload)
    return digest.hexdigest()


def make_checkpoint(
    config: ScorerConfig, params: dict[str, np.ndarray], best_val_loss: float
) -> ScorerCheckpoint:
    # Quantize to the storage precision first so the id matches the file.
    quantized = {
        name: np.asarray(value, dtype="<f4").astype(np.float64)
        for name, value in params.items()
    }
    return ScorerCheckpoint(
        config=config,
        params=quantized,
        checkpoint_id=compute_checkpoint_id(config, quantized, best_val_loss),
        best_val_loss=best_val_loss,
    )


def save_checkpoint(ckpt: ScorerCheckpoint, path: str | Path) -> None:
    manifest, payload = _manifest_and_payload(
        ckpt.config, ckpt.params, ckpt.best_val_loss
    )
    manifest["checkpoint_id"] = ckpt.checkpoint_id
    blob = json.dumps(manifest, sort_keys=True).encode()
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<I", len(blob)))
        fh.write(blob)
        fh.write(payload)


def expected_shapes(config: ScorerConfig) -> dict[str, tuple[int, ...]]:
    from .encoders import MoleculeEncoder, SpectrumEncoder

    rng = np.random.default_rng(0)
    shapes: dict[str, tuple[int, ...]] = {}
    for prefix, enc in (
        ("mol.", MoleculeEncoder(config, rng)),
        ("spec.", SpectrumEncoder(config, rng)),
    ):
        for name, value in enc.named_params().items():
            shapes[prefix + name] = value.shape
    return shapes


def load_checkpoint(path: str | Path) -> ScorerCheckpoint:
    raw = Path(path).read_bytes()
    if len(raw) < len(MAGIC) + 4 or raw[: len(MAGIC)] != MAGIC:
        raise FormatError(f"{path}: not a scorer checkpoint")
    (manifest_len,) = struct.unpack("<I", raw[len(MAGIC) : len(MAGIC) + 4])
    start = len(MAGIC) + 4
    if len(raw) < start + manifest_len:
        raise FormatError(f"{path}: truncated manifest")
    try:
        manifest = json.loads(raw[start : start + manifest_len])
        config = ScorerConfig.from_dict(manifest["config"])
        tensors = manifest["tensors"]
        stored_id = manifest["checkpoint_id"]
        best_val_loss = float(manifest["best_val_loss"])
    except (KeyError, ValueError, TypeError) as exc:
        raise FormatError(f"{path}: bad manifest ({exc})") from exc
    payload = raw[start + manifest_len :]
    params: dict[str, np.ndarray] = {}
    for entry in tensors:
        shape = tuple(entry["shape"])
        size = int(np.prod(shape)) * 4 if shape else 4
        chunk = payload[entry["offset"] : entry["offset"] + size]
        if len(chunk) != size:
            raise FormatError(f"{path}: truncated payload for {entry['name']}")
        params[entry["name"]] = (
            np.frombuffer(chunk, dtype="<f4").reshape(shape).astype(np.float64)
        )
    shapes = expected_shapes(config)
    if set(shapes) != set(params):
        missing = set(shapes) ^ set(params)
        raise ShapeMismatchError(f"{path}: parameter names do not match config: {sorted(missing)[:4]}")
    for name, shape in shapes.items():
        if params[name].shape != shape:
            raise ShapeMismatchError(
                f"{path}: {name} has shape {params[name].shape}, config implies {shape}"
            )
    recomputed = compute_checkpoint_id(config, params, best_val_loss)
    if recomputed != stored_id:
        raise FormatError(f"{path}: checkpoint id mismatch (corrupt or tampered file)")
    return ScorerCheckpoint(
        config=config, params=params, checkpoint_id=stored_id, best_val_loss=best_val_loss
    )
