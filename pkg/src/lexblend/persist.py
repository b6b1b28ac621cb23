"""Single-file binary container for a trained model and its parameters.

Layout (all integers little-endian, fixed width; see docs/model-format.md):

    magic "LXBM" | u32 version | 32-byte corpus fingerprint | u32 n_sections
    then per section: 4-byte tag | u64 payload length | payload | sha256(payload)

Sections appear in the fixed order VOCB, GRPH, SRTX, PRMS. Serialization is
canonical (ids ascending, edges sorted by (i, j)), so two saves of the same
logical model are byte-identical.
"""
from __future__ import annotations

import hashlib
import os
import struct
import tempfile
from pathlib import Path

import numpy as np

from .cooccur import CooccurrenceGraphSet, SmoothingPolicy
from .corpus import Vocabulary
from .errors import CorruptModel, IoError, UnsupportedVersion
from .inference import ModelParams
from .lsa import SemanticReducedTable
from .model import TrainedModel

MAGIC = b"LXBM"
FORMAT_VERSION = 1
_SECTION_ORDER = (b"VOCB", b"GRPH", b"SRTX", b"PRMS")


def _pack_vocab(vocab: Vocabulary) -> bytes:
    parts = [struct.pack("<IQ", len(vocab), vocab.total_tokens)]
    for wid in range(len(vocab)):
        raw = vocab.id_to_word[wid].encode("utf-8")
        parts.append(struct.pack("<I", len(raw)))
        parts.append(raw)
        parts.append(struct.pack("<Q", vocab.counts[wid]))
    return b"".join(parts)


def _pack_graphs(graphs: CooccurrenceGraphSet, smoothing: SmoothingPolicy) -> bytes:
    parts = [struct.pack("<Id", graphs.max_distance, smoothing.epsilon)]
    for d in range(graphs.max_distance):
        edges = [
            (i, j, w)
            for i, row in graphs.graphs[d].items()
            for j, w in row.items()
        ]
        edges.sort()
        parts.append(struct.pack("<Q", len(edges)))
        for i, j, w in edges:
            parts.append(struct.pack("<IIQ", i, j, w))
    return b"".join(parts)


def _pack_srt(srt: SemanticReducedTable) -> bytes:
    n, k = srt.vectors.shape
    header = struct.pack("<II", n, k)
    body = np.ascontiguousarray(srt.vectors, dtype="<f4").tobytes()
    return header + body


def _pack_params(params: ModelParams) -> bytes:
    parts = [struct.pack("<ddd", params.alpha, params.eta_alpha, params.eta_lambda)]
    for lambdas in (params.lambda_before, params.lambda_after):
        parts.append(struct.pack("<I", len(lambdas)))
        parts.extend(struct.pack("<d", x) for x in lambdas)
    return b"".join(parts)


def save(model: TrainedModel, params: ModelParams, path: str | Path) -> None:
    """Write the container atomically (temp file + rename in the target dir)."""
    payloads = {
        b"VOCB": _pack_vocab(model.vocab),
        b"GRPH": _pack_graphs(model.graphs, model.smoothing),
        b"SRTX": _pack_srt(model.srt),
        b"PRMS": _pack_params(params),
    }
    blob = [MAGIC, struct.pack("<I", FORMAT_VERSION), model.fingerprint,
            struct.pack("<I", len(_SECTION_ORDER))]
    for tag in _SECTION_ORDER:
        payload = payloads[tag]
        blob.append(tag)
        blob.append(struct.pack("<Q", len(payload)))
        blob.append(payload)
        blob.append(hashlib.sha256(payload).digest())
    data = b"".join(blob)

    path = Path(path)
    try:
        fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
        try:
            with os.fdopen(fd, "wb") as fh:
                fh.write(data)
            os.replace(tmp_name, path)
        except BaseException:
            os.unlink(tmp_name)
            raise
    except OSError as exc:
        raise IoError(f"cannot write model to {path}: {exc}") from exc


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise CorruptModel("container truncated")
        chunk = self.data[self.pos:self.pos + n]
        self.pos += n
        return chunk

    def unpack(self, fmt: str):
        return struct.unpack(fmt, self.take(struct.calcsize(fmt)))


def _unpack_vocab(r: _Reader) -> Vocabulary:
    n_words, total = r.unpack("<IQ")
    vocab = Vocabulary()
    for wid in range(n_words):
        (length,) = r.unpack("<I")
        try:
            word = r.take(length).decode("utf-8")
        except UnicodeDecodeError as exc:
            raise CorruptModel(f"bad word encoding at id {wid}") from exc
        (count,) = r.unpack("<Q")
        vocab.word_to_id[word] = wid
        vocab.id_to_word.append(word)
        vocab.counts.append(count)
    vocab.total_tokens = total
    if len(vocab.word_to_id) != n_words:
        raise CorruptModel("duplicate words in vocabulary section")
    return vocab


def _unpack_graphs(r: _Reader) -> tuple[CooccurrenceGraphSet, SmoothingPolicy]:
    max_distance, epsilon = r.unpack("<Id")
    if max_distance < 1:
        raise CorruptModel("max_distance must be >= 1")
    try:
        smoothing = SmoothingPolicy(epsilon)
    except ValueError as exc:
        raise CorruptModel(str(exc)) from exc
    gset = CooccurrenceGraphSet.empty(max_distance)
    for d in range(max_distance):
        (n_edges,) = r.unpack("<Q")
        for _ in range(n_edges):
            i, j, w = r.unpack("<IIQ")
            gset.add_pair(d, i, j, w)
    return gset, smoothing


def _unpack_srt(r: _Reader) -> SemanticReducedTable:
    n, k = r.unpack("<II")
    raw = r.take(n * k * 4)
    vectors = np.frombuffer(raw, dtype="<f4").reshape(n, k).copy()
    return SemanticReducedTable(vectors=vectors, rank=k)


def _unpack_params(r: _Reader) -> ModelParams:
    alpha, eta_alpha, eta_lambda = r.unpack("<ddd")
    vectors = []
    for _ in range(2):
        (n,) = r.unpack("<I")
        vectors.append([r.unpack("<d")[0] for _ in range(n)])
    try:
        return ModelParams(
            alpha=alpha,
            lambda_before=vectors[0],
            lambda_after=vectors[1],
            eta_alpha=eta_alpha,
            eta_lambda=eta_lambda,
        )
    except ValueError as exc:
        raise CorruptModel(f"stored parameters out of range: {exc}") from exc


def load(path: str | Path) -> tuple[TrainedModel, ModelParams]:
    """Read a container; validates magic, version, and per-section checksums."""
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise IoError(f"cannot read model from {path}: {exc}") from exc

    r = _Reader(data)
    if r.take(4) != MAGIC:
        raise CorruptModel("bad magic prefix")
    (version,) = r.unpack("<I")
    if version != FORMAT_VERSION:
        raise UnsupportedVersion(f"format version {version}, supported: {FORMAT_VERSION}")
    fingerprint = r.take(32)
    (n_sections,) = r.unpack("<I")
    if n_sections != len(_SECTION_ORDER):
        raise CorruptModel(f"expected {len(_SECTION_ORDER)} sections, got {n_sections}")

    payloads = {}
    for expected_tag in _SECTION_ORDER:
        tag = r.take(4)
        if tag != expected_tag:
            raise CorruptModel(f"section {expected_tag.decode()} missing or out of order")
        (length,) = r.unpack("<Q")
        payload = r.take(length)
        checksum = r.take(32)
        if hashlib.sha256(payload).digest() != checksum:
            raise CorruptModel(f"checksum mismatch in section {tag.decode()}")
        payloads[tag] = payload
    if r.pos != len(data):
        raise CorruptModel("trailing bytes after last section")

    vocab = _unpack_vocab(_Reader(payloads[b"VOCB"]))
    graphs, smoothing = _unpack_graphs(_Reader(payloads[b"GRPH"]))
    srt = _unpack_srt(_Reader(payloads[b"SRTX"]))
    params = _unpack_params(_Reader(payloads[b"PRMS"]))
    model = TrainedModel(
        vocab=vocab,
        graphs=graphs,
        srt=srt,
        smoothing=smoothing,
        fingerprint=fingerprint,
    )
    return model, params
