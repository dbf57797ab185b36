"""Model backends: a deterministic built-in byte transformer and HF wrappers.

A backend owns the tokenizer and the next-token probability function; the
server quantizes its float output before anything crosses the wire.

``TinyByteModel`` is a small seeded transformer over the raw byte alphabet.
Its weights are random (it is a protocol and integration stand-in, not a
trained model), but its evaluation is a pure function of (seed, context)
within a process, which is exactly what the coding path needs.  Cross-host
bit-identity is not advertised (capability flag stays off) because BLAS
kernels may differ between machines.

``HFCausalModel`` wraps a pretrained causal LM from `transformers` pinned
to float32, single thread, batch size 1, greedy evaluation with no
sampling paths.
"""

from __future__ import annotations

import hashlib
import json

import numpy as np

from .protocol import FINGERPRINT_LEN


class NotInvertible(Exception):
    """Tokenizer round-trip failed for this input."""


class ModelLoadError(Exception):
    """Backend dependencies or weights are unavailable."""


def _softmax(logits: np.ndarray) -> np.ndarray:
    z = logits - logits.max()
    e = np.exp(z)
    return e / e.sum()


class TinyByteModel:
    """Seeded two-block causal transformer over the 256-byte vocabulary."""

    D_MODEL = 64
    N_LAYERS = 2

    def __init__(self, seed: int = 7, context_window: int = 512):
        self.model_id = f"tiny:{seed}"
        self.vocab_size = 256
        self.context_window = context_window
        self.capabilities = 0  # float matmuls: no cross-host guarantee
        rng = np.random.default_rng(0xB17E5 + seed)
        d = self.D_MODEL
        scale = 0.08
        self.embed = rng.normal(0, scale, (256, d))
        self.bos = rng.normal(0, scale, d)
        self.pos = rng.normal(0, scale, (context_window + 1, d))
        self.blocks = []
        for _ in range(self.N_LAYERS):
            self.blocks.append({
                "wq": rng.normal(0, scale, (d, d)),
                "wk": rng.normal(0, scale, (d, d)),
                "wv": rng.normal(0, scale, (d, d)),
                "wo": rng.normal(0, scale, (d, d)),
                "w1": rng.normal(0, scale, (d, 2 * d)),
                "w2": rng.normal(0, scale, (2 * d, d)),
            })
        self.w_out = rng.normal(0, scale, (d, 256))
        self.tokenizer_fingerprint = hashlib.sha256(
            f"logit-server/tiny-bytes-v1/{seed}".encode()
        ).digest()[:FINGERPRINT_LEN]

    @staticmethod
    def _layer_norm(x: np.ndarray) -> np.ndarray:
        mu = x.mean(axis=-1, keepdims=True)
        var = x.var(axis=-1, keepdims=True)
        return (x - mu) / np.sqrt(var + 1e-5)

    def tokenize(self, text: bytes) -> list[int]:
        return list(text)  # bytes are the vocabulary: always invertible

    def detokenize(self, ids) -> bytes:
        return bytes(ids)

    def next_probs(self, context: tuple[int, ...]) -> np.ndarray:
        if len(context) + 1 > self.context_window + 1:
            raise ValueError("context exceeds model window")
        n = len(context) + 1
        x = np.empty((n, self.D_MODEL))
        x[0] = self.bos
        if context:
            x[1:] = self.embed[list(context)]
        x = x + self.pos[:n]
        mask = np.triu(np.full((n, n), -1e30), k=1)
        for blk in self.blocks:
            h = self._layer_norm(x)
            q = h @ blk["wq"]
            k = h @ blk["wk"]
            v = h @ blk["wv"]
            att = q @ k.T / np.sqrt(self.D_MODEL) + mask
            att = att - att.max(axis=-1, keepdims=True)
            w = np.exp(att)
            w = w / w.sum(axis=-1, keepdims=True)
            x = x + (w @ v) @ blk["wo"]
            h = self._layer_norm(x)
            x = x + np.maximum(h @ blk["w1"], 0.0) @ blk["w2"]
        logits = self._layer_norm(x[-1]) @ self.w_out
        return _softmax(logits)


class HFCausalModel:
    """Pretrained causal LM behind the same backend interface."""

    def __init__(self, name: str, context_window: int | None = None):
        try:
            import torch
            from transformers import AutoModelForCausalLM, AutoTokenizer
        except ImportError as exc:
            raise ModelLoadError(f"transformers/torch not installed: {exc}") from exc
        try:
            self.tokenizer = AutoTokenizer.from_pretrained(name)
            self.model = AutoModelForCausalLM.from_pretrained(
                name, torch_dtype=torch.float32
            )
        except Exception as exc:  # hub unreachable, bad name, missing cache
            raise ModelLoadError(f"cannot load pretrained model {name!r}: {exc}") from exc
        torch.set_num_threads(1)  # batching and threading break determinism
        self.model.eval()
        self._torch = torch
        self.model_id = f"hf:{name}"
        self.vocab_size = int(self.model.get_output_embeddings().weight.shape[0])
        limit = getattr(self.model.config, "n_positions", None) or getattr(
            self.model.config, "max_position_embeddings", 1024
        )
        self.context_window = int(context_window or limit - 1)
        self.capabilities = 0
        vocab_blob = json.dumps(sorted(self.tokenizer.get_vocab().items()),
                                ensure_ascii=False).encode()
        self.tokenizer_fingerprint = hashlib.sha256(
            f"hf/{name}/".encode() + vocab_blob
        ).digest()[:FINGERPRINT_LEN]
        bos = self.tokenizer.bos_token_id
        self._prime = bos if bos is not None else self.tokenizer.eos_token_id
        if self._prime is None:
            raise ModelLoadError(f"{name!r} has neither BOS nor EOS token to prime with")

    def tokenize(self, text: bytes) -> list[int]:
        try:
            decoded = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise NotInvertible(f"input is not valid UTF-8: {exc}") from exc
        ids = self.tokenizer.encode(decoded, add_special_tokens=False)
        if self.tokenizer.decode(ids).encode("utf-8") != text:
            raise NotInvertible("tokenizer round-trip changed the text")
        return list(ids)

    def detokenize(self, ids) -> bytes:
        return self.tokenizer.decode(list(ids)).encode("utf-8")

    def next_probs(self, context: tuple[int, ...]) -> np.ndarray:
        torch = self._torch
        ids = [self._prime] + list(context)
        with torch.no_grad():
            out = self.model(torch.tensor([ids], dtype=torch.long))
        logits = out.logits[0, -1].double().numpy()
        return _softmax(logits)


def load_backend(spec: str):
    """Backend from a spec string: 'tiny', 'tiny:SEED', or 'hf:NAME'."""
    if spec == "tiny":
        return TinyByteModel()
    if spec.startswith("tiny:"):
        return TinyByteModel(seed=int(spec.split(":", 1)[1]))
    if spec.startswith("hf:"):
        return HFCausalModel(spec.split(":", 1)[1])
    raise ValueError(f"unknown backend spec {spec!r} (want tiny[:SEED] or hf:NAME)")
