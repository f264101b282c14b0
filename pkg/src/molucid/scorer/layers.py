"""Neural network layers with explicit forward/backward passes.

Everything runs on float64 numpy arrays. Each module owns named parameter
arrays and accumulates gradients of the same shapes; ``backward`` consumes
the upstream gradient and returns the gradient w.r.t. the module input.
Gradient correctness for every block is pinned by finite-difference tests.
"""

from __future__ import annotations

import numpy as np


class Module:
    """Parameter container with recursive name-prefixed access."""

    def __init__(self) -> None:
        self._params: dict[str, np.ndarray] = {}
        self._grads: dict[str, np.ndarray] = {}
        self._children: dict[str, Module] = {}

    def param(self, name: str, value: np.ndarray) -> np.ndarray:
        value = np.asarray(value, dtype=np.float64)
        self._params[name] = value
        self._grads[name] = np.zeros_like(value)
        return value

    def child(self, name: str, module: "Module") -> "Module":
        self._children[name] = module
        return module

    def named_params(self, prefix: str = "") -> dict[str, np.ndarray]:
        out = {prefix + name: value for name, value in self._params.items()}
        for cname, child in self._children.items():
            out.update(child.named_params(f"{prefix}{cname}."))
        return out

    def named_grads(self, prefix: str = "") -> dict[str, np.ndarray]:
        out = {prefix + name: value for name, value in self._grads.items()}
        for cname, child in self._children.items():
            out.update(child.named_grads(f"{prefix}{cname}."))
        return out

    def zero_grads(self) -> None:
        for grad in self._grads.values():
            grad[...] = 0.0
        for child in self._children.values():
            child.zero_grads()

    def load_params(self, flat: dict[str, np.ndarray], prefix: str = "") -> None:
        for name, value in self._params.items():
            key = prefix + name
            if key not in flat:
                raise KeyError(f"missing parameter {key}")
            if flat[key].shape != value.shape:
                raise ValueError(f"shape mismatch for {key}")
            value[...] = flat[key]
        for cname, child in self._children.items():
            child.load_params(flat, f"{prefix}{cname}.")


def fan_in_uniform(rng: np.random.Generator, shape: tuple[int, ...], fan_in: int) -> np.ndarray:
    bound = 1.0 / np.sqrt(fan_in)
    return rng.uniform(-bound, bound, size=shape)


class Linear(Module):
    def __init__(self, n_in: int, n_out: int, rng: np.random.Generator):
        super().__init__()
        self.n_in = n_in
        self.n_out = n_out
        self.param("W", fan_in_uniform(rng, (n_in, n_out), n_in))
        self.param("b", np.zeros(n_out))
        self._x: np.ndarray | None = None

    def forward(self, x: np.ndarray) -> np.ndarray:
        self._x = x
        return x @ self._params["W"] + self._params["b"]

    def backward(self, dy: np.ndarray) -> np.ndarray:
        x = self._x
        assert x is not None
        x2 = x.reshape(-1, self.n_in)
        dy2 = dy.reshape(-1, self.n_out)
        self._grads["W"] += x2.T @ dy2
        self._grads["b"] += dy2.sum(axis=0)
        return (dy2 @ self._params["W"].T).reshape(x.shape)


class Embedding(Module):
    def __init__(self, vocab: int, dim: int, rng: np.random.Generator):
        super().__init__()
        self.vocab = vocab
        self.dim = dim
        self.param("table", fan_in_uniform(rng, (vocab, dim), dim))
        self._ids: np.ndarray | None = None

    def forward(self, ids: np.ndarray) -> np.ndarray:
        self._ids = np.asarray(ids)
        return self._params["table"][self._ids]

    def backward(self, dy: np.ndarray) -> None:
        ids = self._ids
        assert ids is not None
        np.add.at(
            self._grads["table"], ids.reshape(-1), dy.reshape(-1, self.dim)
        )


class Relu(Module):
    def __init__(self) -> None:
        super().__init__()
        self._mask: np.ndarray | None = None

    def forward(self, x: np.ndarray) -> np.ndarray:
        self._mask = x > 0
        return np.where(self._mask, x, 0.0)

    def backward(self, dy: np.ndarray) -> np.ndarray:
        assert self._mask is not None
        return np.where(self._mask, dy, 0.0)


class LayerNorm(Module):
    def __init__(self, dim: int, eps: float = 1e-5):
        super().__init__()
        self.eps = eps
        self.param("gamma", np.ones(dim))
        self.param("beta", np.zeros(dim))
        self._cache: tuple | None = None

    def forward(self, x: np.ndarray) -> np.ndarray:
        mu = x.mean(axis=-1, keepdims=True)
        var = x.var(axis=-1, keepdims=True)
        inv_std = 1.0 / np.sqrt(var + self.eps)
        xhat = (x - mu) * inv_std
        self._cache = (xhat, inv_std)
        return self._params["gamma"] * xhat + self._params["beta"]

    def backward(self, dy: np.ndarray) -> np.ndarray:
        assert self._cache is not None
        xhat, inv_std = self._cache
        dim = xhat.shape[-1]
        lead = (-1, dim)
        self._grads["gamma"] += (dy * xhat).reshape(lead).sum(axis=0)
        self._grads["beta"] += dy.reshape(lead).sum(axis=0)
        dxhat = dy * self._params["gamma"]
        # dx for normalization with per-row mean/variance
        mean_dxhat = dxhat.mean(axis=-1, keepdims=True)
        mean_dxhat_xhat = (dxhat * xhat).mean(axis=-1, keepdims=True)
        return inv_std * (dxhat - mean_dxhat - xhat * mean_dxhat_xhat)


class Sequential(Module):
    def __init__(self, *layers: Module):
        super().__init__()
        self.layers = list(layers)
        for i, layer in enumerate(self.layers):
            self.child(str(i), layer)

    def forward(self, x: np.ndarray) -> np.ndarray:
        for layer in self.layers:
            x = layer.forward(x)
        return x

    def backward(self, dy: np.ndarray) -> np.ndarray:
        for layer in reversed(self.layers):
            dy = layer.backward(dy)
        return dy


def mlp(sizes: list[int], rng: np.random.Generator) -> Sequential:
    """Linear stack with ReLU between layers (none after the last)."""
    layers: list[Module] = []
    for i in range(len(sizes) - 1):
        layers.append(Linear(sizes[i], sizes[i + 1], rng))
        if i < len(sizes) - 2:
            layers.append(Relu())
    return Sequential(*layers)


_NEG_INF = -1e30


class MultiHeadSelfAttention(Module):
    def __init__(self, dim: int, heads: int, rng: np.random.Generator):
        super().__init__()
        if dim % heads != 0:
            raise ValueError("dim must be divisible by heads")
        self.dim = dim
        self.heads = heads
        self.head_dim = dim // heads
        self.wq = self.child("wq", Linear(dim, dim, rng))
        self.wk = self.child("wk", Linear(dim, dim, rng))
        self.wv = self.child("wv", Linear(dim, dim, rng))
        self.wo = self.child("wo", Linear(dim, dim, rng))
        self._cache: tuple | None = None

    def _split(self, x: np.ndarray) -> np.ndarray:
        b, t, _ = x.shape
        return x.reshape(b, t, self.heads, self.head_dim).transpose(0, 2, 1, 3)

    def _merge(self, x: np.ndarray) -> np.ndarray:
        b, h, t, d = x.shape
        return x.transpose(0, 2, 1, 3).reshape(b, t, h * d)

    def forward(self, x: np.ndarray, mask: np.ndarray) -> np.ndarray:
        """x: (B, T, D); mask: (B, T) bool, True at valid positions."""
        q = self._split(self.wq.forward(x))
        k = self._split(self.wk.forward(x))
        v = self._split(self.wv.forward(x))
        scale = 1.0 / np.sqrt(self.head_dim)
        scores = (q @ k.transpose(0, 1, 3, 2)) * scale
        bias = np.where(mask[:, None, None, :], 0.0, _NEG_INF)
        scores = scores + bias
        scores -= scores.max(axis=-1, keepdims=True)
        weights = np.exp(scores)
        weights /= weights.sum(axis=-1, keepdims=True)
        context = weights @ v
        self._cache = (q, k, v, weights, scale)
        return self.wo.forward(self._merge(context))

    def backward(self, dy: np.ndarray) -> np.ndarray:
        assert self._cache is not None
        q, k, v, weights, scale = self._cache
        dcontext = self._split(self.wo.backward(dy))
        dweights = dcontext @ v.transpose(0, 1, 3, 2)
        dv = weights.transpose(0, 1, 3, 2) @ dcontext
        dscores = (dweights - (dweights * weights).sum(axis=-1, keepdims=True)) * weights
        dq = (dscores @ k) * scale
        dk = (dscores.transpose(0, 1, 3, 2) @ q) * scale
        dx = self.wq.backward(self._merge(dq))
        dx = dx + self.wk.backward(self._merge(dk))
        dx = dx + self.wv.backward(self._merge(dv))
        return dx


class EncoderBlock(Module):
    """Pre-norm transformer block: x + attn(LN(x)), then x + ffn(LN(x))."""

    def __init__(self, dim: int, heads: int, ffn_hidden: int, rng: np.random.Generator):
        super().__init__()
        self.ln1 = self.child("ln1", LayerNorm(dim))
        self.attn = self.child("attn", MultiHeadSelfAttention(dim, heads, rng))
        self.ln2 = self.child("ln2", LayerNorm(dim))
        self.ffn = self.child("ffn", mlp([dim, ffn_hidden, dim], rng))

    def forward(self, x: np.ndarray, mask: np.ndarray) -> np.ndarray:
        y = x + self.attn.forward(self.ln1.forward(x), mask)
        return y + self.ffn.forward(self.ln2.forward(y))

    def backward(self, dz: np.ndarray) -> np.ndarray:
        dy = dz + self.ln2.backward(self.ffn.backward(dz))
        return dy + self.ln1.backward(self.attn.backward(dy))


class TransformerEncoder(Module):
    """Pre-norm encoder stack with final LayerNorm and masked mean pooling.

    No positional encoding: the token sequence is treated as a set, making
    the pooled embedding invariant to token order.
    """

    def __init__(
        self, dim: int, layers: int, heads: int, ffn_hidden: int, rng: np.random.Generator
    ):
        super().__init__()
        self.blocks = [
            self.child(f"block{i}", EncoderBlock(dim, heads, ffn_hidden, rng))
            for i in range(layers)
        ]
        self.final_ln = self.child("final_ln", LayerNorm(dim))
        self._cache: tuple | None = None

    def forward(self, x: np.ndarray, mask: np.ndarray) -> np.ndarray:
        for block in self.blocks:
            x = block.forward(x, mask)
        x = self.final_ln.forward(x)
        counts = mask.sum(axis=1, keepdims=True).astype(np.float64)
        pooled = (x * mask[:, :, None]).sum(axis=1) / counts
        self._cache = (mask, counts)
        return pooled

    def backward(self, dpooled: np.ndarray) -> np.ndarray:
        assert self._cache is not None
        mask, counts = self._cache
        dx = mask[:, :, None] * (dpooled / counts)[:, None, :]
        dx = self.final_ln.backward(dx)
        for block in reversed(self.blocks):
            dx = block.backward(dx)
        return dx


class GinLayer(Module):
    """Graph isomorphism layer: MLP((1 + eps) * h + sum of neighbor h)."""

    def __init__(self, n_in: int, n_out: int, rng: np.random.Generator):
        super().__init__()
        self.param("eps", np.zeros(()))
        self.mlp = self.child("mlp", mlp([n_in, n_out, n_out], rng))
        self._cache: tuple | None = None

    def forward(self, h: np.ndarray, edges: np.ndarray) -> np.ndarray:
        """h: (N, n_in); edges: (2, E) directed index pairs, both directions."""
        agg = (1.0 + self._params["eps"]) * h
        if edges.size:
            np.add.at(agg, edges[1], h[edges[0]])
        self._cache = (h, edges)
        return self.mlp.forward(agg)

    def backward(self, dy: np.ndarray) -> np.ndarray:
        assert self._cache is not None
        h, edges = self._cache
        dagg = self.mlp.backward(dy)
        self._grads["eps"] += float((dagg * h).sum())
        dh = (1.0 + self._params["eps"]) * dagg
        if edges.size:
            np.add.at(dh, edges[0], dagg[edges[1]])
        return dh
