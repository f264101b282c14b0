"""Contrastive NT-Xent loss over paired embeddings, with analytic gradients.

For a batch of matched rows (m_i, s_i), using cosine similarity S and
temperature tau:

    L = (1/B) sum_i -log( exp(S_ii/tau)
                          / sum_{k != i} [exp(S_ik/tau) + exp(S_ki/tau)] )

The denominator pools both directions of in-batch negatives and excludes
the positive term. Computed with log-sum-exp for stability.
"""

from __future__ import annotations

import numpy as np


class BatchTooSmallError(ValueError):
    """NT-Xent needs at least two pairs, otherwise the denominator is empty."""


def _normalize_rows(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    norms = np.linalg.norm(x, axis=1, keepdims=True)
    norms = np.maximum(norms, 1e-12)
    return x / norms, norms


def nt_xent_loss(
    hm: np.ndarray, hs: np.ndarray, tau: float
) -> tuple[float, np.ndarray, np.ndarray]:
    """Returns (loss, dL/dhm, dL/dhs); rows of hm pair with rows of hs."""
    hm = np.asarray(hm, dtype=np.float64)
    hs = np.asarray(hs, dtype=np.float64)
    b = hm.shape[0]
    if b < 2 or hs.shape[0] != b:
        raise BatchTooSmallError(f"need a matched batch of >= 2 pairs, got {hm.shape[0]}/{hs.shape[0]}")

    um, m_norms = _normalize_rows(hm)
    us, s_norms = _normalize_rows(hs)
    sim = um @ us.T
    logits = sim / tau

    off_diag = ~np.eye(b, dtype=bool)
    # Per row i, the denominator pools logits[i, k] and logits[k, i], k != i.
    pooled = np.concatenate([logits, logits.T], axis=1)  # (B, 2B)
    pooled_mask = np.concatenate([off_diag, off_diag], axis=1)
    pooled_masked = np.where(pooled_mask, pooled, -np.inf)
    row_max = pooled_masked.max(axis=1, keepdims=True)
    exp_shifted = np.where(pooled_mask, np.exp(pooled_masked - row_max), 0.0)
    log_den = row_max[:, 0] + np.log(exp_shifted.sum(axis=1))

    loss = float(np.mean(-np.diag(logits) + log_den))

    # dL/d logits: the positive term hits the diagonal; each off-diagonal
    # logits[a, b] appears in row a's denominator and in row b's.
    ratio_row = np.where(off_diag, np.exp(logits - log_den[:, None]), 0.0)
    ratio_col = np.where(off_diag, np.exp(logits - log_den[None, :]), 0.0)
    dlogits = (ratio_row + ratio_col - np.eye(b)) / b
    dsim = dlogits / tau

    dum = dsim @ us
    dus = dsim.T @ um
    dhm = (dum - um * (dum * um).sum(axis=1, keepdims=True)) / m_norms
    dhs = (dus - us * (dus * us).sum(axis=1, keepdims=True)) / s_norms
    return loss, dhm, dhs


def cosine(a: np.ndarray, b: np.ndarray) -> float:
    na = np.linalg.norm(a)
    nb = np.linalg.norm(b)
    if na == 0.0 or nb == 0.0:
        return 0.0
    return float(np.dot(a, b) / (na * nb))
