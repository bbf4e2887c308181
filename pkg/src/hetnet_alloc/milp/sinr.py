"""Direct SINR evaluation for a fixed assignment."""

from __future__ import annotations

import numpy as np

from ..channel import ChannelRealization
from ..errors import InvalidArgument


def _check(x, ch: ChannelRealization) -> np.ndarray:
    x = np.asarray(x)
    if x.shape != ch.shape:
        raise InvalidArgument(f"assignment shape {x.shape} does not match channel {ch.shape}")
    return (x > 0.5).astype(float)


def interference(x, ch: ChannelRealization) -> np.ndarray:
    """Interference seen at each serving BS, shape (K, N, B).

    Entry ``[k, n, b]`` sums ``q[m, n, b]`` over users ``m != k`` that hold
    PRB ``n`` at some BS ``w != b``: power from co-channel users attached
    elsewhere, as received at ``b``.
    """
    x = _check(x, ch)
    q = ch.q_mw
    xs = x.sum(axis=2)                               # (K, N): BSs on which m holds n
    total = np.einsum("mn,mnb->nb", xs, q)           # all (m, w) pairs
    same_bs = np.einsum("mnb,mnb->nb", x, q)         # w == b
    own = xs[:, :, None] * q                          # m == k
    return total[None] - same_bs[None] - own + x * q  # add back m == k, w == b


def sinr_matrix(x, ch: ChannelRealization) -> np.ndarray:
    """Per-link SINR, zero where the link is not assigned."""
    xb = _check(x, ch)
    out = ch.q_mw / (interference(xb, ch) + ch.noise_mw_per_prb)
    return np.where(xb > 0, out, 0.0)


def user_sinr(x, ch: ChannelRealization) -> np.ndarray:
    """Per-user SINR: the sum over the user's links."""
    return sinr_matrix(x, ch).sum(axis=(1, 2))


def sinr_direct(x, ch: ChannelRealization, k: int, n: int, b: int) -> float:
    """SINR of user ``k`` on PRB ``n`` at BS ``b`` (zero-based indices)."""
    xb = _check(x, ch)
    if xb[k, n, b] != 1.0:
        raise InvalidArgument(f"link ({k}, {n}, {b}) is not assigned")
    q = ch.q_mw
    intf = 0.0
    for m in range(q.shape[0]):
        if m == k:
            continue
        for w in range(q.shape[2]):
            if w != b and xb[m, n, w]:
                intf += q[m, n, b]
    return float(q[k, n, b] / (intf + ch.noise_mw_per_prb))
