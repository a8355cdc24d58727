"""Seeded sampling of detection patterns.

Two routes: inverse-CDF categorical draws over an explicit distribution
in canonical pattern order, and a sequential sampler for depth-1 meshes
that draws patterns gate by gate without ever building the output
distribution.  In the depth-1 cascade each gate freezes one output mode,
and conditioning on its measured count collapses the carried mode to a
definite Fock state, so a chain of two-mode blocks samples exactly.
"""

from __future__ import annotations

import numpy as np

from .fock import Pattern
from .interferometer import two_mode_block_column

_MASS_TOL = 1e-9


def as_seed_sequence(seed) -> np.random.SeedSequence:
    """Coerce an int, None, or SeedSequence into a SeedSequence."""
    if isinstance(seed, np.random.SeedSequence):
        return seed
    return np.random.SeedSequence(seed)


def sample_patterns(dist: dict[Pattern, float], n_samples: int,
                    stream_seed) -> list[Pattern]:
    """Draw n_samples i.i.d. patterns from an explicit distribution.

    Inverse-CDF over the canonical (reverse-lexicographic) pattern order;
    identical seeds give identical multisets.
    """
    if n_samples < 1:
        raise ValueError(f"need at least one sample, got {n_samples}")
    patterns = sorted(dist, reverse=True)
    probs = np.array([dist[p] for p in patterns], dtype=float)
    total = probs.sum()
    if abs(total - 1.0) > _MASS_TOL:
        raise ValueError(
            f"probabilities sum to {total!r}, expected 1 within {_MASS_TOL}"
        )
    cdf = np.cumsum(probs)
    cdf[-1] = max(cdf[-1], 1.0)
    rng = np.random.default_rng(stream_seed)
    draws = np.searchsorted(cdf, rng.random(n_samples), side="right")
    return [patterns[int(i)] for i in draws]


def chain_sample_depth1(input_pattern, thetas, n_samples: int, stream_seed,
                        psis=None) -> np.ndarray:
    """Sample depth-1 output patterns sequentially; shape (n_samples, M)."""
    thetas = np.atleast_2d(np.asarray(thetas, dtype=float))
    out = chain_sample_depth1_batch(input_pattern, thetas, n_samples,
                                    stream_seed, psis=psis)
    return out[0]


def chain_sample_depth1_batch(input_pattern, theta_rows, n_samples: int,
                              stream_seed, psis=None) -> np.ndarray:
    """Depth-1 chain sampling for a batch of angle vectors.

    theta_rows has shape (R, M-1), one gate angle per nearest-neighbour
    pair in firing order (pair (M-2, M-1) first).  Each row draws from an
    independent seeded stream, so results do not depend on batching.
    Returns uint16 patterns of shape (R, n_samples, M).
    """
    inp = tuple(int(v) for v in input_pattern)
    m = len(inp)
    theta_rows = np.asarray(theta_rows, dtype=float)
    if theta_rows.ndim != 2 or theta_rows.shape[1] != m - 1:
        raise ValueError(
            f"theta batch must have shape (R, {m - 1}), got {theta_rows.shape}"
        )
    rows = theta_rows.shape[0]
    if psis is None:
        psi_rows = np.zeros_like(theta_rows)
    else:
        psi_rows = np.asarray(psis, dtype=float)
        if psi_rows.shape != theta_rows.shape:
            raise ValueError("psi batch must match the theta batch shape")

    root = as_seed_sequence(stream_seed)
    uniforms = np.empty((rows, m - 1, n_samples))
    for r, child in enumerate(root.spawn(rows)):
        uniforms[r] = np.random.default_rng(child).random((m - 1, n_samples))

    out = np.zeros((rows, n_samples, m), dtype=np.uint16)
    carry = np.full((rows, n_samples), inp[m - 1], dtype=np.int64)
    for gate_idx, mode in enumerate(range(m - 2, -1, -1)):
        fresh = inp[mode]
        totals = carry + fresh
        pair = np.stack([theta_rows[:, gate_idx], psi_rows[:, gate_idx]],
                        axis=1)
        angle_codes, row_code = np.unique(pair, axis=0, return_inverse=True)
        # one block column per distinct (angles, photon total) pair
        span = int(totals.max()) + 1
        flat_key = (row_code[:, None] * span + totals).ravel()
        order = np.argsort(flat_key, kind="stable")
        sorted_keys = flat_key[order]
        uniq_keys, starts = np.unique(sorted_keys, return_index=True)
        stops = np.append(starts[1:], len(sorted_keys))
        u_flat = uniforms[:, gate_idx, :].ravel()
        new_flat = np.empty(rows * n_samples, dtype=np.int64)
        for key, s, e in zip(uniq_keys, starts, stops):
            code, t = divmod(int(key), span)
            col = two_mode_block_column(t, fresh, angle_codes[code, 0],
                                        angle_codes[code, 1])
            cdf = np.cumsum(np.abs(col) ** 2)
            cdf[-1] = max(cdf[-1], 1.0)
            members = order[s:e]
            new_flat[members] = np.searchsorted(
                cdf, u_flat[members], side="right")
        new_carry = new_flat.reshape(rows, n_samples)
        out[:, :, mode + 1] = (totals - new_carry).astype(np.uint16)
        carry = new_carry
    out[:, :, 0] = carry.astype(np.uint16)
    return out
