"""Enumeration and indexing of the bosonic Fock basis of an (M, n) sector.

A detection pattern is an M-tuple of non-negative photon counts summing to
the sector photon number n (a weak M-composition of n).  The canonical
ordering is reverse-lexicographic on the count tuples, so (n, 0, ..., 0)
always has index 0 and the ordering is stable across runs and platforms.
"""

from __future__ import annotations

from math import comb

import numpy as np

Pattern = tuple[int, ...]

# Sector sizes are validated against 64-bit indexing before enumeration.
_MAX_SECTOR = 2**63 - 1
# Practical cap: dense enumeration above this is refused outright.
_ENUMERATION_CAP = 50_000_000


def sector_size(num_modes: int, num_photons: int) -> int:
    """Number of weak M-compositions of n, i.e. binom(n + M - 1, n)."""
    if num_modes < 1:
        raise ValueError(f"mode count must be >= 1, got {num_modes}")
    if num_photons < 0:
        raise ValueError(f"photon number must be >= 0, got {num_photons}")
    return comb(num_photons + num_modes - 1, num_photons)


class SectorBasis:
    """All detection patterns of an (M, n) sector in canonical order.

    Patterns are stored as one uint16 row per basis state.  Lookup in both
    directions (pattern -> index, index -> pattern) is exact and
    round-trips over the whole sector.
    """

    def __init__(self, num_modes: int, num_photons: int):
        size = sector_size(num_modes, num_photons)
        if size > _MAX_SECTOR:
            raise ValueError(
                f"sector ({num_modes}, {num_photons}) exceeds 64-bit indexing"
            )
        if size > _ENUMERATION_CAP:
            raise ValueError(
                f"sector ({num_modes}, {num_photons}) has {size} patterns, "
                f"refusing to enumerate more than {_ENUMERATION_CAP}"
            )
        self.num_modes = num_modes
        self.num_photons = num_photons
        self.size = size
        self.patterns = _enumerate_patterns(num_modes, num_photons)
        # binom table used by the vectorized ranking formula
        self._binom = _binom_table(num_photons + num_modes, num_modes)
        self._index_cache: dict[Pattern, int] | None = None

    def __len__(self) -> int:
        return self.size

    def __iter__(self):
        for row in self.patterns:
            yield tuple(int(v) for v in row)

    def pattern(self, index: int) -> Pattern:
        if not 0 <= index < self.size:
            raise ValueError(
                f"index {index} outside sector of size {self.size}"
            )
        return tuple(int(v) for v in self.patterns[index])

    def index(self, pattern) -> int:
        p = tuple(int(v) for v in pattern)
        if len(p) != self.num_modes or any(v < 0 for v in p):
            raise ValueError(f"pattern {p} does not belong to the sector")
        if sum(p) != self.num_photons:
            raise ValueError(
                f"pattern {p} has {sum(p)} photons, sector holds "
                f"{self.num_photons}"
            )
        if self._index_cache is None:
            self._index_cache = {}
        cached = self._index_cache.get(p)
        if cached is None:
            cached = int(self.rank(np.asarray([p]))[0])
            self._index_cache[p] = cached
        return cached

    def rank(self, patterns: np.ndarray) -> np.ndarray:
        """Vectorized canonical index of each row of `patterns`."""
        pats = np.asarray(patterns, dtype=np.int64)
        if pats.ndim == 1:
            pats = pats[None, :]
        m = self.num_modes
        remaining = self.num_photons - np.concatenate(
            [np.zeros((pats.shape[0], 1), dtype=np.int64),
             np.cumsum(pats[:, :-1], axis=1)],
            axis=1,
        )
        ranks = np.zeros(pats.shape[0], dtype=np.int64)
        for d in range(m - 1):
            k = m - 1 - d  # modes to the right of position d
            top = remaining[:, d] - pats[:, d] - 1 + k
            valid = top >= k  # remaining - p - 1 >= 0
            ranks += np.where(valid, self._binom[np.clip(top, 0, None), k], 0)
        return ranks


def _binom_table(max_n: int, max_k: int) -> np.ndarray:
    table = np.zeros((max_n + 1, max_k + 1), dtype=np.int64)
    table[:, 0] = 1
    for i in range(1, max_n + 1):
        for j in range(1, min(i, max_k) + 1):
            table[i, j] = table[i - 1, j - 1] + table[i - 1, j]
    return table


def _enumerate_patterns(num_modes: int, num_photons: int) -> np.ndarray:
    """All weak compositions in reverse-lexicographic order."""
    size = sector_size(num_modes, num_photons)
    out = np.zeros((size, num_modes), dtype=np.uint16)
    if num_modes == 1:
        out[0, 0] = num_photons
        return out
    row = 0
    for first in range(num_photons, -1, -1):
        tail = _enumerate_patterns(num_modes - 1, num_photons - first)
        out[row:row + len(tail), 0] = first
        out[row:row + len(tail), 1:] = tail
        row += len(tail)
    return out


_basis_cache: dict[tuple[int, int], SectorBasis] = {}


def enumerate_basis(num_modes: int, num_photons: int) -> SectorBasis:
    """Build the canonical basis of the (M, n) sector (cached, immutable)."""
    key = (num_modes, num_photons)
    basis = _basis_cache.get(key)
    if basis is None:
        basis = SectorBasis(num_modes, num_photons)
        if len(_basis_cache) > 64:
            _basis_cache.clear()
        _basis_cache[key] = basis
    return basis


def pattern_to_index(basis: SectorBasis, pattern) -> int:
    """Canonical position of a detection pattern inside its sector."""
    return basis.index(pattern)


def index_to_pattern(basis: SectorBasis, index: int) -> Pattern:
    """Inverse of :func:`pattern_to_index`."""
    return basis.pattern(index)
