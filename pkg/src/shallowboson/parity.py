"""Parity coarse-graining of detection patterns to qubit bit strings.

The two parity maps send a pattern to the componentwise photon-count
parity, optionally flipped (variant j = 1).  Coarse-graining sums the
probability masses of all patterns sharing a bit string.  Closed-form
multiplicity counts give the number of full-sector patterns behind each
canonical bit string, and the coverage verifier checks by enumeration
that the union of parity images charts the whole 2^M qubit basis.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from math import comb

from .fock import Pattern
from .young import catalan_basis

Bits = tuple[int, ...]

_MASS_TOL = 1e-9


def parity_map(pattern, j: int = 0) -> Bits:
    """Componentwise parity of the photon counts, flipped when j = 1."""
    if j not in (0, 1):
        raise ValueError(f"parity variant must be 0 or 1, got {j}")
    return tuple((int(v) % 2) ^ j for v in pattern)


def coarse_grain(dist: dict[Pattern, float], j: int = 0) -> dict[Bits, float]:
    """Sum pattern probabilities onto their parity bit strings."""
    total = sum(dist.values())
    if abs(total - 1.0) > _MASS_TOL:
        raise ValueError(
            f"input masses sum to {total!r}, expected 1 within {_MASS_TOL}"
        )
    out: dict[Bits, float] = {}
    for pattern, mass in dist.items():
        bits = parity_map(pattern, j)
        out[bits] = out.get(bits, 0.0) + mass
    return out


def _check_range(num_modes: int, m: int) -> None:
    if not 0 <= m <= num_modes:
        raise ValueError(
            f"even-mode count m={m} outside [0, {num_modes}]"
        )


def upsilon0(num_modes: int, num_photons: int, m: int) -> int:
    """Patterns whose first m modes are even and last M-m odd.

    Counts the full-sector preimages of the canonical bit string
    (0,...,0,1,...,1) under the plain parity map; zero when the photon
    budget cannot fill M-m odd modes, a domain error when the photon
    total makes the binomial half-arguments non-integer.
    """
    _check_range(num_modes, m)
    if (num_photons - num_modes + m) % 2 != 0:
        raise ValueError(
            f"m={m} gives non-integer half-arguments for "
            f"(M={num_modes}, n={num_photons})"
        )
    lower = (num_photons - num_modes + m) // 2
    if lower < 0:
        return 0
    return comb((num_photons + num_modes + m) // 2 - 1, lower)


def upsilon0_prime(num_modes: int, num_photons: int, m: int) -> int:
    """Preimages of the bit string with m leading zeros under the flipped map.

    Equals upsilon0 with m -> M-m (the flipped map swaps the bit
    positions), including the error behaviour; for odd M the admissible
    m values of the two functions have opposite parity, which is the
    disjoint-ranges half of the coverage argument.
    """
    _check_range(num_modes, m)
    if (num_photons - m) % 2 != 0:
        raise ValueError(
            f"m={m} gives non-integer half-arguments for "
            f"(M={num_modes}, n={num_photons})"
        )
    lower = (num_photons - m) // 2
    if lower < 0:
        return 0
    return comb((num_photons + 2 * num_modes - m) // 2 - 1, lower)


def binom_identity_check(p: int, q: int, r: int) -> bool:
    """Vandermonde-style identity used by the multiplicity derivation."""
    if p < 0 or q < 0 or r < 0 or r > q:
        raise ValueError(f"need non-negative p, q, r with r <= q: {(p, q, r)}")
    lhs = sum(comb(p + s, s) * comb(q - s, r - s) for s in range(r + 1))
    return lhs == comb(p + q + 1, r)


@dataclass
class CoverageReport:
    """Which bit strings the parity images of a sliced mesh reach."""

    num_modes: int
    depth: int
    sectors: list[int]
    parities: list[int]
    covered: list[Bits]
    missing: list[Bits]
    multiplicities: dict[Bits, int]
    per_config: dict[tuple[int, int], dict[Bits, int]]

    @property
    def is_complete(self) -> bool:
        return not self.missing

    def to_json(self) -> str:
        doc = {
            "M": self.num_modes,
            "depth": self.depth,
            "sectors": self.sectors,
            "parities": self.parities,
            "covered": ["".join(map(str, b)) for b in self.covered],
            "missing": ["".join(map(str, b)) for b in self.missing],
            "multiplicities": {
                "".join(map(str, b)): c
                for b, c in sorted(self.multiplicities.items())
            },
            "per_config": {
                f"n={n},j={j}": {
                    "".join(map(str, b)): c for b, c in sorted(mult.items())
                }
                for (n, j), mult in sorted(self.per_config.items())
            },
            "is_complete": self.is_complete,
        }
        return json.dumps(doc, sort_keys=True)


def verify_surjectivity(num_modes: int, depth: int,
                        photon_numbers, parities) -> CoverageReport:
    """Enumerate parity images of the depth-i patterns and report coverage.

    Inputs are the one-photon-per-mode patterns (padded with one zero for
    n = M-1); the report lists covered and missing bit strings and the
    preimage multiplicity per bit string, so the non-uniform weighting of
    the qubit basis stays inspectable.
    """
    if num_modes < 2:
        raise ValueError(f"need at least 2 modes, got {num_modes}")
    sectors = sorted(set(int(n) for n in photon_numbers), reverse=True)
    variants = sorted(set(int(j) for j in parities))
    if not sectors or not variants:
        raise ValueError("photon_numbers and parities must be non-empty")
    if any(n not in (num_modes, num_modes - 1) for n in sectors):
        raise ValueError(
            f"photon numbers must lie in {{M-1, M}}, got {sectors}"
        )
    if any(j not in (0, 1) for j in variants):
        raise ValueError(f"parity variants must lie in {{0, 1}}: {variants}")

    per_config: dict[tuple[int, int], dict[Bits, int]] = {}
    total: Counter = Counter()
    for n in sectors:
        patterns = catalan_basis(num_modes, n, depth)
        for j in variants:
            counts = Counter(parity_map(p, j) for p in patterns)
            per_config[(n, j)] = dict(counts)
            total.update(counts)

    covered = sorted(total)
    all_bits = {
        tuple((code >> (num_modes - 1 - b)) & 1 for b in range(num_modes))
        for code in range(2 ** num_modes)
    }
    missing = sorted(all_bits - set(covered))
    return CoverageReport(
        num_modes=num_modes,
        depth=depth,
        sectors=sectors,
        parities=variants,
        covered=covered,
        missing=missing,
        multiplicities=dict(total),
        per_config=per_config,
    )
