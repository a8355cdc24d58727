"""Ferrers diagrams, Young lattices, box bit strings, Boolean sublattices.

Diagrams are written column-wise as non-decreasing integer tuples (the
reflected French convention); a Young lattice over a bound mu holds every
diagram contained in mu, ordered by inclusion, with componentwise min/max
as meet/join.  The reachable detection patterns of a sliced mesh are the
first differences of staircase paths inside a polygon, which makes them
the vertices of one of these lattices.  The mode axis of the circuit runs
opposite to the detector axis of the polygon, so pattern labels obtained
from diagrams are index-reversed relative to circuit patterns.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from .dyck import catalan_dyck_spec

Diagram = tuple[int, ...]


def _validate_diagram(columns) -> Diagram:
    cols = tuple(int(v) for v in columns)
    if any(v < 0 for v in cols):
        raise ValueError(f"diagram columns must be non-negative: {cols}")
    if any(a > b for a, b in zip(cols, cols[1:])):
        raise ValueError(f"diagram columns must be non-decreasing: {cols}")
    return cols


def ferrers_to_pattern(diagram) -> tuple[int, ...]:
    """First differences of an extended diagram prefixed with 0."""
    cols = _validate_diagram(diagram)
    if not cols or cols[0] != 0:
        raise ValueError(f"extended diagram must start with 0: {cols}")
    return tuple(b - a for a, b in zip(cols, cols[1:]))


def pattern_to_ferrers(pattern) -> Diagram:
    """Cumulative sums prefixed with 0; inverse of ferrers_to_pattern."""
    total = 0
    cols = [0]
    for v in pattern:
        if v < 0:
            raise ValueError(f"pattern entries must be non-negative: {pattern}")
        total += v
        cols.append(total)
    return tuple(cols)


@dataclass
class YoungLattice:
    """All diagrams contained in mu, with single-box cover edges."""

    mu: Diagram
    vertices: list[Diagram]
    cover_edges: list[tuple[Diagram, Diagram]]
    _vertex_set: set[Diagram] = field(repr=False, default_factory=set)

    def __post_init__(self):
        if not self._vertex_set:
            self._vertex_set = set(self.vertices)

    def __len__(self) -> int:
        return len(self.vertices)

    def __contains__(self, diagram) -> bool:
        return tuple(diagram) in self._vertex_set

    def meet(self, a: Diagram, b: Diagram) -> Diagram:
        return tuple(min(x, y) for x, y in zip(a, b))

    def join(self, a: Diagram, b: Diagram) -> Diagram:
        return tuple(max(x, y) for x, y in zip(a, b))

    def top(self) -> Diagram:
        return max(self.vertices, key=lambda v: (sum(v), v))

    def bottom(self) -> Diagram:
        return min(self.vertices, key=lambda v: (sum(v), v))


def young_lattice(mu) -> YoungLattice:
    """Lattice of all diagrams bounded columnwise by mu."""
    bound = _validate_diagram(mu)
    k = len(bound)
    vertices: list[Diagram] = []

    def fill(prefix: list[int], col: int, low: int):
        if col == k:
            vertices.append(tuple(prefix))
            return
        for v in range(low, bound[col] + 1):
            prefix.append(v)
            fill(prefix, col + 1, v)
            prefix.pop()

    fill([], 0, 0)
    vertices.sort(key=lambda v: (sum(v), v))
    vset = set(vertices)
    edges = []
    for v in vertices:
        for c in range(k):
            grown = v[:c] + (v[c] + 1,) + v[c + 1:]
            if grown in vset:
                edges.append((v, grown))
    return YoungLattice(bound, vertices, edges, vset)


def catalan_mu(num_modes: int, num_photons: int, depth: int) -> Diagram:
    """Column bound of the staircase polygon of the first `depth` slices."""
    m, n = num_modes, num_photons
    catalan_dyck_spec(m, n, depth)  # validates the (M, n, depth) combination
    return tuple(
        min(n, d + depth + (n - m)) for d in range(1, m)
    )


def catalan_basis(num_modes: int, num_photons: int, depth: int
                  ) -> list[tuple[int, ...]]:
    """Detection patterns reachable by the first `depth` mesh slices.

    Input is one photon per mode, padded with a trailing empty mode for
    n = M-1.  A pattern is reachable iff each prefix sum over modes
    0..d obeys sum >= (d+1) - depth; patterns are returned in canonical
    (reverse-lexicographic) sector order.  The cardinality equals the
    closed-form staircase-path count of catalan_dyck_spec(M, n, depth).
    """
    m, n = num_modes, num_photons
    catalan_dyck_spec(m, n, depth)  # validates
    out: list[tuple[int, ...]] = []

    def fill(prefix: list[int], used: int):
        d = len(prefix)
        if d == m - 1:
            out.append(tuple(prefix) + (n - used,))
            return
        low = max(0, (d + 1) - depth - used)
        for v in range(n - used, low - 1, -1):
            prefix.append(v)
            fill(prefix, used + v)
            prefix.pop()

    fill([], 0)
    return out


def catalan_lattice(num_modes: int, num_photons: int, depth: int
                    ) -> YoungLattice:
    """Young lattice whose diagrams enumerate the depth-i patterns."""
    return young_lattice(catalan_mu(num_modes, num_photons, depth))


def vertex_to_pattern(vertex: Diagram, num_photons: int) -> tuple[int, ...]:
    """Circuit detection pattern labelling a polygon-lattice vertex.

    The vertex is extended with a leading 0 and the photon-count ceiling,
    differenced, and index-reversed (detectors are counted from the far
    end of the mode axis).
    """
    if vertex and vertex[-1] > num_photons:
        raise ValueError(
            f"vertex {vertex} exceeds the photon ceiling {num_photons}"
        )
    diffs = ferrers_to_pattern((0,) + tuple(vertex) + (num_photons,))
    return diffs[::-1]


def box_bitstring_apply(top, box_bits) -> Diagram:
    """Remove the boxes flagged by a box bit string from a top diagram.

    The bit string carries the boundary zeros (0, s_1, ..., s_{k-1}, 0);
    the result must remain a valid diagram.
    """
    top = _validate_diagram(top)
    bits = tuple(int(b) for b in box_bits)
    if len(bits) != len(top):
        raise ValueError("box bit string length must match the diagram")
    if bits[0] != 0 or bits[-1] != 0:
        raise ValueError("box bit string must start and end with 0")
    if any(b not in (0, 1) for b in bits):
        raise ValueError("box bit string entries must be 0 or 1")
    lowered = tuple(t - b for t, b in zip(top, bits))
    if any(v < 0 for v in lowered) or any(
            a > b for a, b in zip(lowered, lowered[1:])):
        raise ValueError(
            f"removing {bits} from {top} leaves an invalid diagram {lowered}"
        )
    return lowered


def parity_distinctness_check(num_modes: int) -> bool:
    """All box bit strings keep distinct images under the parity map.

    The 2^(M-1) box bit strings of the top staircase diagram produce
    bit-difference sequences whose parity images must all differ; this is
    the constructive core of depth-1 surjectivity.
    """
    m = num_modes
    if m < 2:
        raise ValueError(f"need at least 2 modes, got {m}")
    base = (1,) * (m - 1) + (0,)  # first differences of the top diagram
    images = set()
    for free in product((0, 1), repeat=m - 1):
        s = (0,) + free + (0,)
        pattern = tuple(
            base[i] + (s[i] - s[i + 1]) for i in range(m)
        )
        images.add(tuple(v % 2 for v in pattern))
    return len(images) == 2 ** (m - 1)


def count_boolean_sublattices(lattice: YoungLattice, k: int,
                              unit_boxes: bool = False) -> int:
    """Number of Boolean B_k sublattices of the lattice.

    A B_k sublattice is a bottom vertex plus k disjoint box sets (column
    intervals with pairwise disjoint column support) such that all 2^k
    subset removals from the top land on vertices; the 2^k elements are
    closed under meet and join and each sublattice is counted once.  With
    unit_boxes=True the box sets are restricted to single boxes, which is
    the plain remove-k-boxes counting.
    """
    if k < 1:
        raise ValueError(f"Boolean order must be >= 1, got {k}")
    vset = lattice._vertex_set
    width = len(lattice.mu)
    total = 0
    for bottom in lattice.vertices:
        # candidate pieces: differences to strictly larger vertices
        pieces = []
        for v in lattice.vertices:
            if v == bottom:
                continue
            delta = tuple(a - b for a, b in zip(v, bottom))
            if any(d < 0 for d in delta):
                continue
            if unit_boxes and sum(delta) != 1:
                continue
            supp = frozenset(c for c in range(width) if delta[c])
            pieces.append((delta, supp))
        pieces.sort()

        def extend(start: int, chosen_sums: list[Diagram],
                   used_support: frozenset, left: int) -> int:
            if left == 0:
                return 1
            count = 0
            for idx in range(start, len(pieces)):
                delta, supp = pieces[idx]
                if supp & used_support:
                    continue
                sums = [
                    tuple(a + d for a, d in zip(s, delta))
                    for s in chosen_sums
                ]
                if all(s in vset for s in sums):
                    count += extend(idx + 1, chosen_sums + sums,
                                    used_support | supp, left - 1)
            return count

        total += extend(0, [bottom], frozenset(), k)
    return total


@dataclass
class OrdinalSumDecomposition:
    """Chain of Boolean factors peeled from the top of a lattice."""

    factors: list[int]          # Boolean orders, top factor first
    residual: bool              # True if peeling got stuck above the bottom
    residual_vertex: Diagram | None = None

    @property
    def multiplicities(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for f in self.factors:
            out[f] = out.get(f, 0) + 1
        return out


def ordinal_sum_decomposition(lattice: YoungLattice) -> OrdinalSumDecomposition:
    """Peel maximal Boolean factors off the top, glued at shared vertices.

    Each step removes the full layer of individually removable boxes of
    the current top; the factor is Boolean iff every subset removal is a
    vertex.  A single-vertex lattice decomposes into nothing; a failed
    subset check stops with a residual flag and the partial factor list.
    """
    vset = lattice._vertex_set
    bottom = lattice.bottom()
    current = lattice.top()
    width = len(lattice.mu)
    factors: list[int] = []
    while current != bottom:
        removable = [
            c for c in range(width)
            if current[:c] + (current[c] - 1,) + current[c + 1:] in vset
        ]
        if not removable:
            return OrdinalSumDecomposition(factors, True, current)
        for subset in product((0, 1), repeat=len(removable)):
            probe = list(current)
            for flag, c in zip(subset, removable):
                probe[c] -= flag
            if tuple(probe) not in vset:
                return OrdinalSumDecomposition(factors, True, current)
        factors.append(len(removable))
        lowered = list(current)
        for c in removable:
            lowered[c] -= 1
        current = tuple(lowered)
    return OrdinalSumDecomposition(factors, False)


def export_lattice_text(lattice: YoungLattice, num_photons: int | None = None
                        ) -> str:
    """Graph description: one labelled vertex per line plus cover edges.

    Each vertex carries the three labels (diagram, detection pattern,
    parity bit string of the pattern).
    """
    ceiling = num_photons if num_photons is not None else (
        lattice.mu[-1] if lattice.mu else 0)
    index = {v: t for t, v in enumerate(lattice.vertices)}
    lines = []
    for t, v in enumerate(lattice.vertices):
        pattern = vertex_to_pattern(v, ceiling)
        bits = tuple(x % 2 for x in pattern)
        lines.append(
            f"vertex {t} diagram={','.join(map(str, v))} "
            f"pattern={','.join(map(str, pattern))} "
            f"bits={''.join(map(str, bits))}"
        )
    for a, b in lattice.cover_edges:
        lines.append(f"edge {index[a]} {index[b]}")
    return "\n".join(lines) + "\n"


def export_lattice_json(lattice: YoungLattice, num_photons: int | None = None
                        ) -> dict:
    ceiling = num_photons if num_photons is not None else (
        lattice.mu[-1] if lattice.mu else 0)
    index = {v: t for t, v in enumerate(lattice.vertices)}
    return {
        "mu": list(lattice.mu),
        "vertices": [
            {
                "diagram": list(v),
                "pattern": list(vertex_to_pattern(v, ceiling)),
                "bits": "".join(
                    str(x % 2) for x in vertex_to_pattern(v, ceiling)),
            }
            for v in lattice.vertices
        ],
        "edges": [[index[a], index[b]] for a, b in lattice.cover_edges],
    }
