"""Sliced triangular meshes and exact Fock-state evolution.

The elementary gate couples two modes with a beam-splitter angle theta and
a phase psi.  Its action on the annihilation operators is fixed to

    [a_i, a_j] -> e^{-i psi/2} [[cos(t/2) e^{i psi}, sin(t/2) e^{i psi}],
                                [-sin(t/2),          cos(t/2)        ]] [a_i, a_j]

and everything downstream (Fock blocks, shift-rule gradients) relies on
this convention, including the global e^{-i psi/2} factor.

Within a fixed photon total m on the two coupled modes, the gate is an
(m+1) x (m+1) unitary block obtained by binomial expansion of the
transformed creation-operator monomials; photon number is conserved, so a
state never leaves its (M, n) sector.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from math import lgamma

import numpy as np

from .fock import SectorBasis, Pattern, enumerate_basis

_NORM_TOL = 1e-9


def two_mode_transfer(theta: float, psi: float) -> np.ndarray:
    """2x2 single-particle transfer matrix of one gate."""
    c, s = np.cos(theta / 2.0), np.sin(theta / 2.0)
    phase = np.exp(-1j * psi / 2.0)
    return phase * np.array(
        [[c * np.exp(1j * psi), s * np.exp(1j * psi)],
         [-s, c]],
        dtype=complex,
    )


def _binom_row(p: int) -> np.ndarray:
    row = np.ones(p + 1)
    for r in range(1, p + 1):
        row[r] = row[r - 1] * (p - r + 1) / r
    return row


def _monomial_coeffs(coeff_x: complex, coeff_1: complex, power: int
                     ) -> np.ndarray:
    """Coefficients of (coeff_x * x + coeff_1)^power by binomial expansion."""
    r = np.arange(power + 1)
    return _binom_row(power) * coeff_x**r * coeff_1**(power - r)


_block_constants: dict[int, tuple] = {}


def _block_setup(m: int):
    """Cached m-dependent tensors of the binomial block expansion."""
    hit = _block_constants.get(m)
    if hit is not None:
        return hit
    idx = np.arange(m + 1)
    # C(p, r) and C(m-p, s), zeroed outside their triangles
    left_binom = np.zeros((m + 1, m + 1))
    right_binom = np.zeros((m + 1, m + 1))
    for p in range(m + 1):
        left_binom[p, :p + 1] = _binom_row(p)
        right_binom[p, :m - p + 1] = _binom_row(m - p)
    left_deg = np.clip(idx[:, None] - idx[None, :], 0, None)   # p - r
    right_deg = np.clip(m - idx[:, None] - idx[None, :], 0, None)  # m-p-s
    shift = idx[None, None, :] - idx[None, :, None]            # u - r per (p,r,u)
    shift_valid = (shift >= 0) & (shift <= m)
    shift = np.clip(shift, 0, m)
    root_fact = np.exp(0.5 * np.array(
        [lgamma(u + 1) + lgamma(m - u + 1) for u in idx]))
    result = (idx, left_binom, right_binom, left_deg, right_deg,
              shift, shift_valid, root_fact)
    if len(_block_constants) > 512:
        _block_constants.clear()
    _block_constants[m] = result
    return result


def two_mode_block(m: int, theta: float, psi: float) -> np.ndarray:
    """Fock-space block of the gate for two-mode photon total m.

    Entry [u, p] is the amplitude <u, m-u| U |p, m-p>, from the binomial
    expansion of the two transformed creation-operator monomials.
    """
    (idx, left_binom, right_binom, left_deg, right_deg,
     shift, shift_valid, root_fact) = _block_setup(m)
    t_conj = two_mode_transfer(theta, psi).conj()
    a, b = t_conj[0, 0], t_conj[0, 1]
    c, d = t_conj[1, 0], t_conj[1, 1]
    pow_a = a ** idx
    pow_b = b ** idx
    pow_c = c ** idx
    pow_d = d ** idx
    left = left_binom * pow_a[None, :] * pow_b[left_deg]     # [p, r]
    right = right_binom * pow_c[None, :] * pow_d[right_deg]  # [p, s]
    # B[u, p] = sum_r left[p, r] * right[p, u - r]
    right_shifted = np.where(
        shift_valid, right[idx[:, None, None], shift], 0.0)  # [p, r, u]
    block = np.einsum("pr,pru->up", left, right_shifted)
    return block * (root_fact[:, None] / root_fact[None, :])


def two_mode_block_column(m: int, p: int, theta: float, psi: float
                          ) -> np.ndarray:
    """Column p of the photon-total-m block (input |p, m-p>)."""
    t_conj = two_mode_transfer(theta, psi).conj()
    left = _monomial_coeffs(t_conj[0, 0], t_conj[0, 1], p)
    right = _monomial_coeffs(t_conj[1, 0], t_conj[1, 1], m - p)
    root_fact = _block_setup(m)[7]
    return np.convolve(left, right) * root_fact / root_fact[p]


@dataclass(frozen=True)
class TwoModeGate:
    """Beam splitter plus phase between modes i < j."""

    i: int
    j: int
    theta: float = 0.0
    psi: float = 0.0

    def __post_init__(self):
        if not 0 <= self.i < self.j:
            raise ValueError(f"gate modes must satisfy 0 <= i < j, got {self}")


@dataclass
class CircuitSpec:
    """Gate list of the first `depth` diagonal slices of the mesh."""

    num_modes: int
    depth: int
    gates: list[TwoModeGate]
    input: Pattern

    def __post_init__(self):
        self.input = tuple(int(v) for v in self.input)
        if len(self.input) != self.num_modes:
            raise ValueError("input pattern length must equal the mode count")
        if any(v < 0 for v in self.input):
            raise ValueError("input pattern must be non-negative")
        for g in self.gates:
            if g.j >= self.num_modes:
                raise ValueError(f"gate {g} outside {self.num_modes} modes")

    @property
    def num_photons(self) -> int:
        return sum(self.input)

    def bound(self, thetas, psis=None) -> "CircuitSpec":
        """Copy of the circuit with angle values written into the gates."""
        thetas = list(map(float, thetas))
        if len(thetas) != len(self.gates):
            raise ValueError(
                f"{len(thetas)} thetas for {len(self.gates)} gates"
            )
        if psis is None:
            psis = [g.psi for g in self.gates]
        else:
            psis = list(map(float, psis))
            if len(psis) != len(self.gates):
                raise ValueError(
                    f"{len(psis)} psis for {len(self.gates)} gates"
                )
        gates = [TwoModeGate(g.i, g.j, t, p)
                 for g, t, p in zip(self.gates, thetas, psis)]
        return CircuitSpec(self.num_modes, self.depth, gates, self.input)

    def to_json(self) -> str:
        doc = {
            "M": self.num_modes,
            "depth": self.depth,
            "input": list(self.input),
            "gates": [
                {"i": g.i, "j": g.j, "theta": g.theta, "psi": g.psi}
                for g in self.gates
            ],
        }
        return json.dumps(doc, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "CircuitSpec":
        doc = json.loads(text)
        gates = [
            TwoModeGate(int(g["i"]), int(g["j"]),
                        float(g["theta"]), float(g["psi"]))
            for g in doc["gates"]
        ]
        return cls(int(doc["M"]), int(doc["depth"]), gates,
                   tuple(doc["input"]))


def reck_input(num_modes: int, num_photons: int) -> Pattern:
    """One photon per mode, padded with one trailing empty mode for n = M-1."""
    if num_photons == num_modes:
        return (1,) * num_modes
    if num_photons == num_modes - 1:
        return (1,) * (num_modes - 1) + (0,)
    raise ValueError(
        f"supported photon numbers are M and M-1, got n={num_photons}"
    )


def build_reck_slices(num_modes: int, depth: int,
                      input_pattern: Pattern | None = None) -> CircuitSpec:
    """Gate layout of the first `depth` diagonal slices of the triangle.

    Slice s couples the mode pairs (j, j+1) for j = M-2 down to s-1, so
    slice 1 is the full nearest-neighbour cascade (M-1 gates), each deeper
    slice adds one gate fewer, and depth M-1 realizes the complete mesh
    with M(M-1)/2 gates.  Angles are placeholders bound later.
    """
    if num_modes < 2:
        raise ValueError(f"mesh needs at least 2 modes, got {num_modes}")
    if not 1 <= depth <= num_modes - 1:
        raise ValueError(
            f"depth must be in [1, {num_modes - 1}], got {depth}"
        )
    gates = [
        TwoModeGate(j, j + 1)
        for s in range(1, depth + 1)
        for j in range(num_modes - 2, s - 2, -1)
    ]
    if input_pattern is None:
        input_pattern = reck_input(num_modes, num_modes)
    spec = CircuitSpec(num_modes, depth, gates, tuple(input_pattern))
    n = spec.num_photons
    if n not in (num_modes, num_modes - 1) or any(v > 1 for v in spec.input):
        raise ValueError(
            "mesh input must hold at most one photon per mode with "
            f"n in {{M, M-1}}, got {spec.input}"
        )
    return spec


class QuantumState:
    """Normalized state of an (M, n) sector, dense over the sector basis."""

    def __init__(self, basis: SectorBasis, vector: np.ndarray):
        if vector.shape != (basis.size,):
            raise ValueError("state vector does not match the basis size")
        self.basis = basis
        self.vector = vector

    @property
    def sector(self) -> tuple[int, int]:
        return (self.basis.num_modes, self.basis.num_photons)

    @classmethod
    def from_pattern(cls, basis: SectorBasis, pattern) -> "QuantumState":
        vec = np.zeros(basis.size, dtype=complex)
        vec[basis.index(pattern)] = 1.0
        return cls(basis, vec)

    def norm(self) -> float:
        return float(np.linalg.norm(self.vector))

    def amplitudes(self, tol: float = 0.0) -> dict[Pattern, complex]:
        """Sparse view: pattern -> amplitude for |amplitude| > tol."""
        out = {}
        for idx in np.nonzero(np.abs(self.vector) > tol)[0]:
            out[self.basis.pattern(int(idx))] = complex(self.vector[idx])
        return out

    def probabilities(self) -> np.ndarray:
        return np.abs(self.vector) ** 2


# cache of gate-application index structures, keyed per sector and pair
_orbit_cache: dict[tuple, tuple] = {}


def _gate_orbits(basis: SectorBasis, i: int, j: int):
    key = (basis.num_modes, basis.num_photons, i, j)
    hit = _orbit_cache.get(key)
    if hit is not None:
        return hit
    pats = basis.patterns.astype(np.int64)
    m = pats[:, i] + pats[:, j]
    u = pats[:, i]
    reps = pats.copy()
    reps[:, i] = 0
    reps[:, j] = m
    rep_rank = basis.rank(reps)
    order = np.lexsort((u, rep_rank, m))
    m_sorted = m[order]
    m_values = np.unique(m_sorted)
    bounds = np.searchsorted(m_sorted, m_values), np.searchsorted(
        m_sorted, m_values, side="right")
    result = (order, m_values, bounds[0], bounds[1])
    if len(_orbit_cache) > 256:
        _orbit_cache.clear()
    _orbit_cache[key] = result
    return result


def apply_gate(state: QuantumState, gate: TwoModeGate) -> QuantumState:
    """Evolve a state through one gate, grouping by two-mode photon total."""
    if gate.j >= state.basis.num_modes:
        raise ValueError(f"gate {gate} outside {state.basis.num_modes} modes")
    if abs(state.norm() - 1.0) > _NORM_TOL:
        raise RuntimeError(
            f"input state norm {state.norm():.3e} deviates beyond {_NORM_TOL}"
        )
    order, m_values, starts, stops = _gate_orbits(state.basis, gate.i, gate.j)
    new_vec = np.empty_like(state.vector)
    for m, s, e in zip(m_values, starts, stops):
        seg = order[s:e]
        block = two_mode_block(int(m), gate.theta, gate.psi)
        amps = state.vector[seg].reshape(-1, int(m) + 1)
        new_vec[seg] = (amps @ block.T).ravel()
    return QuantumState(state.basis, new_vec)


def evolve(circuit: CircuitSpec, thetas, psis=None) -> QuantumState:
    """Apply the circuit's gates in order to its input basis state."""
    bound = circuit.bound(thetas, psis)
    if bound.depth == 1 and any(g.psi for g in bound.gates):
        # accepted, but a single slice commutes its phases past the
        # detectors: the output distribution does not depend on them
        warnings.warn(
            "phase angles on a depth-1 mesh do not affect the output "
            "distribution", stacklevel=2)
    basis = enumerate_basis(circuit.num_modes, circuit.num_photons)
    state = QuantumState.from_pattern(basis, circuit.input)
    for gate in bound.gates:
        state = apply_gate(state, gate)
    return state


def exact_distribution(state: QuantumState, tol: float = 0.0
                       ) -> dict[Pattern, float]:
    """Born-rule probabilities per detection pattern."""
    if abs(state.norm() - 1.0) > _NORM_TOL:
        raise RuntimeError(
            f"state norm {state.norm():.3e} deviates beyond {_NORM_TOL}"
        )
    probs = state.probabilities()
    out = {}
    for idx in np.nonzero(probs > tol)[0]:
        out[state.basis.pattern(int(idx))] = float(probs[idx])
    return out


def support(state: QuantumState, tol: float = 0.0) -> set[Pattern]:
    """Patterns carrying probability above `tol`.

    Unreachable patterns keep exactly zero amplitude under the blockwise
    evolution (their orbits never receive mass), so strict positivity is
    the right default; raise `tol` to trim near-zero entries instead.
    """
    probs = state.probabilities()
    return {state.basis.pattern(int(i)) for i in np.nonzero(probs > tol)[0]}


def single_particle_transfer(circuit: CircuitSpec, thetas, psis=None
                             ) -> np.ndarray:
    """M x M matrix V with U a_k U^dag = sum_l V_kl a_l."""
    bound = circuit.bound(thetas, psis)
    m = circuit.num_modes
    v = np.eye(m, dtype=complex)
    for gate in bound.gates:
        t = two_mode_transfer(gate.theta, gate.psi)
        step = np.eye(m, dtype=complex)
        step[np.ix_([gate.i, gate.j], [gate.i, gate.j])] = t
        v = v @ step
    return v


def schwinger_expectation(circuit: CircuitSpec, thetas, coeffs: np.ndarray,
                          psis=None) -> float:
    """Expectation of the bilinear observable sum_ij o_ij a_i^dag a_j.

    Computed from the single-particle transfer matrix alone; the Fock
    space is never expanded.  A Hermitian coefficient matrix guarantees a
    real value.
    """
    coeffs = np.asarray(coeffs, dtype=complex)
    m = circuit.num_modes
    if coeffs.shape != (m, m):
        raise ValueError(f"coefficient matrix must be {m}x{m}")
    if np.max(np.abs(coeffs - coeffs.conj().T)) > _NORM_TOL:
        raise ValueError("coefficient matrix must be Hermitian")
    v = single_particle_transfer(circuit, thetas, psis)
    w = v.conj().T  # U^dag a U = W a
    value = 0.0
    for k, occ in enumerate(circuit.input):
        if occ:
            col = w[:, k]
            value += occ * np.real(col.conj() @ coeffs @ col)
    return float(value)
