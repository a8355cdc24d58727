"""Problem encodings: QUBO, Ising, twisted-ladder Ising, portfolios.

Every problem exposes `num_bits` and a vectorized `energies` over bit
rows, which is all the variational solver needs.  Exhaustive brute-force
minimization is the universal verification oracle at desk scale.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, replace
from importlib import resources

import numpy as np

from .solver import SolverConfig, SolverResult, run_variational

_BRUTE_FORCE_LIMIT = 26
_CHUNK = 1 << 18


def _bit_rows(codes: np.ndarray, width: int) -> np.ndarray:
    shifts = np.arange(width - 1, -1, -1, dtype=np.int64)
    return ((codes[:, None] >> shifts) & 1).astype(np.int64)


class QuboProblem:
    """Quadratic binary program min x^T Q x; Q symmetrized on input."""

    def __init__(self, q: np.ndarray):
        q = np.asarray(q, dtype=float)
        if q.ndim != 2 or q.shape[0] != q.shape[1]:
            raise ValueError(f"Q must be square, got shape {q.shape}")
        if np.max(np.abs(q - q.T)) > 1e-12:
            q = (q + q.T) / 2.0
        self.q = q
        self.num_bits = q.shape[0]

    def energies(self, bits: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(np.asarray(bits, dtype=float))
        return np.einsum("bi,ij,bj->b", x, self.q, x)


def qubo_energy(q: np.ndarray, x) -> float:
    """x^T Q x for a single bit string."""
    q = np.asarray(q, dtype=float)
    x = np.asarray(x, dtype=float)
    if x.shape != (q.shape[0],):
        raise ValueError(
            f"bit string of length {x.shape} does not match {q.shape[0]}"
        )
    return float(x @ q @ x)


class IsingProblem:
    """H = sum_{i<j} J_ij s_i s_j + sum_k h_k s_k + const over s = +-1."""

    def __init__(self, couplings: dict[tuple[int, int], float],
                 fields: np.ndarray, constant: float = 0.0):
        self.fields = np.asarray(fields, dtype=float)
        self.num_bits = self.fields.shape[0]
        for (i, j) in couplings:
            if not 0 <= i < j < self.num_bits:
                raise ValueError(f"coupling ({i}, {j}) out of range")
        self.couplings = dict(couplings)
        self.constant = float(constant)
        self._j = np.zeros((self.num_bits, self.num_bits))
        for (i, j), val in self.couplings.items():
            self._j[i, j] = val

    def spin_energy(self, spins) -> float:
        s = np.asarray(spins, dtype=float)
        if s.shape != (self.num_bits,) or not np.all(np.abs(s) == 1):
            raise ValueError(f"spins must be a +-1 vector of length "
                             f"{self.num_bits}")
        return float(s @ self._j @ s + self.fields @ s + self.constant)

    def energies(self, bits: np.ndarray) -> np.ndarray:
        s = 2.0 * np.atleast_2d(np.asarray(bits, dtype=float)) - 1.0
        return (np.einsum("bi,ij,bj->b", s, self._j, s)
                + s @ self.fields + self.constant)


def qubo_to_ising(q: np.ndarray) -> IsingProblem:
    """Equivalent Ising model under s = 2x - 1; energies match everywhere."""
    q = QuboProblem(q).q
    n = q.shape[0]
    couplings = {}
    fields = np.zeros(n)
    constant = 0.0
    for i in range(n):
        fields[i] += q[i, i] / 2.0
        constant += q[i, i] / 2.0
        for j in range(i + 1, n):
            couplings[(i, j)] = q[i, j] / 2.0
            fields[i] += q[i, j] / 2.0
            fields[j] += q[i, j] / 2.0
            constant += q[i, j] / 2.0
    return IsingProblem(couplings, fields, constant)


class MobiusProblem:
    """Twisted-ladder Ising ring: n spins, ring coupling J_a, rungs J_b."""

    def __init__(self, n: int, j_a: float, j_b: float):
        if n < 4 or n % 2 != 0:
            raise ValueError(f"spin count must be even and >= 4, got {n}")
        self.n = n
        self.j_a = float(j_a)
        self.j_b = float(j_b)
        self.num_bits = n

    def spin_energy(self, spins) -> float:
        s = np.asarray(spins, dtype=float)
        if s.shape != (self.n,) or not np.all(np.abs(s) == 1):
            raise ValueError(f"spins must be a +-1 vector of length {self.n}")
        return float(self.energies(((s + 1) / 2)[None, :])[0])

    def energies(self, bits: np.ndarray) -> np.ndarray:
        s = 2.0 * np.atleast_2d(np.asarray(bits, dtype=float)) - 1.0
        ring = np.sum(s * np.roll(s, -1, axis=1), axis=1)
        half = self.n // 2
        rungs = np.sum(s[:, :half] * s[:, half:], axis=1)
        return -self.j_a * ring - self.j_b * rungs


def mobius_energy(problem: MobiusProblem, spins) -> float:
    return problem.spin_energy(spins)


def mobius_min(problem: MobiusProblem) -> float:
    """Closed-form ground energy, valid for positive ring coupling."""
    if problem.j_a <= 0:
        raise ValueError(
            f"closed form requires J_a > 0, got {problem.j_a}"
        )
    n, j_a, j_b = problem.n, problem.j_a, problem.j_b
    return min(-n * j_a - n * j_b / 2.0, (4 - n) * j_a + n * j_b / 2.0)


def brute_force_min(problem, k_lowest: int = 3):
    """Exhaustive minimum over all bit strings, plus the K lowest energies.

    Returns (energy, argmin bits, [(energy, bits), ...] sorted ascending).
    Spin problems are scanned through s = 2x - 1.
    """
    width = problem.num_bits
    if width > _BRUTE_FORCE_LIMIT:
        raise ValueError(
            f"{width} bits exceeds the exhaustive-search bound of "
            f"{_BRUTE_FORCE_LIMIT}"
        )
    best: list[tuple[float, tuple[int, ...]]] = []
    total = 1 << width
    for start in range(0, total, _CHUNK):
        codes = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        bits = _bit_rows(codes, width)
        energies = problem.energies(bits)
        take = min(k_lowest, len(energies))
        idx = np.argpartition(energies, take - 1)[:take]
        for t in idx:
            best.append((float(energies[t]),
                         tuple(int(b) for b in bits[t])))
        best.sort()
        best = best[:k_lowest]
    e_min, argmin = best[0]
    return e_min, argmin, best


def _load_matrix(name: str) -> np.ndarray:
    path = resources.files("shallowboson._data").joinpath(name)
    with path.open("r") as fh:
        return np.loadtxt(fh, delimiter=",")


def benchmark_qubo6() -> np.ndarray:
    """The published 6x6 benchmark matrix, bit-exact decimals."""
    return _load_matrix("qubo_6.csv")


def benchmark_qubo11() -> np.ndarray:
    """The published 11x11 benchmark matrix, bit-exact decimals."""
    return _load_matrix("qubo_11.csv")


def portfolio_returns_from_prices(prices: np.ndarray
                                  ) -> tuple[np.ndarray, np.ndarray]:
    """Annualized mean log-returns and covariance from daily prices.

    prices has one row per day and one column per asset.  Missing values
    are a hard error (silent imputation would corrupt the covariance);
    annualization multiplies by 250 trading days, and the covariance uses
    the unbiased (rows - 1) denominator.
    """
    prices = np.asarray(prices, dtype=float)
    if prices.ndim == 1:
        prices = prices[:, None]
    if prices.shape[0] < 2:
        raise ValueError("need at least 2 price rows per asset")
    if not np.all(np.isfinite(prices)):
        raise ValueError("price series contains missing values")
    if np.any(prices <= 0):
        bad = np.argwhere(prices <= 0)[0]
        raise ValueError(
            f"non-positive price at row {bad[0]}, asset {bad[1]}"
        )
    rets = np.diff(np.log(prices), axis=0)
    mu = rets.mean(axis=0) * 250.0
    if rets.shape[0] < 2:
        sigma = np.zeros((prices.shape[1], prices.shape[1]))
    else:
        sigma = np.atleast_2d(np.cov(rets, rowvar=False, ddof=1)) * 250.0
    return mu, sigma


def binary_encode_weights(x, n_bits_per_asset: int, n_assets: int
                          ) -> np.ndarray:
    """Decode grouped bits into per-asset weights in [0, 1].

    Asset i owns bits [i*N_q, (i+1)*N_q); the group is read as an integer
    (least significant bit first) and normalized by 2^N_q - 1, so a fully
    set group invests weight 1 and N_q = 1 reduces to invest/skip bits.
    """
    x = np.asarray(x, dtype=np.int64)
    flat = x.ndim == 1
    x = np.atleast_2d(x)
    if x.shape[1] != n_assets * n_bits_per_asset:
        raise ValueError(
            f"expected {n_assets * n_bits_per_asset} bits, got {x.shape[1]}"
        )
    groups = x.reshape(x.shape[0], n_assets, n_bits_per_asset)
    weights = 2 ** np.arange(n_bits_per_asset, dtype=np.int64)
    omega = (groups * weights).sum(axis=2) / float(2**n_bits_per_asset - 1)
    return omega[0] if flat else omega


@dataclass
class PortfolioProblem:
    """Mean-variance selection with binary-encoded weights.

    approach "penalty" keeps the quadratic form and adds
    B (sum omega - 1)^2; approach "normalized" rescales each candidate
    allocation to unit total weight and charges zero_penalty to the empty
    allocation.
    """

    mu: np.ndarray
    sigma: np.ndarray
    gamma: float = 1.0
    n_bits_per_asset: int = 1
    approach: str = "normalized"
    penalty_weight: float | None = None
    zero_penalty: float | None = None

    def __post_init__(self):
        self.mu = np.asarray(self.mu, dtype=float)
        self.sigma = np.asarray(self.sigma, dtype=float)
        n = self.mu.shape[0]
        if self.sigma.shape != (n, n):
            raise ValueError("covariance shape does not match returns")
        if np.max(np.abs(self.sigma - self.sigma.T)) > 1e-9:
            raise ValueError("covariance must be symmetric within 1e-9")
        scale = max(1.0, float(np.max(np.abs(self.sigma))))
        if np.min(np.linalg.eigvalsh(self.sigma)) < -1e-9 * scale:
            raise ValueError("covariance must be positive semidefinite")
        if self.gamma < 0:
            raise ValueError(f"risk aversion must be >= 0, got {self.gamma}")
        if self.n_bits_per_asset < 1:
            raise ValueError("need at least one bit per asset")
        if self.approach not in ("penalty", "normalized"):
            raise ValueError(f"unknown approach {self.approach!r}")
        default = 1e3 * max(float(np.max(np.abs(self.mu))),
                            float(np.max(np.abs(self.sigma))), 1e-12)
        if self.penalty_weight is None:
            self.penalty_weight = default
        if self.zero_penalty is None:
            self.zero_penalty = default

    @property
    def n_assets(self) -> int:
        return self.mu.shape[0]

    @property
    def num_bits(self) -> int:
        return self.n_assets * self.n_bits_per_asset

    def decode(self, bits) -> np.ndarray:
        return binary_encode_weights(bits, self.n_bits_per_asset,
                                     self.n_assets)

    def energies(self, bits: np.ndarray) -> np.ndarray:
        omega = np.atleast_2d(self.decode(bits)).astype(float)
        risk = np.einsum("bi,ij,bj->b", omega, self.sigma, omega)
        if self.approach == "penalty":
            return (-(omega @ self.mu) + self.gamma * risk
                    + self.penalty_weight * (omega.sum(axis=1) - 1.0) ** 2)
        totals = omega.sum(axis=1)
        safe = np.where(totals == 0, 1.0, totals)
        vals = -(omega @ self.mu) / safe + self.gamma * risk / safe**2
        return np.where(totals == 0, self.zero_penalty, vals)


def portfolio_energy_penalty(problem: PortfolioProblem, omega) -> float:
    """-w.mu + gamma w.Sigma.w + B (sum w - 1)^2."""
    w = np.asarray(omega, dtype=float)
    base = -w @ problem.mu + problem.gamma * (w @ problem.sigma @ w)
    return float(base + problem.penalty_weight * (w.sum() - 1.0) ** 2)


def portfolio_energy_normalized(problem: PortfolioProblem, omega) -> float:
    """Scale-invariant objective; the empty allocation pays the penalty."""
    w = np.asarray(omega, dtype=float)
    total = w.sum()
    if total == 0:
        return float(problem.zero_penalty)
    return float(-(w @ problem.mu) / total
                 + problem.gamma * (w @ problem.sigma @ w) / total**2)


def count_unit_sum_allocations(n_assets: int, n_bits_per_asset: int) -> int:
    """Bit assignments whose decoded weights sum exactly to 1.

    Under the per-asset integer reading, these are the solutions of
    sum_i q_i = 2^N_q - 1 with q_i in [0, 2^N_q - 1], counted by dynamic
    programming.
    """
    target = 2**n_bits_per_asset - 1
    ways = np.zeros(target + 1, dtype=object)
    ways[0] = 1
    for _ in range(n_assets):
        new = np.zeros_like(ways)
        for total in range(target + 1):
            if ways[total]:
                for q in range(min(target, target - total) + 1):
                    new[total + q] += ways[total]
        ways = new
    return int(ways[target])


@dataclass
class FrontierPoint:
    gamma: float
    risk: float
    expected_return: float
    bits: tuple[int, ...]
    e_min: float


@dataclass
class PortfolioRun:
    points: list[FrontierPoint]
    results: dict[float, SolverResult]

    def write_frontier_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["gamma", "risk", "return", "bitstring"])
            for p in self.points:
                writer.writerow([
                    repr(p.gamma), repr(p.risk), repr(p.expected_return),
                    "".join(map(str, p.bits)),
                ])


def allocation_risk_return(problem: PortfolioProblem, bits
                           ) -> tuple[float, float]:
    """Risk and return of the unit-normalized allocation of a bit string."""
    omega = problem.decode(bits)
    total = omega.sum()
    if total == 0:
        return 0.0, 0.0
    w = omega / total
    return (float(np.sqrt(w @ problem.sigma @ w)), float(w @ problem.mu))


def run_portfolio(problem: PortfolioProblem, config: SolverConfig,
                  gammas=None) -> PortfolioRun:
    """Sweep risk aversions, solve each, and collect frontier points."""
    if gammas is None:
        gammas = [1.0]
    points = []
    results = {}
    for gamma in gammas:
        instance = replace(problem, gamma=float(gamma),
                           penalty_weight=problem.penalty_weight,
                           zero_penalty=problem.zero_penalty)
        result = run_variational(instance, config)
        risk, ret = allocation_risk_return(instance, result.b_min)
        points.append(FrontierPoint(float(gamma), risk, ret,
                                    result.b_min, result.e_min))
        results[float(gamma)] = result
    return PortfolioRun(points, results)


def random_portfolio_cloud(problem: PortfolioProblem, count: int, seed
                           ) -> tuple[np.ndarray, np.ndarray]:
    """Risk/return of `count` random non-empty bit allocations."""
    rng = np.random.default_rng(seed)
    bits = rng.integers(0, 2, size=(count, problem.num_bits))
    empty = bits.sum(axis=1) == 0
    while empty.any():
        bits[empty] = rng.integers(0, 2, size=(int(empty.sum()),
                                               problem.num_bits))
        empty = bits.sum(axis=1) == 0
    omega = np.atleast_2d(problem.decode(bits)).astype(float)
    totals = omega.sum(axis=1)
    w = omega / totals[:, None]
    risks = np.sqrt(np.einsum("bi,ij,bj->b", w, problem.sigma, w))
    returns = w @ problem.mu
    return risks, returns


def synthetic_portfolio(n_assets: int, seed, gamma: float = 1.0,
                        n_bits_per_asset: int = 1,
                        approach: str = "normalized") -> PortfolioProblem:
    """Reproducible factor-model instance with annualized-scale moments."""
    rng = np.random.default_rng(seed)
    mu = rng.normal(0.08, 0.12, n_assets)
    loadings = rng.normal(0.0, 0.15, (n_assets, max(2, n_assets // 4)))
    idio = rng.uniform(0.01, 0.09, n_assets)
    sigma = loadings @ loadings.T + np.diag(idio)
    return PortfolioProblem(mu, sigma, gamma=gamma,
                            n_bits_per_asset=n_bits_per_asset,
                            approach=approach)
