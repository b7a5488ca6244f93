"""Random Jacobi matrices: exact expectations, Monte Carlo and spectral measures.

``H_n`` has zero diagonal, ones on the superdiagonal and i.i.d. positive
entries ``a_1, ..., a_{n-1}`` on the subdiagonal.  It is similar to the
symmetric ``J_n`` with ``sqrt(a_i)`` off the diagonal, which is what the
eigensolver sees.

Exact expectations of ``Tr(H_n^k)`` and ``H_n^k(1,1)`` come from summing
path weights over paths confined to heights ``1..n`` and replacing each
``a_i^e`` by the moment ``m_e``.  Monte Carlo estimates use matrix-vector
powers and never touch the eigensolver, so the two routes are independent.
"""

from __future__ import annotations

import csv
import io
import math
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.linalg import eigh_tridiagonal

from . import kernels
from .lattice import ENUM_CAP, CapExceededError, confined_paths, path_weight
from .moments import alpha, omega
from .poly import Family, Poly, evaluate_numeric, expectation_substitute
from .report import Report

BLOCK = 4096  # samples per RNG stream; fixed so results ignore worker count
EXPONENTIAL_K_CAP = 20
DIST_NAMES = ("constant", "uniform", "exponential", "two_point")
KINDS = ("trace", "entry11", "spectral_moments", "empirical_moments")


class DistributionError(ValueError):
    pass


def _frac(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise DistributionError(f"bad numeric parameter {text!r}") from None


@dataclass(frozen=True)
class DistributionSpec:
    """A positive distribution with exact rational moments.

    Text form ``name:params``: ``constant:c``, ``uniform:theta`` (or
    ``uniform:0,theta``), ``exponential:rate`` and ``two_point:p,x1,x2``
    (mass p at x1 and 1-p at x2).
    """

    name: str
    params: tuple

    def __post_init__(self):
        name, p = self.name, self.params
        if name not in DIST_NAMES:
            raise DistributionError(f"unknown distribution {name!r}; expected one of {DIST_NAMES}")
        want = {"constant": 1, "uniform": 1, "exponential": 1, "two_point": 3}[name]
        if len(p) != want:
            raise DistributionError(f"{name} takes {want} parameter(s), got {len(p)}")
        if name == "two_point":
            prob, x1, x2 = p
            if not (0 < prob < 1 and x1 > 0 and x2 > 0):
                raise DistributionError("two_point needs 0 < p < 1 and positive support points")
        elif p[0] <= 0:
            raise DistributionError(f"{name} parameter must be positive")

    @classmethod
    def parse(cls, text: str) -> "DistributionSpec":
        name, _, rest = text.strip().partition(":")
        name = name.strip().lower().replace("-", "_")
        params = tuple(_frac(x) for x in re.split(r"[,\s]+", rest.strip()) if x) if rest else ()
        if name == "uniform" and len(params) == 2:
            if params[0] != 0:
                raise DistributionError("uniform support must start at 0")
            params = params[1:]
        return cls(name, params)

    def __str__(self) -> str:
        return f"{self.name}:" + ",".join(str(x) for x in self.params)

    def moment(self, k: int) -> Fraction:
        if k < 0:
            raise ValueError("moment order must be non-negative")
        p = self.params
        if self.name == "constant":
            return p[0] ** k
        if self.name == "uniform":
            return p[0] ** k / (k + 1)
        if self.name == "exponential":
            if k > EXPONENTIAL_K_CAP:
                raise CapExceededError("exponential moment order", k, EXPONENTIAL_K_CAP)
            return Fraction(math.factorial(k)) / p[0] ** k
        prob, x1, x2 = p
        return prob * x1 ** k + (1 - prob) * x2 ** k

    def moment_assignment(self):
        """Callable for :func:`evaluate_numeric` mapping m_k to its value."""

        def look(s):
            if s.family != Family.M:
                raise DistributionError(f"cannot evaluate symbol {s.name} at moments")
            return self.moment(s.index)

        return look

    def evaluate(self, p: Poly) -> Fraction:
        return evaluate_numeric(p, self.moment_assignment())

    def sample(self, rng: np.random.Generator, shape) -> np.ndarray:
        p = [float(x) for x in self.params]
        if self.name == "constant":
            return np.full(shape, p[0])
        if self.name == "uniform":
            # 1 - U lies in (0, 1], keeping samples strictly positive
            return p[0] * (1.0 - rng.random(shape))
        if self.name == "exponential":
            out = rng.exponential(1.0 / p[0], shape)
            return np.where(out > 0, out, np.finfo(float).tiny)
        prob, x1, x2 = p
        return np.where(rng.random(shape) < prob, x1, x2)


@dataclass(frozen=True)
class JacobiSample:
    """One draw of ``H_n``: ``offdiag[i]`` is ``a_{i+1}``."""

    n: int
    offdiag: np.ndarray

    def __post_init__(self):
        off = np.asarray(self.offdiag, dtype=float)
        if off.shape != (self.n - 1,):
            raise ValueError(f"expected {self.n - 1} off-diagonal entries, got {off.shape}")
        if np.any(off <= 0):
            raise ValueError("off-diagonal entries must be strictly positive")
        object.__setattr__(self, "offdiag", off)

    def H(self) -> np.ndarray:
        h = np.zeros((self.n, self.n))
        idx = np.arange(self.n - 1)
        h[idx, idx + 1] = 1.0
        h[idx + 1, idx] = self.offdiag
        return h

    def J(self) -> np.ndarray:
        j = np.zeros((self.n, self.n))
        idx = np.arange(self.n - 1)
        r = np.sqrt(self.offdiag)
        j[idx, idx + 1] = r
        j[idx + 1, idx] = r
        return j

    def eig(self) -> tuple[np.ndarray, np.ndarray]:
        """Eigenvalues of J_n (ascending) and Christoffel weights q_j^2."""
        if self.n == 1:
            return np.zeros(1), np.ones(1)
        lam, vec = eigh_tridiagonal(np.zeros(self.n), np.sqrt(self.offdiag))
        return lam, vec[0, :] ** 2


# ---------------------------------------------------------------------------
# exact expectations
# ---------------------------------------------------------------------------


def _row_poly(n: int, k: int, i: int, cap: int) -> Poly:
    total = Poly()
    for p in confined_paths(n, k, i, cap=cap):
        total = total + path_weight(p)
    return expectation_substitute(total)


def expected_row(n: int, k: int, i: int, dist: DistributionSpec, cap: int = ENUM_CAP) -> Fraction:
    """Sum over paths in P(n,k,i) of E w(path)."""
    if k % 2:
        return Fraction(0)
    return dist.evaluate(_row_poly(n, k, i, cap))


def exact_expected(kind: str, n: int, k: int, dist: DistributionSpec, cap: int = ENUM_CAP) -> Fraction:
    """``E Tr(H_n^k)`` (kind ``trace``) or ``E H_n^k(1,1)`` (kind ``entry11``)."""
    if n < 1 or k < 0:
        raise ValueError("need n >= 1 and k >= 0")
    if k // 2 > cap:
        raise CapExceededError("k/2", k // 2, cap)
    if k % 2:
        return Fraction(0)
    if kind == "entry11":
        return expected_row(n, k, 1, dist, cap)
    if kind == "trace":
        return sum((expected_row(n, k, i, dist, cap) for i in range(1, n + 1)), Fraction(0))
    raise ValueError(f"exact expectation is defined for trace and entry11, not {kind!r}")


def interior_row_check(n: int, m: int, dist: DistributionSpec) -> Report:
    """Rows ``m+1..n-m`` give omega_m; row 1 gives alpha_m."""
    if n < 1 + 2 * m:
        raise ValueError(f"need n >= 1 + 2m, got n={n}, m={m}")
    target_w = dist.evaluate(omega(m).value)
    target_a = dist.evaluate(alpha(m).value)
    report = Report("interior rows", info={"n": n, "m": m, "dist": str(dist), "omega_m": target_w})
    boundary = {}
    for i in range(1, n + 1):
        v = expected_row(n, 2 * m, i, dist)
        if m + 1 <= i <= n - m:
            report.check(f"row {i}", v, target_w)
        else:
            boundary[i] = v
    report.check("row 1", expected_row(n, 2 * m, 1, dist), target_a)
    report.info["boundary_rows"] = boundary
    return report


def asymptotic_check(m: int, dist: DistributionSpec, n_list) -> Report:
    """Tabulate ``E Tr(H_n^{2m})/n`` against omega_m.

    The deficit ``omega_m - E Tr/n`` equals ``(2m omega_m - B_n)/n`` where
    ``B_n`` sums the 2m boundary rows.  Each boundary row lies in
    ``[0, omega_m]``, so ``0 <= deficit <= (2m/n) omega_m``.
    """
    w = dist.evaluate(omega(m).value)
    report = Report("asymptotics", info={"m": m, "dist": str(dist), "omega_m": w})
    rows = []
    prev = None
    for n in n_list:
        if n < 1 + 2 * m:
            raise ValueError(f"need n >= 1 + 2m, got n={n}, m={m}")
        row_vals = [expected_row(n, 2 * m, i, dist) for i in range(1, n + 1)]
        total = sum(row_vals, Fraction(0))
        b = sum((v for i, v in enumerate(row_vals, 1) if not m + 1 <= i <= n - m), Fraction(0))
        deficit = w - total / n
        bound = Fraction(2 * m, n) * w
        report.check(f"n={n} deficit formula", deficit, (2 * m * w - b) / n)
        report.check(f"n={n} deficit in [0, 2m/n*omega]", 0 <= deficit <= bound, True)
        if prev is not None:
            report.check(f"n={n} deficit non-increasing", deficit <= prev, True)
        prev = deficit
        rows.append({"n": n, "mean_trace": total / n, "omega_m": w, "deficit": deficit,
                     "boundary": b, "bound": bound})
    report.info["table"] = rows
    return report


def path_graph_trace(n: int, k: int) -> int:
    """Tr(A^k) for the path-graph adjacency matrix, in exact integers."""
    a = np.zeros((n, n), dtype=object)
    for i in range(n - 1):
        a[i, i + 1] = a[i + 1, i] = 1
    x = np.identity(n, dtype=object)
    for _ in range(k):
        x = x.dot(a)
    return int(sum(x[i, i] for i in range(n)))


# ---------------------------------------------------------------------------
# Monte Carlo
# ---------------------------------------------------------------------------


def _block_rng(seed: int, block: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, block])))


def draw_offdiag(dist: DistributionSpec, n: int, samples: int, seed: int, start: int = 0) -> np.ndarray:
    """Off-diagonals for samples ``start..start+samples-1`` (shape (samples, n-1)).

    Sample ``s`` always comes from row ``s % BLOCK`` of the stream keyed by
    ``(seed, s // BLOCK)``.
    """
    out = np.empty((samples, max(n - 1, 0)))
    s = start
    while s < start + samples:
        blk = s // BLOCK
        draws = dist.sample(_block_rng(seed, blk), (BLOCK, max(n - 1, 0)))
        lo = s - blk * BLOCK
        hi = min(BLOCK, start + samples - blk * BLOCK)
        out[s - start:s - start + hi - lo] = draws[lo:hi]
        s += hi - lo
    return out


def _per_sample(kind: str, offdiag: np.ndarray, n: int, k: int) -> np.ndarray:
    if kind == "entry11":
        return kernels.entry11_powers(offdiag, k)
    if kind == "trace":
        return kernels.trace_powers(offdiag, k)
    out = np.empty(offdiag.shape[0])
    for s in range(offdiag.shape[0]):
        lam, q2 = JacobiSample(n, offdiag[s]).eig()
        pk = lam ** k
        out[s] = float(np.dot(q2, pk)) if kind == "spectral_moments" else float(pk.mean())
    return out


@dataclass(frozen=True)
class MCResult:
    kind: str
    n: int
    k: int
    dist: str
    samples: int
    seed: int
    mean: float
    std_error: float

    def to_json_obj(self) -> dict:
        return {"kind": self.kind, "n": self.n, "k": self.k, "dist": self.dist, "samples": self.samples,
                "seed": self.seed, "mean": repr(self.mean), "std_error": repr(self.std_error)}


def mc_estimate(kind: str, n: int, k: int, dist: DistributionSpec, samples: int, seed: int = 0,
                workers: int = 1) -> MCResult:
    """Sample mean and standard error of one matrix statistic.

    kinds: ``trace`` (Tr H_n^k), ``entry11`` (H_n^k(1,1)),
    ``spectral_moments`` (integral of x^k against tau_n) and
    ``empirical_moments`` (integral of x^k against sigma_n, i.e. Tr/n).
    Per-sample values depend only on ``(seed, sample index)``; the
    reduction runs over the full ordered array, so the worker count never
    changes the result.
    """
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}; expected one of {KINDS}")
    if samples < 1 or n < 1 or k < 0:
        raise ValueError("need samples >= 1, n >= 1, k >= 0")
    nblocks = -(-samples // BLOCK)

    def run(b):
        lo = b * BLOCK
        cnt = min(BLOCK, samples - lo)
        return _per_sample(kind, draw_offdiag(dist, n, cnt, seed, lo), n, k)

    if workers > 1 and nblocks > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(run, range(nblocks)))
    else:
        parts = [run(b) for b in range(nblocks)]
    vals = np.concatenate(parts)
    mean = float(np.sum(vals) / samples)  # numpy sums contiguous floats pairwise
    se = float(np.std(vals, ddof=1) / math.sqrt(samples)) if samples > 1 else float("nan")
    return MCResult(kind, n, k, str(dist), samples, seed, mean, se)


def tau_consistency(n: int, k: int, sample: JacobiSample | np.ndarray, rtol: float = 1e-9) -> Report:
    """Spectral-measure moments against matrix powers for one sample."""
    if not isinstance(sample, JacobiSample):
        sample = JacobiSample(n, np.asarray(sample, dtype=float))
    lam, q2 = sample.eig()
    report = Report("tau consistency", info={"n": n, "k": k})
    off = sample.offdiag[None, :]
    tau_k = float(np.dot(q2, lam ** k))
    entry = float(kernels.entry11_powers(off, k)[0])
    sig_k = float(np.mean(lam ** k))
    tr = float(kernels.trace_powers(off, k)[0]) / n
    scale_base = float(np.max(np.abs(lam))) ** k if n > 1 else 0.0
    for label, x, y in (("tau vs H^k(1,1)", tau_k, entry), ("sigma vs Tr/n", sig_k, tr)):
        scale = max(abs(x), abs(y), scale_base, 1e-300)
        report.checked += 1
        if abs(x - y) > rtol * scale:
            report.fail(label, spectral=x, matrix=y, rel_error=abs(x - y) / scale)
    report.checked += 1
    if abs(q2.sum() - 1.0) > 1e-12:
        report.fail("christoffel sum", total=float(q2.sum()))
    report.checked += 1
    if np.any(q2 <= 0):
        report.fail("christoffel positive", minimum=float(q2.min()))
    if n > 1:
        report.checked += 1
        gap = float(np.min(np.diff(lam)))
        report.info["min_gap"] = gap
        if not gap > 1e-12 * max(1.0, float(np.max(np.abs(lam)))):
            report.fail("simple eigenvalues", min_gap=gap)
    return report


def christoffel_weights(sample: JacobiSample) -> np.ndarray:
    return sample.eig()[1]


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

CSV_COLUMNS = ("kind", "n", "k", "dist", "exact", "mc_mean", "mc_stderr", "N", "seed")


def csv_rows(rows) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({c: r.get(c, "") for c in CSV_COLUMNS})
    return buf.getvalue()
