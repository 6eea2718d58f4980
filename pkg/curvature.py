"""
Sectional curvature of the normal metric -c B on G/K:

    K(X, Y) = (|[X,Y]_k|^2 + 1/4 |[X,Y]_m|^2) / (|X|^2 |Y|^2 - <X,Y>^2)

Exact rationals on pairs of basis vectors, floating point on general planes.
Vectors are given over the m basis (U^a_alpha), in which -c B is 2c * identity.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, List, Optional, Set, Tuple

import numpy as np
from scipy.optimize import least_squares

from config import (CENTRALIZER_CUTOFF, CURV_FLAT_BUDGET, CURV_MAX_ITER, CURV_SCALE, CURV_SEED,
                    CURV_STARTS, CURV_TOL, CURV_WORKERS, FLAT_TOL)
from errors import InvalidInputError
from exactmath import frac_str, parse_fraction
from rootsys import Root, RootSystem
from threesym import ThreeSymSpace

logger = logging.getLogger(__name__)

# Line search
ARMIJO = 1e-4
MAX_BACKTRACK = 60
FLOAT_RESOLUTION = 1e-15  # relative noise floor of K
BB_PATIENCE = 100


@dataclass(frozen=True)
class MetricSpec:
    """The bi-invariant metric -scale * B"""

    scale: Fraction = Fraction(1, 2)

    def __post_init__(self):
        scale = self.scale if isinstance(self.scale, Fraction) else parse_fraction(str(self.scale))
        if scale <= 0:
            raise InvalidInputError(f"metric scale must be positive, got {scale}")
        object.__setattr__(self, "scale", scale)

    @classmethod
    def default(cls) -> "MetricSpec":
        return cls(parse_fraction(CURV_SCALE))

    @property
    def unit(self) -> float:
        """Metric norm squared of a U basis vector"""
        return 2 * float(self.scale)


def _coerce(space: ThreeSymSpace, x) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if arr.shape != (space.dim_m,):
        raise InvalidInputError(f"expected a vector over the {space.dim_m} m-basis directions, got shape {arr.shape}")
    return arr


def _gram_schmidt(u: np.ndarray, v: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    nu = np.linalg.norm(u)
    if nu == 0:
        raise InvalidInputError("plane vectors must be nonzero")
    u = u / nu
    length = np.linalg.norm(v)
    v = v - (u @ v) * u
    nv = np.linalg.norm(v)
    if length == 0 or nv <= 1e-12 * length:
        raise InvalidInputError("plane vectors are linearly dependent")
    return u, v / nv


@dataclass(frozen=True)
class Plane:
    """Orthonormal pair (in the metric) spanning a tangent 2-plane"""

    X: Tuple[float, ...]
    Y: Tuple[float, ...]

    @classmethod
    def from_vectors(cls, u, v, metric: MetricSpec = MetricSpec()) -> "Plane":
        u, v = _gram_schmidt(np.asarray(u, dtype=float), np.asarray(v, dtype=float))
        factor = 1.0 / np.sqrt(metric.unit)
        return cls(tuple(float(x) for x in u * factor), tuple(float(y) for y in v * factor))

    def vectors(self) -> Tuple[np.ndarray, np.ndarray]:
        return np.array(self.X), np.array(self.Y)

    def to_list(self) -> List[List[float]]:
        return [list(self.X), list(self.Y)]


class PlaneObjective:
    """K as a function of an arbitrary (independent) pair u, v, with its analytic gradient"""

    def __init__(self, space: ThreeSymSpace, metric: MetricSpec = MetricSpec()):
        self.tm = space.m_tensor
        self.g = space.curvature_weights
        self.c = float(metric.scale)

    def bracket(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        return np.einsum("i,j,ijk->k", u, v, self.tm)

    def _parts(self, u: np.ndarray, v: np.ndarray):
        z = self.bracket(u, v)
        gz = self.g @ z
        q = float(z @ gz)
        uu, vv, uv = float(u @ u), float(v @ v), float(u @ v)
        return z, gz, q, uu, vv, uv, uu * vv - uv * uv

    def value(self, u: np.ndarray, v: np.ndarray) -> float:
        _, _, q, _, _, _, d = self._parts(u, v)
        if d <= 0:
            raise InvalidInputError("plane vectors are linearly dependent")
        return q / (4 * self.c * d)

    def value_and_grad(self, u: np.ndarray, v: np.ndarray) -> Tuple[float, np.ndarray, np.ndarray]:
        z, gz, q, uu, vv, uv, d = self._parts(u, v)
        if d <= 0:
            raise InvalidInputError("plane vectors are linearly dependent")
        a_v = np.einsum("ijk,j->ik", self.tm, v)
        b_u = np.einsum("i,ijk->jk", u, self.tm)
        dq_u, dq_v = 2 * a_v @ gz, 2 * b_u @ gz
        dd_u, dd_v = 2 * (vv * u - uv * v), 2 * (uu * v - uv * u)
        denom = 4 * self.c * d * d
        return q / (4 * self.c * d), (dq_u * d - q * dd_u) / denom, (dq_v * d - q * dd_v) / denom

    def residual(self, w: np.ndarray) -> np.ndarray:
        """[u, v] plus the orthonormality constraints, for the commuting-pair search"""
        n = self.tm.shape[0]
        u, v = w[:n], w[n:]
        return np.concatenate([self.bracket(u, v), [u @ u - 1.0, v @ v - 1.0, u @ v]])

    def residual_jacobian(self, w: np.ndarray) -> np.ndarray:
        n = self.tm.shape[0]
        u, v = w[:n], w[n:]
        a_v = np.einsum("ijk,j->ik", self.tm, v)
        b_u = np.einsum("i,ijk->jk", u, self.tm)
        top = np.hstack([a_v.T, b_u.T])
        zeros = np.zeros(n)
        constraints = np.vstack([
            np.concatenate([2 * u, zeros]),
            np.concatenate([zeros, 2 * v]),
            np.concatenate([v, u]),
        ])
        return np.vstack([top, constraints])


def sec_numerator(space: ThreeSymSpace, X, Y, metric: MetricSpec = MetricSpec(), normalize: bool = False) -> float:
    """|[X,Y]_k|^2 + 1/4 |[X,Y]_m|^2 in the metric; on a metric-orthonormal pair when normalize is set"""
    x, y = _coerce(space, X), _coerce(space, Y)
    if normalize:
        x, y = Plane.from_vectors(x, y, metric).vectors()
    objective = PlaneObjective(space, metric)
    z = objective.bracket(x, y)
    return float(metric.scale) * float(z @ space.curvature_weights @ z)


def sectional_curvature(space: ThreeSymSpace, X, Y, metric: MetricSpec = MetricSpec()) -> float:
    x, y = _coerce(space, X), _coerce(space, Y)
    return PlaneObjective(space, metric).value(x, y)


@dataclass(frozen=True)
class BasisCurvature:
    i: int
    j: int
    k: Fraction


def basis_curvature_table(space: ThreeSymSpace, metric: MetricSpec = MetricSpec()) -> List[BasisCurvature]:
    """Exact K for every unordered pair of m-basis vectors"""
    alg = space.algebra
    rs = alg.root_system
    k_set = set(space.k_idx)
    table = []
    for p, bp in enumerate(space.m_idx):
        for q in range(p + 1, space.dim_m):
            bq = space.m_idx[q]
            z = alg.bracket_basis(bp, bq)
            total = Fraction(0)
            h_part = {}
            for idx, c in z.items():
                if idx < rs.rank:
                    h_part[idx] = c.to_rational()
                else:
                    weight = Fraction(2) if idx in k_set else Fraction(1, 2)
                    total += weight * c.sq
            for a, ca in h_part.items():
                for b, cb in h_part.items():
                    total += ca * cb * rs.gram[a][b]
            table.append(BasisCurvature(p, q, total / (4 * metric.scale)))
    return table


@dataclass(frozen=True)
class CentralizerResult:
    dimension: int
    basis: np.ndarray = field(repr=False)
    singular_values: np.ndarray = field(repr=False)


def centralizer_in_m(space: ThreeSymSpace, v, cutoff: float = CENTRALIZER_CUTOFF) -> CentralizerResult:
    """{u in m : [u, v] = 0} through the singular values of u -> [u, v/|v|]"""
    v = _coerce(space, v)
    norm = np.linalg.norm(v)
    if norm == 0:
        raise InvalidInputError("centralizer needs a nonzero vector")
    op = np.einsum("ijk,j->ki", space.m_tensor, v / norm)
    _, s, vh = np.linalg.svd(op)
    null = vh[s < cutoff]
    return CentralizerResult(int(null.shape[0]), null.T.copy(), s)


# --- optimization over the Grassmannian of 2-planes ---

@dataclass(frozen=True)
class PinchConfig:
    starts: int = CURV_STARTS
    seed: int = CURV_SEED
    max_iter: int = CURV_MAX_ITER
    tol: float = CURV_TOL
    flat_budget: int = CURV_FLAT_BUDGET
    workers: int = CURV_WORKERS
    metric: MetricSpec = field(default_factory=MetricSpec.default)

    def __post_init__(self):
        if self.starts < 1:
            raise InvalidInputError(f"starts must be >= 1, got {self.starts}")
        if self.max_iter < 1:
            raise InvalidInputError(f"max_iter must be >= 1, got {self.max_iter}")
        if self.tol <= 0:
            raise InvalidInputError(f"tol must be positive, got {self.tol}")
        if self.flat_budget < 0:
            raise InvalidInputError(f"flat_budget must be >= 0, got {self.flat_budget}")
        if self.workers < 1:
            raise InvalidInputError(f"workers must be >= 1, got {self.workers}")


@dataclass
class RunResult:
    value: float
    u: np.ndarray
    v: np.ndarray
    converged: bool
    iterations: int
    grad_norm: float


def _horizontal(u, v, gu, gv):
    gu = gu - (gu @ u) * u - (gu @ v) * v
    gv = gv - (gv @ u) * u - (gv @ v) * v
    return gu, gv


def _stationary(gnorm: float, f: float, tol: float) -> bool:
    return gnorm <= tol * max(1.0, abs(f))


def descend(objective: PlaneObjective, u: np.ndarray, v: np.ndarray, maximize: bool,
            max_iter: int, tol: float) -> RunResult:
    """Projected gradient with Armijo backtracking and Barzilai-Borwein trial steps.

    A run converges when the horizontal gradient norm is at most tol * max(1, |K|), whichever
    way it stops. BB steps are dropped for plain Armijo steps once the gradient norm has not
    improved for BB_PATIENCE iterations. Once the Armijo decrease is below the float resolution
    of K, a step is accepted when it lowers the gradient norm without raising K beyond that
    resolution.
    """
    sign = -1.0 if maximize else 1.0
    u, v = _gram_schmidt(u, v)

    def evaluate(a, b):
        f, ga, gb = objective.value_and_grad(a, b)
        ga, gb = _horizontal(a, b, ga, gb)
        return sign * f, sign * np.concatenate([ga, gb])

    n = u.shape[0]
    f, g = evaluate(u, v)
    x = np.concatenate([u, v])
    step, x_prev, g_prev = 1.0, None, None
    gnorm = float(np.linalg.norm(g))
    use_bb, best_gnorm, since_best = True, gnorm, 0
    for it in range(max_iter):
        if _stationary(gnorm, f, tol):
            return RunResult(sign * f, x[:n], x[n:], True, it, gnorm)
        trial = 2.0 * step
        if use_bb and x_prev is not None:
            s, y = x - x_prev, g - g_prev
            sy = abs(float(s @ y))
            if sy > 0:
                trial = float(s @ s) / sy
        t = min(max(trial, 1e-12), 1e6)
        resolution = FLOAT_RESOLUTION * max(1.0, abs(f))
        accepted = False
        for _ in range(MAX_BACKTRACK):
            try:
                un, vn = _gram_schmidt(x[:n] - t * g[:n], x[n:] - t * g[n:])
            except InvalidInputError:
                t *= 0.5
                continue
            fn, gn = evaluate(un, vn)
            decrease = ARMIJO * t * gnorm * gnorm
            if decrease > resolution:
                accepted = fn <= f - decrease
            else:
                accepted = fn <= f + resolution and float(np.linalg.norm(gn)) < gnorm
            if accepted:
                break
            t *= 0.5
        if not accepted:
            # no representable progress left
            return RunResult(sign * f, x[:n], x[n:], _stationary(gnorm, f, tol), it, gnorm)
        x_prev, g_prev = x, g
        x, f, g, step = np.concatenate([un, vn]), fn, gn, t
        gnorm = float(np.linalg.norm(g))
        if gnorm < best_gnorm:
            best_gnorm, since_best = gnorm, 0
        else:
            since_best += 1
            if use_bb and since_best >= BB_PATIENCE:
                logger.debug(f"BB steps stalled at gradient {gnorm:.3g}, switching to plain Armijo steps")
                use_bb = False
    return RunResult(sign * f, x[:n], x[n:], _stationary(gnorm, f, tol), max_iter, gnorm)


@dataclass
class CurvatureReport:
    space: str
    metric: MetricSpec
    kmin: float
    kmax: float
    argmin: Plane
    argmax: Plane
    basis_table: List[BasisCurvature]
    basis_labels: List[str]
    flat_witness: Optional[Plane]
    einstein_defect: float
    starts: int
    seed: int
    converged_starts: int

    @property
    def delta(self) -> float:
        return self.kmin / self.kmax

    @property
    def failed_starts(self) -> int:
        return self.starts - self.converged_starts

    def to_dict(self) -> dict:
        values = [entry.k for entry in self.basis_table]
        return {
            "space": self.space,
            "scale": frac_str(self.metric.scale),
            "kmin": self.kmin,
            "kmax": self.kmax,
            "delta": self.delta,
            "argmin": self.argmin.to_list(),
            "argmax": self.argmax.to_list(),
            "basis_kmin": frac_str(min(values)),
            "basis_kmax": frac_str(max(values)),
            "basis_table": [{"i": e.i, "j": e.j, "x": self.basis_labels[e.i], "y": self.basis_labels[e.j],
                             "k": frac_str(e.k)} for e in self.basis_table],
            "flat_witness": self.flat_witness.to_list() if self.flat_witness else None,
            "einstein_defect": self.einstein_defect,
            "starts": self.starts,
            "seed": self.seed,
            "converged_starts": self.converged_starts,
        }


def _random_pair(rng: np.random.Generator, n: int) -> Tuple[np.ndarray, np.ndarray]:
    return rng.standard_normal(n), rng.standard_normal(n)


def pinch(space: ThreeSymSpace, cfg: Optional[PinchConfig] = None) -> CurvatureReport:
    """Multistart extremization of K over all 2-planes of m, plus flat-plane and Ricci analysis"""
    cfg = cfg or PinchConfig()
    dm = space.dim_m
    if dm < 4:
        raise InvalidInputError(f"pinching needs dim m >= 4, {space.name} has dim m = {dm}")
    metric = cfg.metric
    logger.info(f"🔍 Pinching {space.name}: {cfg.starts} starts, seed {cfg.seed}, scale {frac_str(metric.scale)}")

    table = basis_curvature_table(space, metric)
    objective = PlaneObjective(space, metric)

    def run(index: int) -> Tuple[RunResult, RunResult]:
        low = descend(objective, *_random_pair(np.random.default_rng([cfg.seed, index, 0]), dm),
                      False, cfg.max_iter, cfg.tol)
        high = descend(objective, *_random_pair(np.random.default_rng([cfg.seed, index, 1]), dm),
                       True, cfg.max_iter, cfg.tol)
        return low, high

    if cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(run, range(cfg.starts)))
    else:
        results = [run(i) for i in range(cfg.starts)]

    # extreme basis pairs as extra warm starts
    eye = np.eye(dm)
    lo_entry = min(table, key=lambda e: e.k)
    hi_entry = max(table, key=lambda e: e.k)
    warm_low = descend(objective, eye[lo_entry.i], eye[lo_entry.j], False, cfg.max_iter, cfg.tol)
    warm_high = descend(objective, eye[hi_entry.i], eye[hi_entry.j], True, cfg.max_iter, cfg.tol)

    lows = [warm_low] + [r[0] for r in results]
    highs = [warm_high] + [r[1] for r in results]
    best_low = min(lows, key=lambda r: r.value)
    best_high = max(highs, key=lambda r: r.value)
    converged = sum(1 for low, high in results if low.converged and high.converged)
    if converged < cfg.starts:
        logger.warning(f"⚠️ {space.name}: {cfg.starts - converged} of {cfg.starts} starts did not converge")

    argmin = Plane.from_vectors(best_low.u, best_low.v, metric)
    argmax = Plane.from_vectors(best_high.u, best_high.v, metric)
    witness = find_flat_plane(space, cfg.flat_budget, metric, hints=[argmin], seed=cfg.seed)
    einstein = ricci(space, metric).einstein_defect

    report = CurvatureReport(
        space=space.name,
        metric=metric,
        kmin=best_low.value,
        kmax=best_high.value,
        argmin=argmin,
        argmax=argmax,
        basis_table=table,
        basis_labels=space.m_labels,
        flat_witness=witness,
        einstein_defect=einstein,
        starts=cfg.starts,
        seed=cfg.seed,
        converged_starts=converged,
    )
    logger.info(f"✅ {space.name}: kmin={report.kmin:.10g} kmax={report.kmax:.10g} delta={report.delta:.10g}")
    return report


def _flat_candidate(space: ThreeSymSpace, u, v, metric: MetricSpec) -> Optional[Plane]:
    try:
        plane = Plane.from_vectors(u, v, metric)
    except InvalidInputError:
        return None
    x, y = plane.vectors()
    if sec_numerator(space, x, y, metric) <= FLAT_TOL:
        return plane
    return None


def find_flat_plane(space: ThreeSymSpace, budget: int = CURV_FLAT_BUDGET, metric: MetricSpec = MetricSpec(),
                    hints: Iterable = (), seed: int = CURV_SEED) -> Optional[Plane]:
    """A plane with vanishing curvature, or None when none is found within the budget.

    First every m-basis direction is checked for a centralizer of dimension >= 2,
    then hint planes and `budget` random pairs are driven towards [u, v] = 0.
    """
    dm = space.dim_m
    objective = PlaneObjective(space, metric)
    eye = np.eye(dm)

    for p in range(dm):
        cent = centralizer_in_m(space, eye[p])
        if cent.dimension < 2:
            continue
        rest = cent.basis - np.outer(eye[p], eye[p] @ cent.basis)
        column = rest[:, int(np.argmax(np.linalg.norm(rest, axis=0)))]
        plane = _flat_candidate(space, eye[p], column, metric)
        if plane:
            logger.info(f"✅ {space.name}: flat plane through basis direction {space.m_labels[p]}")
            return plane

    starts = []
    for hint in hints:
        if isinstance(hint, Plane):
            starts.append(hint.vectors())
        else:
            starts.append((np.asarray(hint[0], dtype=float), np.asarray(hint[1], dtype=float)))
    for index in range(budget):
        starts.append(_random_pair(np.random.default_rng([seed, index, 2]), dm))

    for u, v in starts:
        try:
            u, v = _gram_schmidt(u, v)
        except InvalidInputError:
            continue
        fit = least_squares(objective.residual, np.concatenate([u, v]), jac=objective.residual_jacobian,
                            method="trf", xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=500)
        plane = _flat_candidate(space, fit.x[:dm], fit.x[dm:], metric)
        if plane:
            logger.info(f"✅ {space.name}: flat plane found (residual {np.linalg.norm(fit.fun):.3g})")
            return plane
    logger.info(f"🔍 {space.name}: no flat plane within budget {budget}")
    return None


@dataclass(frozen=True)
class RicciResult:
    matrix: np.ndarray = field(repr=False)
    einstein_defect: float


def ricci(space: ThreeSymSpace, metric: MetricSpec = MetricSpec()) -> RicciResult:
    """Ric(X, X) = sum_i numerator(X, e_i) over a metric-orthonormal basis, polarized"""
    tm = space.m_tensor
    ric = np.einsum("pik,kl,qil->pq", tm, space.curvature_weights, tm) / (4 * float(metric.scale))
    ric = 0.5 * (ric + ric.T)
    trace = float(np.trace(ric))
    deviation = ric - (trace / ric.shape[0]) * np.eye(ric.shape[0])
    defect = float(np.linalg.norm(deviation) / np.linalg.norm(ric))
    return RicciResult(ric, defect)


# --- the Sp(m) picture of CP^(2m-1) ---

def _require_cpn(space: ThreeSymSpace) -> int:
    rs = space.root_system
    if rs.type.series != "C" or space.spec.kind != "A3III" or space.spec.indices != (1,):
        raise InvalidInputError(f"{space.name} is not a C_m A3III (i = 1) space")
    return rs.rank


def _chain(m: int, ones: Iterable[int] = (), twos: Iterable[int] = ()) -> Tuple[int, ...]:
    coords = [0] * m
    for k in ones:
        coords[k - 1] = 1
    for k in twos:
        coords[k - 1] = 2
    return tuple(coords)


def _alpha(m: int, i: int, j: int) -> Tuple[int, ...]:
    """a_i + ... + a_j"""
    return _chain(m, ones=range(i, j + 1))


def _alpha_tilde(m: int, i: int, j: int) -> Tuple[int, ...]:
    """a_i + ... + a_{j-1} + 2(a_j + ... + a_{m-1}) + a_m"""
    return _chain(m, ones=list(range(i, j)) + [m], twos=range(j, m))


def beta_roots(rs: RootSystem) -> List[Root]:
    """beta_1 .. beta_{2m-1} on C_m: a_1 + ... + a_i, then the tilde roots down to mu"""
    if rs.type.series != "C":
        raise InvalidInputError(f"beta roots are defined on C_m, not {rs.type}")
    m = rs.rank
    betas = [Root(_alpha(m, 1, i)) for i in range(1, m + 1)]
    betas += [Root(_alpha_tilde(m, 1, m - j)) for j in range(1, m)]
    return betas


def m_split(space: ThreeSymSpace) -> Tuple[List[int], List[int]]:
    """Positions (within m) of m1 = span{U^a_mu} and of its complement m2"""
    _require_cpn(space)
    alg = space.algebra
    mu = space.root_system.maximal_root
    ridx = space.root_system.index(mu)
    m1_basis = {alg.basis.u_index(ridx, 0), alg.basis.u_index(ridx, 1)}
    m1 = [p for p, b in enumerate(space.m_idx) if b in m1_basis]
    m2 = [p for p, b in enumerate(space.m_idx) if b not in m1_basis]
    return m1, m2


def expected_beta_support(m: int, k: int, l: int) -> Set[Tuple[int, ...]]:
    """Roots carrying [U^a_{beta_k}, U^a_{beta_l}] (1 <= k < l <= 2m-1), case by case"""
    mu = _alpha_tilde(m, 1, 1)

    def beta(t: int) -> Tuple[int, ...]:
        return _alpha(m, 1, t) if t <= m else _alpha_tilde(m, 1, 2 * m - t)

    if l <= m:
        if (k, l) == (m - 1, m):
            return {mu, _alpha(m, m, m)}
        return {_alpha(m, k + 1, l)}
    if k > m:
        i = k - m
        if l == 2 * m - 1:
            return {beta(m - i - 1)}
        return {_alpha(m, m - (l - m), m - i - 1)}
    i, j = k, l - m
    if j == m - 1:
        if i <= m - 2:
            return {beta(2 * m - i - 1)}
        if i == m - 1:
            return {beta(m)}
        return {beta(m - 1)}
    if i == m - 1:
        return {_alpha(m, m - j, m)}
    if i == m:
        return {_alpha(m, m - j, m - 1)}
    if i == m - j - 1:
        return {mu, _alpha_tilde(m, i + 1, i + 1)}
    if i < m - j - 1:
        return {_alpha_tilde(m, i + 1, m - j)}
    return {_alpha_tilde(m, m - j, i + 1)}


@dataclass
class SupportReport:
    m: int
    pairs_checked: int = 0
    mismatches: List[dict] = field(default_factory=list)
    sum_claims_checked: int = 0
    sum_claim_violations: List[Tuple[int, int]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches and not self.sum_claim_violations

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "pairs_checked": self.pairs_checked,
            "mismatches": self.mismatches,
            "sum_claims_checked": self.sum_claims_checked,
            "sum_claim_violations": [list(p) for p in self.sum_claim_violations],
        }


def verify_brc_support(space: ThreeSymSpace) -> SupportReport:
    """Compare the exact brackets [U^a_{beta_k}, U^a_{beta_l}] with the case table above"""
    m = _require_cpn(space)
    rs = space.root_system
    alg = space.algebra
    betas = beta_roots(rs)
    report = SupportReport(m)

    for k in range(1, 2 * m):
        for l in range(k + 1, 2 * m):
            expected = {(coords, 0) for coords in expected_beta_support(m, k, l)}
            for a in (0, 1):
                i = alg.basis.u_index(rs.index(betas[k - 1]), a)
                j = alg.basis.u_index(rs.index(betas[l - 1]), a)
                found = set()
                for idx in alg.bracket_basis(i, j):
                    kind = alg.basis.describe(idx)
                    found.add(("h", kind[1]) if kind[0] == "h" else (rs.positive[kind[1]].coords, kind[2]))
                report.pairs_checked += 1
                if found != expected:
                    report.mismatches.append({"k": k, "l": l, "a": a,
                                              "expected": sorted(map(str, expected)),
                                              "found": sorted(map(str, found))})

            # which sums beta_k + beta_l are roots
            is_sum_root = rs.is_root(betas[k - 1].vector_add(betas[l - 1]))
            if l <= m:
                claim = (k, l) == (m - 1, m)
            elif k > m:
                claim = False
            else:
                claim = (l - m) == m - k - 1 and 1 <= k <= m - 2
            report.sum_claims_checked += 1
            if is_sum_root != claim:
                report.sum_claim_violations.append((k, l))

    if report.ok:
        logger.info(f"✅ C{m}: bracket supports match on {report.pairs_checked} pairs")
    else:
        logger.warning(f"⚠️ C{m}: {len(report.mismatches)} support mismatches")
    return report
