"""
Inner automorphisms of order 3 (types A3I..A3IV) and the 3-symmetric spaces they define.

sigma = Ad(exp(2 pi sqrt(-1) H)) with
  A3I, A3III, A3IV:  H = (1/3) m_i H_i        (m_i = 1, 2, 3)
  A3II:              H = (1/3) (H_i + H_j)    (m_i = m_j = 1)
where a_j(H_i) = delta_ij / m_i. The fixed algebra k holds h and every root
with a(H) integral; m is its Killing complement.
"""
import difflib
import itertools
import logging
import math
import re
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from chevalley import weyl_structure_table
from compact import CompactAlgebra, build_compact, root_value, torus_adjoint
from config import PRESET_CATALOG_VERSION, QK_TOL
from errors import ConsistencyError, InvalidInputError
from exactmath import frac_str, solve_rational
from rootsys import (DynkinType, Root, RootSystem, build_root_system, cartan_from_gram,
                     connected_components, identify_cartan)

logger = logging.getLogger(__name__)

KIND_MARK = {"A3I": 1, "A3II": 1, "A3III": 2, "A3IV": 3}
MARK_KIND = {1: "A3I", 2: "A3III", 3: "A3IV"}

COMPACT_NAMES = {
    "A": lambda n: f"su({n + 1})",
    "B": lambda n: f"so({2 * n + 1})",
    "C": lambda n: f"sp({n})",
    "D": lambda n: f"so({2 * n})",
    "E": lambda n: f"e{n}",
    "F": lambda n: f"f{n}",
    "G": lambda n: f"g{n}",
}
SERIES_ORDER = "ABCDEFG"


@dataclass(frozen=True)
class Auto3Spec:
    """Automorphism kind (A3I..A3IV) plus node indices (1-based, Bourbaki numbering)"""

    kind: str
    indices: Tuple[int, ...]

    def __post_init__(self):
        if self.kind not in KIND_MARK:
            raise InvalidInputError(f"unknown automorphism kind {self.kind!r}; expected one of {', '.join(KIND_MARK)}")
        indices = tuple(int(i) for i in self.indices)
        object.__setattr__(self, "indices", indices)
        expected = 2 if self.kind == "A3II" else 1
        if len(indices) != expected:
            raise InvalidInputError(f"{self.kind} takes {expected} node index(es), got {len(indices)}")
        if self.kind == "A3II" and indices[0] == indices[1]:
            raise InvalidInputError("A3II needs two distinct nodes i != j")

    @classmethod
    def parse(cls, kind: str, *indices) -> "Auto3Spec":
        try:
            values = tuple(int(i) for i in indices)
        except (TypeError, ValueError):
            raise InvalidInputError(f"node indices must be integers, got {indices}") from None
        return cls(kind.strip().upper(), values)

    def validate(self, rs: RootSystem) -> None:
        """Check the mark constraint of the kind against the root system"""
        need = KIND_MARK[self.kind]
        for i in self.indices:
            if not 1 <= i <= rs.rank:
                raise InvalidInputError(f"node index {i} out of range 1..{rs.rank} for {rs.type}")
            if rs.marks[i - 1] != need:
                raise InvalidInputError(
                    f"{self.kind} requires m_i = {need} but m_{i} = {rs.marks[i - 1]} on {rs.type}")

    def __str__(self) -> str:
        return f"{self.kind}:{':'.join(map(str, self.indices))}"


@dataclass(frozen=True)
class IsotropyType:
    """Simple factors of the fixed algebra plus the rank of its center"""

    factors: Tuple[DynkinType, ...]
    torus_rank: int

    def label(self) -> str:
        parts = [str(f) for f in self.factors]
        if self.torus_rank:
            parts.append(f"T{self.torus_rank}")
        return " + ".join(parts)

    def compact_name(self) -> str:
        parts = [COMPACT_NAMES[f.series](f.rank) for f in self.factors]
        if self.torus_rank == 1:
            parts.append("u(1)")
        elif self.torus_rank > 1:
            parts.append(f"u(1)^{self.torus_rank}")
        return " + ".join(parts)

    def __str__(self) -> str:
        return self.label()


@dataclass(frozen=True)
class ThreeSymSpace:
    name: str
    algebra: CompactAlgebra = field(repr=False)
    spec: Auto3Spec
    H: Tuple[Fraction, ...]
    alpha_H: Dict[Root, Fraction] = field(repr=False)
    k_idx: Tuple[int, ...] = field(repr=False)
    m_idx: Tuple[int, ...] = field(repr=False)
    pi_H: Tuple[Root, ...]
    delta_H: Tuple[Root, ...]
    isotropy: IsotropyType
    J: np.ndarray = field(repr=False, compare=False)

    @property
    def root_system(self) -> RootSystem:
        return self.algebra.root_system

    @property
    def dim_m(self) -> int:
        return len(self.m_idx)

    @cached_property
    def m_labels(self) -> List[str]:
        return [self.algebra.basis.label(i) for i in self.m_idx]

    @cached_property
    def m_tensor(self) -> np.ndarray:
        """T[p, q, :] = [e_p, e_q] for p, q running over the m basis"""
        m = list(self.m_idx)
        t = self.algebra.structure_tensor[np.ix_(m, m, range(self.algebra.dim))]
        t.setflags(write=False)
        return t

    @cached_property
    def curvature_weights(self) -> np.ndarray:
        """-B with the m block scaled by 1/4 (k and m are B-orthogonal)"""
        g = -np.array(self.algebra.killing_matrix)
        m = list(self.m_idx)
        g[np.ix_(m, m)] *= 0.25
        g.setflags(write=False)
        return g

    def to_dict(self) -> dict:
        histogram = Counter(frac_str(self.alpha_H[r]) for r in self.root_system.positive)
        return {
            "space": self.name,
            "type": str(self.root_system.type),
            "spec": {"kind": self.spec.kind, "indices": list(self.spec.indices)},
            "H": [frac_str(h) for h in self.H],
            "piH": [list(r.coords) for r in self.pi_H],
            "deltaH": [list(r.coords) for r in self.delta_H],
            "isotropy": self.isotropy.label(),
            "isotropy_compact": self.isotropy.compact_name(),
            "dim_k": len(self.k_idx),
            "dim_m": self.dim_m,
            "alphaH": dict(sorted(histogram.items())),
        }


def fundamental_coweight(rs: RootSystem, i: int) -> Tuple[Fraction, ...]:
    """H_i over {H_{a_k}}: a_j(H_i) = delta_ij / m_i, solved exactly"""
    rhs = [Fraction(1, rs.marks[i - 1]) if k == i - 1 else Fraction(0) for k in range(rs.rank)]
    solution = solve_rational(rs.gram, rhs)
    if solution is None:
        raise ConsistencyError(f"gram matrix of {rs.type} is singular")
    return tuple(solution)


def automorphism_element(rs: RootSystem, spec: Auto3Spec) -> Tuple[Fraction, ...]:
    spec.validate(rs)
    if spec.kind == "A3II":
        hi, hj = (fundamental_coweight(rs, i) for i in spec.indices)
        return tuple((x + y) / 3 for x, y in zip(hi, hj))
    i = spec.indices[0]
    return tuple(Fraction(rs.marks[i - 1], 3) * x for x in fundamental_coweight(rs, i))


def _table_pi(rs: RootSystem, spec: Auto3Spec) -> Tuple[Root, ...]:
    """Pi(H): simple roots minus the dropped nodes, plus -mu for A3IV"""
    dropped = set(spec.indices)
    roots = [s for k, s in enumerate(rs.simple, start=1) if k not in dropped]
    if spec.kind == "A3IV":
        roots.append(-rs.maximal_root)
    return tuple(roots)


def _check_generates(rs: RootSystem, pi: Sequence[Root], delta: Sequence[Root]) -> None:
    """Every root of the fixed algebra is a same-signed integer combination of Pi(H)"""
    if not pi:
        if delta:
            raise ConsistencyError("empty Pi(H) but roots are fixed")
        return
    matrix = [[r.coords[k] for r in pi] for k in range(rs.rank)]
    for root in delta:
        c = solve_rational(matrix, root.coords)
        if c is None or any(x.denominator != 1 for x in c) or not (all(x >= 0 for x in c) or all(x <= 0 for x in c)):
            raise ConsistencyError(f"{root.label()} is not generated by Pi(H) = {[r.label() for r in pi]}")


def isotropy_of(rs: RootSystem, pi: Sequence[Root]) -> IsotropyType:
    factors: List[DynkinType] = []
    if pi:
        gram = [[rs.inner(a, b) for b in pi] for a in pi]
        cartan = cartan_from_gram(gram)
        for block in connected_components(cartan):
            sub = [[cartan[i][j] for j in block] for i in block]
            factors.append(identify_cartan(sub))
    factors.sort(key=lambda t: (SERIES_ORDER.index(t.series), t.rank))
    return IsotropyType(tuple(factors), rs.rank - len(pi))


def _j_matrix(alg: CompactAlgebra, alpha_H: Dict[Root, Fraction], m_idx: Sequence[int]) -> np.ndarray:
    """J on m in the (U0, U1) coordinates of each root plane; entries are 0, +-1"""
    position = {b: p for p, b in enumerate(m_idx)}
    J = np.zeros((len(m_idx), len(m_idx)), dtype=int)
    for ridx, root in enumerate(alg.root_system.positive):
        value = alpha_H[root] - math.floor(alpha_H[root])
        if value == 0:
            continue
        if value not in (Fraction(1, 3), Fraction(2, 3)):
            raise ConsistencyError(f"a(H) = {alpha_H[root]} on {root.label()} is not in {{1/3, 2/3}} mod 1")
        sign = 1 if value == Fraction(1, 3) else -1
        p0, p1 = position[alg.basis.u_index(ridx, 0)], position[alg.basis.u_index(ridx, 1)]
        J[p1, p0] = sign   # J U0 = sign U1
        J[p0, p1] = -sign  # J U1 = -sign U0
    return J


def build_auto3(alg: CompactAlgebra, spec: Auto3Spec, name: Optional[str] = None) -> ThreeSymSpace:
    """Split the compact form under the order-3 automorphism of an Auto3Spec"""
    rs = alg.root_system
    H = automorphism_element(rs, spec)
    alpha_H = {r: root_value(rs, r, H) for r in rs.positive}
    for root, value in alpha_H.items():
        if value.denominator not in (1, 3):
            raise ConsistencyError(f"a(H) = {value} on {root.label()} is not a multiple of 1/3")

    delta_H = tuple(r for r in rs.positive if alpha_H[r].denominator == 1)
    pi_H = _table_pi(rs, spec)
    _check_generates(rs, pi_H, delta_H)

    k_idx, m_idx = list(range(rs.rank)), []
    for ridx, root in enumerate(rs.positive):
        target = k_idx if alpha_H[root].denominator == 1 else m_idx
        target.extend([alg.basis.u_index(ridx, 0), alg.basis.u_index(ridx, 1)])

    isotropy = isotropy_of(rs, pi_H)
    J = _j_matrix(alg, alpha_H, m_idx)
    J.setflags(write=False)
    space = ThreeSymSpace(
        name=name or f"{rs.type}:{spec}",
        algebra=alg,
        spec=spec,
        H=H,
        alpha_H=alpha_H,
        k_idx=tuple(sorted(k_idx)),
        m_idx=tuple(m_idx),
        pi_H=pi_H,
        delta_H=delta_H,
        isotropy=isotropy,
        J=J,
    )
    logger.debug(f"✅ {space.name}: isotropy {isotropy.label()}, dim m = {space.dim_m}")
    return space


def isotropy_type(space: ThreeSymSpace) -> IsotropyType:
    return space.isotropy


def canonical_J(space: ThreeSymSpace) -> np.ndarray:
    """A writable copy of J, rebuilt from a(H) (JU0 = U1 where a(H) = 1/3, JU0 = -U1 where a(H) = 2/3)"""
    return _j_matrix(space.algebra, space.alpha_H, space.m_idx)


def sigma_matrix(space: ThreeSymSpace) -> np.ndarray:
    """sigma on all of g"""
    return torus_adjoint(space.algebra, space.H, 1)


def numeric_J(space: ThreeSymSpace) -> np.ndarray:
    """(2 sigma|m + Id) / sqrt(3), for cross-checking the canonical J"""
    m = list(space.m_idx)
    sigma_m = sigma_matrix(space)[np.ix_(m, m)]
    return (2 * sigma_m + np.eye(len(m))) / math.sqrt(3)


@dataclass
class QuasiKahlerReport:
    pairs_checked: int = 0
    k_part_violations: List[Tuple[int, int]] = field(default_factory=list)
    m_part_violations: List[Tuple[int, int]] = field(default_factory=list)
    natural_reductivity_violations: int = 0
    reductivity_violations: int = 0
    j_squared_ok: bool = True
    j_orthogonal_ok: bool = True
    j_matches_sigma: bool = True
    sigma_order_three: bool = True

    @property
    def ok(self) -> bool:
        return (not self.k_part_violations and not self.m_part_violations
                and self.natural_reductivity_violations == 0 and self.reductivity_violations == 0
                and self.j_squared_ok and self.j_orthogonal_ok and self.j_matches_sigma and self.sigma_order_three)

    def to_dict(self) -> dict:
        return {
            "pairs_checked": self.pairs_checked,
            "k_part_violations": [list(p) for p in self.k_part_violations],
            "m_part_violations": [list(p) for p in self.m_part_violations],
            "natural_reductivity_violations": self.natural_reductivity_violations,
            "reductivity_violations": self.reductivity_violations,
            "j_squared_ok": self.j_squared_ok,
            "j_orthogonal_ok": self.j_orthogonal_ok,
            "j_matches_sigma": self.j_matches_sigma,
            "sigma_order_three": self.sigma_order_three,
            "ok": self.ok,
        }


def verify_quasi_kahler(space: ThreeSymSpace, J: Optional[np.ndarray] = None, tol: float = QK_TOL) -> QuasiKahlerReport:
    """[JX,JY]_k = [X,Y]_k and [JX,Y]_m = -J[X,Y]_m on all m-basis pairs, plus the split checks"""
    J = space.J if J is None else np.asarray(J)
    alg = space.algebra
    t = alg.structure_tensor
    k, m = list(space.k_idx), list(space.m_idx)
    tm = space.m_tensor
    dm = len(m)
    report = QuasiKahlerReport(pairs_checked=dm * (dm - 1) // 2)

    plain_k, plain_m = tm[:, :, k], tm[:, :, m]
    jj = np.einsum("pi,qj,pqk->ijk", J, J, tm)
    jx_y = np.einsum("pi,pjk->ijk", J, plain_m)
    j_of = -np.einsum("lk,ijk->ijl", J, plain_m)
    k_res = np.abs(jj[:, :, k] - plain_k).max(axis=2)
    m_res = np.abs(jx_y - j_of).max(axis=2)
    for i in range(dm):
        for j in range(i + 1, dm):
            if k_res[i, j] > tol:
                report.k_part_violations.append((i, j))
            if m_res[i, j] > tol:
                report.m_part_violations.append((i, j))

    # <[X,Y]_m, Z> + <Y, [X,Z]_m> = 0; the metric is a multiple of the identity on m
    nat = plain_m + np.transpose(plain_m, (0, 2, 1))
    report.natural_reductivity_violations = int((np.abs(nat) > tol).sum())
    report.reductivity_violations = int((t[np.ix_(k, m, k)] != 0).sum() + (t[np.ix_(k, k, m)] != 0).sum())

    identity = np.eye(dm)
    report.j_squared_ok = bool(np.array_equal(J @ J, -identity.astype(J.dtype))) if J.dtype.kind == "i" \
        else bool(np.abs(J @ J + identity).max() <= tol)
    report.j_orthogonal_ok = bool(np.abs(J.T @ J - identity).max() <= tol)
    report.j_matches_sigma = bool(np.abs(numeric_J(space) - space.J).max() <= tol)
    sigma = sigma_matrix(space)
    report.sigma_order_three = bool(np.abs(np.linalg.matrix_power(sigma, 3) - np.eye(alg.dim)).max() <= 1e-12
                                    and np.array_equal(sigma[np.ix_(k, k)], np.eye(len(k))))
    if report.ok:
        logger.info(f"✅ {space.name}: quasi-Kahler identities hold on {report.pairs_checked} pairs")
    else:
        logger.warning(f"⚠️ {space.name}: quasi-Kahler check reports violations")
    return report


def diagram_automorphisms(rs: RootSystem) -> List[Tuple[int, ...]]:
    """Node permutations preserving the Cartan matrix (0-based), found by backtracking"""
    n = rs.rank
    a = rs.cartan
    found: List[Tuple[int, ...]] = []

    def extend(perm: List[int], used: set) -> None:
        i = len(perm)
        if i == n:
            found.append(tuple(perm))
            return
        for image in range(n):
            if image in used or a[image][image] != a[i][i]:
                continue
            if all(a[perm[j]][image] == a[j][i] and a[image][perm[j]] == a[i][j] for j in range(i)):
                perm.append(image)
                used.add(image)
                extend(perm, used)
                perm.pop()
                used.discard(image)

    extend([], set())
    return found


def enumerate_order3(rs: RootSystem, dedup: bool = False) -> List[Auto3Spec]:
    """Every kind and index choice allowed by the marks; optionally one per diagram-symmetry orbit"""
    specs = [Auto3Spec(MARK_KIND[m], (i,)) for i, m in enumerate(rs.marks, start=1) if m in MARK_KIND]
    ones = [i for i, m in enumerate(rs.marks, start=1) if m == 1]
    specs.extend(Auto3Spec("A3II", pair) for pair in itertools.combinations(ones, 2))
    if not dedup:
        return specs

    perms = diagram_automorphisms(rs)
    kept: List[Auto3Spec] = []
    seen = set()
    for spec in specs:
        orbit = {(spec.kind, tuple(sorted(p[i - 1] + 1 for i in spec.indices))) for p in perms}
        if seen & orbit:
            continue
        seen |= orbit
        kept.append(spec)
    return kept


# --- preset catalog ---

_PRESET_RE = re.compile(r"^cp(\d+)-(sp|su)$")
_EXPLICIT_RE = re.compile(r"^([A-Ga-g]\d+):(A3I{1,3}|A3IV):(\d+)(?::(\d+))?$", re.IGNORECASE)
PRESET_EXAMPLES = ("cp3-sp", "cp5-sp", "cp7-sp", "cp2-su", "cp3-su", "s6", "f6")


def resolve_space(name: str) -> Tuple[DynkinType, Auto3Spec]:
    """Catalog name or explicit TYPE:KIND:i[:j] to (type, spec)"""
    text = (name or "").strip()
    lowered = text.lower()
    if lowered == "s6":
        return DynkinType("G", 2), Auto3Spec("A3IV", (1,))
    if lowered == "f6":
        return DynkinType("A", 2), Auto3Spec("A3II", (1, 2))
    match = _PRESET_RE.match(lowered)
    if match:
        n, flavor = int(match.group(1)), match.group(2)
        if flavor == "su":
            return DynkinType("A", n), Auto3Spec("A3I", (1,))
        if n % 2 == 0 or n < 3:
            raise InvalidInputError(f"cp{n}-sp needs n = 2m - 1 with m >= 2 (n odd, n >= 3)")
        return DynkinType("C", (n + 1) // 2), Auto3Spec("A3III", (1,))
    match = _EXPLICIT_RE.match(text)
    if match:
        indices = [match.group(3)] + ([match.group(4)] if match.group(4) else [])
        return DynkinType.parse(match.group(1)), Auto3Spec.parse(match.group(2), *indices)
    suggestions = difflib.get_close_matches(lowered, PRESET_EXAMPLES, n=3, cutoff=0.4)
    hint = f"; did you mean {', '.join(suggestions)}?" if suggestions else ""
    raise InvalidInputError(
        f"unknown space {name!r} (catalog v{PRESET_CATALOG_VERSION}: cp{{n}}-sp, cp{{n}}-su, s6, f6, or TYPE:KIND:i[:j]){hint}")


@lru_cache(maxsize=None)
def build_algebra(dtype: DynkinType) -> CompactAlgebra:
    rs = build_root_system(dtype)
    return build_compact(rs, weyl_structure_table(rs))


@lru_cache(maxsize=32)
def build_space(name: str) -> ThreeSymSpace:
    """Resolve a space name and build it (cached)"""
    dtype, spec = resolve_space(name)
    return build_auto3(build_algebra(dtype), spec, name=name)
