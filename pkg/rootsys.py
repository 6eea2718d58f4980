"""
Root systems of the complex simple Lie algebras, built from the Dynkin type.

Roots are integer coordinate vectors over the simple roots (Bourbaki node
numbering). The inner product is the one induced by the Killing form,
fixed by the identity <a,b> = sum over all roots g of <a,g><b,g>.
"""
import logging
import re
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from errors import ConsistencyError, InvalidInputError
from exactmath import frac_str, is_positive_definite

logger = logging.getLogger(__name__)

# Smallest admissible rank for each series (E is restricted to 6..8)
MIN_RANK = {"A": 1, "B": 2, "C": 2, "D": 3, "E": 6, "F": 4, "G": 2}
FIXED_RANKS = {"E": (6, 7, 8), "F": (4,), "G": (2,)}

DUAL_COXETER = {"E": {6: 12, 7: 18, 8: 30}, "F": {4: 9}, "G": {2: 4}}

# Expected |positive roots| per series, used as a construction check
POSITIVE_COUNT = {
    "A": lambda l: l * (l + 1) // 2,
    "B": lambda l: l * l,
    "C": lambda l: l * l,
    "D": lambda l: l * (l - 1),
    "E": lambda l: {6: 36, 7: 63, 8: 120}[l],
    "F": lambda l: 24,
    "G": lambda l: 6,
}

_TYPE_RE = re.compile(r"^\s*([A-Ga-g])\s*_?\s*(\d+)\s*$")


def _order_key(coords: Sequence[int]) -> Tuple[int, Tuple[int, ...]]:
    """Height first, then larger leading coefficients first (a1 before a2, a1+a2 before a2+a3)"""
    return sum(coords), tuple(-c for c in coords)


@dataclass(frozen=True)
class DynkinType:
    """Series letter plus rank, e.g. C3 or G2"""

    series: str
    rank: int

    def __post_init__(self):
        if self.series not in MIN_RANK:
            raise InvalidInputError(f"unknown series {self.series!r}; expected one of {''.join(MIN_RANK)}")
        if not isinstance(self.rank, int) or self.rank < MIN_RANK[self.series]:
            raise InvalidInputError(
                f"invalid rank {self.rank} for series {self.series} (needs rank >= {MIN_RANK[self.series]})")
        allowed = FIXED_RANKS.get(self.series)
        if allowed and self.rank not in allowed:
            raise InvalidInputError(
                f"invalid rank {self.rank} for series {self.series} (allowed: {', '.join(map(str, allowed))})")

    @classmethod
    def parse(cls, text: str) -> "DynkinType":
        """Parse "C3", "c_3" or "G2" into a DynkinType"""
        match = _TYPE_RE.match(text or "")
        if not match:
            raise InvalidInputError(f"cannot parse Dynkin type {text!r} (expected e.g. A2, C3, G2)")
        return cls(match.group(1).upper(), int(match.group(2)))

    def __str__(self) -> str:
        return f"{self.series}{self.rank}"


@dataclass(frozen=True)
class Root:
    """A root as integer coefficients over the simple roots"""

    coords: Tuple[int, ...]

    def __post_init__(self):
        coords = tuple(int(c) for c in self.coords)
        object.__setattr__(self, "coords", coords)
        if any(c > 0 for c in coords) and any(c < 0 for c in coords):
            raise InvalidInputError(f"mixed-sign coefficients {coords} cannot be a root")

    @property
    def height(self) -> int:
        return sum(self.coords)

    @property
    def rank(self) -> int:
        return len(self.coords)

    def is_positive(self) -> bool:
        return self.height > 0

    def sort_key(self) -> Tuple[int, Tuple[int, ...]]:
        return _order_key(self.coords)

    def __neg__(self) -> "Root":
        return Root(tuple(-c for c in self.coords))

    def vector_add(self, other: "Root") -> Tuple[int, ...]:
        return tuple(a + b for a, b in zip(self.coords, other.coords))

    def vector_sub(self, other: "Root") -> Tuple[int, ...]:
        return tuple(a - b for a, b in zip(self.coords, other.coords))

    def label(self) -> str:
        """Human label such as "3a1+2a2" or "-a1-a2" """
        parts = []
        for k, c in enumerate(self.coords, start=1):
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = "" if abs(c) == 1 else str(abs(c))
            parts.append(f"{sign}{mag}a{k}")
        text = "".join(parts)
        return text[1:] if text.startswith("+") else text

    def __str__(self) -> str:
        return self.label()


def _series_gram(dtype: DynkinType) -> List[List[Fraction]]:
    """Symmetrized Cartan data (any positive multiple of the Killing inner product)"""
    n = dtype.rank
    g = [[Fraction(0)] * n for _ in range(n)]
    half = Fraction(1, 2)

    def link(i, j, value):
        g[i][j] = g[j][i] = Fraction(value)

    s = dtype.series
    if s == "A":
        for i in range(n):
            g[i][i] = Fraction(2)
        for i in range(n - 1):
            link(i, i + 1, -1)
    elif s == "B":
        for i in range(n):
            g[i][i] = Fraction(2)
        g[n - 1][n - 1] = Fraction(1)
        for i in range(n - 1):
            link(i, i + 1, -1)
    elif s == "C":
        for i in range(n):
            g[i][i] = Fraction(1)
        g[n - 1][n - 1] = Fraction(2)
        for i in range(n - 2):
            link(i, i + 1, -half)
        link(n - 2, n - 1, -1)
    elif s == "D":
        for i in range(n):
            g[i][i] = Fraction(2)
        for i in range(n - 2):
            link(i, i + 1, -1)
        link(n - 3, n - 1, -1)
    elif s == "E":
        for i in range(n):
            g[i][i] = Fraction(2)
        for i, j in ((1, 3), (3, 4), (4, 5), (5, 6), (2, 4), (6, 7), (7, 8)):
            if i <= n and j <= n:
                link(i - 1, j - 1, -1)
    elif s == "F":
        g[0][0] = g[1][1] = Fraction(2)
        g[2][2] = g[3][3] = Fraction(1)
        link(0, 1, -1)
        link(1, 2, -1)
        link(2, 3, -half)
    elif s == "G":
        g[0][0], g[1][1] = Fraction(1), Fraction(3)
        link(0, 1, Fraction(-3, 2))
    return g


def cartan_from_gram(gram: Sequence[Sequence[Fraction]]) -> Tuple[Tuple[int, ...], ...]:
    """Cartan matrix A[i][j] = 2<a_i,a_j>/<a_j,a_j>"""
    n = len(gram)
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            value = 2 * Fraction(gram[i][j]) / Fraction(gram[j][j])
            if value.denominator != 1:
                raise ConsistencyError(f"non-integral Cartan entry {value} at ({i}, {j})")
            row.append(int(value))
        rows.append(tuple(row))
    return tuple(rows)


def enumerate_positive_roots(cartan: Sequence[Sequence[int]]) -> List[Tuple[int, ...]]:
    """Positive roots of a Cartan matrix by height closure, sorted by _order_key.

    A root b extends by a_i when the a_i-string through b continues upward:
    q = r - <b, a_i^v> > 0 with r the number of downward steps.
    """
    n = len(cartan)
    simples = [tuple(1 if k == i else 0 for k in range(n)) for i in range(n)]
    found = set(simples)
    layer = list(simples)
    while layer:
        nxt = set()
        for beta in layer:
            for i in range(n):
                r = 0
                down = list(beta)
                while True:
                    down[i] -= 1
                    if tuple(down) in found:
                        r += 1
                    else:
                        break
                pairing = sum(beta[j] * cartan[j][i] for j in range(n))
                if r - pairing > 0:
                    up = list(beta)
                    up[i] += 1
                    nxt.add(tuple(up))
        nxt -= found
        found |= nxt
        layer = sorted(nxt)
    return sorted(found, key=_order_key)


@dataclass(frozen=True)
class RootSystem:
    type: DynkinType
    simple: Tuple[Root, ...]
    positive: Tuple[Root, ...]
    cartan: Tuple[Tuple[int, ...], ...]
    gram: Tuple[Tuple[Fraction, ...], ...]
    maximal_root: Root
    marks: Tuple[int, ...]
    _index: Dict[Tuple[int, ...], int] = field(default_factory=dict, repr=False, compare=False)

    @property
    def rank(self) -> int:
        return self.type.rank

    @cached_property
    def roots(self) -> Tuple[Root, ...]:
        """All of Delta: positive roots followed by their negatives"""
        return self.positive + tuple(-r for r in self.positive)

    @cached_property
    def _root_set(self) -> frozenset:
        return frozenset(r.coords for r in self.roots)

    def is_root(self, coords) -> bool:
        coords = coords.coords if isinstance(coords, Root) else tuple(coords)
        return coords in self._root_set

    def index(self, root) -> int:
        """Position of a positive root in RootSystem.positive"""
        coords = root.coords if isinstance(root, Root) else tuple(root)
        try:
            return self._index[coords]
        except KeyError:
            raise InvalidInputError(f"{Root(coords)} is not a positive root of {self.type}") from None

    def inner(self, a, b) -> Fraction:
        """Killing-normalized inner product of two arbitrary root-lattice vectors"""
        x = a.coords if isinstance(a, Root) else a
        y = b.coords if isinstance(b, Root) else b
        total = Fraction(0)
        for i, xi in enumerate(x):
            if xi:
                row = self.gram[i]
                total += xi * sum((row[j] * yj for j, yj in enumerate(y) if yj), Fraction(0))
        return total

    def to_dict(self) -> dict:
        return {
            "type": str(self.type),
            "rank": self.rank,
            "simple": list(range(1, self.rank + 1)),
            "positive": [{"coords": list(r.coords), "height": r.height, "label": r.label()}
                         for r in self.positive],
            "cartan": [list(row) for row in self.cartan],
            "gram": [[frac_str(x) for x in row] for row in self.gram],
            "maximal_root": list(self.maximal_root.coords),
            "marks": list(self.marks),
            "dual_coxeter_number": dual_coxeter_number(self.type),
        }


def dual_coxeter_number(dtype: DynkinType) -> int:
    l = dtype.rank
    if dtype.series == "A":
        return l + 1
    if dtype.series == "B":
        return 2 * l - 1
    if dtype.series == "C":
        return l + 1
    if dtype.series == "D":
        return 2 * l - 2
    return DUAL_COXETER[dtype.series][l]


def _killing_scale(base: List[List[Fraction]], positive: List[Tuple[int, ...]]) -> Fraction:
    """Solve c from c*G0 = c^2*S where S_ab = sum over Delta of G0(a,g)G0(b,g)"""
    n = len(base)

    def pair(i, coords):
        return sum((base[i][j] * c for j, c in enumerate(coords) if c), Fraction(0))

    pairings = [[pair(i, g) for g in positive] for i in range(n)]
    s = [[2 * sum((x * y for x, y in zip(pairings[a], pairings[b])), Fraction(0)) for b in range(n)]
         for a in range(n)]
    scale = base[0][0] / s[0][0]
    for a in range(n):
        for b in range(n):
            if base[a][b] != scale * s[a][b]:
                raise ConsistencyError(f"Killing self-consistency fails at ({a + 1}, {b + 1})")
    return scale


@lru_cache(maxsize=None)
def build_root_system(dtype: DynkinType) -> RootSystem:
    """Construct the root system of a Dynkin type with Killing-normalized gram"""
    base = _series_gram(dtype)
    cartan = cartan_from_gram(base)
    coords = enumerate_positive_roots(cartan)

    expected = POSITIVE_COUNT[dtype.series](dtype.rank)
    if len(coords) != expected:
        raise ConsistencyError(f"{dtype}: found {len(coords)} positive roots, expected {expected}")

    scale = _killing_scale(base, coords)
    gram = tuple(tuple(scale * x for x in row) for row in base)
    if not is_positive_definite(gram):
        raise ConsistencyError(f"{dtype}: gram matrix is not positive definite")

    positive = tuple(Root(c) for c in coords)
    simple = tuple(Root(tuple(1 if k == i else 0 for k in range(dtype.rank))) for i in range(dtype.rank))
    maximal = positive[-1]
    if len(positive) > 1 and positive[-2].height == maximal.height:
        raise ConsistencyError(f"{dtype}: maximal root is not unique")

    rs = RootSystem(
        type=dtype,
        simple=simple,
        positive=positive,
        cartan=cartan,
        gram=gram,
        maximal_root=maximal,
        marks=maximal.coords,
        _index={r.coords: k for k, r in enumerate(positive)},
    )

    theta_sq = rs.inner(maximal, maximal)
    if theta_sq != Fraction(1, dual_coxeter_number(dtype)):
        raise ConsistencyError(f"{dtype}: <theta,theta> = {theta_sq}, expected 1/{dual_coxeter_number(dtype)}")

    logger.debug(f"✅ Built {dtype}: {len(positive)} positive roots, mu = {maximal.label()}")
    return rs


def _as_root(rs: RootSystem, value) -> Root:
    root = value if isinstance(value, Root) else Root(tuple(value))
    if root.rank != rs.rank or not rs.is_root(root):
        raise InvalidInputError(f"{root.label() or '0'} is not a root of {rs.type}")
    return root


def root_string(rs: RootSystem, alpha, beta) -> Tuple[int, int]:
    """(p, q) with beta + n*alpha a root exactly for p <= n <= q"""
    alpha, beta = _as_root(rs, alpha), _as_root(rs, beta)
    if alpha == beta or alpha == -beta:
        raise InvalidInputError(f"root string needs beta != +-alpha (got {alpha.label()}, {beta.label()})")
    p = 0
    while rs.is_root(tuple(b + (p - 1) * a for a, b in zip(alpha.coords, beta.coords))):
        p -= 1
    q = 0
    while rs.is_root(tuple(b + (q + 1) * a for a, b in zip(alpha.coords, beta.coords))):
        q += 1
    return p, q


def marks(rs: RootSystem) -> Tuple[int, ...]:
    """Coefficients of the maximal root over the simple roots"""
    return rs.marks


# --- recognition of Cartan blocks (used for isotropy types) ---

RECOGNIZED = (("A", 1), ("B", 3), ("C", 2), ("D", 4), ("E", 6), ("F", 4), ("G", 2))


def _relative_lengths(cartan: Sequence[Sequence[int]]) -> Tuple[Fraction, ...]:
    """Squared lengths of a connected Cartan block, scaled so the shortest is 1"""
    n = len(cartan)
    lengths: List[Optional[Fraction]] = [None] * n
    lengths[0] = Fraction(1)
    queue = deque([0])
    while queue:
        i = queue.popleft()
        for j in range(n):
            if j != i and cartan[i][j] and lengths[j] is None:
                # d_j A_ij = d_i A_ji
                lengths[j] = lengths[i] * Fraction(cartan[j][i], cartan[i][j])
                queue.append(j)
    smallest = min(lengths)
    return tuple(sorted(x / smallest for x in lengths))


def cartan_signature(cartan: Sequence[Sequence[int]]) -> tuple:
    n = len(cartan)
    bond = max((cartan[i][j] * cartan[j][i] for i in range(n) for j in range(n) if i != j), default=0)
    return (n, len(enumerate_positive_roots(cartan)), _relative_lengths(cartan), bond)


@lru_cache(maxsize=None)
def _catalog_signature(series: str, rank: int) -> tuple:
    return cartan_signature(cartan_from_gram(_series_gram(DynkinType(series, rank))))


def connected_components(cartan: Sequence[Sequence[int]]) -> List[List[int]]:
    n = len(cartan)
    seen, blocks = set(), []
    for start in range(n):
        if start in seen:
            continue
        block, stack = [], [start]
        seen.add(start)
        while stack:
            i = stack.pop()
            block.append(i)
            for j in range(n):
                if j not in seen and (cartan[i][j] or cartan[j][i]):
                    seen.add(j)
                    stack.append(j)
        blocks.append(sorted(block))
    return blocks


def identify_cartan(cartan: Sequence[Sequence[int]]) -> DynkinType:
    """Name a connected Cartan block (B2 reads as C2, D3 as A3)"""
    signature = cartan_signature(cartan)
    rank = len(cartan)
    for series, lowest in RECOGNIZED:
        if rank < lowest or (series in FIXED_RANKS and rank not in FIXED_RANKS[series]):
            continue
        if _catalog_signature(series, rank) == signature:
            return DynkinType(series, rank)
    raise ConsistencyError(f"unrecognizable Cartan block {[list(r) for r in cartan]}")
