"""
Structure constants N_{a,b} of the root vectors.

Two layers:
  * integer Chevalley constants N = +-(r+1), signs fixed by the
    extraspecial-pair method and checked against the Jacobi identity;
  * the Weyl basis ([E_a,E_-a] = H_a, B(E_a,E_-a) = 1) where
    N_{a,b}^2 = q(1-p)/2 <a,a>, stored as sign * sqrt(rational).
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Mapping, Optional, Tuple

from errors import ConsistencyError, ExactnessError, InvalidInputError
from exactmath import Surd, frac_str
from rootsys import Root, RootSystem, root_string

logger = logging.getLogger(__name__)

Coords = Tuple[int, ...]


def _add(a: Coords, b: Coords) -> Coords:
    return tuple(x + y for x, y in zip(a, b))


def _neg(a: Coords) -> Coords:
    return tuple(-x for x in a)


def _positive(a: Coords) -> bool:
    return sum(a) > 0


class _ExtraspecialBuilder:
    """Integer constants on positive pairs, extended to all of Delta by the standard identities"""

    def __init__(self, rs: RootSystem, signs: Mapping[Coords, int]):
        self.rs = rs
        self.signs = signs
        self.table: Dict[Tuple[Coords, Coords], int] = {}

    def sq(self, a: Coords) -> Fraction:
        return self.rs.inner(a, a)

    def value(self, g: Coords, d: Coords) -> int:
        s = _add(g, d)
        if not any(s) or not self.rs.is_root(s):
            return 0
        gp, dp = _positive(g), _positive(d)
        if gp and dp:
            return self.table[(g, d)]
        if not gp and not dp:
            return -self.value(_neg(g), _neg(d))
        if not gp:
            return -self.value(d, g)
        # g > 0 > d
        if _positive(s):
            result = -(self.sq(s) / self.sq(g)) * self.value(_neg(d), s)
        else:
            e = _neg(s)
            result = (self.sq(e) / self.sq(d)) * self.value(e, g)
        if result.denominator != 1:
            raise ConsistencyError(f"non-integral constant N({g}, {d}) = {result}")
        return int(result)

    def _string_below(self, a: Coords, b: Coords) -> int:
        r = 0
        while self.rs.is_root(tuple(y - (r + 1) * x for x, y in zip(a, b))):
            r += 1
        return r

    def build(self) -> None:
        rs = self.rs
        order = {r.coords: k for k, r in enumerate(rs.positive)}
        for xi_root in rs.positive:
            xi = xi_root.coords
            pairs = []
            for a_root in rs.positive:
                a = a_root.coords
                b = tuple(x - y for x, y in zip(xi, a))
                if b in order and order[a] < order[b]:
                    pairs.append((a, b))
            if not pairs:
                continue
            a0, b0 = pairs[0]
            sign = self.signs.get(xi, 1)
            if sign not in (1, -1):
                raise InvalidInputError(f"extraspecial sign for {Root(xi).label()} must be +1 or -1")
            n0 = sign * (self._string_below(a0, b0) + 1)
            self._set(a0, b0, n0)
            xi_sq = self.sq(xi)
            for a, b in pairs[1:]:
                total = Fraction(0)
                b_a0 = tuple(x - y for x, y in zip(b, a0))
                if any(b_a0) and rs.is_root(b_a0):
                    total += Fraction(self.value(b, _neg(a0)) * self.value(a, _neg(b0))) / self.sq(b_a0)
                a_a0 = tuple(x - y for x, y in zip(a, a0))
                if any(a_a0) and rs.is_root(a_a0):
                    total += Fraction(self.value(_neg(a0), a) * self.value(b, _neg(b0))) / self.sq(a_a0)
                n = xi_sq / n0 * total
                if n.denominator != 1:
                    raise ConsistencyError(f"non-integral constant N({a}, {b}) = {n}")
                self._set(a, b, int(n))

    def _set(self, a: Coords, b: Coords, n: int) -> None:
        self.table[(a, b)] = n
        self.table[(b, a)] = -n


def chevalley_constants(rs: RootSystem, extraspecial_signs: Optional[Mapping] = None) -> Dict[Tuple[Root, Root], int]:
    """Integer constants N_{a,b} for every ordered pair of roots with a+b a root.

    extraspecial_signs maps a positive root xi (Root or coords) to the sign
    placed on its extraspecial pair; unlisted roots get +1.
    """
    signs = {}
    for key, value in (extraspecial_signs or {}).items():
        coords = key.coords if isinstance(key, Root) else tuple(key)
        rs.index(coords)
        signs[coords] = value
    builder = _ExtraspecialBuilder(rs, signs)
    builder.build()

    result: Dict[Tuple[Root, Root], int] = {}
    for alpha in rs.roots:
        for beta in rs.roots:
            s = alpha.vector_add(beta)
            if not any(s) or not rs.is_root(s):
                continue
            n = builder.value(alpha.coords, beta.coords)
            p, _ = root_string(rs, alpha, beta)
            if abs(n) != 1 - p:
                raise ConsistencyError(f"|N({alpha.label()}, {beta.label()})| = {abs(n)}, expected {1 - p}")
            result[(alpha, beta)] = n
    return result


# --- generic Jacobi evaluation over root-vector triples ---

@dataclass
class _Layer:
    """Bracket data for one normalization of the root vectors"""
    zero: object
    n: Callable[[Root, Root], object]
    cartan_of: Callable[[Root], List[Tuple[int, object]]]  # [e_a, e_-a] in the Cartan basis
    weight: Callable[[Root, int], object]  # a(h_k)


def _bracket_root(rs: RootSystem, layer: _Layer, alpha: Root, element: Dict) -> Dict:
    out: Dict = {}
    for key, c in element.items():
        if key[0] == "e":
            beta = key[1]
            s = alpha.vector_add(beta)
            if not any(s):
                for k, v in layer.cartan_of(alpha):
                    out[("h", k)] = out.get(("h", k), layer.zero) + c * v
            elif rs.is_root(s):
                target = ("e", Root(s))
                out[target] = out.get(target, layer.zero) + c * layer.n(alpha, beta)
        else:
            # [e_a, h] = -a(h) e_a
            target = ("e", alpha)
            out[target] = out.get(target, layer.zero) + c * (-layer.weight(alpha, key[1]))
    return {k: v for k, v in out.items() if v}


def _jacobi_violations(rs: RootSystem, layer: _Layer) -> Tuple[int, int]:
    roots = rs.roots
    allowed = set(r.coords for r in roots) | {tuple([0] * rs.rank)}
    checked = violations = 0
    for i, x in enumerate(roots):
        for j in range(i + 1, len(roots)):
            y = roots[j]
            xy = x.vector_add(y)
            for k in range(j + 1, len(roots)):
                z = roots[k]
                if _add(xy, z.coords) not in allowed:
                    continue
                checked += 1
                total: Dict = {}
                try:
                    for a, b, c in ((x, y, z), (y, z, x), (z, x, y)):
                        inner = _bracket_root(rs, layer, b, {("e", c): layer.zero + 1})
                        for key, v in _bracket_root(rs, layer, a, inner).items():
                            total[key] = total.get(key, layer.zero) + v
                except ExactnessError:
                    violations += 1
                    continue
                if any(total.values()):
                    violations += 1
                    logger.debug(f"❌ Jacobi fails on ({x.label()}, {y.label()}, {z.label()})")
    return checked, violations


def _integer_layer(rs: RootSystem, table: Mapping[Tuple[Root, Root], int]) -> _Layer:
    diag = [rs.gram[k][k] for k in range(rs.rank)]

    def cartan_of(alpha: Root):
        norm = rs.inner(alpha, alpha)
        return [(k, n * diag[k] / norm) for k, n in enumerate(alpha.coords) if n]

    def weight(alpha: Root, k: int):
        return 2 * rs.inner(alpha, rs.simple[k]) / diag[k]

    return _Layer(Fraction(0), lambda a, b: Fraction(table.get((a, b), 0)), cartan_of, weight)


def chevalley_signs(rs: RootSystem, extraspecial_signs: Optional[Mapping] = None) -> Dict[Tuple[Root, Root], int]:
    """Sign table of the integer Chevalley constants, gated by an exact Jacobi check"""
    table = chevalley_constants(rs, extraspecial_signs)
    checked, violations = _jacobi_violations(rs, _integer_layer(rs, table))
    if violations:
        raise ConsistencyError(f"{rs.type}: {violations} of {checked} Jacobi identities fail at the integer layer")
    logger.info(f"✅ {rs.type}: Chevalley signs pass {checked} Jacobi identities")
    return {pair: (1 if n > 0 else -1) for pair, n in table.items()}


@dataclass(frozen=True)
class StructureTable:
    """N_{a,b} of the Weyl basis, keyed by ordered root pairs with a+b a root"""

    root_system: RootSystem
    entries: Dict[Tuple[Root, Root], Surd] = field(repr=False)

    def n(self, alpha: Root, beta: Root) -> Surd:
        return self.entries.get((alpha, beta), Surd.zero())

    def __len__(self) -> int:
        return len(self.entries)

    def to_dict(self) -> dict:
        rs = self.root_system
        position = {r.coords: k for k, r in enumerate(rs.roots)}
        rows = sorted(self.entries.items(), key=lambda kv: (position[kv[0][0].coords], position[kv[0][1].coords]))
        return {
            "type": str(rs.type),
            "entries": [{"a": list(a.coords), "b": list(b.coords), "sign": v.sign, "nsq": frac_str(v.sq)}
                        for (a, b), v in rows],
        }


def magnitude_squared(rs: RootSystem, alpha: Root, beta: Root) -> Fraction:
    """N_{a,b}^2 = q(1-p)/2 <a,a> for the a-string p..q through b"""
    p, q = root_string(rs, alpha, beta)
    return Fraction(q * (1 - p), 2) * rs.inner(alpha, alpha)


def weyl_structure_table(rs: RootSystem, extraspecial_signs: Optional[Mapping] = None) -> StructureTable:
    """Weyl-basis constants: magnitudes from the string law, signs from the Chevalley layer"""
    integer = chevalley_constants(rs, extraspecial_signs)
    entries: Dict[Tuple[Root, Root], Surd] = {}
    for (alpha, beta), n in integer.items():
        nsq = magnitude_squared(rs, alpha, beta)
        s = Root(alpha.vector_add(beta))
        rescaled = Fraction(n * n) * rs.inner(alpha, alpha) * rs.inner(beta, beta) / (2 * rs.inner(s, s))
        if rescaled != nsq:
            raise ConsistencyError(f"magnitude law mismatch at ({alpha.label()}, {beta.label()}): {nsq} vs {rescaled}")
        entries[(alpha, beta)] = Surd(1 if n > 0 else -1, nsq)
    logger.debug(f"✅ {rs.type}: {len(entries)} Weyl structure constants")
    return StructureTable(rs, entries)


@dataclass
class JacobiReport:
    type: str
    triples_checked: int = 0
    jacobi_violations: int = 0
    antisymmetry_violations: int = 0
    conjugation_violations: int = 0
    magnitude_violations: int = 0

    @property
    def violations(self) -> int:
        return (self.jacobi_violations + self.antisymmetry_violations
                + self.conjugation_violations + self.magnitude_violations)

    @property
    def ok(self) -> bool:
        return self.violations == 0

    def to_dict(self) -> dict:
        return {
            "type": self.type,
            "triples_checked": self.triples_checked,
            "jacobi_violations": self.jacobi_violations,
            "antisymmetry_violations": self.antisymmetry_violations,
            "conjugation_violations": self.conjugation_violations,
            "magnitude_violations": self.magnitude_violations,
        }


def _weyl_layer(rs: RootSystem, table: StructureTable) -> _Layer:
    def cartan_of(alpha: Root):
        return [(k, Fraction(n)) for k, n in enumerate(alpha.coords) if n]

    def weight(alpha: Root, k: int):
        return rs.inner(alpha, rs.simple[k])

    return _Layer(Surd.zero(), table.n, cartan_of, weight)


def verify_jacobi(table: StructureTable, rs: RootSystem) -> JacobiReport:
    """Exact consistency gate for a Weyl structure table"""
    logger.info(f"🔍 Verifying structure table of {rs.type}")
    report = JacobiReport(type=str(rs.type))
    for (alpha, beta), value in table.entries.items():
        if table.n(beta, alpha) != -value:
            report.antisymmetry_violations += 1
        if table.n(-alpha, -beta) != -value:
            report.conjugation_violations += 1
        if value.sq != magnitude_squared(rs, alpha, beta):
            report.magnitude_violations += 1
    report.triples_checked, report.jacobi_violations = _jacobi_violations(rs, _weyl_layer(rs, table))
    if report.ok:
        logger.info(f"✅ {rs.type}: {report.triples_checked} triples, no violations")
    else:
        logger.warning(f"⚠️ {rs.type}: {report.violations} violations")
    return report
