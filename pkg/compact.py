"""
The compact real form g = h + sum(R U0_a + R U1_a) with its exact bracket table.

Basis order: sqrt(-1) H_{a_k} for the simple roots, then U0_a, U1_a for every
positive root in root-system order (height, then leading coefficients).
"""
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Dict, List, Sequence, Tuple, Union

import numpy as np

from chevalley import StructureTable
from config import AD_INVARIANCE_TOL
from errors import ExactnessError, InvalidInputError
from exactmath import Surd, frac_str
from rootsys import Root, RootSystem

logger = logging.getLogger(__name__)

Entry = Tuple[Tuple[int, Surd], ...]


@dataclass(frozen=True)
class CompactBasis:
    rank: int
    roots: Tuple[Root, ...]

    @property
    def dim(self) -> int:
        return self.rank + 2 * len(self.roots)

    def u_index(self, root_index: int, a: int) -> int:
        return self.rank + 2 * root_index + (a % 2)

    def describe(self, i: int) -> Tuple:
        """("h", k) for sqrt(-1)H_{a_k}, ("u", root_index, a) for U^a"""
        if i < self.rank:
            return ("h", i)
        offset = i - self.rank
        return ("u", offset // 2, offset % 2)

    def label(self, i: int) -> str:
        kind = self.describe(i)
        if kind[0] == "h":
            return f"iH{kind[1] + 1}"
        return f"U{kind[2]}[{self.roots[kind[1]].label()}]"

    @property
    def labels(self) -> List[str]:
        return [self.label(i) for i in range(self.dim)]


@dataclass(frozen=True)
class AlgebraElement:
    """Coefficients over the compact basis: Surd values when exact, floats otherwise"""

    coeffs: tuple
    exact: bool = False

    @property
    def mode(self) -> str:
        return "exact" if self.exact else "floating"

    def support(self) -> List[int]:
        return [i for i, c in enumerate(self.coeffs) if c]

    def to_numpy(self) -> np.ndarray:
        return np.array([float(c) for c in self.coeffs], dtype=float)


@dataclass(frozen=True)
class CompactAlgebra:
    root_system: RootSystem
    table: StructureTable = field(repr=False)
    basis: CompactBasis
    brackets: Dict[Tuple[int, int], Entry] = field(repr=False)
    killing: Tuple[Tuple[Fraction, ...], ...] = field(repr=False)

    @property
    def dim(self) -> int:
        return self.basis.dim

    @property
    def rank(self) -> int:
        return self.basis.rank

    def bracket_basis(self, i: int, j: int) -> Dict[int, Surd]:
        return dict(self.brackets.get((i, j), ()))

    @cached_property
    def structure_tensor(self) -> np.ndarray:
        """T[i, j, k] = coefficient of e_k in [e_i, e_j]"""
        t = np.zeros((self.dim, self.dim, self.dim))
        for (i, j), entry in self.brackets.items():
            for k, c in entry:
                t[i, j, k] = float(c)
        t.setflags(write=False)
        return t

    @cached_property
    def killing_matrix(self) -> np.ndarray:
        b = np.array([[float(x) for x in row] for row in self.killing])
        b.setflags(write=False)
        return b

    def basis_element(self, i: int, exact: bool = True) -> AlgebraElement:
        if not 0 <= i < self.dim:
            raise InvalidInputError(f"basis index {i} out of range 0..{self.dim - 1}")
        if exact:
            return AlgebraElement(tuple(Surd.rational(1 if k == i else 0) for k in range(self.dim)), True)
        return AlgebraElement(tuple(1.0 if k == i else 0.0 for k in range(self.dim)), False)

    def element(self, coeffs: Sequence[float]) -> AlgebraElement:
        values = np.asarray(coeffs, dtype=float)
        if values.shape != (self.dim,):
            raise InvalidInputError(f"expected {self.dim} coefficients, got shape {values.shape}")
        return AlgebraElement(tuple(float(x) for x in values), False)

    def exact_element(self, coeffs: Sequence) -> AlgebraElement:
        if len(coeffs) != self.dim:
            raise InvalidInputError(f"expected {self.dim} coefficients, got {len(coeffs)}")
        return AlgebraElement(tuple(c if isinstance(c, Surd) else Surd.rational(c) for c in coeffs), True)


def _accumulate(target: Dict[int, Surd], k: int, value: Surd) -> None:
    total = target.get(k, Surd.zero()) + value
    if total:
        target[k] = total
    else:
        target.pop(k, None)


def _u_h(rs: RootSystem, basis: CompactBasis, ridx: int, a: int, k: int) -> Dict[int, Surd]:
    """[U^a_alpha, sqrt(-1)H_{a_k}] = (-1)^(a+1) <alpha,a_k> U^(a+1)_alpha"""
    value = rs.inner(basis.roots[ridx], rs.simple[k])
    if not value:
        return {}
    sign = -1 if a == 0 else 1
    return {basis.u_index(ridx, a + 1): Surd.rational(sign * value)}


def _u_u_same(basis: CompactBasis, ridx: int) -> Dict[int, Surd]:
    """[U0_alpha, U1_alpha] = 2 sqrt(-1) H_alpha"""
    root = basis.roots[ridx]
    return {k: Surd.rational(2 * n) for k, n in enumerate(root.coords) if n}


def _u_u(rs: RootSystem, table: StructureTable, basis: CompactBasis, index: Dict,
         ia: int, a: int, ib: int, b: int) -> Dict[int, Surd]:
    """[U^a_alpha, U^b_beta] for alpha != beta and a <= b"""
    alpha, beta = basis.roots[ia], basis.roots[ib]
    c = (a + b) % 2
    out: Dict[int, Surd] = {}
    total = alpha.vector_add(beta)
    if total in index:
        coeff = table.n(alpha, beta) * (-1) ** (a * b)
        _accumulate(out, basis.u_index(index[total], c), coeff)
    diff = alpha.vector_sub(beta)
    if rs.is_root(diff):
        coeff = table.n(-alpha, beta) * (-1) ** (a + b)
        if diff not in index:
            # U0_{-g} = -U0_g, U1_{-g} = U1_g
            diff = tuple(-x for x in diff)
            if c == 0:
                coeff = -coeff
        _accumulate(out, basis.u_index(index[diff], c), coeff)
    return out


def build_compact(rs: RootSystem, st: StructureTable) -> CompactAlgebra:
    """Populate the bracket table of the compact form from the Weyl constants"""
    basis = CompactBasis(rs.rank, rs.positive)
    index = {r.coords: k for k, r in enumerate(rs.positive)}
    brackets: Dict[Tuple[int, int], Entry] = {}

    def store(i: int, j: int, values: Dict[int, Surd]) -> None:
        if values:
            brackets[(i, j)] = tuple(sorted(values.items()))
            brackets[(j, i)] = tuple((k, -v) for k, v in sorted(values.items()))

    n_roots = len(rs.positive)
    for ridx in range(n_roots):
        for a in (0, 1):
            u = basis.u_index(ridx, a)
            for k in range(rs.rank):
                store(u, k, _u_h(rs, basis, ridx, a, k))
        store(basis.u_index(ridx, 0), basis.u_index(ridx, 1), _u_u_same(basis, ridx))
        for jdx in range(ridx + 1, n_roots):
            for a in (0, 1):
                for b in (0, 1):
                    if a <= b:
                        values = _u_u(rs, st, basis, index, ridx, a, jdx, b)
                    else:
                        values = {k: -v for k, v in _u_u(rs, st, basis, index, jdx, b, ridx, a).items()}
                    store(basis.u_index(ridx, a), basis.u_index(jdx, b), values)

    dim = basis.dim
    killing = [[Fraction(0)] * dim for _ in range(dim)]
    for i in range(rs.rank):
        for j in range(rs.rank):
            killing[i][j] = -rs.gram[i][j]
    for i in range(rs.rank, dim):
        killing[i][i] = Fraction(-2)

    alg = CompactAlgebra(rs, st, basis, brackets, tuple(tuple(row) for row in killing))
    logger.debug(f"✅ Compact form of {rs.type}: dim {dim}, {len(brackets) // 2} nonzero basis brackets")
    return alg


def _check_same(alg: CompactAlgebra, X: AlgebraElement, Y: AlgebraElement) -> None:
    if len(X.coeffs) != alg.dim or len(Y.coeffs) != alg.dim:
        raise InvalidInputError(f"elements must have {alg.dim} coefficients")


def bracket(alg: CompactAlgebra, X: AlgebraElement, Y: AlgebraElement) -> AlgebraElement:
    """Bilinear extension of the basis bracket table"""
    _check_same(alg, X, Y)
    if X.exact and Y.exact:
        out: Dict[int, Surd] = {}
        try:
            for i in X.support():
                for j in Y.support():
                    entry = alg.brackets.get((i, j))
                    if not entry:
                        continue
                    xy = X.coeffs[i] * Y.coeffs[j]
                    for k, c in entry:
                        _accumulate(out, k, xy * c)
        except ExactnessError as e:
            raise ExactnessError(f"bracket leaves the sign*sqrt(rational) domain: {e.args[0]}") from e
        return AlgebraElement(tuple(out.get(k, Surd.zero()) for k in range(alg.dim)), True)
    z = np.einsum("i,j,ijk->k", X.to_numpy(), Y.to_numpy(), alg.structure_tensor)
    return AlgebraElement(tuple(float(c) for c in z), False)


def killing_form(alg: CompactAlgebra, X: AlgebraElement, Y: AlgebraElement):
    """B(X, Y): a Surd when both are exact, a float otherwise"""
    _check_same(alg, X, Y)
    if X.exact and Y.exact:
        total = Surd.zero()
        for i in X.support():
            for j in Y.support():
                b = alg.killing[i][j]
                if b:
                    total = total + X.coeffs[i] * Y.coeffs[j] * b
        return total
    return float(X.to_numpy() @ alg.killing_matrix @ Y.to_numpy())


def inner_product(alg: CompactAlgebra, X: AlgebraElement, Y: AlgebraElement,
                  scale: Union[Fraction, int] = Fraction(1, 2)):
    """The bi-invariant metric -scale * B (scale 1/2 makes every U^a_alpha a unit vector)"""
    value = killing_form(alg, X, Y)
    if isinstance(value, Surd):
        return value * (-Fraction(scale))
    return -float(scale) * value


def root_value(rs: RootSystem, root: Root, H: Sequence[Fraction]) -> Fraction:
    """alpha(H) for H given over the basis H_{a_1} ... H_{a_l}"""
    return rs.inner(root.coords, tuple(Fraction(h) for h in H))


def torus_adjoint(alg: CompactAlgebra, H: Sequence, t: Union[Fraction, int] = 1) -> np.ndarray:
    """Matrix of Ad(exp(2 pi t sqrt(-1) H)): fixes h, rotates each (U0_a, U1_a) plane by 2 pi t a(H)"""
    rs = alg.root_system
    if len(H) != rs.rank:
        raise InvalidInputError(f"H needs {rs.rank} coordinates, got {len(H)}")
    t = Fraction(t)
    m = np.eye(alg.dim)
    for ridx, root in enumerate(rs.positive):
        turns = t * root_value(rs, root, H)
        turns -= math.floor(turns)
        if turns == 0:
            continue
        theta = 2 * math.pi * float(turns)
        c, s = math.cos(theta), math.sin(theta)
        u0, u1 = alg.basis.u_index(ridx, 0), alg.basis.u_index(ridx, 1)
        # columns are images: U0 -> c U0 + s U1, U1 -> c U1 - s U0
        m[u0, u0], m[u1, u0] = c, s
        m[u0, u1], m[u1, u1] = -s, c
    return m


@dataclass
class AdInvarianceReport:
    terms_checked: int = 0
    violations: int = 0
    max_residual: float = 0.0

    @property
    def ok(self) -> bool:
        return self.violations == 0


def verify_ad_invariance(alg: CompactAlgebra) -> AdInvarianceReport:
    """B([X,Y],Z) + B(Y,[X,Z]) = 0 on basis triples.

    Only triples with a nonzero term are visited; exact where the terms combine,
    floating (AD_INVARIANCE_TOL) otherwise.
    """
    values: Dict[Tuple[int, int, int], Surd] = {}
    rank = alg.rank
    for (i, j), entry in alg.brackets.items():
        for l, c in entry:
            partners = range(rank) if l < rank else (l,)
            for k in partners:
                b = alg.killing[l][k]
                if b:
                    key = (i, j, k)
                    values[key] = values.get(key, Surd.zero()) + c * b
    report = AdInvarianceReport()
    seen = set()
    for (i, j, k) in values:
        if (i, k, j) in seen:
            continue
        seen.add((i, j, k))
        report.terms_checked += 1
        left, right = values.get((i, j, k), Surd.zero()), values.get((i, k, j), Surd.zero())
        try:
            residual = abs(float(left + right))
            failed = bool(left + right)
        except ExactnessError:
            residual = abs(float(left) + float(right))
            failed = residual > AD_INVARIANCE_TOL
        report.max_residual = max(report.max_residual, residual)
        if failed:
            report.violations += 1
    return report


def jacobi_residual(alg: CompactAlgebra, X: AlgebraElement, Y: AlgebraElement, Z: AlgebraElement) -> float:
    """Euclidean norm of [X,[Y,Z]] + [Y,[Z,X]] + [Z,[X,Y]] in floating point"""
    t = alg.structure_tensor
    x, y, z = X.to_numpy(), Y.to_numpy(), Z.to_numpy()

    def br(a, b):
        return np.einsum("i,j,ijk->k", a, b, t)

    return float(np.linalg.norm(br(x, br(y, z)) + br(y, br(z, x)) + br(z, br(x, y))))


def bracket_table_dict(alg: CompactAlgebra) -> dict:
    entries = []
    for (i, j), entry in sorted(alg.brackets.items()):
        if i < j:
            for k, c in entry:
                entries.append({"i": i, "j": j, "k": k, "sign": c.sign, "nsq": frac_str(c.sq)})
    return {
        "type": str(alg.root_system.type),
        "dim": alg.dim,
        "labels": alg.basis.labels,
        "entries": entries,
    }


def killing_from_trace(alg: CompactAlgebra) -> np.ndarray:
    """tr(ad X ad Y) from the structure tensor, as an independent check of the Killing table"""
    ad = np.transpose(alg.structure_tensor, (0, 2, 1))  # ad[i][k, j] = T[i, j, k]
    return np.einsum("akj,bjk->ab", ad, ad)
