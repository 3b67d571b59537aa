"""
Representações, cocadeias Hom e cohomologia H^k(g; rho)

Uma k-cocadeia é guardada apenas nas k-uplas estritamente crescentes de
índices da base (ordem lexicográfica de itertools.combinations); a
avaliação em argumentos quaisquer expande por multilinearidade e sinal.

Condição de compatibilidade adotada: beta o f = f o phi^{(x)k}.
"""
import itertools
import logging
from dataclasses import dataclass
from functools import cached_property
from math import comb
from typing import Callable, List, Mapping, Optional, Sequence, Tuple

from services.exactla import (
    Matrix, QuotientSpace, Subspace, Vector, add_vectors, determinant, image_of_subspace,
    intersect, is_zero_vector, kernel, quotient, scale_vector, solve,
    sub_vectors, unit_vector, vector, zero_vector,
)
from services.homlie import (
    HomLieAlgebra, LinearMapBetween, Verdict, Violation, center, gl_algebra, is_morphism,
)
from utils.exceptions import InputError, InvariantViolation, PreconditionError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Representation:
    """rho(e_i) em V = K^v_dim com twist beta; não é validada na construção"""

    base: HomLieAlgebra
    v_dim: int
    rho: Tuple[Matrix, ...]
    beta: Matrix

    def __post_init__(self):
        if len(self.rho) != self.base.dim:
            raise InputError(f"{len(self.rho)} matrizes rho para álgebra de dimensão {self.base.dim}")
        shape = (self.v_dim, self.v_dim)
        for i, m in enumerate(self.rho):
            if m.shape != shape:
                raise InputError(f"rho(e{i + 1}) tem forma {m.shape}, esperado {shape}")
        if self.beta.shape != shape:
            raise InputError(f"beta tem forma {self.beta.shape}, esperado {shape}")

    def action(self, x: Sequence) -> Matrix:
        """rho(x) = sum_i x_i rho(e_i)"""
        x = vector(x)
        if len(x) != self.base.dim:
            raise InputError(f"vetor de dimensão {len(x)} para {self.base.name}")
        result = Matrix.zeros(self.v_dim, self.v_dim)
        for c, m in zip(x, self.rho):
            if c:
                result = result + m.scale(c)
        return result

    def as_map(self) -> LinearMapBetween:
        """rho: g -> gl(V) em coordenadas vetorizadas"""
        return LinearMapBetween(self.base.dim, self.v_dim * self.v_dim,
                                Matrix.from_columns([m.vectorize() for m in self.rho], self.v_dim * self.v_dim))


def formal_representation(g: HomLieAlgebra, v_dim: int, rho: Sequence[Matrix], beta: Matrix) -> Representation:
    """Portador (rho, V, beta) sem exigir as equações de representação"""
    return Representation(g, v_dim, tuple(rho), beta)


def trivial_rep(g: HomLieAlgebra, v_dim: int = 1, beta: Optional[Matrix] = None) -> Representation:
    return Representation(g, v_dim, tuple(Matrix.zeros(v_dim, v_dim) for _ in range(g.dim)),
                          beta if beta is not None else Matrix.identity(v_dim))


def validate_rep(r: Representation) -> Verdict:
    """
    Confere rho(phi e_i) beta = beta rho(e_i) e
    rho([e_i,e_j]) beta = rho(phi e_i) rho(e_j) - rho(phi e_j) rho(e_i).

    O mesmo veredito é obtido testando se rho é morfismo em
    (gl(V), [.,.]_beta, Ad_beta); divergência é bug interno.
    """
    if not r.beta.is_invertible():
        raise InputError("beta é singular")
    g = r.base
    violations: List[Violation] = []
    twisted = [r.action(g.twist.column(i)) for i in range(g.dim)]
    for i in range(g.dim):
        if twisted[i] @ r.beta != r.beta @ r.rho[i]:
            violations.append(Violation('twist_compatibility', (i,),
                                        f"rho(phi e{i + 1}) beta != beta rho(e{i + 1})"))
    for i, j in itertools.combinations(range(g.dim), 2):
        lhs = r.action(g.structure[i][j]) @ r.beta
        rhs = twisted[i] @ r.rho[j] - twisted[j] @ r.rho[i]
        if lhs != rhs:
            violations.append(Violation('bracket_compatibility', (i, j),
                                        f"rho([e{i + 1},e{j + 1}]) beta != rho(phi e{i + 1}) rho(e{j + 1}) - "
                                        f"rho(phi e{j + 1}) rho(e{i + 1})"))
    verdict = Verdict(tuple(violations))
    if r.v_dim:
        morphism = is_morphism(r.as_map(), g, gl_algebra(r.beta))
        if morphism.ok != verdict.ok:
            raise InvariantViolation("validação de representação diverge do teste de morfismo em gl(V)")
    return verdict


# ----------------------------------------------------------------------
# Cocadeias
# ----------------------------------------------------------------------

def basis_tuples(n: int, k: int) -> List[Tuple[int, ...]]:
    return list(itertools.combinations(range(n), k))


@dataclass(frozen=True)
class Cochain:
    rep: Representation
    degree: int
    values: Tuple[Vector, ...]

    def __post_init__(self):
        expected = comb(self.rep.base.dim, self.degree)
        if len(self.values) != expected or any(len(v) != self.rep.v_dim for v in self.values):
            raise InputError(f"cocadeia de grau {self.degree} precisa de {expected} valores em "
                             f"K^{self.rep.v_dim}")

    @classmethod
    def zero(cls, rep: Representation, degree: int) -> 'Cochain':
        return cls(rep, degree, tuple(zero_vector(rep.v_dim) for _ in range(comb(rep.base.dim, degree))))

    @classmethod
    def from_flat(cls, rep: Representation, degree: int, flat: Sequence) -> 'Cochain':
        flat = vector(flat)
        v = rep.v_dim
        count = comb(rep.base.dim, degree)
        if len(flat) != count * v:
            raise InputError(f"vetor de {len(flat)} coordenadas para cocadeia com {count * v}")
        return cls(rep, degree, tuple(flat[t * v:(t + 1) * v] for t in range(count)))

    @classmethod
    def from_mapping(cls, rep: Representation, degree: int, values: Mapping[Tuple[int, ...], Sequence]) -> 'Cochain':
        """Valores nas uplas crescentes dadas; as demais valem zero"""
        tuples = basis_tuples(rep.base.dim, degree)
        index = {t: a for a, t in enumerate(tuples)}
        table = [zero_vector(rep.v_dim)] * len(tuples)
        for t, value in values.items():
            t = tuple(t)
            if t not in index:
                raise InputError(f"upla {t} não é crescente dentro da base de dimensão {rep.base.dim}")
            table[index[t]] = vector(value)
        return cls(rep, degree, tuple(table))

    @classmethod
    def from_function(cls, rep: Representation, degree: int,
                      fn: Callable[[Tuple[int, ...]], Sequence]) -> 'Cochain':
        return cls(rep, degree, tuple(vector(fn(t)) for t in basis_tuples(rep.base.dim, degree)))

    @cached_property
    def tuples(self) -> List[Tuple[int, ...]]:
        return basis_tuples(self.rep.base.dim, self.degree)

    @cached_property
    def _positions(self) -> dict:
        return {t: a for a, t in enumerate(self.tuples)}

    def flat(self) -> Vector:
        return tuple(a for v in self.values for a in v)

    def value(self, indices: Sequence[int]) -> Vector:
        """f(e_{i_1}, ..., e_{i_k}) para índices quaisquer"""
        if len(set(indices)) < len(indices):
            return zero_vector(self.rep.v_dim)
        order = sorted(range(len(indices)), key=lambda a: indices[a])
        sign = _permutation_sign(order)
        sorted_tuple = tuple(indices[a] for a in order)
        position = self._positions[sorted_tuple]
        return scale_vector(sign, self.values[position]) if sign < 0 else self.values[position]

    def is_zero(self) -> bool:
        return all(is_zero_vector(v) for v in self.values)

    def with_rep(self, rep: Representation) -> 'Cochain':
        return Cochain(rep, self.degree, self.values)

    def _check_compatible(self, other: 'Cochain'):
        if self.degree != other.degree or self.rep.v_dim != other.rep.v_dim \
                or self.rep.base.dim != other.rep.base.dim:
            raise InputError("cocadeias de graus ou espaços diferentes")

    def __add__(self, other: 'Cochain') -> 'Cochain':
        self._check_compatible(other)
        return Cochain(self.rep, self.degree, tuple(add_vectors(a, b) for a, b in zip(self.values, other.values)))

    def __sub__(self, other: 'Cochain') -> 'Cochain':
        self._check_compatible(other)
        return Cochain(self.rep, self.degree, tuple(sub_vectors(a, b) for a, b in zip(self.values, other.values)))

    def scale(self, c) -> 'Cochain':
        c = vector([c])[0]
        return Cochain(self.rep, self.degree, tuple(scale_vector(c, v) for v in self.values))

    def map_values(self, m: Matrix, rep: Representation) -> 'Cochain':
        """m o f, como cocadeia com valores no espaço de rep"""
        return Cochain(rep, self.degree, tuple(m.apply(v) for v in self.values))


def _permutation_sign(order: Sequence[int]) -> int:
    sign = 1
    seen = list(order)
    for a in range(len(seen)):
        for b in range(a + 1, len(seen)):
            if seen[a] > seen[b]:
                sign = -sign
    return sign


def evaluate(f: Cochain, args: Sequence[Sequence]) -> Vector:
    """f(x_1, ..., x_k) = sum_I det(x_a[I_b]) f(e_I)"""
    args = [vector(x) for x in args]
    if len(args) != f.degree:
        raise InputError(f"cocadeia de grau {f.degree} avaliada em {len(args)} argumentos")
    n = f.rep.base.dim
    if any(len(x) != n for x in args):
        raise InputError(f"argumentos devem estar em K^{n}")
    out = zero_vector(f.rep.v_dim)
    for t, value in zip(f.tuples, f.values):
        if is_zero_vector(value):
            continue
        minor = determinant(Matrix.from_rows([[x[i] for i in t] for x in args], f.degree))
        if minor:
            out = add_vectors(out, scale_vector(minor, value))
    return out


def compatibility_defect(f: Cochain) -> Vector:
    """beta f(e_I) - f(phi e_I) em todas as uplas, concatenado"""
    g = f.rep.base
    phi_cols = g.twist.columns()
    out: List = []
    for t, value in zip(f.tuples, f.values):
        out.extend(sub_vectors(f.rep.beta.apply(value), evaluate(f, [phi_cols[i] for i in t])))
    return tuple(out)


def is_compatible(f: Cochain) -> bool:
    return is_zero_vector(compatibility_defect(f))


def _check_degree(k: int):
    if k < 1:
        raise InputError(f"grau {k} não suportado (apenas k >= 1)")


def cochain_space(r: Representation, k: int) -> Subspace:
    """Base RREF de C^k_{phi,beta}(g; V) dentro de K^(C(n,k) * v_dim)"""
    _check_degree(k)
    size = comb(r.base.dim, k) * r.v_dim
    if size == 0:
        return Subspace.zero(0)
    columns = [compatibility_defect(Cochain.from_flat(r, k, unit_vector(size, a))) for a in range(size)]
    space = kernel(Matrix.from_columns(columns, size))
    logger.debug("C^%d(%s): dim %d de %d", k, r.base.name, space.dim, size)
    return space


def _coboundary_values(r: Representation, f: Cochain) -> Tuple[Vector, ...]:
    g = r.base
    n, k = g.dim, f.degree
    phi_power = g.twist.power(k - 1)
    actions = [r.action(phi_power.column(i)) for i in range(n)]
    phi_cols = g.twist.columns()
    values = []
    for t in basis_tuples(n, k + 1):
        total = zero_vector(r.v_dim)
        for a in range(k + 1):
            rest = t[:a] + t[a + 1:]
            term = actions[t[a]].apply(f.value(rest))
            total = add_vectors(total, term) if a % 2 == 0 else sub_vectors(total, term)
        for a, b in itertools.combinations(range(k + 1), 2):
            args = [g.structure[t[a]][t[b]]] + [phi_cols[t[c]] for c in range(k + 1) if c not in (a, b)]
            term = evaluate(f, args)
            total = add_vectors(total, term) if (a + b) % 2 == 0 else sub_vectors(total, term)
        values.append(total)
    return tuple(values)


def coboundary(r: Representation, f: Cochain, check: bool = True) -> Cochain:
    """
    d_rho f, com rho(phi^{k-1} x_i) no primeiro somatório. Para k = 2:
    (d omega)(x,y,z) = rho_{phi x} omega(y,z) - omega([x,y], phi z) + c.p.
    """
    _check_degree(f.degree)
    if f.rep.base.dim != r.base.dim or f.rep.v_dim != r.v_dim:
        raise InputError("cocadeia e representação não são compatíveis")
    if check and not is_compatible(f):
        raise PreconditionError("cocadeia não satisfaz beta o f = f o phi^(x)k")
    result = Cochain(r, f.degree + 1, _coboundary_values(r, f))
    if check and not is_compatible(result):
        raise InvariantViolation("d_rho f não satisfaz a condição de compatibilidade")
    return result


def coboundary_matrix(r: Representation, k: int) -> Matrix:
    """Matriz de d: C^k -> C^(k+1) no espaço completo de cocadeias alternadas"""
    _check_degree(k)
    size = comb(r.base.dim, k) * r.v_dim
    target = comb(r.base.dim, k + 1) * r.v_dim
    columns = [Cochain(r, k + 1, _coboundary_values(r, Cochain.from_flat(r, k, unit_vector(size, a)))).flat()
               for a in range(size)]
    if not columns:
        return Matrix.zeros(target, 0)
    return Matrix.from_columns(columns, target)


@dataclass(frozen=True)
class CohomologyGroup:
    """
    H^k = Z^k / B^k. Os representantes são os do complemento canônico de
    B^k dentro de Z^k (em coordenadas de Z^k).
    """

    rep: Representation
    degree: int
    cochains: Subspace
    cocycles: Subspace
    coboundaries: Subspace

    @property
    def dim_cochains(self) -> int:
        return self.cochains.dim

    @property
    def dim_z(self) -> int:
        return self.cocycles.dim

    @property
    def dim_b(self) -> int:
        return self.coboundaries.dim

    @property
    def dim_h(self) -> int:
        return self.cocycles.dim - self.coboundaries.dim

    @cached_property
    def quotient(self) -> QuotientSpace:
        inner = Subspace.span(self.cocycles.dim, [self.cocycles.coordinates(b) for b in self.coboundaries.basis])
        return quotient(self.cocycles.dim, inner)

    def representatives(self) -> List[Cochain]:
        q = self.quotient
        return [Cochain.from_flat(self.rep, self.degree, self.cocycles.element(q.lift(unit_vector(q.dim, a))))
                for a in range(q.dim)]

    def is_cocycle(self, f: Cochain) -> bool:
        return self.cocycles.contains(f.flat())

    def is_coboundary(self, f: Cochain) -> bool:
        return self.coboundaries.contains(f.flat())

    def same_class(self, f1: Cochain, f2: Cochain) -> bool:
        return self.is_coboundary(f1 - f2)

    def class_coordinates(self, f: Cochain) -> Vector:
        """Coordenadas de [f] na base dos representantes"""
        if not self.is_cocycle(f):
            raise PreconditionError("cocadeia não é cociclo")
        return self.quotient.project(self.cocycles.coordinates(f.flat()))

    def from_class(self, coordinates: Sequence) -> Cochain:
        return Cochain.from_flat(self.rep, self.degree,
                                 self.cocycles.element(self.quotient.lift(coordinates)))

    def primitive(self, f: Cochain) -> Optional[Cochain]:
        """b em C^(k-1) com d b = f, ou None se f não é cobordo"""
        if f.is_zero():
            return Cochain.zero(self.rep, self.degree - 1) if self.degree > 1 else None
        if self.degree == 1:
            return None
        previous = cochain_space(self.rep, self.degree - 1)
        if previous.dim == 0:
            return None
        d = coboundary_matrix(self.rep, self.degree - 1)
        solution = solve(d @ previous.basis_matrix(), f.flat())
        if solution is None:
            return None
        return Cochain.from_flat(self.rep, self.degree - 1, previous.element(solution.particular))


def cohomology(r: Representation, k: int) -> CohomologyGroup:
    """Z^k = ker d em C^k, B^k = d(C^(k-1)) (B^1 = 0)"""
    _check_degree(k)
    cochains = cochain_space(r, k)
    size = comb(r.base.dim, k) * r.v_dim
    if cochains.dim:
        d = coboundary_matrix(r, k)
        cocycles = intersect(cochains, kernel(d)) if d.rows else cochains
    else:
        cocycles = Subspace.zero(size)
    if k == 1:
        coboundaries = Subspace.zero(size)
    else:
        previous = cochain_space(r, k - 1)
        coboundaries = image_of_subspace(coboundary_matrix(r, k - 1), previous)
    if not coboundaries.is_subspace_of(cocycles):
        raise InvariantViolation(f"B^{k} não está contido em Z^{k}")
    group = CohomologyGroup(r, k, cochains, cocycles, coboundaries)
    logger.debug("H^%d(%s): C %d, Z %d, B %d, H %d", k, r.base.name, group.dim_cochains, group.dim_z,
                 group.dim_b, group.dim_h)
    return group


def restrict_to_center(g: HomLieAlgebra, rho_full: Sequence[Matrix], h: HomLieAlgebra,
                       cen: Optional[Subspace] = None) -> Representation:
    """rho restrita a Cen(h), em coordenadas da base RREF do centro, com beta = phi_h|Cen"""
    cen = cen if cen is not None else center(h)
    if len(rho_full) != g.dim:
        raise InputError(f"{len(rho_full)} matrizes rho para álgebra de dimensão {g.dim}")
    for i, m in enumerate(rho_full):
        if m.shape != (h.dim, h.dim):
            raise InputError(f"rho(e{i + 1}) tem forma {m.shape}, esperado {(h.dim, h.dim)}")
        for b in cen.basis:
            if not cen.contains(m.apply(b)):
                raise PreconditionError(f"rho(e{i + 1}) não preserva Cen({h.name})")

    def restrict(m: Matrix) -> Matrix:
        if cen.dim == 0:
            return Matrix.zeros(0, 0)
        return Matrix.from_columns([cen.coordinates(m.apply(b)) for b in cen.basis], cen.dim)

    hat = Representation(g, cen.dim, tuple(restrict(m) for m in rho_full), restrict(h.twist))
    verdict = validate_rep(hat)
    if not verdict.ok:
        raise PreconditionError(f"restrição ao centro não é representação: {verdict.witness.describe()}",
                                verdict.violations)
    return hat

