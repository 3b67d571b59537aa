"""
Derivações Hom: Der(g), Inn(g), Out(g) = Der/Inn e complementos invariantes

D é derivação quando, para todos x, y,
    D[x, y] = [phi x, (Ad_{phi^-1} D) y] + [(Ad_{phi^-1} D) x, phi y]
com Ad_{phi^-1} D = phi^-1 D phi. Matrizes n x n são vetorizadas por linhas
para a aritmética de subespaços em K^(n*n).
"""
import itertools
import logging
import random
from dataclasses import dataclass
from functools import cached_property
from typing import List, Optional, Sequence, Tuple

from services.exactla import (
    Matrix, QuotientSpace, Subspace, Vector, add_vectors, kernel, quotient, solve, sub_vectors,
    unit_vector, vector,
)
from services.homlie import (
    HomLieAlgebra, Verdict, Violation, ad_matrix, bracket, center, gl_bracket,
    inner_derivation_span, validate, format_vector,
)
from utils.exceptions import InputError, InvariantViolation, PreconditionError

logger = logging.getLogger(__name__)


def _derivation_defect(d: Matrix, g: HomLieAlgebra, i: int, j: int) -> Vector:
    """D[e_i,e_j] - [phi e_i, D' e_j] - [D' e_i, phi e_j]"""
    twisted = g.twist_inverse @ d @ g.twist
    phi_i, phi_j = g.twist.column(i), g.twist.column(j)
    lhs = d.apply(g.structure[i][j])
    rhs = add_vectors(bracket(g, phi_i, twisted.column(j)), bracket(g, twisted.column(i), phi_j))
    return sub_vectors(lhs, rhs)


def is_derivation(d: Matrix, g: HomLieAlgebra) -> Verdict:
    if d.shape != (g.dim, g.dim):
        raise InputError(f"D {d.shape} não é endomorfismo de {g.name} (dim {g.dim})")
    violations = []
    for i, j in itertools.combinations(range(g.dim), 2):
        defect = _derivation_defect(d, g, i, j)
        if any(defect):
            violations.append(Violation('derivation', (i, j), f"D[e{i + 1},e{j + 1}] - lado direito = {format_vector(defect)}"))
    return Verdict(tuple(violations))


@dataclass(frozen=True)
class DerivationAlgebra:
    """Der(g) e Inn(g) como subespaços de gl(g) vetorizado"""

    base: HomLieAlgebra
    der: Subspace
    inn: Subspace
    ad_twist_action: Matrix

    @property
    def dim(self) -> int:
        return self.der.dim

    @property
    def der_basis(self) -> List[Matrix]:
        n = self.base.dim
        return [Matrix.from_vector(b, n, n) for b in self.der.basis]

    def coordinates(self, d: Matrix) -> Vector:
        """Coordenadas de uma derivação na base RREF de Der"""
        return self.der.coordinates(d.vectorize())

    def element(self, coordinates: Sequence) -> Matrix:
        n = self.base.dim
        return Matrix.from_vector(self.der.element(coordinates), n, n)

    @cached_property
    def inn_in_der(self) -> Subspace:
        """Inn(g) em coordenadas de Der(g)"""
        return Subspace.span(self.der.dim, [self.der.coordinates(b) for b in self.inn.basis])


def twist_conjugation(g: HomLieAlgebra, d: Matrix) -> Matrix:
    """Ad_phi(D) = phi D phi^-1"""
    return g.twist @ d @ g.twist_inverse


def derivation_algebra(g: HomLieAlgebra) -> DerivationAlgebra:
    """
    Resolve o sistema linear da condição de derivação: n^2 incógnitas, uma
    equação vetorial por par i < j.
    """
    n = g.dim
    pairs = list(itertools.combinations(range(n), 2))
    columns = []
    for a in range(n):
        for b in range(n):
            unit = Matrix.unit(n, n, a, b)
            columns.append(tuple(c for i, j in pairs for c in _derivation_defect(unit, g, i, j)))
    logger.debug("%s: sistema de derivações %dx%d", g.name, len(pairs) * n, n * n)
    if pairs:
        der = kernel(Matrix.from_columns(columns, len(pairs) * n))
    else:
        der = Subspace.full(n * n)
    inn = inner_derivation_span(g)
    if not inn.is_subspace_of(der):
        raise InvariantViolation(f"{g.name}: Inn não está contido em Der")

    images = [der.coordinates(twist_conjugation(g, Matrix.from_vector(b, n, n)).vectorize()) for b in der.basis]
    action = Matrix.from_columns(images, der.dim)
    result = DerivationAlgebra(g, der, inn, action)
    if not result.inn_in_der.is_invariant_under(action):
        raise InvariantViolation(f"{g.name}: Ad_phi(Inn) não está contido em Inn")
    logger.debug("%s: dim Der = %d, dim Inn = %d", g.name, der.dim, inn.dim)
    return result


@dataclass(frozen=True)
class OutAlgebra:
    """
    Out(g) = Der(g)/Inn(g) com colchete e twist induzidos.

    As coordenadas de Out são relativas ao complemento canônico de Inn
    dentro de Der (em coordenadas de Der).
    """

    derivations: DerivationAlgebra
    quotient: QuotientSpace
    structure: Tuple[Tuple[Vector, ...], ...]
    twist: Matrix

    @property
    def dim(self) -> int:
        return self.quotient.dim

    def project(self, d: Matrix) -> Vector:
        """pi: Der -> Out em coordenadas de Out"""
        return self.quotient.project(self.derivations.coordinates(d))

    def representative(self, coordinates: Sequence) -> Matrix:
        """Representante canônico (complemento) da classe dada"""
        return self.derivations.element(self.quotient.lift(coordinates))

    @cached_property
    def algebra(self) -> HomLieAlgebra:
        return HomLieAlgebra(f"Out({self.derivations.base.name})", self.dim, self.structure, self.twist)


def out_algebra(d: DerivationAlgebra, rng: Optional[random.Random] = None) -> OutAlgebra:
    """
    Estrutura induzida nos representantes canônicos. A boa definição é
    conferida somando elementos aleatórios de Inn aos representantes.
    """
    g = d.base
    q = quotient(d.dim, d.inn_in_der)
    reps = [d.element(q.lift(unit_vector(q.dim, a))) for a in range(q.dim)]

    def project(m: Matrix) -> Vector:
        return q.project(d.coordinates(m))

    structure = tuple(tuple(project(gl_bracket(x, y, g.twist)) for y in reps) for x in reps)
    twist = Matrix.from_columns([project(twist_conjugation(g, x)) for x in reps], q.dim)

    rng = rng or random.Random(0)
    inner = d.inn
    n = g.dim
    for a, b in itertools.product(range(q.dim), repeat=2):
        x = reps[a] + Matrix.from_vector(inner.random_element(rng), n, n)
        y = reps[b] + Matrix.from_vector(inner.random_element(rng), n, n)
        if project(gl_bracket(x, y, g.twist)) != structure[a][b]:
            raise InvariantViolation(f"{g.name}: colchete em Out depende do representante ({a}, {b})")
    for a in range(q.dim):
        x = reps[a] + Matrix.from_vector(inner.random_element(rng), n, n)
        if project(twist_conjugation(g, x)) != twist.column(a):
            raise InvariantViolation(f"{g.name}: Ad' em Out depende do representante ({a})")

    result = OutAlgebra(d, q, structure, twist)
    verdict = validate(result.algebra)
    if not verdict.ok:
        raise InvariantViolation(f"Out({g.name}) não é Hom-Lie: {verdict.witness.describe()}")
    logger.debug("%s: dim Out = %d", g.name, q.dim)
    return result


def out_as_algebra(o: OutAlgebra) -> HomLieAlgebra:
    return o.algebra


# ----------------------------------------------------------------------
# Identidades de Inn
# ----------------------------------------------------------------------

def ad_twist_identity(g: HomLieAlgebra) -> Verdict:
    """Ad_phi(ad_x) = ad_{phi x} na base"""
    violations = []
    for i in range(g.dim):
        e = unit_vector(g.dim, i)
        if twist_conjugation(g, ad_matrix(g, e)) != ad_matrix(g, g.phi(e)):
            violations.append(Violation('ad_twist', (i,), f"Ad_phi(ad_e{i + 1}) != ad_(phi e{i + 1})"))
    return Verdict(tuple(violations))


def bracket_with_inner_identity(d: DerivationAlgebra) -> Verdict:
    """[D, ad_x]_phi = ad_{D x} para D na base de Der e x na base de g"""
    g = d.base
    violations = []
    for a, der in enumerate(d.der_basis):
        for i in range(g.dim):
            e = unit_vector(g.dim, i)
            if gl_bracket(der, ad_matrix(g, e), g.twist) != ad_matrix(g, der.apply(e)):
                violations.append(Violation('bracket_with_inner', (a, i), f"[D{a + 1}, ad_e{i + 1}] != ad_(D{a + 1} e{i + 1})"))
    return Verdict(tuple(violations))


def derivation_closure(d: DerivationAlgebra) -> Verdict:
    """Der é fechado por [.,.]_phi e por Ad_phi"""
    g = d.base
    basis = d.der_basis
    violations = []
    for a, b in itertools.combinations(range(len(basis)), 2):
        if not d.der.contains(gl_bracket(basis[a], basis[b], g.twist).vectorize()):
            violations.append(Violation('der_bracket', (a, b)))
    for a, der in enumerate(basis):
        if not d.der.contains(twist_conjugation(g, der).vectorize()):
            violations.append(Violation('der_twist', (a,)))
    return Verdict(tuple(violations))


# ----------------------------------------------------------------------
# Complementos invariantes e seções diagonais
# ----------------------------------------------------------------------

def invariant_complement(ambient_dim: int, u: Subspace, a: Matrix,
                         rng: Optional[random.Random] = None) -> Optional[Subspace]:
    """
    Complemento W de U com A(W) contido em W, ou None se não existe sobre Q.

    P0 é a projeção sobre U ao longo do complemento coordenado canônico;
    procura-se Q com imagem em U e U no núcleo tal que P0 + Q comute com A,
    ou seja Q A - A Q = A P0 - P0 A. W = ker(P0 + Q). Com rng, soma à
    solução canônica um elemento aleatório do núcleo (outra escolha de W).
    """
    if u.ambient_dim != ambient_dim or a.shape != (ambient_dim, ambient_dim):
        raise InputError(f"A {a.shape} e U em K^{u.ambient_dim} não vivem em K^{ambient_dim}")
    if not a.is_invertible():
        raise InputError("operador singular")
    if not u.is_invariant_under(a):
        raise PreconditionError("A(U) não está contido em U")

    m = ambient_dim
    q = quotient(m, u)
    p0 = Matrix.from_columns([sub_vectors(unit_vector(m, i), q.reduce(unit_vector(m, i))) for i in range(m)], m)
    if u.dim == 0 or q.dim == 0:
        return Subspace.span(m, q.complement_basis)

    basis = u.basis_matrix()
    projection = q.projection_matrix()
    columns = []
    units = []
    for r in range(u.dim):
        for c in range(q.dim):
            unit = basis @ Matrix.unit(u.dim, q.dim, r, c) @ projection
            units.append(unit)
            columns.append((unit @ a - a @ unit).vectorize())
    rhs = (a @ p0 - p0 @ a).vectorize()
    solution = solve(Matrix.from_columns(columns, m * m), rhs)
    if solution is None:
        logger.info("sem complemento invariante sobre Q (dim U = %d, ambiente %d)", u.dim, m)
        return None

    coefficients = solution.particular
    if rng is not None and solution.kernel.dim:
        coefficients = add_vectors(coefficients, solution.kernel.random_element(rng))
    p = p0
    for coefficient, unit in zip(coefficients, units):
        if coefficient:
            p = p + unit.scale(coefficient)
    w = kernel(p)
    if w.dim != q.dim or not w.is_invariant_under(a):
        raise InvariantViolation("complemento invariante calculado não é complemento invariante")
    return w


@dataclass(frozen=True)
class DerivationSection:
    """Seção linear s: Out -> Der, como matriz (n*n) x dim Out sobre gl(g) vetorizado"""

    out: OutAlgebra
    matrix: Matrix

    def __call__(self, coordinates: Sequence) -> Matrix:
        n = self.out.derivations.base.dim
        return Matrix.from_vector(self.matrix.apply(vector(coordinates)), n, n)


def diagonal_section_der(d: DerivationAlgebra, o: OutAlgebra,
                         rng: Optional[random.Random] = None) -> Optional[DerivationSection]:
    """s = (pi restrito a W)^-1 para W complemento Ad_phi-invariante de Inn em Der"""
    if o.derivations != d:
        raise InputError("Out e Der calculados de álgebras diferentes")
    w = invariant_complement(d.dim, d.inn_in_der, d.ad_twist_action, rng)
    if w is None:
        return None
    n = d.base.dim
    if o.dim == 0:
        return DerivationSection(o, Matrix.zeros(n * n, 0))
    w_basis = w.basis_matrix()
    restricted = o.quotient.projection_matrix() @ w_basis
    in_der = w_basis @ restricted.inverse()
    section = DerivationSection(o, d.der.basis_matrix() @ in_der)

    for a in range(o.dim):
        e = unit_vector(o.dim, a)
        image = section(e)
        if o.project(image) != e:
            raise InvariantViolation("pi o s != id")
        if twist_conjugation(d.base, image) != section(o.twist.column(a)):
            raise InvariantViolation("Ad_phi o s != s o Ad'")
    return section


@dataclass(frozen=True)
class InnerSplitting:
    """
    t: Inn(h) -> h com ad o t = id e phi o t = t o Ad_phi, em coordenadas
    da base RREF de Inn(h) (matriz dim h x dim Inn).
    """

    base: HomLieAlgebra
    inn: Subspace
    complement: Subspace
    matrix: Matrix

    def __call__(self, d: Matrix) -> Vector:
        return self.matrix.apply(self.inn.coordinates(d.vectorize()))


def inner_splitting(h: HomLieAlgebra, rng: Optional[random.Random] = None) -> Optional[InnerSplitting]:
    """Inverso de ad sobre um complemento phi-invariante de Cen(h); None se não existe sobre Q"""
    cen = center(h)
    w = invariant_complement(h.dim, cen, h.twist, rng)
    if w is None:
        return None
    inn = inner_derivation_span(h)
    if w.dim == 0:
        return InnerSplitting(h, inn, w, Matrix.zeros(h.dim, 0))
    coords = Matrix.from_columns([inn.coordinates(ad_matrix(h, b).vectorize()) for b in w.basis], inn.dim)
    t = InnerSplitting(h, inn, w, w.basis_matrix() @ coords.inverse())
    for b in inn.basis:
        x = Matrix.from_vector(b, h.dim, h.dim)
        if ad_matrix(h, t(x)) != x:
            raise InvariantViolation("ad o t != id")
        if h.phi(t(x)) != t(twist_conjugation(h, x)):
            raise InvariantViolation("phi o t != t o Ad_phi")
    return t
