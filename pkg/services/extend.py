"""
Extensões não abelianas diagonais de g por h

Um dado de extensão (rho, omega) define em g (+) h o colchete
    [x+u, y+v] = [x,y]_g + omega(x,y) + rho_x(v) - rho_y(u) + [u,v]_h
e o twist phi(x+u) = phi_g(x) + phi_h(u). A base do total é a de g seguida
da de h. Aplicações lineares g -> h (xi, c) são matrizes dim h x dim g.
"""
import itertools
import logging
import random
from dataclasses import dataclass, field
from typing import List, Mapping, Optional, Sequence, Tuple, Union

from services.cohom import (
    Cochain, CohomologyGroup, Representation, coboundary, cochain_space, cohomology, evaluate,
    formal_representation, restrict_to_center,
)
from services.derived import (
    DerivationSection, InnerSplitting, OutAlgebra, derivation_algebra, diagonal_section_der,
    inner_splitting, invariant_complement, is_derivation, out_algebra,
)
from services.exactla import (
    Matrix, Subspace, Vector, add_vectors, block_diagonal, image, is_zero_vector, rank, solve,
    sub_vectors, unit_vector, vector, zero_vector,
)
from services.homlie import (
    HomLieAlgebra, LinearMapBetween, Verdict, Violation, ad_matrix, bracket, center, format_vector,
    gl_bracket, is_morphism, validate,
)
from utils.exceptions import (
    HypothesisError, InputError, InvalidAlgebraError, InvariantViolation, NotExtensibleError,
    PreconditionError,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ExtensionData:
    g: HomLieAlgebra
    h: HomLieAlgebra
    rho: Tuple[Matrix, ...]
    omega: Cochain

    def __post_init__(self):
        if len(self.rho) != self.g.dim:
            raise InputError(f"{len(self.rho)} matrizes rho para g de dimensão {self.g.dim}")
        for i, m in enumerate(self.rho):
            if m.shape != (self.h.dim, self.h.dim):
                raise InputError(f"rho(e{i + 1}) tem forma {m.shape}, esperado {(self.h.dim, self.h.dim)}")
        if self.omega.degree != 2 or self.omega.rep.base.dim != self.g.dim or self.omega.rep.v_dim != self.h.dim:
            raise InputError("omega deve ser uma 2-cocadeia em g com valores em h")

    @classmethod
    def create(cls, g: HomLieAlgebra, h: HomLieAlgebra, rho: Sequence[Matrix],
               omega: Union[Cochain, Mapping[Tuple[int, int], Sequence], None] = None) -> 'ExtensionData':
        rep = formal_representation(g, h.dim, rho, h.twist)
        if omega is None:
            cochain = Cochain.zero(rep, 2)
        elif isinstance(omega, Cochain):
            cochain = omega.with_rep(rep)
        else:
            cochain = Cochain.from_mapping(rep, 2, omega)
        return cls(g, h, tuple(rho), cochain)

    @property
    def rep(self) -> Representation:
        return self.omega.rep

    def rho_of(self, x: Sequence) -> Matrix:
        return self.rep.action(x)

    def omega_of(self, x: Sequence, y: Sequence) -> Vector:
        return evaluate(self.omega, [x, y])

    def with_omega(self, omega: Cochain) -> 'ExtensionData':
        return ExtensionData(self.g, self.h, self.rho, omega.with_rep(self.rep))


def _cyclic_triples(i: int, j: int, k: int):
    return ((i, j, k), (j, k, i), (k, i, j))


def validate_extension_data(data: ExtensionData) -> Verdict:
    """Equações (p1)-(p5) nas uplas da base, com testemunha por violação"""
    g, h = data.g, data.h
    violations: List[Violation] = []
    phi_cols = g.twist.columns()

    for i in range(g.dim):
        if h.twist @ data.rho[i] != data.rho_of(phi_cols[i]) @ h.twist:
            violations.append(Violation('p1', (i,), f"phi_h rho(e{i + 1}) != rho(phi e{i + 1}) phi_h"))
    for i in range(g.dim):
        verdict = is_derivation(data.rho[i], h)
        if not verdict.ok:
            violations.append(Violation('p2', (i,), f"rho(e{i + 1}) não é derivação: {verdict.witness.describe('u')}"))
    for i, j in itertools.combinations(range(g.dim), 2):
        lhs = h.phi(data.omega.value((i, j)))
        rhs = data.omega_of(phi_cols[i], phi_cols[j])
        if lhs != rhs:
            violations.append(Violation('p3', (i, j), f"phi_h omega = {format_vector(lhs)} mas "
                                                      f"omega(phi e{i + 1}, phi e{j + 1}) = {format_vector(rhs)}"))
    for i, j in itertools.combinations(range(g.dim), 2):
        alpha = gl_bracket(data.rho[i], data.rho[j], h.twist) - data.rho_of(g.structure[i][j])
        if alpha != ad_matrix(h, data.omega.value((i, j))):
            violations.append(Violation('p4', (i, j), f"[rho_e{i + 1}, rho_e{j + 1}] - rho_[e{i + 1},e{j + 1}] "
                                                      f"!= ad_omega(e{i + 1},e{j + 1})"))
    for i, j, k in itertools.combinations(range(g.dim), 3):
        lhs = zero_vector(h.dim)
        rhs = zero_vector(h.dim)
        for a, b, c in _cyclic_triples(i, j, k):
            lhs = add_vectors(lhs, data.rho_of(phi_cols[a]).apply(data.omega.value((b, c))))
            rhs = add_vectors(rhs, data.omega_of(g.structure[a][b], phi_cols[c]))
        if lhs != rhs:
            violations.append(Violation('p5', (i, j, k), f"{format_vector(lhs)} != {format_vector(rhs)}"))
    return Verdict(tuple(violations))


# ----------------------------------------------------------------------
# Construção e extração
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class RawExtension:
    """Total ĝ com inclusão iota: h -> ĝ e projeção p: ĝ -> g, sem seção escolhida"""

    g: HomLieAlgebra
    h: HomLieAlgebra
    total: HomLieAlgebra
    iota: Matrix
    projection: Matrix

    def __post_init__(self):
        if self.total.dim != self.g.dim + self.h.dim:
            raise InputError(f"total de dimensão {self.total.dim} não é dim g + dim h = "
                             f"{self.g.dim + self.h.dim}")
        if self.iota.shape != (self.total.dim, self.h.dim):
            raise InputError(f"iota {self.iota.shape} não vai de h em ĝ")
        if self.projection.shape != (self.g.dim, self.total.dim):
            raise InputError(f"p {self.projection.shape} não vai de ĝ em g")


@dataclass(frozen=True)
class ExtensionAlgebra:
    data: ExtensionData
    total: HomLieAlgebra
    iota: Matrix
    projection: Matrix
    section: Matrix

    def raw(self) -> RawExtension:
        return RawExtension(self.data.g, self.data.h, self.total, self.iota, self.projection)


def _total_structure(data: ExtensionData) -> Tuple[Tuple[Vector, ...], ...]:
    g, h = data.g, data.h
    m, n = g.dim, h.dim

    def entry(a: int, b: int) -> Vector:
        if a < m and b < m:
            return g.structure[a][b] + data.omega.value((a, b))
        if a < m <= b:
            return zero_vector(m) + data.rho[a].column(b - m)
        if b < m <= a:
            return zero_vector(m) + tuple(-c for c in data.rho[b].column(a - m))
        return zero_vector(m) + h.structure[a - m][b - m]

    return tuple(tuple(entry(a, b) for b in range(m + n)) for a in range(m + n))


def build_extension(data: ExtensionData, force: bool = False) -> ExtensionAlgebra:
    """
    Monta (g (+) h, [.,.]_(rho,omega), phi). Sem force, recusa dados que
    violam (p1)-(p5); com force devolve o total mesmo inválido.
    """
    if not force:
        report = validate_extension_data(data)
        if not report.ok:
            raise InvalidAlgebraError(f"dado de extensão inválido: {report.witness.describe()}", report.violations)
    g, h = data.g, data.h
    m, n = g.dim, h.dim
    total = HomLieAlgebra(f"{g.name}x{h.name}", m + n, _total_structure(data), block_diagonal(g.twist, h.twist))
    iota = Matrix.from_columns([unit_vector(m + n, m + a) for a in range(n)], m + n) if n else Matrix.zeros(m + n, 0)
    projection = Matrix.from_rows([unit_vector(m + n, i) for i in range(m)], m + n) if m else Matrix.zeros(0, m + n)
    section = projection.transpose()
    result = ExtensionAlgebra(data, total, iota, projection, section)
    if not force:
        verdict = validate(total)
        if not verdict.ok:
            raise InvariantViolation(f"total não é Hom-Lie apesar de (p1)-(p5): {verdict.witness.describe()}")
        if not is_morphism(LinearMapBetween.of(iota), h, total).ok \
                or not is_morphism(LinearMapBetween.of(projection), total, g).ok:
            raise InvariantViolation("iota ou p não é morfismo")
    return result


def _check_raw(raw: RawExtension):
    verdict = validate(raw.total)
    if not verdict.ok:
        raise InvalidAlgebraError(f"{raw.total.name} não é Hom-Lie: {verdict.witness.describe()}", verdict.violations)
    n, m = raw.h.dim, raw.g.dim
    if rank(raw.iota) != n or rank(raw.projection) != m or not (raw.projection @ raw.iota).is_zero():
        raise PreconditionError("h -> ĝ -> g não é sequência exata curta")
    for label, f, a, b in (('iota', raw.iota, raw.h, raw.total), ('p', raw.projection, raw.total, raw.g)):
        verdict = is_morphism(LinearMapBetween.of(f), a, b)
        if not verdict.ok:
            raise PreconditionError(f"{label} não é morfismo: {verdict.witness.describe()}", verdict.violations)


def diagonal_section(raw: RawExtension, rng: Optional[random.Random] = None) -> Optional[Matrix]:
    """s: g -> ĝ com p s = id e phi s = s phi_g, a partir de um complemento invariante de iota(h)"""
    n, m = raw.h.dim, raw.g.dim
    w = invariant_complement(raw.total.dim, image(raw.iota), raw.total.twist, rng)
    if w is None:
        return None
    if m == 0:
        return Matrix.zeros(raw.total.dim, 0)
    basis = w.basis_matrix()
    return basis @ (raw.projection @ basis).inverse()


def _check_section(raw: RawExtension, s: Matrix):
    if s.shape != (raw.total.dim, raw.g.dim):
        raise InputError(f"seção {s.shape} não vai de g em ĝ")
    if raw.projection @ s != Matrix.identity(raw.g.dim):
        raise PreconditionError("p o s != id")
    if raw.total.twist @ s != s @ raw.g.twist:
        raise PreconditionError("seção não é diagonal: phi o s != s o phi_g")


def extract_data(source: Union[ExtensionAlgebra, RawExtension], section: Optional[Matrix] = None,
                 rng: Optional[random.Random] = None) -> ExtensionData:
    """
    omega(x,y) = [s x, s y] - s[x,y]_g e rho_x(u) = [s x, iota u], lidos em h
    pela inclusão. Sem seção dada, usa a de um ExtensionAlgebra ou calcula
    uma seção diagonal.
    """
    if isinstance(source, ExtensionAlgebra):
        raw = source.raw()
        if section is None:
            section = source.section
    else:
        raw = source
    _check_raw(raw)
    if section is None:
        section = diagonal_section(raw, rng)
        if section is None:
            raise HypothesisError('extension', "extensão não é diagonal sobre Q")
    _check_section(raw, section)

    g, h, total = raw.g, raw.h, raw.total

    def to_h(v: Vector) -> Vector:
        solution = solve(raw.iota, v)
        if solution is None:
            raise InvariantViolation("valor fora de iota(h)")
        return solution.particular

    lifts = section.columns()
    rho = []
    for i in range(g.dim):
        columns = [to_h(bracket(total, lifts[i], raw.iota.column(a))) for a in range(h.dim)]
        rho.append(Matrix.from_columns(columns, h.dim) if columns else Matrix.zeros(0, 0))
    omega = {}
    for i, j in itertools.combinations(range(g.dim), 2):
        omega[(i, j)] = to_h(sub_vectors(bracket(total, lifts[i], lifts[j]), section.apply(g.structure[i][j])))
    data = ExtensionData.create(g, h, rho, omega)
    verdict = validate_extension_data(data)
    if not verdict.ok:
        raise InvariantViolation(f"dado extraído viola {verdict.witness.describe()}")
    return data


# ----------------------------------------------------------------------
# Isomorfismo de extensões
# ----------------------------------------------------------------------

def _ad_columns(h: HomLieAlgebra) -> Matrix:
    """u -> vec(ad_u), matriz n^2 x n"""
    n = h.dim
    return Matrix.from_columns([ad_matrix(h, unit_vector(n, a)).vectorize() for a in range(n)], n * n)


def _isom3_rhs(d: ExtensionData, xi: Matrix, i: int, j: int) -> Vector:
    """rho_x xi(y) - rho_y xi(x) + [xi x, xi y] - xi[x,y] em (e_i, e_j)"""
    cols = xi.columns()
    value = sub_vectors(d.rho[i].apply(cols[j]), d.rho[j].apply(cols[i]))
    value = add_vectors(value, bracket(d.h, cols[i], cols[j]))
    return sub_vectors(value, xi.apply(d.g.structure[i][j]))


def transport(d: ExtensionData, xi: Matrix) -> ExtensionData:
    """Dado (rho', omega') obtido de d por xi via (isom2)-(isom3)"""
    if xi.shape != (d.h.dim, d.g.dim):
        raise InputError(f"xi {xi.shape} não vai de g em h")
    cols = xi.columns()
    rho = [d.rho[i] + ad_matrix(d.h, cols[i]) for i in range(d.g.dim)]
    omega = {(i, j): add_vectors(d.omega.value((i, j)), _isom3_rhs(d, xi, i, j))
             for i, j in itertools.combinations(range(d.g.dim), 2)}
    return ExtensionData.create(d.g, d.h, rho, omega)


def _check_same_pair(d1: ExtensionData, d2: ExtensionData):
    if d1.g != d2.g or d1.h != d2.h:
        raise InputError("dados de extensão sobre pares (g, h) diferentes")


def verify_isomorphism_witness(d1: ExtensionData, d2: ExtensionData, xi: Matrix) -> Verdict:
    """(isom1)-(isom3) para xi: g -> h levando d1 em d2"""
    _check_same_pair(d1, d2)
    g, h = d1.g, d1.h
    if xi.shape != (h.dim, g.dim):
        raise InputError(f"xi {xi.shape} não vai de g em h")
    violations: List[Violation] = []
    for i in range(g.dim):
        if h.phi(xi.column(i)) != xi.apply(g.twist.column(i)):
            violations.append(Violation('isom1', (i,), f"phi_h xi(e{i + 1}) != xi(phi e{i + 1})"))
    for i in range(g.dim):
        if d2.rho[i] - d1.rho[i] != ad_matrix(h, xi.column(i)):
            violations.append(Violation('isom2', (i,), f"rho'(e{i + 1}) - rho(e{i + 1}) != ad_xi(e{i + 1})"))
    for i, j in itertools.combinations(range(g.dim), 2):
        lhs = sub_vectors(d2.omega.value((i, j)), d1.omega.value((i, j)))
        if lhs != _isom3_rhs(d1, xi, i, j):
            violations.append(Violation('isom3', (i, j), f"omega' - omega = {format_vector(lhs)}"))
    return Verdict(tuple(violations))


def _inner_preimage(h: HomLieAlgebra, deltas: Sequence[Matrix]) -> Optional[Matrix]:
    """xi0 com ad_{xi0(e_i)} = deltas[i], ou None se algum delta não é interno"""
    ads = _ad_columns(h)
    columns = []
    for delta in deltas:
        solution = solve(ads, delta.vectorize())
        if solution is None:
            return None
        columns.append(solution.particular)
    if not columns:
        return Matrix.zeros(h.dim, 0)
    return Matrix.from_columns(columns, h.dim)


def _central_correction(d1: ExtensionData, xi0: Matrix, cen: Subspace,
                        target_omega: Optional[Cochain]) -> Optional[Matrix]:
    """
    c: g -> Cen(h) tal que xi0 + c satisfaz (isom1) e, se target_omega for
    dado, (isom3). Termos quadráticos em c somem porque c é central.
    """
    g, h = d1.g, d1.h
    m, n, r = g.dim, h.dim, cen.dim
    pairs = list(itertools.combinations(range(m), 2)) if target_omega is not None else []

    def equations(c: Matrix) -> Vector:
        out = list((h.twist @ c - c @ g.twist).vectorize())
        cols = c.columns()
        for i, j in pairs:
            value = sub_vectors(d1.rho[i].apply(cols[j]), d1.rho[j].apply(cols[i]))
            out.extend(sub_vectors(value, c.apply(g.structure[i][j])))
        return tuple(out)

    rhs = list((xi0 @ g.twist - h.twist @ xi0).vectorize())
    for i, j in pairs:
        rhs.extend(sub_vectors(sub_vectors(target_omega.value((i, j)), d1.omega.value((i, j))),
                               _isom3_rhs(d1, xi0, i, j)))
    rhs = tuple(rhs)

    if r * m == 0:
        return Matrix.zeros(n, m) if is_zero_vector(rhs) else None
    basis = cen.basis_matrix()
    units = [basis @ Matrix.unit(r, m, a, b) for a in range(r) for b in range(m)]
    system = Matrix.from_columns([equations(u) for u in units], len(rhs))
    solution = solve(system, rhs)
    if solution is None:
        return None
    c = Matrix.zeros(n, m)
    for coefficient, unit in zip(solution.particular, units):
        if coefficient:
            c = c + unit.scale(coefficient)
    return c


def isomorphic(d1: ExtensionData, d2: ExtensionData) -> Optional[Matrix]:
    """
    Testemunha xi: g -> h com d2 = transport(d1, xi) e (isom1), ou None.

    Dois sistemas lineares: primeiro xi0 com ad_{xi0(x)} = rho'_x - rho_x,
    depois a correção central c resolvendo (isom1) e (isom3).
    """
    _check_same_pair(d1, d2)
    xi0 = _inner_preimage(d1.h, [b - a for a, b in zip(d1.rho, d2.rho)])
    if xi0 is None:
        logger.debug("rho' - rho não é interna")
        return None
    c = _central_correction(d1, xi0, center(d1.h), d2.omega)
    if c is None:
        return None
    xi = xi0 + c
    verdict = verify_isomorphism_witness(d1, d2, xi)
    if not verdict.ok:
        raise InvariantViolation(f"testemunha de isomorfismo falhou: {verdict.witness.describe()}")
    return xi


# ----------------------------------------------------------------------
# Morfismos em Out(h), levantamento e obstrução
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class OutMorphism:
    """rho-barra: g -> Out(h), imagens em coordenadas da base canônica de Out"""

    g: HomLieAlgebra
    target: OutAlgebra
    images: Tuple[Vector, ...]

    def __post_init__(self):
        if len(self.images) != self.g.dim or any(len(v) != self.target.dim for v in self.images):
            raise InputError(f"rho-barra precisa de {self.g.dim} vetores em K^{self.target.dim}")

    @property
    def h(self) -> HomLieAlgebra:
        return self.target.derivations.base

    @property
    def matrix(self) -> Matrix:
        if not self.images:
            return Matrix.zeros(self.target.dim, 0)
        return Matrix.from_columns(self.images, self.target.dim)

    def check(self) -> Verdict:
        return is_morphism(LinearMapBetween(self.g.dim, self.target.dim, self.matrix), self.g, self.target.algebra)

    def is_zero(self) -> bool:
        return all(is_zero_vector(v) for v in self.images)


def out_morphism(g: HomLieAlgebra, target: OutAlgebra, images: Sequence[Sequence]) -> OutMorphism:
    """Constrói e confere que rho-barra é morfismo de álgebras Hom-Lie"""
    rbar = OutMorphism(g, target, tuple(vector(v) for v in images))
    verdict = rbar.check()
    if not verdict.ok:
        raise PreconditionError(f"rho-barra não é morfismo em Out: {verdict.witness.describe()}", verdict.violations)
    return rbar


def induced_out_morphism(data: ExtensionData, out: Optional[OutAlgebra] = None) -> OutMorphism:
    """rho-barra = pi o rho"""
    report = validate_extension_data(data)
    if not report.ok:
        raise InvalidAlgebraError(f"dado de extensão inválido: {report.witness.describe()}", report.violations)
    if out is None:
        out = out_algebra(derivation_algebra(data.h))
    elif out.derivations.base != data.h:
        raise InputError("Out calculado para outra álgebra")
    rbar = OutMorphism(data.g, out, tuple(out.project(m) for m in data.rho))
    verdict = rbar.check()
    if not verdict.ok:
        raise InvariantViolation(f"pi o rho não é morfismo: {verdict.witness.describe()}")
    return rbar


def lift_out_morphism(rbar: OutMorphism, s: DerivationSection) -> Tuple[Matrix, ...]:
    """rho_x = s(rho-barra_x)"""
    if s.out != rbar.target:
        raise InputError("seção e rho-barra sobre Out diferentes")
    rho = tuple(s(v) for v in rbar.images)
    h = rbar.h
    for i, (m, v) in enumerate(zip(rho, rbar.images)):
        if rbar.target.project(m) != v:
            raise InvariantViolation(f"pi o rho != rho-barra em e{i + 1}")
        if not is_derivation(m, h).ok:
            raise InvariantViolation(f"rho(e{i + 1}) não é derivação")
    return rho


def construct_omega(g: HomLieAlgebra, rho: Sequence[Matrix], h: HomLieAlgebra, t: InnerSplitting) -> Cochain:
    """
    omega = t o alpha, alpha(x,y) = [rho_x, rho_y]_phi - rho_[x,y], que
    precisa estar em Inn(h).
    """
    rep = formal_representation(g, h.dim, rho, h.twist)
    values = {}
    for i, j in itertools.combinations(range(g.dim), 2):
        alpha = gl_bracket(rho[i], rho[j], h.twist) - rep.action(g.structure[i][j])
        if not t.inn.contains(alpha.vectorize()):
            raise PreconditionError(f"rho-barra não é levantável: alpha(e{i + 1},e{j + 1}) não é interna")
        values[(i, j)] = t(alpha)
    omega = Cochain.from_mapping(rep, 2, values)
    for i, j in itertools.combinations(range(g.dim), 2):
        alpha = gl_bracket(rho[i], rho[j], h.twist) - rep.action(g.structure[i][j])
        if ad_matrix(h, omega.value((i, j))) != alpha:
            raise InvariantViolation("ad o omega != alpha")
        if h.phi(omega.value((i, j))) != evaluate(omega, [g.twist.column(i), g.twist.column(j)]):
            raise InvariantViolation("omega não é compatível com os twists")
    return omega


def _standing_choices(rbar: OutMorphism, rng: Optional[random.Random]) -> Tuple[DerivationSection, InnerSplitting]:
    d = rbar.target.derivations
    s = diagonal_section_der(d, rbar.target, rng)
    if s is None:
        raise HypothesisError('der_out')
    t = inner_splitting(rbar.h, rng)
    if t is None:
        raise HypothesisError('center_inn')
    return s, t


def _central_cochain(values: Cochain, cen: Subspace, rep: Representation) -> Cochain:
    """Cocadeia com valores em Cen(h) reescrita em coordenadas do centro"""
    return Cochain(rep, values.degree, tuple(cen.coordinates(v) for v in values.values))


def _embed_central(values: Cochain, cen: Subspace, rep: Representation) -> Cochain:
    return Cochain(rep, values.degree, tuple(cen.element(v) for v in values.values))


@dataclass(frozen=True)
class ObstructionResult:
    rbar: OutMorphism
    rho: Tuple[Matrix, ...]
    omega: Cochain
    center: Subspace
    hat_rep: Representation
    three_cocycle: Cochain
    class_is_zero: bool
    class_coordinates: Vector
    witness_sigma: Optional[Cochain] = None
    repaired: Optional[ExtensionData] = None
    extension: Optional[ExtensionAlgebra] = field(default=None, compare=False)


def obstruction(rbar: OutMorphism, g: Optional[HomLieAlgebra] = None,
                rng: Optional[random.Random] = None) -> ObstructionResult:
    """
    Classe [d_rho omega] em H^3(g; rho-chapéu). Com rng, sorteia outra seção
    diagonal, outro t e soma a omega uma 2-cocadeia central compatível.
    """
    g = g if g is not None else rbar.g
    if g != rbar.g:
        raise InputError("rho-barra definido em outra álgebra")
    h = rbar.h
    s, t = _standing_choices(rbar, rng)
    rho = lift_out_morphism(rbar, s)
    omega = construct_omega(g, rho, h, t)
    cen = center(h)
    hat = restrict_to_center(g, rho, h, cen)
    if rng is not None:
        space = cochain_space(hat, 2)
        if space.dim:
            tau = Cochain.from_flat(hat, 2, space.random_element(rng))
            omega = omega + _embed_central(tau, cen, omega.rep)

    eta = coboundary(omega.rep, omega)
    for t_index, value in zip(eta.tuples, eta.values):
        if not cen.contains(value):
            raise InvariantViolation(f"d_rho omega{tuple(a + 1 for a in t_index)} fora de Cen(h)")
    eta_hat = _central_cochain(eta, cen, hat)
    h3 = cohomology(hat, 3)
    if not h3.is_cocycle(eta_hat):
        raise InvariantViolation("d_rho omega não é 3-cociclo")
    coordinates = h3.class_coordinates(eta_hat)
    zero = h3.is_coboundary(eta_hat)
    logger.info("obstrução de %s -> Out(%s): classe %s", g.name, h.name, "nula" if zero else "não nula")
    if not zero:
        return ObstructionResult(rbar, rho, omega, cen, hat, eta_hat, False, coordinates)

    sigma = h3.primitive(eta_hat)
    if sigma is None:
        raise InvariantViolation("classe nula sem primitiva")
    repaired = ExtensionData(g, h, rho, (omega - _embed_central(sigma, cen, omega.rep)))
    verdict = validate_extension_data(repaired)
    if not verdict.ok:
        raise InvariantViolation(f"dado reparado viola {verdict.witness.describe()}")
    return ObstructionResult(rbar, rho, omega, cen, hat, eta_hat, True, coordinates, sigma, repaired,
                             build_extension(repaired))


# ----------------------------------------------------------------------
# Classificação por H^2
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class Classification:
    base: ExtensionData
    center: Subspace
    hat_rep: Representation
    h2: CohomologyGroup

    @property
    def dim(self) -> int:
        return self.h2.dim_h

    def datum(self, lam: Cochain) -> ExtensionData:
        """(rho, omega0 + lambda) para lambda 2-cociclo com valores em Cen(h)"""
        if not self.h2.is_cocycle(lam):
            raise PreconditionError("lambda não é 2-cociclo de rho-chapéu")
        return self.base.with_omega(self.base.omega + _embed_central(lam, self.center, self.base.rep))

    def datum_for_class(self, coordinates: Sequence) -> ExtensionData:
        return self.datum(self.h2.from_class(coordinates))

    def representatives(self) -> List[ExtensionData]:
        return [self.datum(lam) for lam in self.h2.representatives()]

    def class_of(self, data: ExtensionData) -> Vector:
        """Coordenadas em H^2 da classe de um dado com o mesmo rho-barra"""
        _check_same_pair(self.base, data)
        if list(data.rho) != list(self.base.rho):
            xi0 = _inner_preimage(data.h, [b - a for a, b in zip(self.base.rho, data.rho)])
            if xi0 is None:
                raise PreconditionError("dado induz outro rho-barra")
            c = _central_correction(self.base, xi0, self.center, None)
            if c is None:
                raise PreconditionError("não há xi compatível com os twists")
            data = transport(data, (xi0 + c).scale(-1))
        difference = data.omega - self.base.omega
        for value in difference.values:
            if not self.center.contains(value):
                raise PreconditionError("omega - omega0 não tem valores no centro")
        return self.h2.class_coordinates(_central_cochain(difference, self.center, self.hat_rep))


def classify(rbar: OutMorphism, g: Optional[HomLieAlgebra] = None, h: Optional[HomLieAlgebra] = None,
             rng: Optional[random.Random] = None) -> Classification:
    g = g if g is not None else rbar.g
    if h is not None and h != rbar.h:
        raise InputError("h não é a base de Out")
    result = obstruction(rbar, g, rng)
    if not result.class_is_zero:
        raise NotExtensibleError("rho-barra não é extensível: classe de obstrução não nula",
                                 result.class_coordinates)
    h2 = cohomology(result.hat_rep, 2)
    return Classification(result.repaired, result.center, result.hat_rep, h2)


# ----------------------------------------------------------------------
# Caso Cen(h) = 0
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class CenterFreeCorrespondence:
    """Classes de extensões diagonais de g por h <-> morfismos g -> Out(h), quando Cen(h) = 0"""

    g: HomLieAlgebra
    h: HomLieAlgebra
    out: OutAlgebra
    section: DerivationSection
    splitting: InnerSplitting

    def to_out(self, data: ExtensionData) -> OutMorphism:
        return induced_out_morphism(data, self.out)

    def to_datum(self, rbar: OutMorphism) -> ExtensionData:
        rho = lift_out_morphism(rbar, self.section)
        data = ExtensionData(self.g, self.h, rho, construct_omega(self.g, rho, self.h, self.splitting))
        verdict = validate_extension_data(data)
        if not verdict.ok:
            raise InvariantViolation(f"dado levantado viola {verdict.witness.describe()}")
        return data


def bijection_center_zero(g: HomLieAlgebra, h: HomLieAlgebra,
                          out: Optional[OutAlgebra] = None) -> CenterFreeCorrespondence:
    if center(h).dim:
        raise PreconditionError(f"Cen({h.name}) != 0: use obstruction/classify")
    if out is None:
        out = out_algebra(derivation_algebra(h))
    s = diagonal_section_der(out.derivations, out)
    if s is None:
        raise HypothesisError('der_out')
    t = inner_splitting(h)
    if t is None:
        raise HypothesisError('center_inn')
    return CenterFreeCorrespondence(g, h, out, s, t)
