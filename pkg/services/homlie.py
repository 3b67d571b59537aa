"""
Álgebras Hom-Lie regulares de dimensão finita sobre Q

Uma HomLieAlgebra é dada pelas constantes de estrutura
    [e_i, e_j] = sum_k c[i][j][k] e_k
e pela matriz do twist phi (phi(e_j) = coluna j). A antissimetria é
guardada de forma redundante e verificada, nunca normalizada: erros de
entrada aparecem como falhas de validação.
"""
import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from services.exactla import (
    Matrix, Subspace, Vector, ZERO, Number, add_vectors, block_diagonal, is_zero_vector, kernel,
    unit_vector, vector, zero_vector,
)
from utils.exceptions import InputError, InvariantViolation

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Violation:
    """Um axioma violado, com a tupla de índices (base 0) que o testemunha"""

    axiom: str
    witness: Tuple[int, ...]
    detail: str = ''

    def describe(self, prefix: str = 'e') -> str:
        labels = ",".join(f"{prefix}{i + 1}" for i in self.witness)
        return f"{self.axiom} ({labels}): {self.detail}" if self.detail else f"{self.axiom} ({labels})"


@dataclass(frozen=True)
class Verdict:
    """Relatório de validação: vazio se e somente se tudo vale"""

    violations: Tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def witness(self) -> Optional[Violation]:
        return self.violations[0] if self.violations else None

    def axioms(self) -> List[str]:
        return sorted({v.axiom for v in self.violations})

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class HomLieAlgebra:
    name: str
    dim: int
    structure: Tuple[Tuple[Vector, ...], ...]
    twist: Matrix

    def __post_init__(self):
        n = self.dim
        if len(self.structure) != n or any(len(row) != n for row in self.structure) \
                or any(len(v) != n for row in self.structure for v in row):
            raise InputError(f"{self.name}: tensor de estrutura não tem forma {n}x{n}x{n}")
        if self.twist.shape != (n, n):
            raise InputError(f"{self.name}: twist {self.twist.shape} não é {n}x{n}")

    @classmethod
    def from_brackets(cls, name: str, dim: int,
                      brackets: Mapping[Tuple[int, int], Mapping[int, Number]],
                      twist: Optional[Matrix] = None) -> 'HomLieAlgebra':
        """
        Monta a álgebra a partir dos colchetes [e_i, e_j] com i < j
        (índices base 0); o triângulo inferior sai da antissimetria.
        """
        table = [[[ZERO] * dim for _ in range(dim)] for _ in range(dim)]
        for (i, j), coefficients in brackets.items():
            if not (0 <= i < j < dim):
                raise InputError(f"{name}: colchete ({i},{j}) fora de 0 <= i < j < {dim}")
            for k, c in coefficients.items():
                if not 0 <= k < dim:
                    raise InputError(f"{name}: índice {k} fora da base")
                value = vector([c])[0]
                table[i][j][k] = value
                table[j][i][k] = -value
        structure = tuple(tuple(tuple(v) for v in row) for row in table)
        return cls(name, dim, structure, twist if twist is not None else Matrix.identity(dim))

    @classmethod
    def abelian(cls, dim: int, twist: Optional[Matrix] = None, name: Optional[str] = None) -> 'HomLieAlgebra':
        return cls.from_brackets(name or f"abelian_{dim}", dim, {}, twist)

    def with_twist(self, twist: Matrix, name: Optional[str] = None) -> 'HomLieAlgebra':
        return HomLieAlgebra(name or self.name, self.dim, self.structure, twist)

    def with_structure_entry(self, i: int, j: int, k: int, value: Number) -> 'HomLieAlgebra':
        """Cópia com uma única constante c[i][j][k] alterada (sem ajustar c[j][i][k])"""
        table = [[list(v) for v in row] for row in self.structure]
        table[i][j][k] = vector([value])[0]
        structure = tuple(tuple(tuple(v) for v in row) for row in table)
        return HomLieAlgebra(self.name, self.dim, structure, self.twist)

    # --- operações básicas ---------------------------------------------

    def bracket_basis(self, i: int, j: int) -> Vector:
        return self.structure[i][j]

    @cached_property
    def twist_inverse(self) -> Matrix:
        return self.twist.inverse()

    def phi(self, x: Sequence[Fraction]) -> Vector:
        return self.twist.apply(x)

    def is_abelian(self) -> bool:
        return all(is_zero_vector(v) for row in self.structure for v in row)


@dataclass(frozen=True)
class LinearMapBetween:
    domain_dim: int
    codomain_dim: int
    matrix: Matrix

    def __post_init__(self):
        if self.matrix.shape != (self.codomain_dim, self.domain_dim):
            raise InputError(f"matriz {self.matrix.shape} não representa K^{self.domain_dim} -> "
                             f"K^{self.codomain_dim}")

    @classmethod
    def of(cls, matrix: Matrix) -> 'LinearMapBetween':
        return cls(matrix.cols, matrix.rows, matrix)

    def __call__(self, x: Sequence[Fraction]) -> Vector:
        return self.matrix.apply(x)


def _check_dim(g: HomLieAlgebra, x: Sequence[Fraction], label: str = 'x'):
    if len(x) != g.dim:
        raise InputError(f"{label} tem dimensão {len(x)}, esperado {g.dim} ({g.name})")


def bracket(g: HomLieAlgebra, x: Sequence[Number], y: Sequence[Number]) -> Vector:
    x, y = vector(x), vector(y)
    _check_dim(g, x, 'x')
    _check_dim(g, y, 'y')
    out = [ZERO] * g.dim
    for i, a in enumerate(x):
        if not a:
            continue
        for j, b in enumerate(y):
            if not b:
                continue
            ab = a * b
            for k, c in enumerate(g.structure[i][j]):
                if c:
                    out[k] += ab * c
    return tuple(out)


def ad_matrix(g: HomLieAlgebra, x: Sequence[Number]) -> Matrix:
    """Matriz de ad_x = [x, .]"""
    x = vector(x)
    return Matrix.from_columns([bracket(g, x, unit_vector(g.dim, j)) for j in range(g.dim)], g.dim)


def inner_derivation_span(g: HomLieAlgebra) -> Subspace:
    """Inn(g) como subespaço de gl(g) vetorizado"""
    return Subspace.span(g.dim * g.dim, [ad_matrix(g, unit_vector(g.dim, i)).vectorize() for i in range(g.dim)])


def validate(g: HomLieAlgebra) -> Verdict:
    """
    Verifica as três famílias de axiomas em todas as tuplas da base:
    antissimetria, phi invertível e morfismo, identidade de Hom-Jacobi.

    Hom-Jacobi só é testada em triplas i < j < k (a expressão é alternada
    quando vale a antissimetria).
    """
    n = g.dim
    violations: List[Violation] = []

    for i in range(n):
        for j in range(i, n):
            for k in range(n):
                if g.structure[i][j][k] != -g.structure[j][i][k]:
                    violations.append(Violation(
                        'skew', (i, j, k),
                        f"c[{i + 1}][{j + 1}][{k + 1}] = {g.structure[i][j][k]} mas "
                        f"c[{j + 1}][{i + 1}][{k + 1}] = {g.structure[j][i][k]}"))

    if not g.twist.is_invertible():
        violations.append(Violation('twist_invertible', (), "phi é singular"))

    phi_cols = g.twist.columns()
    for i, j in itertools.combinations(range(n), 2):
        lhs = g.phi(g.structure[i][j])
        rhs = bracket(g, phi_cols[i], phi_cols[j])
        if lhs != rhs:
            violations.append(Violation(
                'twist_morphism', (i, j),
                f"phi[e{i + 1},e{j + 1}] = {format_vector(lhs)} mas [phi e{i + 1}, phi e{j + 1}] = {format_vector(rhs)}"))

    for i, j, k in itertools.combinations(range(n), 3):
        total = hom_jacobiator(g, unit_vector(n, i), unit_vector(n, j), unit_vector(n, k))
        if not is_zero_vector(total):
            violations.append(Violation('hom_jacobi', (i, j, k), f"soma cíclica = {format_vector(total)}"))

    if violations:
        logger.debug("%s: %d violações", g.name, len(violations))
    return Verdict(tuple(violations))


def hom_jacobiator(g: HomLieAlgebra, x: Vector, y: Vector, z: Vector) -> Vector:
    """[phi x, [y, z]] + [phi y, [z, x]] + [phi z, [x, y]]"""
    total = bracket(g, g.phi(x), bracket(g, y, z))
    total = add_vectors(total, bracket(g, g.phi(y), bracket(g, z, x)))
    return add_vectors(total, bracket(g, g.phi(z), bracket(g, x, y)))


def is_morphism(f: LinearMapBetween, g1: HomLieAlgebra, g2: HomLieAlgebra) -> Verdict:
    """f[x,y]_1 = [f x, f y]_2 nos pares da base e f o phi_1 = phi_2 o f"""
    if f.domain_dim != g1.dim or f.codomain_dim != g2.dim:
        raise InputError(f"aplicação K^{f.domain_dim} -> K^{f.codomain_dim} não vai de "
                         f"{g1.name} (dim {g1.dim}) em {g2.name} (dim {g2.dim})")
    violations: List[Violation] = []
    images = f.matrix.columns()
    for i, j in itertools.combinations(range(g1.dim), 2):
        lhs = f(g1.structure[i][j])
        rhs = bracket(g2, images[i], images[j])
        if lhs != rhs:
            violations.append(Violation('bracket', (i, j), f"f[e{i + 1},e{j + 1}] = {format_vector(lhs)} mas "
                                                           f"[f e{i + 1}, f e{j + 1}] = {format_vector(rhs)}"))
    for i in range(g1.dim):
        lhs = f(g1.twist.column(i))
        rhs = g2.phi(images[i])
        if lhs != rhs:
            violations.append(Violation('twist', (i,), f"f(phi e{i + 1}) = {format_vector(lhs)} mas "
                                                       f"phi(f e{i + 1}) = {format_vector(rhs)}"))
    return Verdict(tuple(violations))


def center(g: HomLieAlgebra) -> Subspace:
    """Cen(g) = {u : [u, e_j] = 0 para todo j}, núcleo da matriz de colchetes empilhada"""
    n = g.dim
    rows = [[g.structure[i][j][k] for i in range(n)] for j in range(n) for k in range(n)]
    cen = kernel(Matrix.from_rows(rows, n)) if rows else Subspace.full(n)
    if not cen.is_invariant_under(g.twist):
        raise InvariantViolation(f"{g.name}: phi(Cen) não está contido em Cen")
    return cen


# ----------------------------------------------------------------------
# gl(V) como álgebra Hom-Lie: [A,B]_beta e Ad_beta
# ----------------------------------------------------------------------

def _check_square(beta: Matrix, *matrices: Matrix):
    if not beta.is_square:
        raise InputError(f"beta {beta.shape} não é quadrada")
    for m in matrices:
        if m.shape != beta.shape:
            raise InputError(f"matriz {m.shape} incompatível com beta {beta.shape}")


def gl_bracket(a: Matrix, b: Matrix, beta: Matrix) -> Matrix:
    """[A,B]_beta = beta A beta^-1 B beta^-1 - beta B beta^-1 A beta^-1"""
    _check_square(beta, a, b)
    beta_inv = beta.inverse()
    return beta @ a @ beta_inv @ b @ beta_inv - beta @ b @ beta_inv @ a @ beta_inv


def ad_twist(beta: Matrix, a: Matrix) -> Matrix:
    """Ad_beta(A) = beta A beta^-1"""
    _check_square(beta, a)
    return beta @ a @ beta.inverse()


def gl_algebra(beta: Matrix, name: Optional[str] = None) -> HomLieAlgebra:
    """(gl(V), [.,.]_beta, Ad_beta) na base de matrizes unitárias E_ab (ordem por linhas)"""
    _check_square(beta)
    v = beta.rows
    beta_inv = beta.inverse()
    units = [Matrix.unit(v, v, a, b) for a in range(v) for b in range(v)]
    conj = [beta @ u @ beta_inv for u in units]
    structure = tuple(tuple((conj[i] @ units[j] @ beta_inv - conj[j] @ units[i] @ beta_inv).vectorize()
                            for j in range(len(units))) for i in range(len(units)))
    twist = Matrix.from_columns([c.vectorize() for c in conj], v * v)
    return HomLieAlgebra(name or f"gl({v})", v * v, structure, twist)


def adjoint_rep(g: HomLieAlgebra):
    """Representação adjunta: rho(e_i) = ad_{e_i}, beta = phi"""
    from services.cohom import Representation

    rho = tuple(ad_matrix(g, unit_vector(g.dim, i)) for i in range(g.dim))
    return Representation(g, g.dim, rho, g.twist)


def structure_constants(g: HomLieAlgebra) -> Dict[Tuple[int, int], Vector]:
    """Colchetes não nulos [e_i, e_j] com i < j"""
    return {(i, j): g.structure[i][j] for i, j in itertools.combinations(range(g.dim), 2)
            if not is_zero_vector(g.structure[i][j])}


def format_vector(v: Iterable[Fraction]) -> str:
    return "(" + ", ".join(str(a) for a in v) + ")"


def direct_sum(g: HomLieAlgebra, h: HomLieAlgebra, name: Optional[str] = None) -> HomLieAlgebra:
    """g (+) h com colchetes cruzados nulos e twist bloco-diagonal; base de g primeiro"""
    m, n = g.dim, h.dim
    total = m + n

    def entry(i: int, j: int) -> Vector:
        if i < m and j < m:
            return g.structure[i][j] + zero_vector(n)
        if i >= m and j >= m:
            return zero_vector(m) + h.structure[i - m][j - m]
        return zero_vector(total)

    structure = tuple(tuple(entry(i, j) for j in range(total)) for i in range(total))
    return HomLieAlgebra(name or f"{g.name}+{h.name}", total, structure, block_diagonal(g.twist, h.twist))
