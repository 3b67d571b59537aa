"""
Álgebra linear exata sobre Q

Escalares são fractions.Fraction (sempre reduzidos, denominador positivo).
Subespaços são guardados na forma escalonada reduzida (RREF) com pivôs
crescentes, que é canônica: dois conjuntos geradores do mesmo subespaço
produzem o mesmo valor de Subspace.

Convenção de matrizes: uma aplicação linear f: K^n -> K^m é uma Matrix m x n
que age em vetores-coluna, f(v) = M v. Vetorização é sempre por linhas.
"""
import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from utils.exceptions import InputError
from utils.rational import parse_rational

logger = logging.getLogger(__name__)

Scalar = Fraction
Vector = Tuple[Fraction, ...]
Number = Union[int, Fraction, str]

ZERO = Fraction(0)
ONE = Fraction(1)


def to_fraction(value: Number) -> Fraction:
    """Converte int, Fraction ou string "p/q" em Fraction (nunca aceita float)"""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise InputError(f"valor booleano não é um racional: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise InputError(f"tipo não suportado para escalar exato: {type(value).__name__}")


def vector(values: Iterable[Number]) -> Vector:
    return tuple(to_fraction(v) for v in values)


def zero_vector(n: int) -> Vector:
    return (ZERO,) * n


def unit_vector(n: int, i: int) -> Vector:
    return tuple(ONE if k == i else ZERO for k in range(n))


def add_vectors(u: Sequence[Fraction], v: Sequence[Fraction]) -> Vector:
    if len(u) != len(v):
        raise InputError(f"dimensões incompatíveis: {len(u)} != {len(v)}")
    return tuple(a + b for a, b in zip(u, v))


def sub_vectors(u: Sequence[Fraction], v: Sequence[Fraction]) -> Vector:
    if len(u) != len(v):
        raise InputError(f"dimensões incompatíveis: {len(u)} != {len(v)}")
    return tuple(a - b for a, b in zip(u, v))


def scale_vector(c: Fraction, v: Sequence[Fraction]) -> Vector:
    return tuple(c * a for a in v)


def linear_combination(coefficients: Sequence[Fraction], vectors: Sequence[Sequence[Fraction]],
                       dim: int) -> Vector:
    out = [ZERO] * dim
    for c, v in zip(coefficients, vectors):
        if c:
            for k, a in enumerate(v):
                if a:
                    out[k] += c * a
    return tuple(out)


def is_zero_vector(v: Sequence[Fraction]) -> bool:
    return all(a == 0 for a in v)


def random_fraction(rng: random.Random, max_num: int = 5, max_den: int = 3) -> Fraction:
    return Fraction(rng.randint(-max_num, max_num), rng.randint(1, max_den))


def random_vector(rng: random.Random, n: int, max_num: int = 5, max_den: int = 3) -> Vector:
    return tuple(random_fraction(rng, max_num, max_den) for _ in range(n))


@dataclass(frozen=True)
class Matrix:
    """Matriz densa de racionais, imutável"""

    rows: int
    cols: int
    entries: Tuple[Tuple[Fraction, ...], ...]

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise InputError(f"entradas não formam uma matriz {self.rows}x{self.cols}")

    # --- construtores -------------------------------------------------

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Number]], cols: Optional[int] = None) -> 'Matrix':
        data = tuple(vector(r) for r in rows)
        if cols is None:
            cols = len(data[0]) if data else 0
        return cls(len(data), cols, data)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[Number]], rows: Optional[int] = None) -> 'Matrix':
        cols = [vector(c) for c in columns]
        if rows is None:
            if not cols:
                raise InputError("número de linhas indefinido para matriz sem colunas")
            rows = len(cols[0])
        if any(len(c) != rows for c in cols):
            raise InputError("colunas de tamanhos diferentes")
        data = tuple(tuple(c[i] for c in cols) for i in range(rows))
        return cls(rows, len(cols), data)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> 'Matrix':
        return cls(rows, cols, tuple((ZERO,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, n: int) -> 'Matrix':
        return cls(n, n, tuple(unit_vector(n, i) for i in range(n)))

    @classmethod
    def diagonal(cls, values: Sequence[Number]) -> 'Matrix':
        vals = vector(values)
        n = len(vals)
        return cls(n, n, tuple(tuple(vals[i] if i == j else ZERO for j in range(n)) for i in range(n)))

    @classmethod
    def unit(cls, rows: int, cols: int, i: int, j: int) -> 'Matrix':
        return cls(rows, cols, tuple(tuple(ONE if (a, b) == (i, j) else ZERO for b in range(cols))
                                     for a in range(rows)))

    @classmethod
    def from_vector(cls, values: Sequence[Fraction], rows: int, cols: int) -> 'Matrix':
        """Inverso de vectorize (ordem por linhas)"""
        if len(values) != rows * cols:
            raise InputError(f"vetor de tamanho {len(values)} não forma matriz {rows}x{cols}")
        vals = vector(values)
        return cls(rows, cols, tuple(vals[i * cols:(i + 1) * cols] for i in range(rows)))

    # --- acesso -------------------------------------------------------

    def __getitem__(self, index: Tuple[int, int]) -> Fraction:
        i, j = index
        return self.entries[i][j]

    def row(self, i: int) -> Vector:
        return self.entries[i]

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self.entries)

    def columns(self) -> List[Vector]:
        return [self.column(j) for j in range(self.cols)]

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_zero(self) -> bool:
        return all(a == 0 for r in self.entries for a in r)

    def vectorize(self) -> Vector:
        return tuple(a for r in self.entries for a in r)

    # --- aritmética ---------------------------------------------------

    def _check_same_shape(self, other: 'Matrix'):
        if self.shape != other.shape:
            raise InputError(f"formas incompatíveis: {self.shape} e {other.shape}")

    def __add__(self, other: 'Matrix') -> 'Matrix':
        self._check_same_shape(other)
        return Matrix(self.rows, self.cols, tuple(add_vectors(a, b) for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: 'Matrix') -> 'Matrix':
        self._check_same_shape(other)
        return Matrix(self.rows, self.cols, tuple(sub_vectors(a, b) for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> 'Matrix':
        return self.scale(-ONE)

    def scale(self, c: Number) -> 'Matrix':
        c = to_fraction(c)
        return Matrix(self.rows, self.cols, tuple(scale_vector(c, r) for r in self.entries))

    def __matmul__(self, other: 'Matrix') -> 'Matrix':
        if self.cols != other.rows:
            raise InputError(f"produto indefinido: {self.shape} @ {other.shape}")
        other_cols = other.columns()
        data = tuple(tuple(sum((a * b for a, b in zip(r, c) if a and b), ZERO) for c in other_cols)
                     for r in self.entries)
        return Matrix(self.rows, other.cols, data)

    def apply(self, v: Sequence[Fraction]) -> Vector:
        if len(v) != self.cols:
            raise InputError(f"vetor de dimensão {len(v)} para matriz {self.shape}")
        return tuple(sum((a * b for a, b in zip(r, v) if a and b), ZERO) for r in self.entries)

    def transpose(self) -> 'Matrix':
        return Matrix(self.cols, self.rows, tuple(self.columns()))

    def power(self, k: int) -> 'Matrix':
        if not self.is_square:
            raise InputError("potência de matriz não quadrada")
        if k < 0:
            return self.inverse().power(-k)
        result = Matrix.identity(self.rows)
        for _ in range(k):
            result = result @ self
        return result

    def inverse(self) -> 'Matrix':
        if not self.is_square:
            raise InputError("inversa de matriz não quadrada")
        n = self.rows
        augmented = [list(self.entries[i]) + list(unit_vector(n, i)) for i in range(n)]
        reduced, pivots = _rref_rows(augmented, n)
        if len(pivots) != n:
            raise InputError("matriz singular")
        return Matrix(n, n, tuple(tuple(r[n:]) for r in reduced))

    def is_invertible(self) -> bool:
        return self.is_square and rank(self) == self.rows

    def restrict_rows(self, indices: Sequence[int]) -> 'Matrix':
        return Matrix(len(indices), self.cols, tuple(self.entries[i] for i in indices))

    def __str__(self) -> str:
        return "[" + ", ".join("[" + ", ".join(str(a) for a in r) + "]" for r in self.entries) + "]"


def hstack(blocks: Sequence[Matrix]) -> Matrix:
    rows = blocks[0].rows
    if any(b.rows != rows for b in blocks):
        raise InputError("blocos com números de linhas diferentes")
    data = tuple(tuple(a for b in blocks for a in b.entries[i]) for i in range(rows))
    return Matrix(rows, sum(b.cols for b in blocks), data)


def vstack(blocks: Sequence[Matrix]) -> Matrix:
    cols = blocks[0].cols
    if any(b.cols != cols for b in blocks):
        raise InputError("blocos com números de colunas diferentes")
    return Matrix(sum(b.rows for b in blocks), cols, tuple(r for b in blocks for r in b.entries))


def block_diagonal(a: Matrix, b: Matrix) -> Matrix:
    top = hstack([a, Matrix.zeros(a.rows, b.cols)])
    bottom = hstack([Matrix.zeros(b.rows, a.cols), b])
    return vstack([top, bottom])


# ----------------------------------------------------------------------
# Eliminação de Gauss-Jordan
# ----------------------------------------------------------------------

def _rref_rows(rows: Sequence[Sequence[Fraction]], ncols: int) -> Tuple[List[List[Fraction]], List[int]]:
    """
    Escalona (forma reduzida) as linhas dadas, procurando pivôs apenas nas
    primeiras ncols colunas. Colunas extras (sistema aumentado) são
    transformadas junto. Retorna só as linhas não nulas e os pivôs.
    """
    m = [list(r) for r in rows]
    pivots: List[int] = []
    r = 0
    n_rows = len(m)
    for c in range(ncols):
        if r == n_rows:
            break
        pivot_row = None
        for i in range(r, n_rows):
            if m[i][c] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        m[r], m[pivot_row] = m[pivot_row], m[r]
        lead = m[r][c]
        if lead != 1:
            m[r] = [a / lead for a in m[r]]
        pivot = m[r]
        for i in range(n_rows):
            if i != r:
                f = m[i][c]
                if f != 0:
                    m[i] = [a - f * b if b else a for a, b in zip(m[i], pivot)]
        pivots.append(c)
        r += 1
    return m[:r], pivots


def rref(a: Matrix) -> Tuple[Matrix, Tuple[int, ...]]:
    reduced, pivots = _rref_rows(a.entries, a.cols)
    return Matrix(len(reduced), a.cols, tuple(tuple(r) for r in reduced)), tuple(pivots)


def rank(a: Matrix) -> int:
    return len(_rref_rows(a.entries, a.cols)[1])


def determinant(a: Matrix) -> Fraction:
    if not a.is_square:
        raise InputError("determinante de matriz não quadrada")
    n = a.rows
    if n == 0:
        return ONE
    if n == 1:
        return a[0, 0]
    if n == 2:
        return a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0]
    m = [list(r) for r in a.entries]
    det = ONE
    for c in range(n):
        pivot_row = next((i for i in range(c, n) if m[i][c] != 0), None)
        if pivot_row is None:
            return ZERO
        if pivot_row != c:
            m[c], m[pivot_row] = m[pivot_row], m[c]
            det = -det
        lead = m[c][c]
        det *= lead
        for i in range(c + 1, n):
            f = m[i][c] / lead
            if f:
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return det


# ----------------------------------------------------------------------
# Subespaços
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class Subspace:
    """Subespaço de K^ambient_dim com base em RREF (forma canônica)"""

    ambient_dim: int
    basis: Tuple[Vector, ...]
    pivots: Tuple[int, ...]

    @classmethod
    def span(cls, ambient_dim: int, vectors: Iterable[Sequence[Number]]) -> 'Subspace':
        rows = [vector(v) for v in vectors]
        for v in rows:
            if len(v) != ambient_dim:
                raise InputError(f"vetor de dimensão {len(v)} em espaço de dimensão {ambient_dim}")
        reduced, pivots = _rref_rows(rows, ambient_dim)
        return cls(ambient_dim, tuple(tuple(r) for r in reduced), tuple(pivots))

    @classmethod
    def zero(cls, ambient_dim: int) -> 'Subspace':
        return cls(ambient_dim, (), ())

    @classmethod
    def full(cls, ambient_dim: int) -> 'Subspace':
        return cls(ambient_dim, tuple(unit_vector(ambient_dim, i) for i in range(ambient_dim)),
                   tuple(range(ambient_dim)))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, v: Sequence[Number]) -> bool:
        v = vector(v)
        if len(v) != self.ambient_dim:
            raise InputError(f"vetor de dimensão {len(v)} em espaço de dimensão {self.ambient_dim}")
        return is_zero_vector(self._reduce(v))

    def _reduce(self, v: Vector) -> Vector:
        r = list(v)
        for b, p in zip(self.basis, self.pivots):
            f = r[p]
            if f:
                r = [x - f * y if y else x for x, y in zip(r, b)]
        return tuple(r)

    def coordinates(self, v: Sequence[Number]) -> Vector:
        """Coordenadas de v na base RREF (as entradas de v nos pivôs)"""
        v = vector(v)
        if not self.contains(v):
            raise InputError("vetor fora do subespaço")
        return tuple(v[p] for p in self.pivots)

    def element(self, coordinates: Sequence[Number]) -> Vector:
        coords = vector(coordinates)
        if len(coords) != self.dim:
            raise InputError(f"{len(coords)} coordenadas para subespaço de dimensão {self.dim}")
        return linear_combination(coords, self.basis, self.ambient_dim)

    def basis_matrix(self) -> Matrix:
        """Matriz ambient_dim x dim cujas colunas são a base (inclusão do subespaço)"""
        if not self.basis:
            return Matrix.zeros(self.ambient_dim, 0)
        return Matrix.from_columns(self.basis, self.ambient_dim)

    def is_subspace_of(self, other: 'Subspace') -> bool:
        return all(other.contains(b) for b in self.basis)

    def is_invariant_under(self, a: Matrix) -> bool:
        return all(self.contains(a.apply(b)) for b in self.basis)

    def random_element(self, rng: random.Random, max_num: int = 5, max_den: int = 3) -> Vector:
        return self.element(random_vector(rng, self.dim, max_num, max_den))


@dataclass(frozen=True)
class Solution:
    particular: Vector
    kernel: Subspace


def solve(a: Matrix, b: Sequence[Number]) -> Optional[Solution]:
    """
    Resolve A x = b exatamente.

    Retorna None quando o sistema é inconsistente; caso contrário a solução
    particular canônica (variáveis livres iguais a zero) e o núcleo de A.
    """
    b = vector(b)
    if len(b) != a.rows:
        raise InputError(f"lado direito de dimensão {len(b)} para sistema com {a.rows} equações")
    augmented = [list(r) + [c] for r, c in zip(a.entries, b)]
    reduced, pivots = _rref_rows(augmented, a.cols + 1)
    # pivô na coluna aumentada: linha 0 = c com c != 0
    if pivots and pivots[-1] == a.cols:
        return None
    x = [ZERO] * a.cols
    for r, p in zip(reduced, pivots):
        x[p] = r[a.cols]
    return Solution(tuple(x), _kernel_from_rref(reduced, pivots, a.cols))


def _kernel_from_rref(reduced: Sequence[Sequence[Fraction]], pivots: Sequence[int], ncols: int) -> Subspace:
    pivot_set = set(pivots)
    vectors = []
    for f in range(ncols):
        if f in pivot_set:
            continue
        v = [ZERO] * ncols
        v[f] = ONE
        for r, p in zip(reduced, pivots):
            v[p] = -r[f]
        vectors.append(v)
    return Subspace.span(ncols, vectors)


def kernel(a: Matrix) -> Subspace:
    reduced, pivots = _rref_rows(a.entries, a.cols)
    return _kernel_from_rref(reduced, pivots, a.cols)


def image(a: Matrix) -> Subspace:
    return Subspace.span(a.rows, a.columns())


def intersect(u: Subspace, v: Subspace) -> Subspace:
    if u.ambient_dim != v.ambient_dim:
        raise InputError(f"dimensões ambientes diferentes: {u.ambient_dim} e {v.ambient_dim}")
    n = u.ambient_dim
    if u.dim == 0 or v.dim == 0:
        return Subspace.zero(n)
    # a·u_i - b·v_j = 0  =>  a·u_i pertence a U ∩ V
    m = Matrix.from_columns(list(u.basis) + [scale_vector(-ONE, w) for w in v.basis], n)
    ker = kernel(m)
    return Subspace.span(n, [linear_combination(k[:u.dim], u.basis, n) for k in ker.basis])


def sum_spaces(u: Subspace, v: Subspace) -> Subspace:
    if u.ambient_dim != v.ambient_dim:
        raise InputError(f"dimensões ambientes diferentes: {u.ambient_dim} e {v.ambient_dim}")
    return Subspace.span(u.ambient_dim, list(u.basis) + list(v.basis))


def contains(u: Subspace, v: Sequence[Number]) -> bool:
    return u.contains(v)


def image_of_subspace(a: Matrix, u: Subspace) -> Subspace:
    if a.cols != u.ambient_dim:
        raise InputError(f"matriz {a.shape} aplicada a subespaço de K^{u.ambient_dim}")
    return Subspace.span(a.rows, [a.apply(b) for b in u.basis])


# ----------------------------------------------------------------------
# Quocientes
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class QuotientSpace:
    """
    K^ambient_dim / U com representantes canônicos.

    O complemento é gerado pelos vetores coordenados de índices fora dos
    pivôs de U (em ordem crescente); a classe de v é representada por v
    reduzido módulo U, que se anula nos pivôs.
    """

    ambient_dim: int
    denominator: Subspace
    complement_indices: Tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.complement_indices)

    @property
    def complement_basis(self) -> Tuple[Vector, ...]:
        return tuple(unit_vector(self.ambient_dim, i) for i in self.complement_indices)

    def reduce(self, v: Sequence[Number]) -> Vector:
        v = vector(v)
        if len(v) != self.ambient_dim:
            raise InputError(f"vetor de dimensão {len(v)} em espaço de dimensão {self.ambient_dim}")
        return self.denominator._reduce(v)

    def project(self, v: Sequence[Number]) -> Vector:
        r = self.reduce(v)
        return tuple(r[i] for i in self.complement_indices)

    def lift(self, coordinates: Sequence[Number]) -> Vector:
        coords = vector(coordinates)
        if len(coords) != self.dim:
            raise InputError(f"{len(coords)} coordenadas para quociente de dimensão {self.dim}")
        out = [ZERO] * self.ambient_dim
        for i, c in zip(self.complement_indices, coords):
            out[i] = c
        return tuple(out)

    def same_class(self, v: Sequence[Number], w: Sequence[Number]) -> bool:
        return self.denominator.contains(sub_vectors(vector(v), vector(w)))

    def projection_matrix(self) -> Matrix:
        return Matrix.from_columns([self.project(unit_vector(self.ambient_dim, i))
                                    for i in range(self.ambient_dim)], self.dim)


def quotient(ambient_dim: int, u: Subspace) -> QuotientSpace:
    if u.ambient_dim != ambient_dim:
        raise InputError(f"subespaço de K^{u.ambient_dim} não está em K^{ambient_dim}")
    pivots = set(u.pivots)
    return QuotientSpace(ambient_dim, u, tuple(i for i in range(ambient_dim) if i not in pivots))
