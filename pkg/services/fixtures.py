"""
Álgebras de referência embutidas, acessíveis como "fixture:<nome>"

    abelian_<n>            K^n abeliana, phi = id
    aff1_<q>               [e1,e2] = e2, phi = diag(1, q)
    heisenberg3            [e1,e2] = e3, phi = id
    heisenberg3_<a>_<b>    [e1,e2] = e3, phi = diag(a, b, ab)
    sl2                    base (h, e, f), phi = id
"""
import re
from fractions import Fraction
from typing import Callable, Dict, List

from services.exactla import Matrix
from services.homlie import HomLieAlgebra
from utils.exceptions import InputError
from utils.rational import format_rational, parse_rational

_RATIONAL = r'(-?\d+(?:/\d+)?)'


def abelian(n: int) -> HomLieAlgebra:
    return HomLieAlgebra.abelian(n, name=f"abelian_{n}")


def aff1(q=1) -> HomLieAlgebra:
    q = Fraction(q)
    if q == 0:
        raise InputError("aff1_q exige q != 0")
    return HomLieAlgebra.from_brackets(f"aff1_{format_rational(q)}", 2, {(0, 1): {1: 1}},
                                       Matrix.diagonal([1, q]))


def heisenberg3(a=1, b=1) -> HomLieAlgebra:
    a, b = Fraction(a), Fraction(b)
    if a == 0 or b == 0:
        raise InputError("heisenberg3_a_b exige a, b != 0")
    name = "heisenberg3" if a == b == 1 else f"heisenberg3_{format_rational(a)}_{format_rational(b)}"
    return HomLieAlgebra.from_brackets(name, 3, {(0, 1): {2: 1}}, Matrix.diagonal([a, b, a * b]))


def sl2() -> HomLieAlgebra:
    return HomLieAlgebra.from_brackets("sl2", 3, {
        (0, 1): {1: 2},
        (0, 2): {2: -2},
        (1, 2): {0: 1},
    })


_PATTERNS: Dict[str, Callable[..., HomLieAlgebra]] = {
    r'abelian_(\d+)': lambda n: abelian(int(n)),
    rf'aff1_{_RATIONAL}': lambda q: aff1(parse_rational(q)),
    r'heisenberg3': heisenberg3,
    rf'heisenberg3_{_RATIONAL}_{_RATIONAL}': lambda a, b: heisenberg3(parse_rational(a), parse_rational(b)),
    r'sl2': sl2,
}


def fixture(name: str) -> HomLieAlgebra:
    """
    Resolve um nome como "aff1_2" ou "heisenberg3_2_3".

    Raises:
        InputError: nome desconhecido
    """
    for pattern, factory in _PATTERNS.items():
        match = re.fullmatch(pattern, name)
        if match:
            return factory(*match.groups())
    raise InputError(f"fixture desconhecida: '{name}'. Disponíveis: {', '.join(catalog())}")


def catalog() -> List[str]:
    return ["abelian_n", "aff1_q", "heisenberg3", "heisenberg3_a_b", "sl2"]


def acceptance_corpus() -> List[HomLieAlgebra]:
    """Conjunto de referência usado pelo selfcheck e pelos testes"""
    return ([abelian(n) for n in range(1, 5)]
            + [aff1(q) for q in (1, 2, 3)]
            + [heisenberg3(), heisenberg3(2, 3), sl2()])
