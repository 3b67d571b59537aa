"""
Verificações aleatorizadas (semente fixa) usadas pelo comando selfcheck
"""
import itertools
import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Set, Tuple

from config import Config
from services.cohom import Cochain, Representation, coboundary, cochain_space, trivial_rep, validate_rep
from services.exactla import Matrix, determinant, random_fraction
from services.fixtures import acceptance_corpus
from services.homlie import HomLieAlgebra, adjoint_rep, gl_algebra, validate

logger = logging.getLogger(__name__)


@dataclass
class CheckOutcome:
    name: str
    runs: int = 0
    failures: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


MUTATION_KINDS = ('skew', 'bracket', 'twist')


def _nonzero_delta(rng: random.Random) -> Fraction:
    delta = random_fraction(rng, Config.MAX_RANDOM_NUM, Config.MAX_RANDOM_DEN)
    while delta == 0:
        delta = random_fraction(rng, Config.MAX_RANDOM_NUM, Config.MAX_RANDOM_DEN)
    return delta


def perturb_bracket(g: HomLieAlgebra, i: int, j: int, k: int, delta: Fraction) -> HomLieAlgebra:
    """Soma delta a c[i][j][k] e subtrai de c[j][i][k]; a antissimetria continua valendo"""
    mutated = g.with_structure_entry(i, j, k, g.structure[i][j][k] + delta)
    return mutated.with_structure_entry(j, i, k, g.structure[j][i][k] - delta)


def perturb_twist(g: HomLieAlgebra, a: int, b: int, delta: Fraction) -> HomLieAlgebra:
    rows = [list(r) for r in g.twist.entries]
    rows[a][b] += delta
    return g.with_twist(Matrix.from_rows(rows))


def _mutate(g: HomLieAlgebra, rng: random.Random, kind: str = 'skew') -> Tuple[HomLieAlgebra, str, Optional[tuple]]:
    """
    Sorteia uma mutação do tipo pedido

    skew: altera só c[i][j][k]; devolve a testemunha esperada (min(i,j), max(i,j), k)
    bracket: altera c[i][j][k] e c[j][i][k] juntos (i < j)
    twist: altera uma entrada de phi

    Em dimensão 1 não há par i < j e 'bracket' vira 'twist'.
    """
    delta = _nonzero_delta(rng)
    if kind == 'bracket' and g.dim < 2:
        kind = 'twist'
    if kind == 'skew':
        i, j, k = (rng.randrange(g.dim) for _ in range(3))
        return g.with_structure_entry(i, j, k, g.structure[i][j][k] + delta), kind, (min(i, j), max(i, j), k)
    if kind == 'bracket':
        i, j = sorted(rng.sample(range(g.dim), 2))
        return perturb_bracket(g, i, j, rng.randrange(g.dim), delta), kind, None
    if kind == 'twist':
        return perturb_twist(g, rng.randrange(g.dim), rng.randrange(g.dim), delta), kind, None
    raise ValueError(f"tipo de mutação desconhecido: {kind}")


def tensor_defects(g: HomLieAlgebra) -> Set[Tuple[str, tuple]]:
    """
    Falhas de twist_invertible, twist_morphism e hom_jacobi por somas diretas
    nos índices de c e phi, sem passar por bracket/validate
    """
    n, c, phi = g.dim, g.structure, g.twist.entries
    found = set()
    if determinant(g.twist) == 0:
        found.add(('twist_invertible', ()))
    for i, j in itertools.combinations(range(n), 2):
        for m in range(n):
            lhs = sum((phi[m][b] * c[i][j][b] for b in range(n)), Fraction(0))
            rhs = sum((phi[a][i] * phi[b][j] * c[a][b][m] for a in range(n) for b in range(n)), Fraction(0))
            if lhs != rhs:
                found.add(('twist_morphism', (i, j)))
                break
    for i, j, k in itertools.combinations(range(n), 3):
        for m in range(n):
            total = Fraction(0)
            for x, y, z in ((i, j, k), (j, k, i), (k, i, j)):
                total += sum(phi[a][x] * c[y][z][b] * c[a][b][m] for a in range(n) for b in range(n))
            if total != 0:
                found.add(('hom_jacobi', (i, j, k)))
                break
    return found


def mutation_mismatch(mutated: HomLieAlgebra, kind: str, expected: Optional[tuple]) -> Optional[str]:
    """None quando validate reporta exatamente o esperado para a mutação"""
    verdict = validate(mutated)
    if kind == 'skew':
        if verdict.ok or verdict.witness.axiom != 'skew' or verdict.witness.witness != expected:
            return f"mutação em {expected} não detectada corretamente"
        return None
    reported = {(v.axiom, tuple(v.witness)) for v in verdict.violations}
    direct = tensor_defects(mutated)
    if reported != direct:
        return f"mutação {kind}: validate reporta {sorted(reported)}, somas diretas dão {sorted(direct)}"
    return None


def _random_rep(g: HomLieAlgebra, rng: random.Random) -> Representation:
    """Adjunta ou trivial com beta diagonal sorteado"""
    if rng.random() < 0.5:
        return adjoint_rep(g)
    v_dim = rng.choice((1, 2, 3))
    beta = Matrix.diagonal([rng.choice((1, 2, 3, -1)) for _ in range(v_dim)])
    return trivial_rep(g, v_dim, beta)


def check_mutations(rng: random.Random, per_fixture: int = 100) -> CheckOutcome:
    """
    per_fixture mutações de antissimetria por fixture, mais per_fixture // 2
    de cada tipo que preserva antissimetria (bracket, twist)
    """
    outcome = CheckOutcome('mutações rejeitadas')
    for g in acceptance_corpus():
        if not validate(g).ok:
            outcome.failures.append(f"{g.name}: fixture inválida")
            continue
        plan = ['skew'] * per_fixture + ['bracket', 'twist'] * (per_fixture // 2)
        for kind in plan:
            mutated, used, expected = _mutate(g, rng, kind)
            outcome.runs += 1
            problem = mutation_mismatch(mutated, used, expected)
            if problem:
                outcome.failures.append(f"{g.name}: {problem}")
    return outcome


def check_coboundary_squared(rng: random.Random, samples: int = 200) -> CheckOutcome:
    outcome = CheckOutcome('d o d = 0')
    corpus = acceptance_corpus()
    for _ in range(samples):
        g = rng.choice(corpus)
        r = _random_rep(g, rng)
        k = rng.choice((1, 2))
        space = cochain_space(r, k)
        outcome.runs += 1
        if not validate_rep(r).ok:
            outcome.failures.append(f"{g.name}: representação de referência inválida")
            continue
        if space.dim == 0:
            continue
        f = Cochain.from_flat(r, k, space.random_element(rng, Config.MAX_RANDOM_NUM, Config.MAX_RANDOM_DEN))
        ddf = coboundary(r, coboundary(r, f))
        if not ddf.is_zero():
            outcome.failures.append(f"{g.name}, grau {k}: d(d f) != 0")
    return outcome


def check_gl(rng: random.Random, samples: int = 10) -> CheckOutcome:
    outcome = CheckOutcome('gl(V) é Hom-Lie')
    for _ in range(samples):
        n = rng.choice((1, 2))
        beta = Matrix.from_rows([[random_fraction(rng) for _ in range(n)] for _ in range(n)])
        if not beta.is_invertible():
            continue
        outcome.runs += 1
        verdict = validate(gl_algebra(beta))
        if not verdict.ok:
            outcome.failures.append(f"beta = {beta}: {verdict.witness.describe()}")
    return outcome


def run_selfcheck(seed: int, mutations: int = 100, samples: int = 200) -> List[CheckOutcome]:
    rng = random.Random(seed)
    logger.info("selfcheck com semente %d", seed)
    return [check_mutations(rng, mutations), check_coboundary_squared(rng, samples), check_gl(rng)]
