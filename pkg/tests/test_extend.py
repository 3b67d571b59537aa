import itertools
import random
from fractions import Fraction

import pytest

from services import fixtures as builtin
from services.cohom import Cochain, formal_representation
from services.derived import derivation_algebra, is_derivation, out_algebra
from services.exactla import Matrix, add_vectors, kernel, solve, sub_vectors, unit_vector, zero_vector
from services.extend import (
    ExtensionData, OutMorphism, RawExtension, bijection_center_zero, build_extension, classify, diagonal_section,
    extract_data, induced_out_morphism, isomorphic, obstruction, out_morphism, transport,
    validate_extension_data, verify_isomorphism_witness,
)
from services.homlie import HomLieAlgebra, ad_matrix, bracket, center, gl_bracket, validate
from utils.exceptions import (
    HypothesisError, InputError, InvalidAlgebraError, NotExtensibleError, PreconditionError,
)


def zeros(n, count):
    return [Matrix.zeros(n, n) for _ in range(count)]


def heisenberg_data():
    """abelian_2 por abelian_1 com omega(e1,e2) = u: o total é h3"""
    return ExtensionData.create(builtin.abelian(2), builtin.abelian(1), zeros(1, 2), {(0, 1): (1,)})


def h3_base_data():
    return ExtensionData.create(builtin.abelian(2), builtin.heisenberg3(), zeros(3, 2))


def h3_transported_data():
    h = builtin.heisenberg3()
    rho = [ad_matrix(h, (1, 0, 0)), ad_matrix(h, (0, 1, 0))]
    return ExtensionData.create(builtin.abelian(2), h, rho, {(0, 1): (0, 0, 1)})


def sample_data():
    aff1 = builtin.aff1(1)
    one = builtin.abelian(1)
    twisted = HomLieAlgebra.abelian(1, Matrix.from_rows([[2]]), name='abelian_1_2')
    return [
        (heisenberg_data(), True),
        (ExtensionData.create(builtin.abelian(3), one, zeros(1, 3), {(0, 1): (2,), (1, 2): ("-1/3",)}), True),
        (ExtensionData.create(aff1, one, zeros(1, 2), {(0, 1): (1,)}), True),
        (ExtensionData.create(aff1, one, [Matrix.identity(1), Matrix.zeros(1, 1)]), True),
        (ExtensionData.create(aff1, one, [Matrix.zeros(1, 1), Matrix.identity(1)]), False),
        (ExtensionData.create(builtin.abelian(2), builtin.heisenberg3(),
                              [Matrix.diagonal([1, 0, 0]), Matrix.zeros(3, 3)]), False),
        (ExtensionData.create(twisted, one, [Matrix.identity(1)]), False),
        (h3_transported_data(), True),
    ]


@pytest.mark.parametrize('data, expected', sample_data())
def test_total_is_hom_lie_exactly_when_data_is_valid(data, expected):
    assert validate_extension_data(data).ok is expected
    total = build_extension(data, force=True).total
    assert validate(total).ok is expected


def test_invalid_data_reports_first_failing_condition():
    data = ExtensionData.create(builtin.abelian(2), builtin.heisenberg3(),
                                [Matrix.diagonal([1, 0, 0]), Matrix.zeros(3, 3)])
    verdict = validate_extension_data(data)
    assert verdict.witness.axiom == 'p2'
    assert verdict.witness.witness == (0,)
    with pytest.raises(InvalidAlgebraError):
        build_extension(data)


def test_twist_incompatible_rho_fails_p1():
    twisted = HomLieAlgebra.abelian(1, Matrix.from_rows([[2]]), name='abelian_1_2')
    data = ExtensionData.create(twisted, builtin.abelian(1), [Matrix.identity(1)])
    assert validate_extension_data(data).axioms() == ['p1']


def test_create_checks_shapes():
    with pytest.raises(InputError):
        ExtensionData.create(builtin.abelian(2), builtin.abelian(1), zeros(2, 2))
    with pytest.raises(InputError):
        ExtensionData.create(builtin.abelian(2), builtin.abelian(1), zeros(1, 1))


def test_heisenberg_total():
    ext = build_extension(heisenberg_data())
    assert ext.total.dim == 3
    assert ext.total.structure[0][1] == (0, 0, 1)
    assert ext.iota == Matrix.from_rows([[0], [0], [1]])
    assert ext.projection == Matrix.from_rows([[1, 0, 0], [0, 1, 0]])


@pytest.mark.parametrize('data', [d for d, ok in sample_data() if ok])
def test_extract_inverts_build(data):
    assert extract_data(build_extension(data)) == data


@pytest.mark.parametrize('data', [d for d, ok in sample_data() if ok])
def test_extract_with_computed_section_is_isomorphic(data, rng):
    raw = build_extension(data).raw()
    extracted = extract_data(raw, rng=rng)
    assert validate_extension_data(extracted).ok
    assert isomorphic(data, extracted) is not None


def test_extract_from_h3_as_raw_extension(h3):
    raw = RawExtension(builtin.abelian(2), builtin.abelian(1), h3,
                       Matrix.from_rows([[0], [0], [1]]), Matrix.from_rows([[1, 0, 0], [0, 1, 0]]))
    data = extract_data(raw)
    assert data.omega.value((0, 1)) == (1,)
    assert all(m.is_zero() for m in data.rho)


def test_extract_without_diagonal_section():
    one = builtin.abelian(1)
    total = HomLieAlgebra.abelian(2, Matrix.from_rows([[1, 0], [1, 1]]), name='jordan')
    raw = RawExtension(one, one, total, Matrix.from_rows([[0], [1]]), Matrix.from_rows([[1, 0]]))
    with pytest.raises(HypothesisError) as excinfo:
        extract_data(raw)
    assert excinfo.value.sequence == 'extension'


def test_extract_rejects_non_exact_sequence(h3):
    raw = RawExtension(builtin.abelian(2), builtin.abelian(1), h3,
                       Matrix.from_rows([[1], [0], [0]]), Matrix.from_rows([[1, 0, 0], [0, 1, 0]]))
    with pytest.raises(PreconditionError):
        extract_data(raw)


def test_transport_and_isomorphism_witness():
    base = h3_base_data()
    xi = Matrix.from_rows([[1, 0], [0, 1], [0, 0]])
    moved = transport(base, xi)
    assert moved == h3_transported_data()
    assert verify_isomorphism_witness(base, moved, xi).ok
    found = isomorphic(base, moved)
    assert found is not None
    assert verify_isomorphism_witness(base, moved, found).ok


def test_isomorphism_is_symmetric():
    base, moved = h3_base_data(), h3_transported_data()
    back = isomorphic(moved, base)
    assert back is not None
    assert verify_isomorphism_witness(moved, base, back).ok


def test_transport_composes_additively():
    base = h3_transported_data()
    xi1 = Matrix.from_rows([[1, 2], [0, "1/2"], [3, 0]])
    xi2 = Matrix.from_rows([[-1, 0], [4, 1], [0, 5]])
    assert transport(transport(base, xi1), xi2) == transport(base, xi1 + xi2)
    assert transport(base, Matrix.zeros(3, 2)) == base


def test_non_isomorphic_central_terms():
    plain = ExtensionData.create(builtin.abelian(2), builtin.abelian(1), zeros(1, 2))
    assert isomorphic(plain, heisenberg_data()) is None
    central = ExtensionData.create(builtin.abelian(2), builtin.heisenberg3(), zeros(3, 2), {(0, 1): (0, 0, 1)})
    assert isomorphic(h3_base_data(), central) is None


def test_wrong_witness_is_reported():
    base, moved = h3_base_data(), h3_transported_data()
    verdict = verify_isomorphism_witness(base, moved, Matrix.zeros(3, 2))
    assert 'isom2' in verdict.axioms()


# ----------------------------------------------------------------------
# rho-barra, obstrução e classificação
# ----------------------------------------------------------------------

def rbar_from_derivations(g, h, derivations):
    out = out_algebra(derivation_algebra(h))
    images = [out.project(d) for d in derivations]
    images += [zero_vector(out.dim)] * (g.dim - len(images))
    return out_morphism(g, out, images)


def diagonal_rbar(h):
    """abelian_3 -> Out(h) por diag(1, 0, b) e diag(0, 1, a), com phi_h = diag(a, b, ab)"""
    a, b = h.twist[0, 0], h.twist[1, 1]
    return rbar_from_derivations(builtin.abelian(3), h, [Matrix.diagonal([1, 0, b]), Matrix.diagonal([0, 1, a])])


def omega_residual(g, h, rho, flat):
    """Lados esquerdos menos direitos das condições em omega com rho fixo"""
    rep = formal_representation(g, h.dim, rho, h.twist)
    data = ExtensionData(g, h, tuple(rho), Cochain.from_flat(rep, 2, flat))
    phi_cols = g.twist.columns()
    out = []
    for i, j in itertools.combinations(range(g.dim), 2):
        out.extend(sub_vectors(h.phi(data.omega.value((i, j))), data.omega_of(phi_cols[i], phi_cols[j])))
        alpha = gl_bracket(rho[i], rho[j], h.twist) - data.rho_of(g.structure[i][j])
        out.extend((ad_matrix(h, data.omega.value((i, j))) - alpha).vectorize())
    for i, j, k in itertools.combinations(range(g.dim), 3):
        total = zero_vector(h.dim)
        for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
            total = add_vectors(total, data.rho_of(phi_cols[a]).apply(data.omega.value((b, c))))
            total = sub_vectors(total, data.omega_of(g.structure[a][b], phi_cols[c]))
        out.extend(total)
    return tuple(out)


def omega_is_feasible(g, h, rho):
    size = len(list(itertools.combinations(range(g.dim), 2))) * h.dim
    r0 = omega_residual(g, h, rho, zero_vector(size))
    columns = [sub_vectors(omega_residual(g, h, rho, unit_vector(size, a)), r0) for a in range(size)]
    if not columns:
        return not any(r0)
    return solve(Matrix.from_columns(columns, len(r0)), tuple(-c for c in r0)) is not None


# ----------------------------------------------------------------------
# amostras sorteadas do conjunto solução de (p1)-(p5)
# ----------------------------------------------------------------------

def kernel_of(size, residual):
    """Núcleo de um resíduo linear homogêneo em Q^size"""
    columns = [residual(unit_vector(size, a)) for a in range(size)]
    return kernel(Matrix.from_columns(columns, len(columns[0])))


def twist_defect(g, h, flat):
    xi = Matrix.from_vector(flat, h.dim, g.dim)
    return (h.twist @ xi - xi @ g.twist).vectorize()


def random_valid_data(g, h, rng):
    """
    Transporte de (0, lambda) por um xi com phi_h xi = xi phi_g; lambda é
    sorteado no núcleo das condições em omega com rho = 0
    """
    rho0 = zeros(h.dim, g.dim)
    size = h.dim * len(list(itertools.combinations(range(g.dim), 2)))
    flat = kernel_of(size, lambda v: omega_residual(g, h, rho0, v)).random_element(rng) if size else ()
    base = ExtensionData(g, h, tuple(rho0), Cochain.from_flat(formal_representation(g, h.dim, rho0, h.twist), 2, flat))
    xi_space = kernel_of(h.dim * g.dim, lambda v: twist_defect(g, h, v))
    return transport(base, Matrix.from_vector(xi_space.random_element(rng), h.dim, g.dim))


def nonzero_fraction(rng):
    return Fraction(rng.choice((-3, -2, -1, 1, 2, 3)), rng.randint(1, 3))


def perturb_data(data, rng):
    """Soma um racional não nulo a uma entrada de algum rho_i ou de algum omega(e_i, e_j)"""
    g, h = data.g, data.h
    delta = nonzero_fraction(rng)
    rho = list(data.rho)
    omega = {t: data.omega.value(t) for t in itertools.combinations(range(g.dim), 2)}
    if omega and rng.random() < 0.5:
        t, k = rng.choice(sorted(omega)), rng.randrange(h.dim)
        omega[t] = tuple(v + delta if a == k else v for a, v in enumerate(omega[t]))
    else:
        i, a, b = rng.randrange(g.dim), rng.randrange(h.dim), rng.randrange(h.dim)
        rho[i] = rho[i] + Matrix.unit(h.dim, h.dim, a, b).scale(delta)
    return ExtensionData.create(g, h, rho, omega)


def sample_pairs():
    twisted = HomLieAlgebra.abelian(1, Matrix.from_rows([[2]]), name='abelian_1_2')
    return [
        (builtin.abelian(2), builtin.abelian(1)),
        (builtin.abelian(3), builtin.abelian(1)),
        (builtin.aff1(1), builtin.abelian(1)),
        (builtin.abelian(2), builtin.heisenberg3()),
        (builtin.aff1(1), builtin.heisenberg3()),
        (twisted, builtin.heisenberg3(2, 3)),
    ]


@pytest.mark.parametrize('g, h', sample_pairs(), ids=lambda a: a.name)
def test_random_totals_are_hom_lie_exactly_when_data_is_valid(g, h):
    rng = random.Random(g.dim * 100 + h.dim)
    seen = set()
    for n in range(100):
        data = random_valid_data(g, h, rng)
        assert validate_extension_data(data).ok
        if n % 2:
            data = perturb_data(data, rng)
        expected = validate_extension_data(data).ok
        assert validate(build_extension(data, force=True).total).ok is expected
        seen.add(expected)
    if center(h).dim < h.dim:
        assert seen == {True, False}


@pytest.mark.parametrize('g, h', sample_pairs(), ids=lambda a: a.name)
def test_extract_inverts_build_on_random_data(g, h):
    rng = random.Random(g.dim * 7 + h.dim)
    for n in range(50):
        data = random_valid_data(g, h, rng)
        ext = build_extension(data)
        assert extract_data(ext) == data
        assert extract_data(ext.raw(), section=ext.section) == data
        if n % 10 == 0:
            s = diagonal_section(ext.raw(), rng)
            assert isomorphic(data, extract_data(ext.raw(), section=s)) is not None


def obstructed5():
    """[e1,e2] = e3, [e2,e4] = -e5; Cen = span(e3, e5)"""
    return HomLieAlgebra.from_brackets('obstructed5', 5, {(0, 1): {2: 1}, (1, 3): {4: -1}})


def obstructed_rbar():
    """
    abelian_3 -> Out(obstructed5) por e1 -> e5, e1 -> e3 e e2 -> e1; os comutadores
    são internos, mas d omega(e1, e2, e3) = e5 != 0 e B^3 = 0
    """
    derivations = [Matrix.unit(5, 5, 4, 0), Matrix.unit(5, 5, 2, 0), Matrix.unit(5, 5, 0, 1)]
    return rbar_from_derivations(builtin.abelian(3), obstructed5(), derivations)

def obstruction_cases():
    h3, h3_23 = builtin.heisenberg3(), builtin.heisenberg3(2, 3)
    return [
        rbar_from_derivations(builtin.abelian(2), builtin.abelian(1), []),
        rbar_from_derivations(builtin.abelian(2), h3, []),
        diagonal_rbar(h3),
        diagonal_rbar(h3_23),
        obstructed_rbar(),
    ]


@pytest.mark.parametrize('rbar', obstruction_cases(), ids=lambda r: f"{r.g.name}->{r.h.name}")
def test_obstruction_agrees_with_direct_search(rbar):
    result = obstruction(rbar)
    assert omega_is_feasible(rbar.g, rbar.h, result.rho) is result.class_is_zero
    if result.class_is_zero:
        assert validate_extension_data(result.repaired).ok
        assert validate(result.extension.total).ok
        assert induced_out_morphism(result.repaired, rbar.target).images == rbar.images


@pytest.mark.parametrize('rbar', obstruction_cases(), ids=lambda r: f"{r.g.name}->{r.h.name}")
def test_obstruction_class_does_not_depend_on_choices(rbar):
    reference = obstruction(rbar)
    for seed in range(5):
        result = obstruction(rbar, rng=random.Random(seed))
        assert result.class_is_zero is reference.class_is_zero
        assert result.class_coordinates == reference.class_coordinates
        if result.class_is_zero:
            assert validate_extension_data(result.repaired).ok


def test_nonzero_obstruction_blocks_every_step():
    rbar = obstructed_rbar()
    assert validate(rbar.h).ok
    assert center(rbar.h).dim == 2
    result = obstruction(rbar)
    assert result.class_is_zero is False
    assert any(result.class_coordinates)
    assert result.repaired is None and result.extension is None
    assert not omega_is_feasible(rbar.g, rbar.h, result.rho)

    data = ExtensionData(rbar.g, rbar.h, result.rho, result.omega)
    verdict = validate_extension_data(data)
    assert verdict.axioms() == ['p5']
    with pytest.raises(InvalidAlgebraError) as excinfo:
        build_extension(data)
    assert [v.axiom for v in excinfo.value.report] == ['p5']

    with pytest.raises(NotExtensibleError) as excinfo:
        classify(rbar)
    assert excinfo.value.class_coordinates == list(result.class_coordinates)


def test_rbar_must_be_a_morphism(h3):
    with pytest.raises(PreconditionError):
        rbar_from_derivations(builtin.aff1(1), h3, [Matrix.zeros(3, 3), Matrix.diagonal([1, 0, 1])])


def test_rbar_shape_is_checked(h3):
    out = out_algebra(derivation_algebra(h3))
    with pytest.raises(InputError):
        OutMorphism(builtin.abelian(2), out, ((0, 0), (0, 0)))


def test_classification_by_second_cohomology():
    rbar = rbar_from_derivations(builtin.abelian(2), builtin.abelian(1), [])
    classes = classify(rbar)
    assert classes.dim == 1
    assert classes.class_of(classes.base) == (0,)
    [representative] = classes.representatives()
    assert classes.class_of(representative) == (1,)
    assert classes.class_of(classes.datum_for_class((3,))) == (3,)
    assert classes.class_of(heisenberg_data()) == (1,)
    assert isomorphic(classes.datum_for_class((1,)), classes.datum_for_class((2,))) is None
    assert isomorphic(classes.datum_for_class((2,)), classes.datum_for_class((2,))) is not None


def test_classification_sees_through_transport():
    rbar = rbar_from_derivations(builtin.abelian(2), builtin.heisenberg3(), [])
    classes = classify(rbar)
    assert classes.dim == 1
    assert classes.class_of(h3_transported_data()) == (0,)
    central = ExtensionData.create(builtin.abelian(2), builtin.heisenberg3(), zeros(3, 2), {(0, 1): (0, 0, 1)})
    assert classes.class_of(central) == (1,)


def test_classify_checks_base_algebra(h3):
    rbar = rbar_from_derivations(builtin.abelian(2), h3, [])
    with pytest.raises(InputError):
        classify(rbar, h=builtin.sl2())


@pytest.mark.parametrize('h', [builtin.aff1(1), builtin.sl2()], ids=lambda h: h.name)
def test_center_free_correspondence(h):
    g = builtin.abelian(2)
    correspondence = bijection_center_zero(g, h)
    assert correspondence.out.dim == 0
    zero = out_morphism(g, correspondence.out, [(), ()])
    lifted = correspondence.to_datum(zero)
    assert validate_extension_data(lifted).ok

    u1, u2 = unit_vector(h.dim, 0), unit_vector(h.dim, 1)
    rho = [ad_matrix(h, u1), ad_matrix(h, u2)]
    inner = ExtensionData.create(g, h, rho, {(0, 1): bracket(h, u1, u2)})
    assert validate_extension_data(inner).ok
    assert correspondence.to_out(inner).images == zero.images
    assert isomorphic(lifted, inner) is not None


def grid_candidates(h):
    """Matrizes de uma grade pequena em gl(h), filtradas por (p2)"""
    if h.dim == 2:
        grid = [Matrix.from_rows([[a, b], [c, d]]) for a, b, c, d in itertools.product((-1, 0, 1), repeat=4)]
    else:
        # combinações 0/1 de ad_e1, ad_e2, ad_e3, com ou sem a identidade
        ads = [ad_matrix(h, unit_vector(h.dim, a)) for a in range(h.dim)]
        grid = []
        for coefficients in itertools.product((0, 1), repeat=h.dim + 1):
            m = Matrix.identity(h.dim).scale(coefficients[-1])
            for c, ad in zip(coefficients, ads):
                m = m + ad.scale(c)
            grid.append(m)
    return [m for m in grid if is_derivation(m, h).ok]


def grid_solutions(g, h, candidates):
    """
    Todos os dados válidos com rho_i nos candidatos; com Cen(h) = 0 a
    condição (p4) fixa omega, pois ad é injetiva
    """
    ad_columns = Matrix.from_columns([ad_matrix(h, unit_vector(h.dim, a)).vectorize() for a in range(h.dim)],
                                     h.dim * h.dim)
    found = []
    for rho in itertools.product(candidates, repeat=g.dim):
        omega = {}
        for i, j in itertools.combinations(range(g.dim), 2):
            alpha = gl_bracket(rho[i], rho[j], h.twist)
            for k, c in enumerate(g.structure[i][j]):
                alpha = alpha - rho[k].scale(c)
            solution = solve(ad_columns, alpha.vectorize())
            if solution is None:
                break
            omega[(i, j)] = solution.particular
        else:
            data = ExtensionData.create(g, h, list(rho), omega)
            if validate_extension_data(data).ok:
                found.append(data)
    return found


@pytest.mark.parametrize('g', [builtin.abelian(1), builtin.abelian(2)], ids=lambda g: g.name)
@pytest.mark.parametrize('h, derivations_in_grid', [(builtin.aff1(1), 9), (builtin.sl2(), 8)],
                         ids=lambda v: getattr(v, 'name', str(v)))
def test_center_free_grid_data_all_come_from_out(g, h, derivations_in_grid):
    correspondence = bijection_center_zero(g, h)
    zero = out_morphism(g, correspondence.out, [()] * g.dim)
    lifted = correspondence.to_datum(zero)
    assert validate_extension_data(lifted).ok

    candidates = grid_candidates(h)
    assert len(candidates) == derivations_in_grid
    found = grid_solutions(g, h, candidates)
    assert len(found) == derivations_in_grid ** g.dim
    for data in found:
        rbar = correspondence.to_out(data)
        assert rbar.images == zero.images
        back = correspondence.to_datum(rbar)
        xi = isomorphic(data, back)
        assert xi is not None
        assert verify_isomorphism_witness(data, back, xi).ok
        assert isomorphic(data, lifted) is not None


def test_center_free_correspondence_needs_trivial_center(h3):
    with pytest.raises(PreconditionError):
        bijection_center_zero(builtin.abelian(2), h3)


def test_non_diagonal_center_blocks_obstruction():
    twist = Matrix.from_rows([[1, 0, 0], [0, 1, 0], [1, 0, 1]])
    h = HomLieAlgebra.from_brackets('heisenberg3_jordan', 3, {(0, 1): {2: 1}}, twist)
    out = out_algebra(derivation_algebra(h))
    rbar = OutMorphism(builtin.abelian(1), out, (zero_vector(out.dim),))
    with pytest.raises(HypothesisError) as excinfo:
        obstruction(rbar)
    assert excinfo.value.sequence in ('der_out', 'center_inn')
