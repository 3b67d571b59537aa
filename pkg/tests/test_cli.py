import json
import os

import pytest

from cli import COMMANDS
from services import fixtures as builtin
from services.derived import is_derivation
from services.exactla import Matrix


def report(run_cli, *argv):
    code, out, _ = run_cli('--json', *argv)
    return code, json.loads(out)


# ----------------------------------------------------------------------
# validate / der / out / center
# ----------------------------------------------------------------------

def test_validate_ok(run_cli):
    code, data = report(run_cli, 'validate', 'fixtures/h3.json')
    assert code == 0
    assert data['schema'] == 'homlie/1'
    assert data['result']['valid'] is True
    assert data['result']['status'] == 'ok'
    assert data['inputs'][0]['path'] == os.path.join('fixtures', 'h3.json')
    assert len(data['inputs'][0]['sha256']) == 64


def test_validate_reports_witness(run_cli):
    code, data = report(run_cli, 'validate', 'fixtures/h3_bad_twist.json')
    assert code == 1
    violation = data['result']['verdict']['violations'][0]
    assert violation['axiom'] == 'twist_morphism'
    assert violation['witness'] == [1, 2]
    assert data['result']['status'] == 'negative'


def test_validate_text_output(run_cli):
    code, out, _ = run_cli('validate', 'fixtures/h3_bad_twist.json')
    assert code == 1
    assert 'twist_morphism (e1,e2)' in out


def test_der_dimensions_and_basis(run_cli):
    code, data = report(run_cli, 'der', 'fixtures/h3.json')
    assert code == 0
    der = data['result']['der']
    assert der['dim'] == 6
    assert data['result']['inn']['dim'] == 2
    h3 = builtin.heisenberg3()
    for rows in der['matrices']:
        assert is_derivation(Matrix.from_rows(rows), h3).ok


def test_der_of_twisted_heisenberg(run_cli):
    code, data = report(run_cli, 'der', 'fixtures/h3_23.json')
    assert code == 0
    h = builtin.heisenberg3(2, 3)
    for rows in data['result']['der']['matrices']:
        assert is_derivation(Matrix.from_rows(rows), h).ok


@pytest.mark.parametrize('path, der_dim, inn_dim, out_dim', [
    ('fixtures/aff1.json', 2, 2, 0),
    ('fixtures/h3.json', 6, 2, 4),
    ('fixtures/abelian2.json', 4, 0, 4),
    ('fixtures/sl2.json', 3, 3, 0),
])
def test_out_dimensions(run_cli, path, der_dim, inn_dim, out_dim):
    code, data = report(run_cli, 'out', path)
    assert code == 0
    result = data['result']
    assert (result['der_dim'], result['inn_dim'], result['out']['dim']) == (der_dim, inn_dim, out_dim)
    assert len(result['out']['representatives']) == out_dim


def test_center(run_cli):
    code, data = report(run_cli, 'center', 'fixtures/h3.json')
    assert code == 0
    assert data['result']['center'] == {'dim': 1, 'basis': [['0', '0', '1']]}
    _, data = report(run_cli, 'center', 'fixtures/aff1.json')
    assert data['result']['center']['dim'] == 0


def test_invalid_algebra_is_refused_by_der(run_cli):
    code, data = report(run_cli, 'der', 'fixtures/h3_bad_twist.json')
    assert code == 1
    assert data['result']['status'] == 'error'
    assert data['result']['error']['type'] == 'InvalidAlgebraError'


def test_fixture_reference(run_cli):
    code, data = report(run_cli, 'validate', 'fixture:heisenberg3_2_3')
    assert code == 0
    assert data['result']['algebra'] == 'heisenberg3_2_3'
    assert data['inputs'] == []


def test_unknown_fixture(run_cli):
    code, _, err = run_cli('validate', 'fixture:so3')
    assert code == 2
    assert 'so3' in err


# ----------------------------------------------------------------------
# cohomology
# ----------------------------------------------------------------------

def test_cohomology_trivial_rep(run_cli):
    code, data = report(run_cli, 'cohomology', 'fixtures/abelian3.json', 'fixtures/abelian3_trivial_rep.json',
                        '--degree', '2')
    assert code == 0
    assert data['result']['dims'] == {'cochains': 3, 'cocycles': 3, 'coboundaries': 0, 'cohomology': 3}
    assert len(data['result']['representatives']) == 3


def test_cohomology_of_adjoint(run_cli):
    code, data = report(run_cli, 'cohomology', 'fixtures/h3.json', 'fixtures/h3_adjoint_rep.json', '--degree', '1')
    assert code == 0
    assert data['result']['dims']['coboundaries'] == 0


def test_cohomology_with_invalid_rep(run_cli):
    code, data = report(run_cli, 'cohomology', 'fixtures/aff1.json', 'fixtures/aff1_invalid_rep.json',
                        '--degree', '1')
    assert code == 1
    witnesses = data['result']['error']['witnesses']
    assert any(w.startswith('bracket_compatibility (e1,e2)') for w in witnesses)


# ----------------------------------------------------------------------
# extensões
# ----------------------------------------------------------------------

def test_obstruction_vanishes(run_cli):
    code, data = report(run_cli, 'obstruction', 'fixtures/abelian2.json', 'fixtures/h3.json',
                        'fixtures/rbar_zero_h3.json')
    assert code == 0
    assert data['result']['extensible'] is True
    assert data['result']['center_dim'] == 1
    assert data['result']['repaired']['kind'] == 'extension'


def test_obstruction_with_seed_keeps_the_class(run_cli):
    _, plain = report(run_cli, 'obstruction', 'fixtures/abelian2.json', 'fixtures/h3.json',
                      'fixtures/rbar_zero_h3.json')
    _, seeded = report(run_cli, 'obstruction', 'fixtures/abelian2.json', 'fixtures/h3.json',
                       'fixtures/rbar_zero_h3.json', '--seed', '11')
    assert seeded['result']['extensible'] == plain['result']['extensible']
    assert seeded['result']['class_coordinates'] == plain['result']['class_coordinates']


def test_obstruction_does_not_vanish(run_cli):
    code, data = report(run_cli, 'obstruction', 'fixtures/abelian3.json', 'fixtures/obstructed5.json',
                        'fixtures/rbar_obstructed.json')
    assert code == 1
    assert data['result']['status'] == 'negative'
    assert data['result']['extensible'] is False
    assert data['result']['center_dim'] == 2
    assert any(c != '0' for c in data['result']['class_coordinates'])
    assert 'repaired' not in data['result']


def test_classify_refuses_obstructed_rbar(run_cli):
    code, data = report(run_cli, 'classify', 'fixtures/abelian3.json', 'fixtures/obstructed5.json',
                        'fixtures/rbar_obstructed.json')
    assert code == 1
    error = data['result']['error']
    assert error['type'] == 'NotExtensibleError'
    assert any(c != '0' for c in error['class_coordinates'])


def test_rbar_with_wrong_dimension(run_cli):
    code, _, _ = run_cli('obstruction', 'fixtures/abelian2.json', 'fixtures/h3.json',
                         'fixtures/rbar_zero_abelian1.json')
    assert code == 2


def test_classify_writes_loadable_extensions(run_cli, tmp_path):
    code, data = report(run_cli, 'classify', 'fixtures/abelian2.json', 'fixtures/abelian1.json',
                        'fixtures/rbar_zero_abelian1.json', '--out', str(tmp_path))
    assert code == 0
    assert data['result']['h2_dim'] == 1
    assert data['result']['written'] == ['base.json', 'class_1.json']
    assert data['command']['args']['out'] == os.path.basename(str(tmp_path))

    base, class_1 = str(tmp_path / 'base.json'), str(tmp_path / 'class_1.json')
    code, built = report(run_cli, 'build', class_1)
    assert code == 0
    assert built['result']['total']['dim'] == 3
    assert report(run_cli, 'iso', base, base)[0] == 0
    assert report(run_cli, 'iso', base, class_1)[0] == 1


def test_iso_finds_witness(run_cli):
    code, data = report(run_cli, 'iso', 'fixtures/ext_h3_base.json', 'fixtures/ext_h3_transported.json')
    assert code == 0
    assert data['result']['isomorphic'] is True
    assert len(data['result']['xi']) == 3


def test_iso_negative(run_cli):
    code, data = report(run_cli, 'iso', 'fixtures/ext_abelian.json', 'fixtures/ext_heisenberg.json')
    assert code == 1
    assert data['result']['isomorphic'] is False


def test_iso_refuses_invalid_data(run_cli):
    code, _, err = run_cli('iso', 'fixtures/ext_invalid.json', 'fixtures/ext_h3_base.json')
    assert code == 1
    assert 'p2' in err


def test_extract_heisenberg(run_cli):
    code, data = report(run_cli, 'extract', 'fixtures/heisenberg_raw_extension.json')
    assert code == 0
    assert data['result']['extension']['omega'] == {'[0,1]': ['1']}


def test_extract_without_diagonal_section(run_cli):
    code, data = report(run_cli, 'extract', 'fixtures/jordan_raw_extension.json')
    assert code == 3
    assert data['result']['error']['sequence'] == 'extension'


def test_extract_hypothesis_text(run_cli):
    code, _, err = run_cli('extract', 'fixtures/jordan_raw_extension.json')
    assert code == 3
    assert 'HIPÓTESE' in err


def test_build_invalid(run_cli):
    code, data = report(run_cli, 'build', 'fixtures/ext_invalid.json')
    assert code == 1
    assert data['result']['valid'] is False
    assert data['result']['verdict']['violations'][0]['axiom'] == 'p2'


def test_build_heisenberg(run_cli):
    code, data = report(run_cli, 'build', 'fixtures/ext_heisenberg.json')
    assert code == 0
    assert data['result']['total']['brackets'] == [[0, 1, [[2, '1']]]]


# ----------------------------------------------------------------------
# erros de entrada e determinismo
# ----------------------------------------------------------------------

def test_bad_rational_position(run_cli):
    code, data = report(run_cli, 'validate', 'fixtures/bad_rational.json')
    assert code == 2
    error = data['result']['error']
    assert error['type'] == 'ParseError'
    assert (error['line'], error['column']) == (7, 31)


def test_truncated_json(run_cli):
    code, data = report(run_cli, 'validate', 'fixtures/truncated.json')
    assert code == 2
    assert data['result']['error']['type'] == 'ParseError'


@pytest.mark.parametrize('path', ['fixtures/missing.json', 'README.md'])
def test_unreadable_inputs(run_cli, path):
    code, _, err = run_cli('validate', path)
    assert code == 2
    assert err


def test_unknown_command_is_usage_error(run_cli):
    with pytest.raises(SystemExit) as excinfo:
        run_cli('frobnicate')
    assert excinfo.value.code == 2


def test_missing_command(run_cli):
    code, _, err = run_cli()
    assert code == 2
    assert 'usage' in err


DETERMINISM_CASES = [
    ('validate', 'fixtures/h3_bad_twist.json'),
    ('der', 'fixtures/h3_23.json'),
    ('out', 'fixtures/h3.json'),
    ('center', 'fixtures/sl2.json'),
    ('cohomology', 'fixtures/h3.json', 'fixtures/h3_adjoint_rep.json', '--degree', '2'),
    ('obstruction', 'fixtures/abelian2.json', 'fixtures/h3.json', 'fixtures/rbar_zero_h3.json', '--seed', '4'),
    ('obstruction', 'fixtures/abelian3.json', 'fixtures/obstructed5.json', 'fixtures/rbar_obstructed.json'),
    ('classify', 'fixtures/abelian2.json', 'fixtures/abelian1.json', 'fixtures/rbar_zero_abelian1.json'),
    ('iso', 'fixtures/ext_h3_base.json', 'fixtures/ext_h3_transported.json'),
    ('extract', 'fixtures/heisenberg_raw_extension.json'),
    ('build', 'fixtures/ext_heisenberg.json'),
    ('selfcheck', '--seed', '2'),
]


@pytest.mark.parametrize('argv', DETERMINISM_CASES, ids=lambda argv: argv[0])
def test_reports_are_deterministic(run_cli, argv):
    runs = [run_cli('--json', *argv) for _ in range(3)]
    assert len({out for _, out, _ in runs}) == 1
    assert len({code for code, _, _ in runs}) == 1
    assert json.loads(runs[0][1])['command']['name'] == argv[0]


def test_determinism_cases_cover_every_command():
    assert {argv[0] for argv in DETERMINISM_CASES} == set(COMMANDS)


def test_fixture_catalog(run_cli):
    code, out, _ = run_cli('--json', '--fixtures')
    assert code == 0
    assert json.loads(out)['fixtures'] == builtin.catalog()


def test_selfcheck(run_cli):
    code, data = report(run_cli, 'selfcheck', '--seed', '5')
    assert code == 0
    assert data['result']['ok'] is True
    assert [c['runs'] > 0 for c in data['result']['checks']] == [True, True, True]
