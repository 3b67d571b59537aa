import json
import os

import pytest

from services import fixtures as builtin
from services.derived import derivation_algebra, out_algebra
from services.file_processor import (
    FileProcessor, algebra_to_payload, cochain_to_payload, extension_to_payload,
)
from services.cohom import Cochain, trivial_rep
from services.exactla import Matrix
from services.report_service import ReportService
from utils.exceptions import FileValidationError, ParseError
from utils.rational import format_rational, parse_rational
from utils.validators import check_input_file, validate_json_structure


def write(tmp_path, name, payload):
    path = tmp_path / name
    path.write_text(payload if isinstance(payload, str) else json.dumps(payload, indent=2), encoding='utf-8')
    return str(path)


def test_load_algebra(fixture_path, h3):
    g = FileProcessor().load_algebra(fixture_path('h3.json'))
    assert g.name == 'h3'
    assert g.structure == h3.structure
    assert g.twist == h3.twist


def test_missing_twist_defaults_to_identity(fixture_path):
    g = FileProcessor().load_algebra(fixture_path('sl2.json'))
    assert g.twist == Matrix.identity(3)


def test_inputs_are_recorded_once(fixture_path):
    processor = FileProcessor()
    processor.load_extension(fixture_path('ext_heisenberg.json'))
    processor.load_algebra(fixture_path('abelian2.json'))
    names = [name for name, _ in processor.inputs]
    assert names == ['ext_heisenberg.json', 'abelian2.json', 'abelian1.json']


def test_relative_references_and_fixtures(tmp_path):
    write(tmp_path, 'g.json', {'dim': 1})
    path = write(tmp_path, 'ext.json', {
        'kind': 'extension', 'g': 'g.json', 'h': 'fixture:aff1_2', 'rho': [[[0, 0], [0, 0]]],
    })
    data = FileProcessor().load_extension(path)
    assert data.g.dim == 1
    assert data.h.twist == Matrix.diagonal([1, 2])
    assert data.omega.is_zero()


def test_bracket_indices_must_increase(tmp_path):
    path = write(tmp_path, 'bad.json', {'dim': 2, 'brackets': [[1, 0, [[0, 1]]]]})
    with pytest.raises(ParseError):
        FileProcessor().load_algebra(path)


def test_repeated_bracket_pair(tmp_path):
    path = write(tmp_path, 'bad.json', {'dim': 2, 'brackets': [[0, 1, [[0, 1]]], [0, 1, [[1, 1]]]]})
    with pytest.raises(ParseError):
        FileProcessor().load_algebra(path)


def test_floats_are_rejected_with_position(tmp_path):
    path = write(tmp_path, 'float.json', '{\n  "dim": 1,\n  "twist": [[0.5]]\n}\n')
    with pytest.raises(ParseError) as excinfo:
        FileProcessor().load_algebra(path)
    assert excinfo.value.line == 3


def test_bad_rational_position(fixture_path):
    with pytest.raises(ParseError) as excinfo:
        FileProcessor().load_algebra(fixture_path('bad_rational.json'))
    assert (excinfo.value.line, excinfo.value.column) == (7, 31)


def test_wrong_kind(fixture_path):
    with pytest.raises(ParseError):
        FileProcessor().load_extension(fixture_path('h3.json'))


def test_unsupported_schema(tmp_path):
    path = write(tmp_path, 'old.json', {'schema': 'homlie/0', 'dim': 1})
    with pytest.raises(ParseError):
        FileProcessor().load_algebra(path)


def test_file_too_large(fixture_path):
    with pytest.raises(FileValidationError):
        FileProcessor(max_file_size=10).load_algebra(fixture_path('h3.json'))


def test_rbar_coordinates(fixture_path, h3):
    out = out_algebra(derivation_algebra(h3))
    rbar = FileProcessor().load_rbar(fixture_path('rbar_zero_h3.json'), builtin.abelian(2), out)
    assert rbar.is_zero()


def test_rbar_from_derivations(fixture_path):
    processor = FileProcessor()
    h = processor.load_algebra(fixture_path('obstructed5.json'))
    out = out_algebra(derivation_algebra(h))
    rbar = processor.load_rbar(fixture_path('rbar_obstructed.json'), builtin.abelian(3), out)
    expected = [Matrix.unit(5, 5, 4, 0), Matrix.unit(5, 5, 2, 0), Matrix.unit(5, 5, 0, 1)]
    assert rbar.images == tuple(out.project(d) for d in expected)
    assert rbar.check().ok
    assert not rbar.is_zero()


def test_rbar_derivations_must_be_derivations(tmp_path, fixture_path):
    processor = FileProcessor()
    h = processor.load_algebra(fixture_path('h3.json'))
    out = out_algebra(derivation_algebra(h))
    # e1 -> e1: D[e1,e2] = 0 mas [D e1, e2] + [e1, D e2] = e3
    bad = [["1", "0", "0"], ["0", "0", "0"], ["0", "0", "0"]]
    path = write(tmp_path, 'rbar.json', {
        'schema': 'homlie/1', 'kind': 'rbar', 'h': fixture_path('h3.json'),
        'derivations': [bad, [["0"] * 3] * 3],
    })
    with pytest.raises(ParseError, match=r'derivations\[0\]'):
        processor.load_rbar(path, builtin.abelian(2), out)


def test_algebra_payload_reloads(tmp_path, h3_23):
    path = write(tmp_path, 'h.json', algebra_to_payload(h3_23))
    g = FileProcessor().load_algebra(path)
    assert (g.name, g.structure, g.twist) == (h3_23.name, h3_23.structure, h3_23.twist)


def test_extension_payload_keys(fixture_path):
    data = FileProcessor().load_extension(fixture_path('ext_h3_transported.json'))
    payload = extension_to_payload(data)
    assert payload['omega'] == {'[0,1]': ['0', '0', '1']}
    assert payload['rho'][0][2] == ['0', '1', '0']


def test_cochain_payload_skips_zero_values():
    r = trivial_rep(builtin.abelian(3))
    f = Cochain.from_mapping(r, 2, {(0, 2): ("-1/2",)})
    assert cochain_to_payload(f) == {'[0,2]': ['-1/2']}


def test_rationals():
    assert parse_rational(" 3 / 6 ") == parse_rational("1/2")
    assert format_rational(parse_rational("-4/2")) == '-2'
    for bad in ("1/0", "1.5", "", True, 0.5, None):
        with pytest.raises(ParseError):
            parse_rational(bad)


def test_input_file_checks(tmp_path):
    good = write(tmp_path, 'h.JSON', {'dim': 1})
    assert check_input_file(good, {'json'}, 100) == os.path.getsize(good)
    for name in ('h.json.txt', 'Makefile'):
        bad = write(tmp_path, name, '{}')
        with pytest.raises(FileValidationError):
            check_input_file(bad, {'json'}, 100)
    with pytest.raises(FileValidationError) as excinfo:
        check_input_file(good, {'json'}, 1)
    assert 'HOMLIE_MAX_FILE_SIZE' in str(excinfo.value)
    with pytest.raises(FileValidationError) as excinfo:
        check_input_file(str(tmp_path / 'heisenberg3'), {'json'}, 100)
    assert 'fixture:' in str(excinfo.value)


def test_json_structure():
    assert validate_json_structure({'dim': 1, 'brackets': []}, ('dim', 'brackets'))
    with pytest.raises(ParseError):
        validate_json_structure({'dim': 1}, ('dim', 'brackets'))
    with pytest.raises(ParseError):
        validate_json_structure([1], ('dim',))


def test_digest_and_serialization():
    assert ReportService.digest(b"abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
    text = ReportService.serialize({'b': 1, 'a': 'ç'})
    assert text == '{\n  "a": "ç",\n  "b": 1\n}\n'


def test_report_envelope():
    report = ReportService.create_report({'name': 'der'}, [('fixtures/h3.json', b'{}')], {'x': 1})
    assert report['schema'] == 'homlie/1'
    assert report['inputs'] == [{'path': 'fixtures/h3.json', 'sha256': ReportService.digest(b'{}')}]
