import os
import random

import pytest

import cli
from services import fixtures as builtin

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture
def fixture_path():
    def _path(name):
        return os.path.join(ROOT, 'fixtures', name)
    return _path


@pytest.fixture
def h3():
    return builtin.heisenberg3()


@pytest.fixture
def h3_23():
    return builtin.heisenberg3(2, 3)


@pytest.fixture
def aff1():
    return builtin.aff1(1)


@pytest.fixture
def sl2():
    return builtin.sl2()


@pytest.fixture
def run_cli(capsys, monkeypatch):
    """Executa o CLI a partir da raiz do repositório e devolve (código, stdout, stderr)"""
    monkeypatch.chdir(ROOT)

    def _run(*argv):
        code = cli.main(list(argv))
        captured = capsys.readouterr()
        return code, captured.out, captured.err
    return _run
