"""
Leitura e escrita dos arquivos JSON do CLI (álgebras, representações,
dados de extensão, rho-barra e extensões "cruas")

Referências a álgebras podem ser objetos inline, "fixture:<nome>" ou
caminhos relativos ao arquivo que as cita. Índices de base nos arquivos
começam em 0; racionais são inteiros JSON ou strings "p/q".
"""
import itertools
import json
import logging
import os
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

from config import Config
from services.cohom import Cochain, Representation, formal_representation
from services.derived import OutAlgebra, is_derivation
from services.exactla import Matrix, Vector
from services.extend import ExtensionData, OutMorphism, RawExtension
from services.fixtures import fixture
from services.homlie import HomLieAlgebra
from utils.exceptions import InputError, ParseError
from utils.rational import format_rational, parse_rational
from utils.validators import check_input_file, validate_json_structure

logger = logging.getLogger(__name__)

FIXTURE_PREFIX = 'fixture:'


@dataclass
class _Document:
    """Um arquivo já decodificado, com o texto para localizar erros"""

    path: str
    text: str

    @property
    def base_dir(self) -> str:
        return os.path.dirname(self.path)

    def locate(self, token: Any) -> Tuple[Optional[int], Optional[int]]:
        needle = json.dumps(token) if isinstance(token, str) else str(token)
        index = self.text.find(needle)
        if index < 0:
            return None, None
        line = self.text.count('\n', 0, index) + 1
        column = index - (self.text.rfind('\n', 0, index) + 1) + 1
        return line, column

    def error(self, message: str, token: Any = None) -> ParseError:
        line, column = self.locate(token) if token is not None else (None, None)
        return ParseError(message, path=self.path, line=line, column=column)

    def rational(self, value: Any):
        try:
            return parse_rational(value)
        except ParseError as e:
            raise self.error(str(e), value) from e

    def vector(self, values: Any, size: int, label: str) -> Vector:
        if not isinstance(values, list) or len(values) != size:
            raise self.error(f"{label}: esperado vetor de tamanho {size}")
        return tuple(self.rational(v) for v in values)

    def matrix(self, rows: Any, n_rows: int, n_cols: int, label: str) -> Matrix:
        if not isinstance(rows, list) or len(rows) != n_rows:
            raise self.error(f"{label}: esperada matriz {n_rows}x{n_cols}")
        return Matrix.from_rows([self.vector(r, n_cols, label) for r in rows], n_cols)

    def integer(self, value: Any, label: str) -> int:
        if isinstance(value, bool) or not isinstance(value, int) or value < 0:
            raise self.error(f"{label}: esperado inteiro não negativo, recebido {value!r}")
        return value


class FileProcessor:
    """Carrega entradas do CLI e guarda os bytes lidos para os digests do relatório"""

    def __init__(self, max_file_size: Optional[int] = None):
        self.max_file_size = max_file_size or Config.MAX_FILE_SIZE
        self.inputs: List[Tuple[str, bytes]] = []

    # --- leitura bruta --------------------------------------------------

    def _read(self, path: str) -> Tuple[Any, _Document]:
        check_input_file(path, Config.ALLOWED_EXTENSIONS, self.max_file_size)
        with open(path, 'rb') as handle:
            raw = handle.read()
        shown = os.path.basename(path) if os.path.isabs(path) else os.path.normpath(path)
        if all(shown != seen for seen, _ in self.inputs):
            self.inputs.append((shown, raw))
        try:
            text = raw.decode('utf-8')
        except UnicodeDecodeError as e:
            raise ParseError(f"arquivo não é UTF-8: {e.reason}", path=path) from e
        try:
            payload = json.loads(text)
        except json.JSONDecodeError as e:
            raise ParseError(e.msg, path=path, line=e.lineno, column=e.colno) from e
        logger.debug("lido %s (%d bytes)", path, len(raw))
        return payload, _Document(path, text)

    def _check_schema(self, payload: Any, doc: _Document, kind: Optional[str] = None):
        if not isinstance(payload, dict):
            raise doc.error("esperado um objeto JSON")
        schema = payload.get('schema', Config.REPORT_SCHEMA)
        if schema != Config.REPORT_SCHEMA:
            raise doc.error(f"schema '{schema}' não suportado (esperado {Config.REPORT_SCHEMA})", schema)
        if kind is not None and payload.get('kind', kind) != kind:
            raise doc.error(f"esperado arquivo do tipo '{kind}', recebido '{payload.get('kind')}'")

    # --- álgebras -------------------------------------------------------

    def load_algebra(self, path: str) -> HomLieAlgebra:
        if path.startswith(FIXTURE_PREFIX):
            return fixture(path[len(FIXTURE_PREFIX):])
        payload, doc = self._read(path)
        return self._algebra_from_payload(payload, doc)

    def _resolve_algebra(self, ref: Any, doc: _Document, label: str) -> HomLieAlgebra:
        if isinstance(ref, dict):
            return self._algebra_from_payload(ref, doc)
        if isinstance(ref, str):
            if ref.startswith(FIXTURE_PREFIX):
                try:
                    return fixture(ref[len(FIXTURE_PREFIX):])
                except InputError as e:
                    raise doc.error(str(e), ref) from e
            return self.load_algebra(os.path.join(doc.base_dir, ref))
        raise doc.error(f"{label}: referência de álgebra inválida")

    def _algebra_from_payload(self, payload: Any, doc: _Document) -> HomLieAlgebra:
        self._check_schema(payload, doc, 'algebra')
        validate_json_structure(payload, ('dim',), path=doc.path)
        dim = doc.integer(payload['dim'], 'dim')
        name = str(payload.get('name', os.path.splitext(os.path.basename(doc.path))[0]))

        brackets: Dict[Tuple[int, int], Dict[int, Any]] = {}
        entries = payload.get('brackets', [])
        if not isinstance(entries, list):
            raise doc.error("brackets: esperada lista de [i, j, [[k, c], ...]]")
        for entry in entries:
            if not isinstance(entry, list) or len(entry) != 3 or not isinstance(entry[2], list):
                raise doc.error(f"brackets: entrada malformada {entry!r}")
            i, j = doc.integer(entry[0], 'i'), doc.integer(entry[1], 'j')
            if not i < j < dim:
                raise doc.error(f"brackets: exige 0 <= i < j < {dim}, recebido ({i}, {j})")
            if (i, j) in brackets:
                raise doc.error(f"brackets: par ({i}, {j}) repetido")
            coefficients = {}
            for term in entry[2]:
                if not isinstance(term, list) or len(term) != 2:
                    raise doc.error(f"brackets: termo malformado {term!r}")
                k = doc.integer(term[0], 'k')
                if k >= dim:
                    raise doc.error(f"brackets: índice {k} fora da base de dimensão {dim}")
                coefficients[k] = coefficients.get(k, 0) + doc.rational(term[1])
            brackets[(i, j)] = coefficients

        twist = None
        if 'twist' in payload:
            twist = doc.matrix(payload['twist'], dim, dim, 'twist')
        return HomLieAlgebra.from_brackets(name, dim, brackets, twist)

    # --- representações -------------------------------------------------

    def load_representation(self, path: str, g: Optional[HomLieAlgebra] = None) -> Representation:
        """Carrega (rho, V, beta) sem validar os axiomas (isso é do validate_rep)"""
        payload, doc = self._read(path)
        self._check_schema(payload, doc, 'representation')
        validate_json_structure(payload, ('v_dim', 'rho', 'beta'), path=path)
        if g is None:
            if 'g' not in payload:
                raise doc.error("representação sem álgebra 'g'")
            g = self._resolve_algebra(payload['g'], doc, 'g')
        v_dim = doc.integer(payload['v_dim'], 'v_dim')
        rho = self._matrices(payload['rho'], g.dim, v_dim, doc, 'rho')
        beta = doc.matrix(payload['beta'], v_dim, v_dim, 'beta')
        return formal_representation(g, v_dim, rho, beta)

    def _matrices(self, values: Any, count: int, size: int, doc: _Document, label: str) -> List[Matrix]:
        if not isinstance(values, list) or len(values) != count:
            raise doc.error(f"{label}: esperadas {count} matrizes {size}x{size}")
        return [doc.matrix(m, size, size, f"{label}[{i}]") for i, m in enumerate(values)]

    # --- dados de extensão ----------------------------------------------

    def load_extension(self, path: str) -> ExtensionData:
        payload, doc = self._read(path)
        self._check_schema(payload, doc, 'extension')
        validate_json_structure(payload, ('g', 'h', 'rho'), path=path)
        g = self._resolve_algebra(payload['g'], doc, 'g')
        h = self._resolve_algebra(payload['h'], doc, 'h')
        rho = self._matrices(payload['rho'], g.dim, h.dim, doc, 'rho')
        omega = {}
        raw_omega = payload.get('omega', {})
        if not isinstance(raw_omega, dict):
            raise doc.error('omega: esperado objeto {"[i,j]": vetor}')
        for key, value in raw_omega.items():
            try:
                pair = json.loads(key)
            except json.JSONDecodeError:
                pair = None
            if not (isinstance(pair, list) and len(pair) == 2 and all(isinstance(a, int) for a in pair)
                    and 0 <= pair[0] < pair[1] < g.dim):
                raise doc.error(f"omega: chave {key!r} deve ser \"[i,j]\" com 0 <= i < j < {g.dim}", key)
            omega[tuple(pair)] = doc.vector(value, h.dim, f"omega{key}")
        return ExtensionData.create(g, h, rho, omega)

    def load_raw_extension(self, path: str) -> RawExtension:
        payload, doc = self._read(path)
        self._check_schema(payload, doc, 'raw_extension')
        validate_json_structure(payload, ('g', 'h', 'total', 'iota', 'p'), path=path)
        g = self._resolve_algebra(payload['g'], doc, 'g')
        h = self._resolve_algebra(payload['h'], doc, 'h')
        total = self._resolve_algebra(payload['total'], doc, 'total')
        if total.dim != g.dim + h.dim:
            raise doc.error(f"total de dimensão {total.dim} != {g.dim} + {h.dim}")
        iota = doc.matrix(payload['iota'], total.dim, h.dim, 'iota')
        projection = doc.matrix(payload['p'], g.dim, total.dim, 'p')
        return RawExtension(g, h, total, iota, projection)

    def load_rbar(self, path: str, g: HomLieAlgebra, out: OutAlgebra) -> OutMorphism:
        """
        rho-barra: g -> Out(h), dado por 'images' (coordenadas na base canônica
        de Out(h), como emitidas por 'out') ou por 'derivations' (uma derivação
        de h por elemento da base de g, projetada em Out)
        """
        payload, doc = self._read(path)
        self._check_schema(payload, doc, 'rbar')
        if 'h' in payload:
            h = self._resolve_algebra(payload['h'], doc, 'h')
            if h.structure != out.derivations.base.structure or h.twist != out.derivations.base.twist:
                raise InputError(f"{path}: 'h' difere da álgebra informada")
        if 'derivations' in payload and 'images' not in payload:
            h = out.derivations.base
            derivations = self._matrices(payload['derivations'], g.dim, h.dim, doc, 'derivations')
            for i, d in enumerate(derivations):
                verdict = is_derivation(d, h)
                if not verdict.ok:
                    raise doc.error(f"derivations[{i}] não é derivação de {h.name}: {verdict.witness.describe()}")
            return OutMorphism(g, out, tuple(out.project(d) for d in derivations))
        validate_json_structure(payload, ('images',), path=path)
        images = payload['images']
        if not isinstance(images, list) or len(images) != g.dim:
            raise doc.error(f"images: esperados {g.dim} vetores de Out(h) (dimensão {out.dim})")
        return OutMorphism(g, out, tuple(doc.vector(v, out.dim, f"images[{i}]") for i, v in enumerate(images)))


# ----------------------------------------------------------------------
# Escrita
# ----------------------------------------------------------------------

def vector_to_payload(v: Sequence) -> List[str]:
    return [format_rational(x) for x in v]


def matrix_to_payload(m: Matrix) -> List[List[str]]:
    return [vector_to_payload(m.row(i)) for i in range(m.rows)]


def cochain_to_payload(f: Cochain) -> Dict[str, List[str]]:
    """Valores não nulos nas uplas crescentes, chaves "[i,j,...]" (base 0)"""
    return {"[" + ",".join(str(i) for i in t) + "]": vector_to_payload(v)
            for t, v in zip(f.tuples, f.values) if any(v)}


def algebra_to_payload(g: HomLieAlgebra) -> Dict[str, Any]:
    brackets = []
    for i, j in itertools.combinations(range(g.dim), 2):
        terms = [[k, format_rational(c)] for k, c in enumerate(g.structure[i][j]) if c]
        if terms:
            brackets.append([i, j, terms])
    return {
        'schema': Config.REPORT_SCHEMA,
        'kind': 'algebra',
        'name': g.name,
        'dim': g.dim,
        'brackets': brackets,
        'twist': matrix_to_payload(g.twist),
    }


def extension_to_payload(data: ExtensionData) -> Dict[str, Any]:
    return {
        'schema': Config.REPORT_SCHEMA,
        'kind': 'extension',
        'g': algebra_to_payload(data.g),
        'h': algebra_to_payload(data.h),
        'rho': [matrix_to_payload(m) for m in data.rho],
        'omega': cochain_to_payload(data.omega),
    }
