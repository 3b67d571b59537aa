#!/usr/bin/env python
"""
Linha de comando para álgebras Hom-Lie regulares sobre Q

Uso:
    python cli.py validate fixtures/h3.json
    python cli.py --json der fixtures/h3.json
    python cli.py cohomology fixtures/abelian3.json fixtures/abelian3_trivial_rep.json --degree 2
    python cli.py obstruction fixtures/abelian2.json fixtures/h3.json fixtures/rbar_zero_h3.json
    python cli.py classify fixtures/abelian2.json fixtures/abelian1.json fixtures/rbar_zero_abelian1.json --out saida/
    python cli.py iso fixtures/ext_h3_base.json fixtures/ext_h3_transported.json
    python cli.py extract fixtures/jordan_raw_extension.json
    python cli.py selfcheck --seed 7
    python cli.py --fixtures

Códigos de saída: 0 ok, 1 resultado matemático negativo, 2 erro de
entrada/parse, 3 hipótese de diagonalidade falhou sobre Q.
"""

import argparse
import logging
import os
import random
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

# Adicionar diretório raiz ao path
sys.path.insert(0, str(Path(__file__).parent))

from config import Config
from services.cohom import cohomology, validate_rep
from services.derived import derivation_algebra, out_algebra
from services.exactla import Matrix, unit_vector
from services.extend import (
    build_extension, classify, extract_data, isomorphic, obstruction, validate_extension_data,
)
from services.file_processor import (
    FileProcessor, algebra_to_payload, cochain_to_payload, extension_to_payload, matrix_to_payload,
    vector_to_payload,
)
from services.fixtures import catalog
from services.homlie import HomLieAlgebra, center, structure_constants, validate
from services.report_service import ReportService
from services.selfcheck import run_selfcheck
from utils.console import Logger
from utils.exceptions import (
    ConfigurationError, HomLieError, HypothesisError, InputError, InvalidAlgebraError, InvariantViolation,
    NotExtensibleError, PreconditionError,
)

logger = logging.getLogger('homlie.cli')

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INPUT = 2
EXIT_HYPOTHESIS = 3


@dataclass
class CommandResult:
    exit_code: int
    result: Dict[str, Any]


def exit_code_for(error: Exception) -> int:
    if isinstance(error, HypothesisError):
        return EXIT_HYPOTHESIS
    if isinstance(error, (InputError, ConfigurationError)):
        return EXIT_INPUT
    return EXIT_NEGATIVE


def _valid_algebra(processor: FileProcessor, path: str) -> HomLieAlgebra:
    g = processor.load_algebra(path)
    verdict = validate(g)
    if not verdict.ok:
        raise InvalidAlgebraError(f"{g.name} não é Hom-Lie regular: {verdict.witness.describe()}",
                                  verdict.violations)
    return g


def _structure_payload(g: HomLieAlgebra) -> Dict[str, List[str]]:
    return {f"[{i},{j}]": vector_to_payload(v) for (i, j), v in structure_constants(g).items()}


# ----------------------------------------------------------------------
# Comandos
# ----------------------------------------------------------------------

def cmd_validate(args, processor: FileProcessor) -> CommandResult:
    g = processor.load_algebra(args.file)
    verdict = validate(g)
    return CommandResult(EXIT_OK if verdict.ok else EXIT_NEGATIVE, {
        'algebra': g.name,
        'dim': g.dim,
        'valid': verdict.ok,
        'verdict': ReportService.verdict(verdict),
    })


def cmd_der(args, processor: FileProcessor) -> CommandResult:
    g = _valid_algebra(processor, args.file)
    d = derivation_algebra(g)
    n = g.dim
    return CommandResult(EXIT_OK, {
        'algebra': g.name,
        'der': dict(ReportService.subspace(d.der), matrices=ReportService.matrices(d.der_basis)),
        'inn': dict(ReportService.subspace(d.inn),
                    matrices=[matrix_to_payload(Matrix.from_vector(b, n, n)) for b in d.inn.basis]),
    })


def cmd_out(args, processor: FileProcessor) -> CommandResult:
    g = _valid_algebra(processor, args.file)
    o = out_algebra(derivation_algebra(g))
    representatives = [o.representative(unit_vector(o.dim, a)) for a in range(o.dim)]
    return CommandResult(EXIT_OK, {
        'algebra': g.name,
        'der_dim': o.derivations.dim,
        'inn_dim': o.derivations.inn.dim,
        'out': {
            'dim': o.dim,
            'representatives': ReportService.matrices(representatives),
            'structure': _structure_payload(o.algebra),
            'twist': matrix_to_payload(o.twist),
        },
    })


def cmd_center(args, processor: FileProcessor) -> CommandResult:
    g = _valid_algebra(processor, args.file)
    return CommandResult(EXIT_OK, {'algebra': g.name, 'center': ReportService.subspace(center(g))})


def cmd_cohomology(args, processor: FileProcessor) -> CommandResult:
    g = _valid_algebra(processor, args.algebra)
    r = processor.load_representation(args.rep, g)
    verdict = validate_rep(r)
    if not verdict.ok:
        raise InvalidAlgebraError(f"representação inválida: {verdict.witness.describe()}", verdict.violations)
    group = cohomology(r, args.degree)
    return CommandResult(EXIT_OK, {
        'algebra': g.name,
        'degree': args.degree,
        'v_dim': r.v_dim,
        'dims': {
            'cochains': group.dim_cochains,
            'cocycles': group.dim_z,
            'coboundaries': group.dim_b,
            'cohomology': group.dim_h,
        },
        'representatives': [cochain_to_payload(f) for f in group.representatives()],
    })


def _load_rbar(args, processor: FileProcessor):
    g = _valid_algebra(processor, args.algebra)
    h = _valid_algebra(processor, args.ideal)
    out = out_algebra(derivation_algebra(h))
    rbar = processor.load_rbar(args.rbar, g, out)
    verdict = rbar.check()
    if not verdict.ok:
        raise PreconditionError(f"rho-barra não é morfismo em Out: {verdict.witness.describe()}",
                                verdict.violations)
    return g, rbar


def cmd_obstruction(args, processor: FileProcessor) -> CommandResult:
    g, rbar = _load_rbar(args, processor)
    rng = random.Random(args.seed) if args.seed is not None else None
    result = obstruction(rbar, g, rng)
    payload = {
        'algebra': g.name,
        'ideal': rbar.h.name,
        'center_dim': result.center.dim,
        'extensible': result.class_is_zero,
        'class_coordinates': vector_to_payload(result.class_coordinates),
        'three_cocycle': cochain_to_payload(result.three_cocycle),
    }
    if result.class_is_zero:
        payload['sigma'] = cochain_to_payload(result.witness_sigma)
        payload['repaired'] = extension_to_payload(result.repaired)
    return CommandResult(EXIT_OK if result.class_is_zero else EXIT_NEGATIVE, payload)


def _write_payload(directory: str, name: str, payload: Dict) -> str:
    os.makedirs(directory, exist_ok=True)
    target = os.path.join(directory, name)
    with open(target, 'w', encoding='utf-8') as handle:
        handle.write(ReportService.serialize(payload))
    return name


def cmd_classify(args, processor: FileProcessor) -> CommandResult:
    g, rbar = _load_rbar(args, processor)
    c = classify(rbar, g)
    representatives = [c.datum_for_class(unit_vector(c.dim, a)) for a in range(c.dim)]
    payload = {
        'algebra': g.name,
        'ideal': rbar.h.name,
        'h2_dim': c.dim,
        'h2_basis': [cochain_to_payload(f) for f in c.h2.representatives()],
        'base': extension_to_payload(c.base),
        'classes': [extension_to_payload(d) for d in representatives],
    }
    if args.out:
        written = [_write_payload(args.out, 'base.json', payload['base'])]
        for a, d in enumerate(payload['classes']):
            written.append(_write_payload(args.out, f"class_{a + 1}.json", d))
        payload['written'] = written
    return CommandResult(EXIT_OK, payload)


def _valid_extension(processor: FileProcessor, path: str):
    data = processor.load_extension(path)
    for algebra in (data.g, data.h):
        verdict = validate(algebra)
        if not verdict.ok:
            raise InvalidAlgebraError(f"{algebra.name} não é Hom-Lie regular: {verdict.witness.describe()}",
                                      verdict.violations)
    return data


def cmd_iso(args, processor: FileProcessor) -> CommandResult:
    d1 = _valid_extension(processor, args.first)
    d2 = _valid_extension(processor, args.second)
    for path, d in ((args.first, d1), (args.second, d2)):
        verdict = validate_extension_data(d)
        if not verdict.ok:
            raise InvalidAlgebraError(f"{path}: dado de extensão inválido: {verdict.witness.describe()}",
                                      verdict.violations)
    xi = isomorphic(d1, d2)
    payload = {'isomorphic': xi is not None}
    if xi is not None:
        payload['xi'] = matrix_to_payload(xi)
    return CommandResult(EXIT_OK if xi is not None else EXIT_NEGATIVE, payload)


def cmd_extract(args, processor: FileProcessor) -> CommandResult:
    raw = processor.load_raw_extension(args.file)
    data = extract_data(raw)
    return CommandResult(EXIT_OK, {'extension': extension_to_payload(data)})


def cmd_build(args, processor: FileProcessor) -> CommandResult:
    data = _valid_extension(processor, args.file)
    verdict = validate_extension_data(data)
    if not verdict.ok:
        return CommandResult(EXIT_NEGATIVE, {'valid': False, 'verdict': ReportService.verdict(verdict)})
    ext = build_extension(data)
    return CommandResult(EXIT_OK, {
        'valid': True,
        'verdict': ReportService.verdict(verdict),
        'total': algebra_to_payload(ext.total),
        'iota': matrix_to_payload(ext.iota),
        'p': matrix_to_payload(ext.projection),
    })


def cmd_selfcheck(args, processor: FileProcessor) -> CommandResult:
    seed = args.seed if args.seed is not None else Config.DEFAULT_SEED
    outcomes = run_selfcheck(seed)
    ok = all(o.ok for o in outcomes)
    return CommandResult(EXIT_OK if ok else EXIT_NEGATIVE, {
        'seed': seed,
        'ok': ok,
        'checks': [{'name': o.name, 'runs': o.runs, 'failures': o.failures} for o in outcomes],
    })


COMMANDS: Dict[str, Callable[..., CommandResult]] = {
    'validate': cmd_validate,
    'der': cmd_der,
    'out': cmd_out,
    'center': cmd_center,
    'cohomology': cmd_cohomology,
    'obstruction': cmd_obstruction,
    'classify': cmd_classify,
    'iso': cmd_iso,
    'extract': cmd_extract,
    'build': cmd_build,
    'selfcheck': cmd_selfcheck,
}


# ----------------------------------------------------------------------
# Saída humana
# ----------------------------------------------------------------------

def render(console: Logger, command: str, outcome: CommandResult):
    result = outcome.result
    console.header(f"homlie {command}")

    if command == 'validate':
        console.metric("Álgebra", result['algebra'])
        console.metric("Dimensão", result['dim'])
        if result['valid']:
            console.success("axiomas de álgebra Hom-Lie regular verificados")
        else:
            console.failure("axiomas violados")
            console.witnesses(v['label'] for v in result['verdict']['violations'])
    elif command == 'der':
        console.metric("dim Der", result['der']['dim'])
        console.metric("dim Inn", result['inn']['dim'])
        console.section("BASE DE Der (RREF)")
        for a, m in enumerate(result['der']['matrices']):
            console.info(f"D{a + 1}")
            console.table(m)
    elif command == 'out':
        console.metric("dim Der", result['der_dim'])
        console.metric("dim Inn", result['inn_dim'])
        console.metric("dim Out", result['out']['dim'])
        if result['out']['structure']:
            console.section("COLCHETES EM Out")
            for key, v in result['out']['structure'].items():
                console.info(f"{key} = ({', '.join(v)})")
    elif command == 'center':
        console.metric("dim Cen", result['center']['dim'])
        if result['center']['basis']:
            console.table(result['center']['basis'])
    elif command == 'cohomology':
        dims = result['dims']
        k = result['degree']
        console.metric(f"dim C^{k}", dims['cochains'])
        console.metric(f"dim Z^{k}", dims['cocycles'])
        console.metric(f"dim B^{k}", dims['coboundaries'])
        console.metric(f"dim H^{k}", dims['cohomology'])
    elif command == 'obstruction':
        console.metric("dim Cen(h)", result['center_dim'])
        if result['extensible']:
            console.success("classe de obstrução nula: rho-barra é extensível")
        else:
            console.alert_box(f"classe não nula, coordenadas ({', '.join(result['class_coordinates'])})")
    elif command == 'classify':
        console.metric("dim H^2", result['h2_dim'])
        for name in result.get('written', []):
            console.info(f"escrito {name}")
    elif command == 'iso':
        if result['isomorphic']:
            console.success("extensões isomorfas")
            console.table(result['xi'])
        else:
            console.failure("extensões não isomorfas")
    elif command == 'extract':
        console.success("dado de extensão extraído com seção diagonal")
    elif command == 'build':
        if result['valid']:
            console.success("(p1)-(p5) verificadas; álgebra total construída")
            console.metric("dim total", result['total']['dim'])
        else:
            console.failure("dado de extensão inválido")
            console.witnesses(v['label'] for v in result['verdict']['violations'])
    elif command == 'selfcheck':
        console.metric("Semente", result['seed'])
        for check in result['checks']:
            console.metric(check['name'], check['runs'], alert=bool(check['failures']))
            console.witnesses(check['failures'][:5])


def render_error(console: Logger, error: Exception):
    if isinstance(error, InvariantViolation):
        console.failure(f"erro interno: {error}")
    elif isinstance(error, HypothesisError):
        console.alert_box(str(error), level="HIPÓTESE")
    elif isinstance(error, NotExtensibleError):
        console.alert_box(f"{error} ({', '.join(str(c) for c in error.class_coordinates)})")
    else:
        console.failure(str(error))
    witnesses = getattr(error, 'report', None) or []
    console.witnesses(v.describe() for v in witnesses if hasattr(v, 'describe'))


def error_payload(error: Exception) -> Dict[str, Any]:
    message = f"erro interno: {error}" if isinstance(error, InvariantViolation) else str(error)
    payload = {'type': type(error).__name__, 'message': message}
    if isinstance(error, HypothesisError):
        payload['sequence'] = error.sequence
    if isinstance(error, NotExtensibleError):
        payload['class_coordinates'] = vector_to_payload(error.class_coordinates)
    report = getattr(error, 'report', None)
    if report:
        payload['witnesses'] = [v.describe() for v in report if hasattr(v, 'describe')]
    for attribute in ('line', 'column'):
        if getattr(error, attribute, None) is not None:
            payload[attribute] = getattr(error, attribute)
    return payload


# ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='homlie',
        description='Álgebras Hom-Lie regulares sobre Q: axiomas, derivações, cohomologia e extensões'
    )
    parser.add_argument('--json', action='store_true', help='Relatório JSON determinístico em stdout')
    parser.add_argument('--verbose', action='store_true', help='Logs em nível DEBUG (stderr)')
    parser.add_argument('--fixtures', action='store_true', help='Lista as fixtures embutidas')

    sub = parser.add_subparsers(dest='command')

    for name, helptext in (('validate', 'Verifica os axiomas'), ('der', 'Der e Inn'),
                           ('out', 'Álgebra Out = Der/Inn'), ('center', 'Centro')):
        p = sub.add_parser(name, help=helptext)
        p.add_argument('file', help='Arquivo de álgebra ou fixture:<nome>')

    p = sub.add_parser('cohomology', help='Dimensões de C^k, Z^k, B^k, H^k')
    p.add_argument('algebra')
    p.add_argument('rep', help='Arquivo de representação')
    p.add_argument('--degree', type=int, required=True)

    for name, helptext in (('obstruction', 'Classe de obstrução em H^3'),
                           ('classify', 'Extensões por H^2')):
        p = sub.add_parser(name, help=helptext)
        p.add_argument('algebra', help='g')
        p.add_argument('ideal', help='h')
        p.add_argument('rbar', help='Arquivo rho-barra ("images" em coordenadas de Out(h) ou "derivations" de h)')
        if name == 'obstruction':
            p.add_argument('--seed', type=int, default=None,
                           help='Sorteia seção e omega alternativos (a classe não muda)')
        else:
            p.add_argument('--out', default=None, help='Diretório para os arquivos de extensão')

    p = sub.add_parser('iso', help='Isomorfismo de dados de extensão')
    p.add_argument('first')
    p.add_argument('second')

    p = sub.add_parser('extract', help='Dado (rho, omega) de uma extensão crua')
    p.add_argument('file')

    p = sub.add_parser('build', help='Álgebra total de um dado de extensão')
    p.add_argument('file')

    p = sub.add_parser('selfcheck', help='Verificações aleatorizadas com semente')
    p.add_argument('--seed', type=int, default=None)

    return parser


def configure_logging(verbose: bool):
    level = logging.DEBUG if verbose else getattr(logging, Config.LOG_LEVEL, logging.WARNING)
    logging.basicConfig(level=level, stream=sys.stderr, format='%(levelname)s %(name)s: %(message)s')


def _echo(args) -> Dict[str, Any]:
    hidden = {'json', 'verbose', 'fixtures', 'command'}
    echoed = {}
    for key, value in sorted(vars(args).items()):
        if key in hidden:
            continue
        if isinstance(value, str) and os.path.isabs(value):
            value = os.path.basename(value)
        echoed[key] = value
    return {'name': args.command, 'args': echoed}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.verbose)
    console = Logger(Config.COLOR)

    try:
        Config.validate()
    except ConfigurationError as e:
        Logger('never', sys.stderr).failure(str(e))
        return EXIT_INPUT

    if args.fixtures:
        if args.json:
            sys.stdout.write(ReportService.serialize({'schema': Config.REPORT_SCHEMA, 'fixtures': catalog()}))
        else:
            console.section("FIXTURES EMBUTIDAS")
            for name in catalog():
                console.info(name)
        return EXIT_OK
    if not args.command:
        parser.print_help(sys.stderr)
        return EXIT_INPUT

    processor = FileProcessor()
    try:
        outcome = COMMANDS[args.command](args, processor)
    except HomLieError as e:
        code = exit_code_for(e)
        logger.debug("%s terminou com %s", args.command, type(e).__name__)
        if args.json:
            report = ReportService.create_report(_echo(args), processor.inputs,
                                                 {'status': 'error', 'exit_code': code, 'error': error_payload(e)})
            sys.stdout.write(ReportService.serialize(report))
        else:
            render_error(Logger(Config.COLOR, sys.stderr), e)
        return code

    if args.json:
        result = dict(outcome.result, status='ok' if outcome.exit_code == EXIT_OK else 'negative',
                      exit_code=outcome.exit_code)
        report = ReportService.create_report(_echo(args), processor.inputs, result)
        sys.stdout.write(ReportService.serialize(report))
    else:
        render(console, args.command, outcome)
    return outcome.exit_code


if __name__ == "__main__":
    sys.exit(main())
