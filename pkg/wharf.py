#!/usr/bin/env python3
import argparse
import logging
import sys
from pathlib import Path
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable, Dict, List, Optional, Sequence

from lib import anomaly, cat_compiler, fib_data, formats, mpo_engine, rfp_lab
from lib.errors import (
    CompilationError,
    FormatError,
    InputError,
    NumericalError,
    OrderExceededError,
    ShapeError,
    SizeError,
    UnsupportedInputError,
)
from lib.load_config import load_env, parse_lengths
from lib.log_utils import log_error_and_print, setup_logger
from lib.report import input_digests, make_report, render_table, report_digest, to_json
from lib.wha_core import central_idempotents, dual, verify_axioms

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2


def _say(args: argparse.Namespace, text: str, end: str = '\n') -> None:
    # w trybie JSON stdout zawiera wyłącznie raport
    print(text, end=end, file=sys.stderr if args.json else sys.stdout, flush=True)


def _emit(report: Dict[str, Any], args: argparse.Namespace) -> int:
    """Wypisuje raport (tabela albo JSON), zapisuje go do pliku i zwraca kod wyjścia."""
    report['digest'] = report_digest(report)
    if args.report:
        target = Path(args.report)
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(to_json(report) + '\n', encoding='utf-8')
    if args.json:
        print(to_json(report))
    else:
        render_table(report)
    return EXIT_OK if report['overall'] else EXIT_FAILED


def _axiom_checks(result: Dict[str, Any], prefix: str = '') -> List[Dict[str, Any]]:
    return [dict(check, name=prefix + check['name']) for check in result['checks']]


def cmd_verify_wha(args: argparse.Namespace, cfg: Dict[str, Any], logger: logging.Logger) -> int:
    tol = args.tol if args.tol is not None else cfg['TOL']
    details: Dict[str, Any] = {}
    if args.algebra:
        alg = formats.read_algebra(args.algebra)
    else:
        alg = fib_data.build_fib_wha(corrected=not args.literal)
        details['suspected_artifacts'] = fib_data.suspected_artifacts()
        details['pairing'] = fib_data.pairing_identities(alg)
    logger.info('verify-wha: algebra wymiaru %d', alg['dim'])

    _say(args, 'Sprawdzanie aksjomatów ', end='')
    checks = _axiom_checks(verify_axioms(alg, tol))
    if args.dual:
        checks += _axiom_checks(verify_axioms(dual(alg), tol), 'dual:')
    if 'pairing' in details:
        checks += [dict(check, name='pairing:' + check['name']) for check in details['pairing']['checks']]
    _say(args, '\033[32mOK\033[0m')

    report = make_report('verify-wha', checks, input_digests({'algebra': args.algebra}), details)
    return _emit(report, args)


def cmd_compile(args: argparse.Namespace, cfg: Dict[str, Any], logger: logging.Logger) -> int:
    tol = args.tol if args.tol is not None else cfg['TOL']
    ring = formats.read_fusion(args.fusion)
    data = formats.read_fsymbols(args.fsymbols, ring)
    inputs = input_digests({'fusion': args.fusion, 'fsymbols': args.fsymbols})

    _say(args, 'Kompilacja kategorii ', end='')
    try:
        result = cat_compiler.compile_and_verify(data, tol, cfg['SVD_THRESHOLD'])
    except UnsupportedInputError as error:
        _say(args, '\033[31mnieobsługiwane\033[0m')
        log_error_and_print(logger, 'Nieobsługiwane dane wejściowe: %s', error)
        return EXIT_FAILED
    except CompilationError as error:
        _say(args, '\033[31mBłąd\033[0m')
        log_error_and_print(logger, 'Kompilacja nie powiodła się: %s', error)
        validation = cat_compiler.validate_category(data, tol)
        report = make_report('compile', _axiom_checks(validation, 'category:'), inputs, {'error': str(error)})
        _emit(report, args)
        return EXIT_FAILED
    _say(args, '\033[32mOK\033[0m')

    algebra = result['algebra']
    checks = _axiom_checks(result['validation'], 'category:') + _axiom_checks(result['axioms']) + [result['counit']]
    ranks = [item['rank'] for item in central_idempotents(algebra, threshold=cfg['SVD_THRESHOLD'])]
    report = make_report('compile', checks, inputs, {'dim': algebra['dim'], 'central_ranks': ranks})
    if args.out:
        formats.write_algebra(algebra, args.out, {'report': {'overall': report['overall'], 'checks': checks}})
        _say(args, f'Zapisano algebrę wymiaru {algebra["dim"]} do {args.out}')
    return _emit(report, args)


def _select_ms(text: str, count: int) -> List[int]:
    if text == 'all':
        return list(range(count))
    chosen = [int(part) for part in text.split(',') if part.strip()]
    if any(m < 0 or m >= count for m in chosen):
        raise InputError(f'Indeks idempotentu poza zakresem 0..{count - 1}: {text}')
    return chosen


def _run_ordered(tasks: Sequence[Callable[[], List[Dict[str, Any]]]], workers: int) -> List[Dict[str, Any]]:
    """Uruchamia niezależne kontrole; kolejność wyników jest kolejnością zadań."""
    if workers <= 1:
        results = [task() for task in tasks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda task: task(), tasks))
    return [check for chunk in results for check in chunk]


def _dense_ok(context: Dict[str, Any], length: int, cap: int) -> bool:
    return context['tensor']['bond_dim'] ** 2 * context['phi']['dim'] ** (2 * length) <= cap


def _fusion_checks(
    context: Dict[str, Any], lengths: List[int], tol: float, fusion_tol: float, cap: int
) -> List[Dict[str, Any]]:
    ring = context['ring']
    operators = mpo_engine.symmetry_operators(context['phi'], context['psi'], lengths[0], tol)
    checks = []
    for a in ring['labels']:
        for b in ring['labels']:
            result = mpo_engine.check_fusion(a, b, ring, lengths, fusion_tol, operators)
            for entry in result['entries']:
                checks.append({'name': 'fusion', 'anchor': 'O_a O_b = Σ_c N_ab^c O_c', 'a': a, 'b': b, 'L': entry['L'],
                               'residual': entry['residual'], 'squared': entry['squared'], 'tolerance': fusion_tol,
                               'pass': entry['pass']})
        result = mpo_engine.check_dagger_dual(a, lengths, fusion_tol, operators, ring, cap)
        for entry in result['entries']:
            checks.append({'name': 'dagger_dual', 'anchor': 'O_ā = O_a†', 'a': a, 'L': entry['L'],
                           'residual': entry['residual'], 'squared': entry['squared'], 'tolerance': fusion_tol,
                           'pass': entry['pass']})
    return checks


def _rfp_checks(context: Dict[str, Any], m: int, length: int, tol: float, cap: int) -> List[Dict[str, Any]]:
    checks = [rfp_lab.check_strong_symmetry(m, a, length, context, tol) for a in context['ring']['labels']]
    checks += rfp_lab.check_projector(m, length, context, tol)
    if _dense_ok(context, length, cap):
        checks += rfp_lab.check_state(m, length, context, tol)
        checks += [rfp_lab.check_weak_symmetry(a, length, context, m, tol) for a in context['ring']['labels']]
        if length >= 2:
            checks += rfp_lab.trace_out_site(m, length, context, tol)['checks']
        checks += rfp_lab.purification_check(m, length, context, tol)['checks']
    return checks


def cmd_rfp(args: argparse.Namespace, cfg: Dict[str, Any], logger: logging.Logger) -> int:
    tol = args.tol if args.tol is not None else cfg['TOL']
    try:
        lengths = parse_lengths(args.L) if args.L else cfg['LENGTHS']
    except ValueError as error:
        raise InputError(str(error)) from error
    cap = args.dense_cap if args.dense_cap is not None else cfg['DENSE_CAP']
    workers = args.workers if args.workers is not None else cfg['WORKERS']
    fusion_tol = args.fusion_tol if args.fusion_tol is not None else cfg['FUSION_TOL']

    _say(args, 'Budowanie kontekstu RFP ', end='')
    if args.algebra:
        context = rfp_lab.make_context(formats.read_algebra(args.algebra), tol=tol, threshold=cfg['SVD_THRESHOLD'])
    else:
        context = rfp_lab.fib_context(tol, cfg['SVD_THRESHOLD'])
    _say(args, '\033[32mOK\033[0m')
    ms = _select_ms(args.m, len(context['irreps_1d']))
    logger.info('rfp: długości %s, idempotenty %s', lengths, ms)

    checks = rfp_lab.transfer_checks(context, tol) + [rfp_lab.check_idempotent_sum(context, tol)]
    tasks: List[Callable[[], List[Dict[str, Any]]]] = [lambda: _fusion_checks(context, lengths, tol, fusion_tol, cap)]
    for m in ms:
        for length in lengths:
            tasks.append(lambda m=m, length=length: _rfp_checks(context, m, length, tol, cap))
    checks += _run_ordered(tasks, workers)

    details = {
        'labels': context['ring']['labels'],
        'dims': context['ring']['dims'],
        'irreps_1d': context['irreps_1d'],
        'omega': context['omega']['coefficients'],
        'normalizations': {str(m): rfp_lab.normalization(context, m) for m in ms},
    }
    if args.dump:
        dense_lengths = [length for length in lengths if _dense_ok(context, length, cap)]
        if not dense_lengths:
            raise SizeError('Żadna z długości nie mieści się w limicie gęstej macierzy')
        rho = rfp_lab.build_rfp(ms[0], max(dense_lengths), context, cap)['dense']
        formats.write_ctf(rho, args.dump)
        details['dump'] = {'path': args.dump, 'm': ms[0], 'L': max(dense_lengths)}

    report = make_report('rfp', checks, input_digests({'algebra': args.algebra}), details)
    return _emit(report, args)


def cmd_anomaly(args: argparse.Namespace, cfg: Dict[str, Any], logger: logging.Logger) -> int:
    integer_tol = args.integer_tol if args.integer_tol is not None else cfg['INTEGER_TOL']
    if args.fusion:
        verdict = anomaly.theorem1_verdict(formats.read_fusion(args.fusion), integer_tol)
        # werdykt anomalii jest w details; kontrola dotyczy poprawności samych wymiarów FP
        check = {'name': 'fp_dimensions', 'anchor': 'd_a d_b = Σ_c N_ab^c d_c', 'residual': verdict['fp_residual'],
                 'tolerance': anomaly.FP_TOL, 'pass': bool(verdict['fp_residual'] <= anomaly.FP_TOL)}
        report = make_report('anomaly', [check], input_digests({'fusion': args.fusion}), verdict)
        return _emit(report, args)

    max_order = args.max_order if args.max_order is not None else cfg['MAX_ORDER']
    values = formats.read_sequence(args.sequence)
    try:
        result = anomaly.analyze_sequence(values, max_order, cfg['TOL'])
    except OrderExceededError as error:
        log_error_and_print(logger, 'Analiza ciągu: %s', error)
        return EXIT_FAILED
    # okres i werdykt są w details; kontrola dotyczy dopasowania rekurencji
    check = {'name': 'recurrence', 'anchor': 'Σ_t C_t F(L+s−t) = 0', 'residual': result['residual'],
             'tolerance': cfg['TOL'], 'pass': bool(result['residual'] <= cfg['TOL'])}
    report = make_report('anomaly', [check], input_digests({'sequence': args.sequence}), result)
    return _emit(report, args)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='wharf', description='Weryfikacja słabych algebr Hopfa, symetrii MPO i punktów stałych MPDO.')
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--json', action='store_true', default=None, help='wynik jako JSON na stdout')
    common.add_argument('--report', help='zapisz raport JSON do pliku')
    common.add_argument('--tol', type=float, help='tolerancja residuów (WHARF_TOL)')
    sub = parser.add_subparsers(dest='command', required=True)

    verify = sub.add_parser('verify-wha', parents=[common], help='sprawdź aksjomaty tablicy algebry')
    verify.add_argument('--algebra', help='plik wha.json (domyślnie wbudowana algebra Fibonacciego)')
    verify.add_argument('--dual', action='store_true', help='sprawdź także algebrę dualną')
    verify.add_argument('--literal', action='store_true', help='tablice Fibonacciego bez poprawek')
    verify.set_defaults(handler=cmd_verify_wha)

    compile_parser = sub.add_parser('compile', parents=[common], help='skompiluj symbole F do tablicy algebry')
    compile_parser.add_argument('--fusion', required=True)
    compile_parser.add_argument('--fsymbols', required=True)
    compile_parser.add_argument('--out')
    compile_parser.set_defaults(handler=cmd_compile)

    rfp = sub.add_parser('rfp', parents=[common], help='symetrie MPO i punkty stałe MPDO')
    rfp.add_argument('--algebra', help='plik wha.json (domyślnie wbudowana algebra Fibonacciego)')
    rfp.add_argument('--L', help='długości łańcucha, np. 1,2,3 (WHARF_LENGTHS)')
    rfp.add_argument('--m', default='all', help='indeksy idempotentów lub "all"')
    rfp.add_argument('--dump', help='zapisz gęste ρ do pliku .ctf')
    rfp.add_argument('--dense-cap', type=int, help='limit elementów gęstych tablic (WHARF_DENSE_CAP)')
    rfp.add_argument('--workers', type=int, help='liczba wątków (WHARF_WORKERS)')
    rfp.add_argument('--fusion-tol', type=float, help='tolerancja względnej normy HS w kontrolach fuzji (WHARF_FUSION_TOL)')
    rfp.set_defaults(handler=cmd_rfp)

    anomaly_parser = sub.add_parser('anomaly', parents=[common], help='kryteria anomalii')
    source = anomaly_parser.add_mutually_exclusive_group(required=True)
    source.add_argument('--fusion')
    source.add_argument('--sequence')
    anomaly_parser.add_argument('--max-order', type=int, help='maksymalny rząd rekurencji (WHARF_MAX_ORDER)')
    anomaly_parser.add_argument('--integer-tol', type=float, help='tolerancja całkowitości (WHARF_INTEGER_TOL)')
    anomaly_parser.set_defaults(handler=cmd_anomaly)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        cfg = load_env()
    except ValueError as error:
        print(f"Błąd konfiguracji środowiska w pliku .env: {error}")
        return EXIT_INPUT

    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as error:
        return EXIT_OK if error.code == 0 else EXIT_INPUT
    if args.json is None:
        args.json = cfg['JSON_OUTPUT']

    level = getattr(logging, cfg['LOG_LEVEL'], logging.INFO)
    logger = setup_logger('wharf', cfg['LOG_FILE'], level, cfg['LOG_FORMAT'])
    setup_logger('lib', cfg['LOG_FILE'], level, cfg['LOG_FORMAT'])

    try:
        return args.handler(args, cfg, logger)
    except FormatError as error:
        log_error_and_print(logger, 'Błąd formatu: %s', error)
        if error.diagnostics:
            print(error.diagnostics)
        return EXIT_INPUT
    except (InputError, ShapeError, SizeError, OSError) as error:
        log_error_and_print(logger, 'Błąd danych wejściowych: %s', error)
        return EXIT_INPUT
    except (NumericalError, UnsupportedInputError, CompilationError) as error:
        log_error_and_print(logger, 'Obliczenia nie powiodły się: %s', error)
        return EXIT_FAILED


if __name__ == '__main__':
    sys.exit(main())
