"""Raporty weryfikacji: składanie, serializacja JSON i tabela w konsoli."""

import json
import math
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional

import numpy as np
from rich.console import Console
from rich.table import Table

from lib.log_utils import digest_bytes, digest_text, now_str

TOOL_VERSION = 'wharf 0.1.0'


def jsonable(value: Any) -> Any:
    """Zamienia wartości numpy i zespolone na typy JSON (zespolone jako ``[re, im]``)."""
    if isinstance(value, dict):
        return {str(key): jsonable(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(item) for item in value]
    if isinstance(value, np.ndarray):
        return jsonable(value.tolist())
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (complex, np.complexfloating)):
        return [jsonable(float(value.real)), jsonable(float(value.imag))]
    if isinstance(value, (float, np.floating)):
        number = float(value)
        return number if math.isfinite(number) else str(number)
    return value


def input_digests(paths: Dict[str, Optional[str]]) -> Dict[str, str]:
    """SHA-256 plików wejściowych (pomija puste pozycje)."""
    return {name: digest_bytes(Path(path).read_bytes()) for name, path in paths.items() if path}


def make_report(command: str, checks: Iterable[Dict[str, Any]], inputs: Optional[Dict[str, str]] = None,
                details: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    """Raport ``{tool_version, command, inputs, checks, overall, details, generated_at}``.

    ``overall`` jest koniunkcją flag ``pass``; pusty zbiór kontroli nie przechodzi.
    """
    checks = list(checks)
    return {
        'tool_version': TOOL_VERSION,
        'command': command,
        'inputs': dict(inputs or {}),
        'checks': checks,
        'overall': bool(checks) and all(check['pass'] for check in checks),
        'details': details or {},
        'generated_at': now_str(),
    }


def to_json(report: Dict[str, Any]) -> str:
    return json.dumps(jsonable(report), sort_keys=True, indent=2, ensure_ascii=False)


def report_digest(report: Dict[str, Any]) -> str:
    """Skrót raportu bez pola ``generated_at``."""
    stripped = {key: value for key, value in report.items() if key != 'generated_at'}
    return digest_text(to_json(stripped))


def _context(check: Dict[str, Any]) -> str:
    keys = [key for key in ('m', 'a', 'b', 'L') if key in check]
    return ' '.join(f'{key}={check[key]}' for key in keys)


def render_table(report: Dict[str, Any], console: Optional[Console] = None) -> None:
    """Tabela kontroli z kolorowym wynikiem i podsumowaniem."""
    console = console or Console()
    table = Table(title=f"{report['command']} ({report['tool_version']})")
    table.add_column('Kontrola')
    table.add_column('Kotwica')
    table.add_column('Kontekst')
    table.add_column('Residuum', justify='right')
    table.add_column('Tolerancja', justify='right')
    table.add_column('Wynik')
    for check in report['checks']:
        status = '[green]OK[/green]' if check['pass'] else '[red]BŁĄD[/red]'
        table.add_row(
            check['name'],
            check.get('anchor', ''),
            _context(check),
            f"{check['residual']:.3e}",
            f"{check['tolerance']:.1e}",
            status,
        )
    console.print(table)
    summary = '[green]wszystkie kontrole zaliczone[/green]' if report['overall'] else '[red]niektóre kontrole nie przeszły[/red]'
    console.print(summary)


def failed_checks(report: Dict[str, Any]) -> List[str]:
    return [check['name'] for check in report['checks'] if not check['pass']]
