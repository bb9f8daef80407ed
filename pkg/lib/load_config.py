import os
from typing import Any, Dict, List

from dotenv import load_dotenv

DEFAULTS = {
    'WHARF_TOL': '1e-9',
    'WHARF_FUSION_TOL': '1e-6',
    'WHARF_DENSE_CAP': str(2 ** 24),
    'WHARF_SVD_THRESHOLD': '1e-8',
    'WHARF_INTEGER_TOL': '1e-6',
    'WHARF_LENGTHS': '1,2,3',
    'WHARF_MAX_ORDER': '8',
    'WHARF_WORKERS': '1',
    'WHARF_LOG_FILE': 'logs/wharf.log',
    'WHARF_LOG_LEVEL': 'INFO',
    'WHARF_LOG_FORMAT': '[%(asctime)s] %(levelname)s: %(message)s',
    'WHARF_JSON': 'false',
}


def parse_lengths(text: str) -> List[int]:
    """Zamienia listę długości ``"1,2,3"`` na listę liczb całkowitych dodatnich.

    Raises:
        ValueError: Gdy któraś pozycja nie jest dodatnią liczbą całkowitą.
    """
    lengths = [int(part) for part in text.split(',') if part.strip()]
    if not lengths or any(length < 1 for length in lengths):
        raise ValueError(f'Nieprawidłowa lista długości: {text!r}')
    return lengths


def load_env() -> Dict[str, Any]:
    """Ładuje konfigurację z pliku ``.env`` i zmiennych środowiskowych ``WHARF_*``.

    Returns:
        dict: Słownik z tolerancjami, limitem gęstych macierzy, listą długości
            łańcucha oraz ustawieniami logowania.

    Raises:
        ValueError: Gdy którakolwiek zmienna ma wartość, której nie da się
            zinterpretować.
    """

    load_dotenv()

    raw = {key: os.getenv(key, default) for key, default in DEFAULTS.items()}
    config: Dict[str, Any] = {}
    invalid = []

    converters = {
        'TOL': float,
        'FUSION_TOL': float,
        'DENSE_CAP': int,
        'SVD_THRESHOLD': float,
        'INTEGER_TOL': float,
        'LENGTHS': parse_lengths,
        'MAX_ORDER': int,
        'WORKERS': int,
    }
    for key, convert in converters.items():
        try:
            config[key] = convert(raw['WHARF_' + key])
        except ValueError:
            invalid.append('WHARF_' + key)

    config['LOG_FILE'] = raw['WHARF_LOG_FILE']
    config['LOG_LEVEL'] = raw['WHARF_LOG_LEVEL'].upper()
    config['LOG_FORMAT'] = raw['WHARF_LOG_FORMAT']
    config['JSON_OUTPUT'] = raw['WHARF_JSON'].lower() == 'true'

    for key in ('TOL', 'FUSION_TOL', 'SVD_THRESHOLD', 'INTEGER_TOL'):
        if key in config and config[key] <= 0:
            invalid.append('WHARF_' + key)
    if config.get('DENSE_CAP', 1) < 1 or config.get('WORKERS', 1) < 1:
        invalid.append('WHARF_DENSE_CAP/WHARF_WORKERS')

    if invalid:
        raise ValueError(
            'Nieprawidłowa wartość zmiennej środowiskowej: ' + ', '.join(invalid)
        )

    return config
