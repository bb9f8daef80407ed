"""Wyjątki domenowe pakietu.

Wszystkie dziedziczą po ``ValueError``, dzięki czemu istniejące bloki
``except ValueError`` w skryptach nadal je przechwytują.
"""

from typing import Any, Optional


class WharfError(ValueError):
    """Bazowy błąd domenowy."""


class ShapeError(WharfError):
    """Niezgodne wymiary macierzy lub tensorów."""


class SizeError(WharfError):
    """Przekroczony limit rozmiaru gęstej reprezentacji."""


class InputError(WharfError):
    """Niepoprawne dane wejściowe (np. brak danych wymiarów)."""


class UnsupportedInputError(WharfError):
    """Dane poprawne, ale poza obsługiwanym zakresem (np. krotności fuzji > 1)."""


class FormatError(WharfError):
    """Błąd parsowania pliku wejściowego."""

    def __init__(self, message: str, diagnostics: Optional[str] = None):
        super().__init__(message)
        self.diagnostics = diagnostics


class NumericalError(WharfError):
    """Procedura numeryczna nie osiągnęła wymaganej dokładności."""

    def __init__(self, message: str, residual: float):
        super().__init__(f'{message} (residuum={residual:.3e})')
        self.residual = residual


class DecompositionError(NumericalError):
    """Rozkład na nieprzywiedlne nie odtwarza reprezentacji."""


class CompilationError(WharfError):
    """Kompilacja kategorii do tablicy algebry nie powiodła się."""

    def __init__(self, message: str, diagram: Any = None):
        suffix = f' (diagram: {diagram})' if diagram is not None else ''
        super().__init__(message + suffix)
        self.diagram = diagram


class OrderExceededError(WharfError):
    """Żadna rekurencja liniowa rzędu ≤ max_order nie opisuje ciągu."""

    def __init__(self, max_order: int, residual: float):
        super().__init__(f'Brak rekurencji rzędu ≤ {max_order} (najmniejsze residuum={residual:.3e})')
        self.max_order = max_order
        self.residual = residual
