"""
Exceções customizadas da aplicação

Cada família corresponde a um código de saída do CLI:
entrada/parse -> 2, resultado matemático negativo ou pré-condição -> 1,
hipótese de diagonalidade não satisfeita sobre Q -> 3.
"""
from typing import Any, Optional, Sequence


class HomLieError(Exception):
    """Erro base do toolkit"""
    pass


class InputError(HomLieError):
    """Entrada com forma/dimensão incompatível ou twist singular"""
    pass


class ParseError(InputError):
    """Erro ao interpretar um arquivo de entrada"""

    def __init__(self, message: str, path: Optional[str] = None,
                 line: Optional[int] = None, column: Optional[int] = None):
        self.path = path
        self.line = line
        self.column = column
        location = ""
        if path:
            location = path
            if line is not None:
                location += f":{line}"
                if column is not None:
                    location += f":{column}"
            location += ": "
        super().__init__(f"{location}{message}")


class FileValidationError(InputError):
    """Erro de validação de arquivo"""
    pass


class ConfigurationError(HomLieError):
    """Erro de configuração"""
    pass


class PreconditionError(HomLieError):
    """Operação chamada com dados que violam sua pré-condição"""

    def __init__(self, message: str, report: Optional[Sequence[Any]] = None):
        self.report = list(report) if report else []
        super().__init__(message)


class InvalidAlgebraError(PreconditionError):
    """Álgebra (ou representação, ou dado de extensão) que não passa na validação"""
    pass


class NotExtensibleError(PreconditionError):
    """Classe de obstrução não nula: o morfismo não é extensível"""

    def __init__(self, message: str, class_coordinates: Sequence[Any] = ()):
        self.class_coordinates = list(class_coordinates)
        super().__init__(message)


class HypothesisError(HomLieError):
    """Uma sequência exata que deveria ser diagonal não admite complemento invariante sobre Q"""

    SEQUENCES = {
        'der_out': 'Inn(h) -> Der(h) -> Out(h)',
        'center_inn': 'Cen(h) -> h -> Inn(h)',
        'extension': 'h -> ĝ -> g',
    }

    def __init__(self, sequence: str, message: Optional[str] = None):
        self.sequence = sequence
        label = self.SEQUENCES.get(sequence, sequence)
        super().__init__(message or f"sequência {label} não é diagonal sobre Q")


class InvariantViolation(HomLieError):
    """Verificação interna falhou (indica bug, não erro do usuário)"""
    pass
