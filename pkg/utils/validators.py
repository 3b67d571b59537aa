"""
Checagens de entrada antes do parse: o arquivo existe, é JSON, cabe no
limite configurado e o objeto decodificado tem as chaves do seu kind
"""
import os
from typing import Any, Iterable, Set

from utils.exceptions import FileValidationError, ParseError


def check_input_file(path: str, allowed_extensions: Set[str], max_size: int) -> int:
    """
    Confere um arquivo de álgebra/representação/extensão antes da leitura

    Returns:
        Tamanho em bytes

    Raises:
        FileValidationError: arquivo ausente, extensão fora de allowed_extensions
            ou maior que max_size (HOMLIE_MAX_FILE_SIZE)
    """
    name = os.path.basename(path)
    if not os.path.isfile(path):
        hint = "; fixtures embutidas usam 'fixture:<nome>'" if not os.path.splitext(name)[1] else ""
        raise FileValidationError(f"entrada não encontrada: {path}{hint}")

    extension = os.path.splitext(name)[1].lstrip('.').lower()
    if extension not in allowed_extensions:
        raise FileValidationError(
            f"{name}: entradas devem ser {'/'.join(sorted(allowed_extensions))}, "
            f"recebido '{extension or 'sem extensão'}'"
        )

    size = os.path.getsize(path)
    if size > max_size:
        raise FileValidationError(f"{name}: {size} bytes excede HOMLIE_MAX_FILE_SIZE={max_size}")
    return size


def validate_json_structure(payload: Any, required_keys: Iterable[str],
                            path: str = None) -> bool:
    """
    Valida estrutura básica de um objeto JSON

    Raises:
        ParseError: Se não for objeto ou faltar alguma chave
    """
    if not isinstance(payload, dict):
        raise ParseError("esperado um objeto JSON", path=path)

    missing = [key for key in required_keys if key not in payload]
    if missing:
        raise ParseError(f"chaves ausentes: {', '.join(missing)}", path=path)

    return True
