"""
Leitura e escrita de racionais no formato dos arquivos ("3", "-1/2")
"""
import re
from fractions import Fraction
from typing import Any

from utils.exceptions import ParseError

RATIONAL_PATTERN = re.compile(r'^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$')


def parse_rational(text: Any) -> Fraction:
    """
    Converte um inteiro JSON ou uma string "p" / "p/q" em Fraction.

    Floats são recusados: o pipeline inteiro é exato.

    Raises:
        ParseError: formato inválido ou denominador zero
    """
    if isinstance(text, bool):
        raise ParseError(f"valor booleano não é racional: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, Fraction):
        return text
    if not isinstance(text, str):
        raise ParseError(f"racional deve ser inteiro ou string 'p/q', recebido {type(text).__name__}: {text!r}")
    match = RATIONAL_PATTERN.match(text)
    if not match:
        raise ParseError(f"racional malformado: {text!r}")
    numerator = int(match.group(1))
    denominator = int(match.group(2)) if match.group(2) is not None else 1
    if denominator == 0:
        raise ParseError(f"denominador zero em {text!r}")
    return Fraction(numerator, denominator)


def format_rational(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"
