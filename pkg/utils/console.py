"""
Painel de saída humana do CLI (cores ANSI, cabeçalhos, métricas e tabelas)
"""
import os
import sys
from typing import Iterable, Optional, Sequence, TextIO

import pandas as pd

from utils.rational import format_rational

# Habilita cores ANSI no Windows
if sys.platform == "win32":
    os.system("")


class Logger:
    """Saída formatada para o terminal"""
    RESET = '\033[0m'
    BOLD = '\033[1m'
    DIM = '\033[2m'
    RED = '\033[91m'
    GREEN = '\033[92m'
    YELLOW = '\033[93m'
    CYAN = '\033[96m'
    WHITE = '\033[97m'
    GREY = '\033[90m'
    BG_RED = '\033[101m'
    BG_YELLOW = '\033[103m'
    BG_GREEN = '\033[102m'

    WIDTH = 80

    def __init__(self, color: str = 'auto', stream: Optional[TextIO] = None):
        self.stream = stream if stream is not None else sys.stdout
        if color == 'always':
            self.enabled = True
        elif color == 'never':
            self.enabled = False
        else:
            self.enabled = hasattr(self.stream, 'isatty') and self.stream.isatty()

    def _c(self, *codes: str) -> str:
        return ''.join(codes) if self.enabled else ''

    def _print(self, text: str = ''):
        print(text, file=self.stream)

    def header(self, message: str):
        self._print(f"\n{'=' * self.WIDTH}")
        self._print(f"{self._c(self.BOLD, self.CYAN)}  {message}{self._c(self.RESET)}")
        self._print(f"{'=' * self.WIDTH}\n")

    def section(self, title: str):
        self._print(f"\n{self._c(self.BOLD, self.WHITE)}{title}{self._c(self.RESET)}")
        self._print(f"{self._c(self.DIM)}{'─' * self.WIDTH}{self._c(self.RESET)}")

    def metric(self, label: str, value, alert: bool = False):
        if alert:
            symbol = f"{self._c(self.RED)}▲{self._c(self.RESET)}"
            value_colored = f"{self._c(self.RED, self.BOLD)}{value}{self._c(self.RESET)}"
        else:
            symbol = " "
            value_colored = f"{self._c(self.GREEN)}{value}{self._c(self.RESET)}"
        self._print(f"  {symbol} {label:<38} {value_colored:>20}")

    def info(self, message: str, indent: int = 2):
        self._print(f"{' ' * indent}{self._c(self.GREY)}{message}{self._c(self.RESET)}")

    def success(self, message: str):
        self._print(f"  {self._c(self.GREEN)}✓{self._c(self.RESET)} {message}")

    def warning(self, message: str):
        self._print(f"  {self._c(self.YELLOW)}⚠{self._c(self.RESET)} {self._c(self.BOLD)}{message}{self._c(self.RESET)}")

    def failure(self, message: str):
        self._print(f"  {self._c(self.RED)}✗{self._c(self.RESET)} {message}")

    def witnesses(self, items: Iterable[str]):
        for item in items:
            self._print(f"    {self._c(self.GREY)}└─ {item}{self._c(self.RESET)}")

    def alert_box(self, message: str, level: str = "NEGATIVO"):
        if level == "NEGATIVO":
            color, bg = self.RED, self.BG_RED
        elif level == "HIPÓTESE":
            color, bg = self.YELLOW, self.BG_YELLOW
        else:
            color, bg = self.GREEN, self.BG_GREEN
        self._print(f"\n{'=' * self.WIDTH}")
        self._print(f"{self._c(bg, self.WHITE, self.BOLD)}  ⚠  {level}  {self._c(self.RESET)}")
        self._print(f"{self._c(color)}  {message}{self._c(self.RESET)}")
        self._print(f"{'=' * self.WIDTH}\n")

    def table(self, rows: Sequence[Sequence], columns: Optional[Sequence[str]] = None,
              index: Optional[Sequence[str]] = None, indent: int = 4):
        """Tabela de racionais renderizada via pandas"""
        if not rows:
            self.info("(vazio)", indent=indent)
            return
        cells = [[format_rational(v) for v in row] for row in rows]
        if columns is None:
            columns = [f"e{j + 1}" for j in range(len(cells[0]))]
        if index is None:
            index = [str(i + 1) for i in range(len(cells))]
        frame = pd.DataFrame(cells, columns=list(columns), index=list(index))
        for line in frame.to_string().splitlines():
            self._print(f"{' ' * indent}{line}")
