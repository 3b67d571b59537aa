"""
Configurações centralizadas da ferramenta
"""
import os
from dotenv import load_dotenv

load_dotenv()


def _int_env(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == '':
        return default
    try:
        return int(raw)
    except ValueError:
        from utils.exceptions import ConfigurationError
        raise ConfigurationError(f"{name} deve ser inteiro, recebido '{raw}'")


class Config:
    """Configurações base da ferramenta"""

    # Logging
    LOG_LEVEL = os.getenv('HOMLIE_LOG_LEVEL', 'WARNING').upper()

    # Console: always | never | auto (somente em terminal)
    COLOR = os.getenv('HOMLIE_COLOR', 'auto').lower()
    COLOR_MODES = {'auto', 'always', 'never'}

    # Comandos aleatorizados (selfcheck, escolhas alternativas)
    DEFAULT_SEED = _int_env('HOMLIE_DEFAULT_SEED', 0)
    MAX_RANDOM_NUM = _int_env('HOMLIE_MAX_RANDOM_NUM', 5)
    MAX_RANDOM_DEN = _int_env('HOMLIE_MAX_RANDOM_DEN', 3)

    # Arquivos de entrada
    ALLOWED_EXTENSIONS = {'json'}
    MAX_FILE_SIZE = _int_env('HOMLIE_MAX_FILE_SIZE', 5 * 1024 * 1024)  # 5MB

    # Relatórios
    REPORT_SCHEMA = 'homlie/1'

    @staticmethod
    def validate():
        """Valida configurações críticas"""
        from utils.exceptions import ConfigurationError

        if Config.LOG_LEVEL not in {'DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL'}:
            raise ConfigurationError(f"HOMLIE_LOG_LEVEL inválido: '{Config.LOG_LEVEL}'")
        if Config.COLOR not in Config.COLOR_MODES:
            raise ConfigurationError(
                f"HOMLIE_COLOR inválido: '{Config.COLOR}'. "
                f"Permitidos: {', '.join(sorted(Config.COLOR_MODES))}"
            )
        if Config.MAX_FILE_SIZE <= 0:
            raise ConfigurationError("HOMLIE_MAX_FILE_SIZE deve ser positivo")
        if Config.MAX_RANDOM_NUM < 0:
            raise ConfigurationError("HOMLIE_MAX_RANDOM_NUM não pode ser negativo")
        if Config.MAX_RANDOM_DEN < 1:
            raise ConfigurationError("HOMLIE_MAX_RANDOM_DEN deve ser ao menos 1")
        return True
