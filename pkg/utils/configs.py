from datetime import date
from typing import Tuple

from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """
    Configurações gerais da aplicação
    """
    DIR_BASE: str = "dados/"
    FIXTURE_ASSESSMENTS: str = "assessment_scores.csv"
    # Os meses das tabelas viram datas: início + (mês - 1) * 28 dias
    FIXTURE_START_DATE: date = date(2014, 7, 7)
    FIXTURE_VISIT_SPACING_DAYS: int = 28

    MOBILITYCORR_LOG: str = "WARNING"
    """
        Nível de log (DEBUG, INFO, WARNING, ERROR).
        Lido da variável de ambiente de mesmo nome:

        MOBILITYCORR_LOG=INFO python main.py analyze ...
    """
    LOG_DIR: str = "logs"

    MAX_WORKERS: int = 3

    SIGNIFICANCE_LEVEL: float = 0.001
    # Limiares de Cohen: pequeno, moderado, grande
    EFFECT_THRESHOLDS: Tuple[float, float, float] = (0.1, 0.3, 0.5)
    PERMUTATION_SAMPLES: int = 10_000

    class Config:
        case_sensitive = True


settings: Settings = Settings()
