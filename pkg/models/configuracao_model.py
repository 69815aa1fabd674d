from datetime import date
from enum import Enum
from typing import Dict, FrozenSet, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from models.sensor_model import WINDOW_SECONDS

# base_rate em eventos por sensor-hora vira probabilidade por janela
WINDOWS_PER_HOUR: int = 3600 // WINDOW_SECONDS


class OccupancyAction(str, Enum):
    ENTER_VISITOR = "enter_visitor"
    LEAVE_VISITOR = "leave_visitor"
    RESIDENT_OUT = "resident_out"
    RESIDENT_HOME = "resident_home"


DEFAULT_KEY_MAP: Dict[int, OccupancyAction] = {
    1: OccupancyAction.ENTER_VISITOR,
    2: OccupancyAction.LEAVE_VISITOR,
    3: OccupancyAction.RESIDENT_OUT,
    4: OccupancyAction.RESIDENT_HOME,
}


class ExclusionConfig(BaseModel):
    """
    Regras de exclusão aplicadas antes da análise
    """
    model_config = ConfigDict(frozen=True)

    exclude_zero_event_days: bool = True
    min_participant_coverage: float = Field(0.0, ge=0.0, le=1.0)
    required_sensor_rooms: Optional[FrozenSet[str]] = None
    drop_multi_occupancy_intervals: bool = False
    occupancy_keys: Dict[int, OccupancyAction] = Field(
        default_factory=lambda: dict(DEFAULT_KEY_MAP))

    @model_validator(mode="after")
    def _teclas(self) -> "ExclusionConfig":
        invalidas = [k for k in self.occupancy_keys if not 1 <= k <= 4]
        if invalidas:
            raise ValueError(f"teclas fora de 1-4: {invalidas}")
        return self


class SimConfig(BaseModel):
    """
    Parâmetros do gerador sintético de apartamentos e avaliações
    """
    model_config = ConfigDict(frozen=True)

    seed: int = Field(0, ge=0, lt=2 ** 64)
    n_sensors: int = Field(5, ge=1)
    study_days: int = Field(300, ge=60)
    base_rate: float = Field(45.0, ge=0.0, le=WINDOWS_PER_HOUR,
                             description="Eventos esperados por sensor-hora")
    trend: float = Field(0.0, description="Variação relativa da taxa a cada 30 dias")
    assessment_interval_days: int = Field(31, ge=1)
    score_noise: int = Field(0, ge=0)
    coupling: float = Field(1.0, description="Inclinação do elo intensidade -> escore")
    n_flats: int = Field(1, ge=1)
    visitor_rate: float = Field(0.0, ge=0.0, le=10.0,
                                description="Visitas esperadas por dia (teclas 1 e 2)")
    start_date: date = date(2014, 7, 7)
    timezone_offset: int = 0

    @property
    def base_probability(self) -> float:
        return self.base_rate / WINDOWS_PER_HOUR
