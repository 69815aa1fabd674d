from datetime import date, datetime
from enum import Enum
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

# Resfriamento do sensor PIR: no máximo um disparo por janela
WINDOW_SECONDS: int = 8
WINDOWS_PER_DAY: int = 86400 // WINDOW_SECONDS


class SensorKind(str, Enum):
    """Tipos de evento registrados pela estação base."""
    MOTION = "motion"
    BED_CONCUSSION = "bed_concussion"
    OCCUPANCY_SWITCH = "occupancy_switch"
    POWER = "power"


class SensorEvent(BaseModel):
    """
    Modelo Pydantic para um disparo de sensor
    """
    model_config = ConfigDict(frozen=True)

    flat_id: str = Field(..., description="Identificador do apartamento")
    sensor_id: str = Field(..., description="Identificador do sensor")
    timestamp: datetime = Field(..., description="Instante local do evento")
    kind: SensorKind = Field(..., description="Tipo do evento")
    key: Optional[int] = Field(None, ge=1, le=4,
                               description="Tecla do interruptor de ocupação (1-4)")
    line: Optional[int] = Field(None, description="Linha de origem no arquivo",
                                exclude=True)

    @model_validator(mode="after")
    def _tecla_do_interruptor(self) -> "SensorEvent":
        if self.kind is SensorKind.OCCUPANCY_SWITCH and self.key is None:
            raise ValueError("occupancy_switch exige a tecla (1-4)")
        if self.kind is not SensorKind.OCCUPANCY_SWITCH and self.key is not None:
            raise ValueError(f"tecla só é válida para occupancy_switch, não {self.kind.value}")
        return self


class FlatConfig(BaseModel):
    """
    Modelo Pydantic para a instalação de um apartamento
    """
    model_config = ConfigDict(frozen=True)

    flat_id: str = Field(..., description="Identificador do apartamento")
    motion_sensor_ids: Tuple[str, ...] = Field(..., min_length=1,
                                               description="Sensores de movimento instalados")
    timezone_offset: int = Field(0, ge=-14 * 60, le=14 * 60,
                                 description="Deslocamento local em minutos a partir de UTC")
    participant_id: Optional[str] = Field(None, description="Participante que mora no apartamento")
    sensor_rooms: Dict[str, str] = Field(default_factory=dict,
                                         description="Cômodo de cada sensor")

    @model_validator(mode="after")
    def _sensores_unicos(self) -> "FlatConfig":
        if len(set(self.motion_sensor_ids)) != len(self.motion_sensor_ids):
            raise ValueError(f"sensores repetidos no apartamento {self.flat_id}")
        return self

    @property
    def n(self) -> int:
        return len(self.motion_sensor_ids)

    @property
    def rooms(self) -> frozenset:
        return frozenset(self.sensor_rooms.values())


class DailyActivity(BaseModel):
    """
    Modelo Pydantic para a média diária de janelas ativas por sensor
    """
    model_config = ConfigDict(frozen=True)

    flat_id: str
    date: date
    value: float = Field(..., ge=0.0, le=WINDOWS_PER_DAY)
    per_sensor_window_counts: Dict[str, int]

    @model_validator(mode="after")
    def _contagens(self) -> "DailyActivity":
        for sensor_id, contagem in self.per_sensor_window_counts.items():
            if not 0 <= contagem <= WINDOWS_PER_DAY:
                raise ValueError(
                    f"contagem fora de [0, {WINDOWS_PER_DAY}] para o sensor {sensor_id}: {contagem}")
        return self

    @property
    def total_window_count(self) -> int:
        return sum(self.per_sensor_window_counts.values())


class ActivitySeries(BaseModel):
    """
    Série diária de atividade de um apartamento (dias sem eventos não entram)
    """
    model_config = ConfigDict(frozen=True)

    flat_id: str
    points: Tuple[DailyActivity, ...] = ()

    @model_validator(mode="after")
    def _datas_crescentes(self) -> "ActivitySeries":
        for anterior, atual in zip(self.points, self.points[1:]):
            if atual.date <= anterior.date:
                raise ValueError(f"datas fora de ordem: {anterior.date} >= {atual.date}")
        for ponto in self.points:
            if ponto.value <= 0:
                raise ValueError(f"dia sem eventos na série: {ponto.date}")
        return self

    def __len__(self) -> int:
        return len(self.points)

    @property
    def dates(self) -> List[date]:
        return [p.date for p in self.points]

    @property
    def values(self) -> List[float]:
        return [p.value for p in self.points]
