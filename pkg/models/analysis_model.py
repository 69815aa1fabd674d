import math
from datetime import date
from enum import Enum
from typing import List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from models.assessment_model import AssessmentName


class Segment(BaseModel):
    """
    Trecho linear s(x) = m * x + b, com x em dias desde a origem da função.
    Trechos de regressão sem pontos suficientes ficam vazios (sem m e b).
    """
    model_config = ConfigDict(frozen=True)

    start: date
    end: date
    slope: Optional[float] = Field(None, description="m, por dia")
    intercept: Optional[float] = Field(None, description="b")
    n_points: int = Field(0, ge=0, description="Pontos usados no ajuste")

    @model_validator(mode="after")
    def _intervalo(self) -> "Segment":
        if not self.start < self.end:
            raise ValueError(f"trecho com início {self.start} >= fim {self.end}")
        if (self.slope is None) != (self.intercept is None):
            raise ValueError("slope e intercept devem vir juntos")
        return self

    @property
    def empty(self) -> bool:
        return self.slope is None


class PiecewiseLinear(BaseModel):
    """
    Função linear por partes sobre datas. `origin` é o dia zero do eixo x,
    o que mantém os valores de x pequenos e o ajuste bem condicionado.
    """
    model_config = ConfigDict(frozen=True)

    origin: date
    segments: Tuple[Segment, ...] = Field(..., min_length=1)
    kind: Literal["spline", "regression"] = "spline"

    @model_validator(mode="after")
    def _contiguos(self) -> "PiecewiseLinear":
        for anterior, atual in zip(self.segments, self.segments[1:]):
            if anterior.end != atual.start:
                raise ValueError(
                    f"trechos não contíguos: {anterior.end} != {atual.start}")
        return self

    @property
    def domain(self) -> Tuple[date, date]:
        return self.segments[0].start, self.segments[-1].end

    def x(self, dia: date) -> int:
        return (dia - self.origin).days

    def non_empty_segments(self) -> List[Segment]:
        return [s for s in self.segments if not s.empty]


class EffectSize(str, Enum):
    NEGLIGIBLE = "negligible"
    SMALL = "small"
    MODERATE = "moderate"
    LARGE = "large"

    @property
    def at_least_moderate(self) -> bool:
        return self in (EffectSize.MODERATE, EffectSize.LARGE)


class CorrelationResult(BaseModel):
    """
    Modelo Pydantic para o resultado de uma correlação de Spearman.
    rho ausente significa não computável; `reason` diz por quê.
    """
    model_config = ConfigDict(frozen=True)

    rho: Optional[float] = Field(None, ge=-1.0, le=1.0)
    p_value: Optional[float] = Field(None, ge=0.0, le=1.0)
    n_pairs: int = Field(0, ge=0)
    effect: Optional[EffectSize] = None
    significant: bool = False
    reason: Optional[str] = None

    @model_validator(mode="after")
    def _computavel(self) -> "CorrelationResult":
        if self.rho is None:
            if self.reason is None:
                raise ValueError("resultado não computável exige um motivo")
            if self.p_value is not None or self.significant:
                raise ValueError("resultado não computável não tem p-valor")
        elif self.reason is not None:
            raise ValueError("resultado computável não leva motivo")
        return self

    @property
    def computable(self) -> bool:
        return self.rho is not None

    @classmethod
    def not_computable(cls, reason: str, n_pairs: int = 0) -> "CorrelationResult":
        return cls(reason=reason, n_pairs=n_pairs)


class PairedSeries(BaseModel):
    """
    Pares diários (data, escore interpolado, atividade ajustada)
    """
    model_config = ConfigDict(frozen=True)

    participant_id: str
    assessment_name: AssessmentName
    pairs: Tuple[Tuple[date, float, float], ...] = ()

    @model_validator(mode="after")
    def _pares(self) -> "PairedSeries":
        for (d0, _, _), (d1, _, _) in zip(self.pairs, self.pairs[1:]):
            if d1 <= d0:
                raise ValueError(f"datas fora de ordem: {d0} >= {d1}")
        for dia, escore, atividade in self.pairs:
            if not (math.isfinite(escore) and math.isfinite(atividade)):
                raise ValueError(f"valor não finito em {dia}")
        return self

    def __len__(self) -> int:
        return len(self.pairs)

    @property
    def scores(self) -> List[float]:
        return [p[1] for p in self.pairs]

    @property
    def activity(self) -> List[float]:
        return [p[2] for p in self.pairs]
