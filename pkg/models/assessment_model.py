import datetime as dt
from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field


class AssessmentName(str, Enum):
    """Escores correlacionados com a atividade (totais e itens do SPPB)."""
    SPPB = "SPPB"
    TINETTI13 = "Tinetti13"
    TINETTI28 = "Tinetti28"
    TUG = "TUG"
    SPPB_BALANCE = "SPPB_balance"
    SPPB_4M = "SPPB_4m"
    SPPB_5CRT = "SPPB_5CRT"

    @property
    def field(self) -> str:
        """Campo do AssessmentRecord que alimenta esta série (TUG usa os pontos)."""
        return _CAMPOS[self]


_CAMPOS = {
    AssessmentName.SPPB: "sppb_total",
    AssessmentName.TINETTI13: "tinetti13",
    AssessmentName.TINETTI28: "tinetti28",
    AssessmentName.TUG: "tug_points",
    AssessmentName.SPPB_BALANCE: "sppb_balance",
    AssessmentName.SPPB_4M: "sppb_gait4m",
    AssessmentName.SPPB_5CRT: "sppb_5crt",
}

MAIN_ASSESSMENTS = (AssessmentName.SPPB, AssessmentName.TINETTI13,
                    AssessmentName.TINETTI28, AssessmentName.TUG)
SPPB_ITEMS = (AssessmentName.SPPB_BALANCE, AssessmentName.SPPB_4M,
              AssessmentName.SPPB_5CRT)


class AssessmentRecord(BaseModel):
    """
    Modelo Pydantic para uma visita de avaliação geriátrica.
    None marca escore ausente (N/A), nunca zero.
    """
    model_config = ConfigDict(frozen=True)

    participant_id: str = Field(..., description="Identificador do participante")
    date: dt.date = Field(..., description="Data da visita")
    sppb_total: Optional[int] = Field(None, description="SPPB total (0-12)")
    sppb_balance: Optional[int] = Field(None, description="SPPB equilíbrio (0-4)")
    sppb_gait4m: Optional[int] = Field(None, description="SPPB marcha 4 m (0-4)")
    sppb_5crt: Optional[int] = Field(None, description="SPPB levantar da cadeira 5x (0-4)")
    tinetti13: Optional[int] = Field(None, description="Subescala de 13 pontos")
    tinetti28: Optional[int] = Field(None, description="Total de 28 pontos")
    tug_seconds: Optional[float] = Field(None, gt=0, description="TUG em segundos")
    tug_points: Optional[int] = Field(None, description="TUG em pontos (1-3)")

    def score(self, nome: AssessmentName) -> Optional[float]:
        return getattr(self, nome.field)

    @property
    def all_missing(self) -> bool:
        return all(getattr(self, campo) is None for campo in SCORE_FIELDS)


def participant_key(participant_id: str) -> tuple:
    """Ordena "2" antes de "10"; ids não numéricos vêm depois, em ordem alfabética."""
    if participant_id.isdigit():
        return (0, int(participant_id), participant_id)
    return (1, 0, participant_id)


SCORE_FIELDS = ("sppb_total", "sppb_balance", "sppb_gait4m", "sppb_5crt",
                "tinetti13", "tinetti28", "tug_seconds", "tug_points")

# (mínimo, máximo) de cada escala inteira
SCALE_RANGES = {
    "sppb_total": (0, 12),
    "sppb_balance": (0, 4),
    "sppb_gait4m": (0, 4),
    "sppb_5crt": (0, 4),
    "tinetti13": (0, 13),
    "tinetti28": (0, 28),
    "tug_points": (1, 3),
}


def validate_record(record: AssessmentRecord) -> List[str]:
    """
    Verifica um registro contra as escalas das avaliações.

    Campos ausentes não geram violação. Nunca lança exceção: cada violação
    é devolvida como texto com campo, valor observado e faixa permitida.
    """
    violacoes: List[str] = []

    for campo, (minimo, maximo) in SCALE_RANGES.items():
        valor = getattr(record, campo)
        if valor is not None and not minimo <= valor <= maximo:
            violacoes.append(f"{campo}={valor} fora da faixa [{minimo}, {maximo}]")

    if record.tug_seconds is not None and not record.tug_seconds > 0:
        violacoes.append(f"tug_seconds={record.tug_seconds} fora da faixa (0, inf)")

    itens = (record.sppb_balance, record.sppb_gait4m, record.sppb_5crt)
    if record.sppb_total is not None and all(item is not None for item in itens):
        soma = sum(itens)
        if soma != record.sppb_total:
            violacoes.append(
                f"sppb_total={record.sppb_total} difere da soma dos itens ({soma})")

    if record.tinetti13 is not None and record.tinetti28 is not None \
            and record.tinetti28 < record.tinetti13:
        violacoes.append(
            f"tinetti28 < tinetti13 (tinetti28={record.tinetti28}, tinetti13={record.tinetti13})")

    return violacoes
