"""
Regras de pontuação e pontos de corte das avaliações geriátricas.
"""

from enum import Enum
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence

from models.assessment_model import AssessmentRecord
from utils.logger import configura_logger

logger = configura_logger(__name__, "pontuacao.log")


class SppbCategory(str, Enum):
    LOW = "low"
    MIDDLE = "middle"
    HIGH = "high"


class FallRisk(str, Enum):
    HIGH_RISK = "high_risk"
    MODERATE_RISK = "moderate_risk"
    LOW_RISK = "low_risk"


class Scale(str, Enum):
    SPPB = "SPPB"
    TINETTI = "Tinetti28"
    TUG = "TUG"


def tug_points(seconds: float) -> int:
    """
    Segundos do TUG em pontos: <= 10 s -> 1; (10, 20) -> 2; >= 20 -> 3.
    A faixa grave (>= 30 s) também vale 3 pontos.
    """
    if not seconds > 0:
        raise ValueError(f"tempo do TUG deve ser positivo: {seconds}")
    if seconds <= 10.0:
        return 1
    if seconds < 20.0:
        return 2
    return 3


def sppb_category(total: int) -> SppbCategory:
    """0-6 baixo, 7-9 médio, 10-12 alto."""
    if not 0 <= total <= 12:
        raise ValueError(f"SPPB fora de [0, 12]: {total}")
    if total <= 6:
        return SppbCategory.LOW
    if total <= 9:
        return SppbCategory.MIDDLE
    return SppbCategory.HIGH


def tinetti_fall_risk(total: int) -> FallRisk:
    """<= 18 risco alto, 19-23 moderado, >= 24 baixo."""
    if not 0 <= total <= 28:
        raise ValueError(f"Tinetti fora de [0, 28]: {total}")
    if total <= 18:
        return FallRisk.HIGH_RISK
    if total <= 23:
        return FallRisk.MODERATE_RISK
    return FallRisk.LOW_RISK


def categorize(scale: Scale, value: float) -> Enum | int:
    """Categoria de um valor na escala: SPPB total, Tinetti28 ou pontos do TUG."""
    if scale is Scale.SPPB:
        return sppb_category(int(value))
    if scale is Scale.TINETTI:
        return tinetti_fall_risk(int(value))
    return int(value)


def crossed_cutoff(categories: Sequence) -> bool:
    """Verdadeiro se a categoria muda em algum ponto da série."""
    return len(set(categories)) > 1


_CAMPO_DA_ESCALA = {
    Scale.SPPB: "sppb_total",
    Scale.TINETTI: "tinetti28",
    Scale.TUG: "tug_points",
}


def cutoff_crossings(records: Iterable[AssessmentRecord]) -> Dict[str, Dict[Scale, bool]]:
    """
    Para cada participante, se a série de cada escala cruza um ponto de corte.
    Visitas com o escore ausente são ignoradas.
    """
    por_participante: Dict[str, List[AssessmentRecord]] = {}
    for registro in records:
        por_participante.setdefault(registro.participant_id, []).append(registro)

    resultado: Dict[str, Dict[Scale, bool]] = {}
    for participante, registros in por_participante.items():
        resultado[participante] = {}
        for escala, campo in _CAMPO_DA_ESCALA.items():
            valores = [getattr(r, campo) for r in registros if getattr(r, campo) is not None]
            categorias = [categorize(escala, v) for v in valores]
            resultado[participante][escala] = crossed_cutoff(categorias)
    return resultado


class ErrataEntry(NamedTuple):
    participant_id: str
    date: str
    tug_seconds: float
    points_printed: int
    points_computed: int


def tug_errata(records: Iterable[AssessmentRecord]) -> List[ErrataEntry]:
    """Registros cujos pontos do TUG diferem dos calculados a partir dos segundos."""
    errata: List[ErrataEntry] = []
    for registro in records:
        if registro.tug_seconds is None or registro.tug_points is None:
            continue
        calculado = tug_points(registro.tug_seconds)
        if calculado != registro.tug_points:
            errata.append(ErrataEntry(registro.participant_id, registro.date.isoformat(),
                                      registro.tug_seconds, registro.tug_points, calculado))
    if errata:
        logger.warning(f"{len(errata)} registro(s) com pontos do TUG divergentes")
    return errata


def tug_fidelity(records: Iterable[AssessmentRecord]) -> Optional[float]:
    """Fração dos pares (segundos, pontos) reproduzidos por tug_points."""
    pares = [(r.tug_seconds, r.tug_points) for r in records
             if r.tug_seconds is not None and r.tug_points is not None]
    if not pares:
        return None
    iguais = sum(1 for segundos, pontos in pares if tug_points(segundos) == pontos)
    return iguais / len(pares)
