"""
Interpolação dos escores e regressão da atividade.

Os escores viram uma spline linear que passa exatamente pelos nós
(data, escore). A atividade diária é aproximada por mínimos quadrados
ordinários em cada intervalo entre avaliações consecutivas. As duas funções
usam o mesmo eixo x: dias inteiros desde `origin`.
"""

from bisect import bisect_right
from datetime import date
from typing import List, Literal, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from models.analysis_model import PiecewiseLinear, Segment
from models.sensor_model import ActivitySeries
from utils.erros import DadosInsuficientes, ForaDoDominio
from utils.logger import configura_logger

logger = configura_logger(__name__, "aproximacao.log")


class LinearFit(NamedTuple):
    slope: float
    intercept: float


def spline_interpolate(knots: Sequence[Tuple[date, float]],
                       origin: Optional[date] = None) -> PiecewiseLinear:
    """
    Spline linear pelos nós (data, escore).

    Visitas com escore ausente devem ser removidas antes. Cada par de nós
    consecutivos define um trecho com m = Δescore / Δdias e b tal que o
    trecho passa pelo nó da esquerda.

    Raises:
        DadosInsuficientes: menos de dois nós.
        ValueError: datas repetidas ou fora de ordem.
    """
    if len(knots) < 2:
        raise DadosInsuficientes("insufficient knots", f"{len(knots)} nó(s)")
    origin = origin or knots[0][0]

    trechos: List[Segment] = []
    for (d0, a0), (d1, a1) in zip(knots, knots[1:]):
        if d1 == d0:
            raise ValueError(f"data repetida entre os nós: {d0}")
        if d1 < d0:
            raise ValueError(f"nós fora de ordem: {d0} > {d1}")
        x0 = (d0 - origin).days
        x1 = (d1 - origin).days
        m = (a1 - a0) / (x1 - x0)
        trechos.append(Segment(start=d0, end=d1, slope=m, intercept=a0 - m * x0,
                               n_points=2))

    return PiecewiseLinear(origin=origin, segments=tuple(trechos), kind="spline")


def fit_segment_regression(points: Sequence[Tuple[float, float]]) -> LinearFit:
    """
    Reta de mínimos quadrados (m, b) que minimiza Σ(m·x + b − v)².

    Usa a forma fechada centrada: m = Sxy / Sxx, b = v̄ − m·x̄.

    Raises:
        DadosInsuficientes: menos de dois pontos ou todos com o mesmo x.
    """
    if len(points) < 2:
        raise DadosInsuficientes("insufficient activity", f"{len(points)} ponto(s)")

    x = np.asarray([p[0] for p in points], dtype=float)
    v = np.asarray([p[1] for p in points], dtype=float)

    x_medio = x.mean()
    dx = x - x_medio
    sxx = float(np.dot(dx, dx))
    if sxx == 0.0:
        raise DadosInsuficientes("degenerate abscissa", f"todos os x iguais a {x[0]}")

    v_medio = v.mean()
    m = float(np.dot(dx, v - v_medio)) / sxx
    return LinearFit(slope=m, intercept=float(v_medio - m * x_medio))


def fit_piecewise_regression(series: ActivitySeries, assessment_dates: Sequence[date],
                             origin: Optional[date] = None) -> PiecewiseLinear:
    """
    Regressão linear da atividade em cada intervalo entre avaliações.

    O intervalo k cobre [d_k, d_{k+1}); o último é fechado [d_{n-1}, d_n].
    Intervalos com menos de dois pontos ficam marcados como vazios e não
    geram pares na análise.
    """
    if len(assessment_dates) < 2:
        raise DadosInsuficientes("insufficient assessments",
                                 f"{len(assessment_dates)} data(s) de avaliação")
    origin = origin or assessment_dates[0]
    dias = series.dates
    valores = series.values

    trechos: List[Segment] = []
    ultimo = len(assessment_dates) - 2
    for k, (inicio, fim) in enumerate(zip(assessment_dates, assessment_dates[1:])):
        pontos = [
            ((dia - origin).days, valor)
            for dia, valor in zip(dias, valores)
            if inicio <= dia < fim or (k == ultimo and dia == fim)
        ]
        try:
            ajuste = fit_segment_regression(pontos)
        except DadosInsuficientes:
            logger.debug(f"Intervalo {inicio} a {fim} sem pontos suficientes "
                         f"({len(pontos)}); marcado como vazio")
            trechos.append(Segment(start=inicio, end=fim, n_points=len(pontos)))
            continue
        trechos.append(Segment(start=inicio, end=fim, slope=ajuste.slope,
                               intercept=ajuste.intercept, n_points=len(pontos)))

    return PiecewiseLinear(origin=origin, segments=tuple(trechos), kind="regression")


def fit_global_regression(series: ActivitySeries, assessment_dates: Sequence[date],
                          origin: Optional[date] = None) -> PiecewiseLinear:
    """Uma única reta sobre todo o estudo, para análises de sensibilidade."""
    if len(assessment_dates) < 2:
        raise DadosInsuficientes("insufficient assessments",
                                 f"{len(assessment_dates)} data(s) de avaliação")
    inicio, fim = assessment_dates[0], assessment_dates[-1]
    return fit_piecewise_regression(series, [inicio, fim], origin=origin)


def fit_regression(series: ActivitySeries, assessment_dates: Sequence[date],
                   origin: Optional[date] = None,
                   mode: Literal["piecewise", "global"] = "piecewise") -> PiecewiseLinear:
    if mode == "global":
        return fit_global_regression(series, assessment_dates, origin)
    return fit_piecewise_regression(series, assessment_dates, origin)


def segment_index(f: PiecewiseLinear, dia: date) -> int:
    """Índice do trecho que contém o dia (semiaberto, último fechado)."""
    inicio, fim = f.domain
    if not inicio <= dia <= fim:
        raise ForaDoDominio(f"out of domain: {dia} fora de [{inicio}, {fim}]")
    if dia == fim:
        return len(f.segments) - 1
    inicios = [s.start for s in f.segments]
    return bisect_right(inicios, dia) - 1


def evaluate(f: PiecewiseLinear, dia: date) -> float:
    """
    s(x) = m·x + b do trecho que contém o dia. Não extrapola.

    Raises:
        ForaDoDominio: dia fora do domínio ou dentro de um trecho vazio.
    """
    trecho = f.segments[segment_index(f, dia)]
    if trecho.empty:
        raise ForaDoDominio(f"out of domain: trecho vazio {trecho.start} a {trecho.end}")
    return trecho.slope * f.x(dia) + trecho.intercept
