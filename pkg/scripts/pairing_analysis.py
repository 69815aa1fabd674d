"""
Pareamento diário entre escores interpolados e atividade ajustada.

Para cada participante e avaliação: spline linear pelos escores registrados,
regressão da atividade entre as visitas e um par (escore, atividade) para cada
dia elegível dentro dos dois domínios. Os pares alimentam o rho de Spearman.
"""

from concurrent.futures import ThreadPoolExecutor
from datetime import date
from typing import Dict, Iterable, List, Literal, Mapping, NamedTuple, Optional, Sequence

import pandas as pd

from models.analysis_model import CorrelationResult, PairedSeries
from models.assessment_model import (MAIN_ASSESSMENTS, SCORE_FIELDS, SPPB_ITEMS,
                                     AssessmentName, AssessmentRecord, participant_key)
from models.sensor_model import ActivitySeries
from models.study_model import StudyDataset
from scripts.activity_features import activity_series
from scripts.approximation import evaluate, fit_regression, spline_interpolate
from scripts.correlation_stats import correlate
from utils.configs import settings
from utils.erros import DadosInsuficientes, ForaDoDominio
from utils.logger import configura_logger

logger = configura_logger(__name__, "pareamento.log")

RegressionMode = Literal["piecewise", "global"]
Resultados = Dict[AssessmentName, CorrelationResult]


def _knots(dataset: StudyDataset, participant: str, nome: AssessmentName) -> List[tuple]:
    registros = dataset.assessments.get(participant, ())
    return [(r.date, float(r.score(nome))) for r in registros if r.score(nome) is not None]


def participant_activity(dataset: StudyDataset, participant: str) -> ActivitySeries:
    """Série de atividade do apartamento do participante no período das visitas."""
    flat = dataset.flat_for_participant(participant)
    registros = dataset.assessments.get(participant, ())
    if flat is None or not registros:
        raise DadosInsuficientes("insufficient activity",
                                 f"participante {participant} sem apartamento ou sem visitas")
    return activity_series(dataset.events.get(flat.flat_id, ()), flat,
                           registros[0].date, registros[-1].date)


def _eligible_days(dataset: StudyDataset, participant: str,
                   series: ActivitySeries) -> Sequence[date]:
    flat = dataset.flat_for_participant(participant)
    if flat is not None and flat.flat_id in dataset.eligible_days:
        return dataset.eligible_days[flat.flat_id]
    return series.dates


def build_paired_series(dataset: StudyDataset, participant: str, assessment_name: AssessmentName,
                        regression_mode: RegressionMode = "piecewise",
                        series: Optional[ActivitySeries] = None) -> PairedSeries:
    """
    Monta os pares diários (data, escore interpolado, atividade ajustada).

    Visitas sem o escore saem da lista de nós. Dias fora do domínio da spline
    ou em um trecho vazio da regressão não geram par.

    Raises:
        DadosInsuficientes: menos de dois escores ("insufficient assessments") ou
                            nenhum trecho de regressão utilizável ("insufficient activity").
    """
    nos = _knots(dataset, participant, assessment_name)
    if len(nos) < 2:
        raise DadosInsuficientes("insufficient assessments",
                                 f"participante {participant}, {assessment_name.value}: "
                                 f"{len(nos)} escore(s)")
    if series is None:
        series = participant_activity(dataset, participant)

    origem = nos[0][0]
    spline = spline_interpolate(nos, origin=origem)
    regressao = fit_regression(series, [d for d, _ in nos], origin=origem, mode=regression_mode)
    if not regressao.non_empty_segments():
        raise DadosInsuficientes("insufficient activity",
                                 f"participante {participant}: nenhum intervalo com dois dias ativos")

    inicio, fim = spline.domain
    pares = []
    for dia in _eligible_days(dataset, participant, series):
        if not inicio <= dia <= fim:
            continue
        try:
            atividade = evaluate(regressao, dia)
        except ForaDoDominio:
            continue
        pares.append((dia, evaluate(spline, dia), atividade))

    return PairedSeries(participant_id=participant, assessment_name=assessment_name,
                        pairs=tuple(pares))


def _constante(valores: Sequence[float]) -> bool:
    return len(set(valores)) <= 1


def _correlate_named(dataset: StudyDataset, participant: str, nome: AssessmentName,
                     regression_mode: RegressionMode,
                     series: Optional[ActivitySeries]) -> CorrelationResult:
    nos = _knots(dataset, participant, nome)
    if len(nos) < 2:
        return CorrelationResult.not_computable("insufficient assessments")
    if _constante([escore for _, escore in nos]):
        return CorrelationResult.not_computable("constant score series")
    if series is None:
        return CorrelationResult.not_computable("insufficient activity")

    try:
        pareada = build_paired_series(dataset, participant, nome, regression_mode, series)
    except DadosInsuficientes as e:
        return CorrelationResult.not_computable(e.motivo)

    n = len(pareada)
    if n < 4:
        return CorrelationResult.not_computable("insufficient sample", n_pairs=n)
    if _constante(pareada.activity):
        return CorrelationResult.not_computable("constant activity series", n_pairs=n)
    if _constante(pareada.scores):
        return CorrelationResult.not_computable("constant score series", n_pairs=n)
    return correlate(pareada.scores, pareada.activity)


def _correlate_many(dataset: StudyDataset, participant: str, nomes: Iterable[AssessmentName],
                    regression_mode: RegressionMode) -> Resultados:
    try:
        series: Optional[ActivitySeries] = participant_activity(dataset, participant)
    except DadosInsuficientes as e:
        logger.warning(f"Participante {participant}: {e}")
        series = None

    resultados: Resultados = {}
    for nome in nomes:
        resultado = _correlate_named(dataset, participant, nome, regression_mode, series)
        if not resultado.computable:
            logger.warning(f"Participante {participant}, {nome.value}: "
                           f"correlação não computável ({resultado.reason})")
        resultados[nome] = resultado
    return resultados


def correlate_participant(dataset: StudyDataset, participant: str,
                          regression_mode: RegressionMode = "piecewise") -> Resultados:
    """
    Um CorrelationResult para SPPB, Tinetti13, Tinetti28 e TUG (em pontos).
    Falhas viram resultados não computáveis com o motivo; nada é lançado.
    """
    return _correlate_many(dataset, participant, MAIN_ASSESSMENTS, regression_mode)


def correlate_sppb_items(dataset: StudyDataset, participant: str,
                         regression_mode: RegressionMode = "piecewise") -> Resultados:
    """Mesmo pareamento para equilíbrio, marcha de 4 m e levantar da cadeira."""
    return _correlate_many(dataset, participant, SPPB_ITEMS, regression_mode)


class CohortResults(NamedTuple):
    main: Dict[str, Resultados]
    items: Dict[str, Resultados]


def correlate_cohort(dataset: StudyDataset, regression_mode: RegressionMode = "piecewise",
                     max_workers: Optional[int] = None) -> CohortResults:
    """
    Correlaciona todos os participantes em paralelo.
    O resultado segue a ordem dos participantes, não a ordem de término.
    """
    participantes = sorted(dataset.participants, key=participant_key)

    def _um(participante: str):
        return (correlate_participant(dataset, participante, regression_mode),
                correlate_sppb_items(dataset, participante, regression_mode))

    with ThreadPoolExecutor(max_workers=max_workers or settings.MAX_WORKERS) as executor:
        saidas = list(executor.map(_um, participantes))

    logger.info(f"{len(participantes)} participante(s) analisados")
    return CohortResults(
        main={p: principal for p, (principal, _) in zip(participantes, saidas)},
        items={p: itens for p, (_, itens) in zip(participantes, saidas)},
    )


def records_at_visit(assessments: Mapping[str, Sequence[AssessmentRecord]],
                     visit_index: int) -> List[AssessmentRecord]:
    """
    A visita de número `visit_index` de cada participante (1 = primeira,
    -1 = última). Participantes com menos visitas ficam de fora.
    """
    if visit_index == 0:
        raise ValueError("visit_index começa em 1 (ou -1 para a última visita)")
    posicao = visit_index - 1 if visit_index > 0 else visit_index
    selecionados = []
    for participante in sorted(assessments, key=participant_key):
        registros = assessments[participante]
        if -len(registros) <= posicao < len(registros):
            selecionados.append(registros[posicao])
    return selecionados


def cohort_summary(records: Sequence[AssessmentRecord]) -> pd.DataFrame:
    """
    Média, desvio padrão amostral (n - 1), mínimo e máximo por medida.

    Valores ausentes são ignorados; com um único valor o desvio fica ausente
    (None). Medidas sem nenhum valor não aparecem.

    Raises:
        ValueError: lista de registros vazia.
    """
    if not records:
        raise ValueError("coorte vazia: nenhum participante com a visita pedida")

    df = pd.DataFrame([{campo: getattr(r, campo) for campo in SCORE_FIELDS} for r in records],
                      columns=list(SCORE_FIELDS), dtype=float)
    resumo = df.agg(["mean", "std", "min", "max", "count"]).T
    resumo = resumo.rename(columns={"std": "sd", "count": "n"})
    resumo = resumo[resumo["n"] > 0].copy()
    resumo["n"] = resumo["n"].astype(int)
    resumo.index.name = "measure"
    return resumo.astype(object).where(resumo.notna(), None)
