"""
Relatórios da análise: tabelas de correlação por participante e por item do
SPPB, exclusões, resumo da coorte e uma versão em texto para leitura.

Todos os valores saem como texto já formatado, com N/A para ausentes, para
que a mesma entrada gere sempre os mesmos bytes.
"""

from typing import Dict, Iterable, List, Optional, Sequence

import pandas as pd

from models.analysis_model import CorrelationResult
from models.assessment_model import (MAIN_ASSESSMENTS, SPPB_ITEMS, AssessmentName,
                                     AssessmentRecord, participant_key)
from models.study_model import ExclusionEntry, StudyDataset
from scripts.assessment_scoring import ErrataEntry
from scripts.pairing_analysis import CohortResults, cohort_summary, records_at_visit
from utils.gerar_aquivo import salvar_em_csv, salvar_em_excel, salvar_texto
from utils.logger import configura_logger

logger = configura_logger(__name__, "relatorio.log")

MISSING = "N/A"
REPORT_COLUMNS = ["participant_id", "assessment", "rho", "p", "effect",
                  "significant", "n_pairs", "reason"]
EXCLUSION_COLUMNS = ["entity", "rule", "detail"]
ERRATA_COLUMNS = ["participant_id", "date", "tug_seconds", "points_printed", "points_computed"]
# Marca de efeito no relatório em texto (moderado ou maior)
MARKER = "*"


def _numero(valor: Optional[float], formato: str) -> str:
    if valor is None:
        return MISSING
    return format(valor, formato)


def _linha(participante: str, nome: AssessmentName, resultado: CorrelationResult) -> List[str]:
    if not resultado.computable:
        return [participante, nome.value, MISSING, MISSING, MISSING, MISSING,
                str(resultado.n_pairs), resultado.reason]
    return [
        participante,
        nome.value,
        _numero(resultado.rho, ".4f"),
        _numero(resultado.p_value, ".4g"),
        resultado.effect.value,
        "true" if resultado.significant else "false",
        str(resultado.n_pairs),
        "",
    ]


def correlation_frame(results: Dict[str, Dict[AssessmentName, CorrelationResult]],
                      names: Sequence[AssessmentName] = MAIN_ASSESSMENTS) -> pd.DataFrame:
    """Uma linha por (participante, avaliação), na ordem dos participantes e de `names`."""
    linhas = [
        _linha(participante, nome, results[participante][nome])
        for participante in sorted(results, key=participant_key)
        for nome in names
        if nome in results[participante]
    ]
    return pd.DataFrame(linhas, columns=REPORT_COLUMNS)


def exclusion_frame(log: Iterable[ExclusionEntry]) -> pd.DataFrame:
    return pd.DataFrame([(e.entity, e.rule, e.detail) for e in log], columns=EXCLUSION_COLUMNS)


def errata_frame(errata: Iterable[ErrataEntry]) -> pd.DataFrame:
    linhas = [(e.participant_id, e.date, f"{e.tug_seconds:.1f}", str(e.points_printed),
               str(e.points_computed)) for e in errata]
    return pd.DataFrame(linhas, columns=ERRATA_COLUMNS)


def summary_frame(assessments: Dict[str, Sequence[AssessmentRecord]]) -> pd.DataFrame:
    """Resumo da coorte na primeira e na última visita de cada participante."""
    partes = []
    for rotulo, visita in (("first", 1), ("last", -1)):
        registros = records_at_visit(assessments, visita)
        if not registros:
            continue
        resumo = cohort_summary(registros).reset_index()
        resumo.insert(0, "visit", rotulo)
        partes.append(resumo)
    if not partes:
        return pd.DataFrame(columns=["visit", "measure", "mean", "sd", "min", "max", "n"])

    df = pd.concat(partes, ignore_index=True)
    for coluna in ("mean", "sd", "min", "max"):
        df[coluna] = [_numero(v, ".4f") for v in df[coluna]]
    df["n"] = df["n"].astype(str)
    return df


def _celula(resultado: CorrelationResult) -> str:
    if not resultado.computable:
        return f"{MISSING} ({MISSING})"
    texto = f"{resultado.rho:.2f} ({resultado.p_value:.3f})"
    if resultado.effect.at_least_moderate:
        texto += MARKER
    return texto


def _tabela(results: Dict[str, Dict[AssessmentName, CorrelationResult]],
            names: Sequence[AssessmentName]) -> str:
    linhas = [[participante] + [_celula(results[participante][n]) for n in names]
              for participante in sorted(results, key=participant_key)]
    df = pd.DataFrame(linhas, columns=["participant"] + [n.value for n in names])
    return df.to_string(index=False)


def render_text(cohort: CohortResults) -> str:
    """Tabelas rho (p) por participante; '*' marca efeito moderado ou maior."""
    if not cohort.main:
        return "Nenhum participante analisado.\n"
    partes = [
        "Correlação de Spearman entre atividade e avaliações: rho (p)",
        _tabela(cohort.main, MAIN_ASSESSMENTS),
        "",
        "Itens do SPPB: rho (p)",
        _tabela(cohort.items, SPPB_ITEMS),
        "",
        f"{MARKER} efeito moderado ou maior (|rho| >= 0.3); N/A = não computável",
    ]
    return "\n".join(partes) + "\n"


def write_analysis_report(cohort: CohortResults, dataset: StudyDataset, out_dir: str,
                          excel: bool = False) -> List[str]:
    """
    Grava correlations.csv, sppb_items.csv, exclusions.csv, summary.csv e
    report.txt em `out_dir`; com excel=True também report.xlsx.
    """
    correlacoes = correlation_frame(cohort.main, MAIN_ASSESSMENTS)
    itens = correlation_frame(cohort.items, SPPB_ITEMS)
    exclusoes = exclusion_frame(dataset.exclusion_log)
    resumo = summary_frame(dataset.assessments)

    caminhos = [
        salvar_em_csv(correlacoes, out_dir, "correlations.csv"),
        salvar_em_csv(itens, out_dir, "sppb_items.csv"),
        salvar_em_csv(exclusoes, out_dir, "exclusions.csv"),
        salvar_em_csv(resumo, out_dir, "summary.csv"),
        salvar_texto(render_text(cohort), out_dir, "report.txt"),
    ]
    if excel:
        def _fortes(results, names) -> List[bool]:
            return [results[p][n].computable and results[p][n].effect.at_least_moderate
                    for p in sorted(results, key=participant_key) for n in names
                    if n in results[p]]

        caminhos.append(salvar_em_excel(
            {"correlations": correlacoes, "sppb_items": itens,
             "exclusions": exclusoes, "summary": resumo},
            out_dir, "report.xlsx",
            destaques={"correlations": _fortes(cohort.main, MAIN_ASSESSMENTS),
                       "sppb_items": _fortes(cohort.items, SPPB_ITEMS)},
        ))
    logger.info(f"Relatório gravado em {out_dir} ({len(caminhos)} arquivo(s))")
    return caminhos
