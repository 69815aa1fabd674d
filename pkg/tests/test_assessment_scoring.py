import numpy as np
import pytest

from scripts.assessment_scoring import (FallRisk, Scale, SppbCategory, categorize, crossed_cutoff,
                                        cutoff_crossings, sppb_category, tinetti_fall_risk,
                                        tug_errata, tug_fidelity, tug_points)


@pytest.mark.parametrize("segundos, pontos", [
    (7.7, 1), (10.0, 1), (10.1, 2), (19.9, 2), (20.0, 3), (31.6, 3),
])
def test_pontos_do_tug(segundos, pontos):
    assert tug_points(segundos) == pontos


def test_tug_exige_segundos_positivos():
    with pytest.raises(ValueError):
        tug_points(0.0)


@pytest.mark.parametrize("total, categoria", [
    (0, SppbCategory.LOW), (6, SppbCategory.LOW), (7, SppbCategory.MIDDLE),
    (9, SppbCategory.MIDDLE), (10, SppbCategory.HIGH), (12, SppbCategory.HIGH),
])
def test_categorias_do_sppb(total, categoria):
    assert sppb_category(total) is categoria


@pytest.mark.parametrize("total, risco", [
    (18, FallRisk.HIGH_RISK), (19, FallRisk.MODERATE_RISK),
    (23, FallRisk.MODERATE_RISK), (24, FallRisk.LOW_RISK),
])
def test_risco_de_queda_do_tinetti(total, risco):
    assert tinetti_fall_risk(total) is risco


def test_escalas_fora_da_faixa():
    with pytest.raises(ValueError):
        sppb_category(13)
    with pytest.raises(ValueError):
        tinetti_fall_risk(29)


def test_cruzamento_de_ponto_de_corte():
    assert crossed_cutoff([categorize(Scale.SPPB, v) for v in (7, 8, 9)]) is False
    assert crossed_cutoff([categorize(Scale.SPPB, v) for v in (6, 7)]) is True


def test_tug_constante_nas_tabelas(fixture_records):
    cruzamentos = cutoff_crossings(fixture_records)
    constantes = {p for p, escalas in cruzamentos.items() if not escalas[Scale.TUG]}
    assert constantes == {"1", "2", "4", "10"}


def test_errata_do_tug(fixture_records):
    errata = tug_errata(fixture_records)
    assert {(e.participant_id, e.tug_seconds) for e in errata} == {
        ("6", 19.0), ("6", 19.9), ("9", 20.1), ("11", 19.6), ("12", 19.6)}
    assert all(19.0 <= e.tug_seconds < 21.0 for e in errata)


def test_fidelidade_do_tug(fixture_records):
    pares = [r for r in fixture_records if r.tug_seconds is not None and r.tug_points is not None]
    assert len(pares) == 119
    assert tug_fidelity(fixture_records) == pytest.approx(114 / 119)
    assert tug_fidelity(fixture_records) >= 0.9


def test_pontos_do_tug_nunca_diminuem():
    segundos = np.round(np.arange(0.1, 60.0, 0.1), 1)
    pontos = [tug_points(float(s)) for s in segundos]
    assert all(a <= b for a, b in zip(pontos, pontos[1:]))
    assert (pontos[0], pontos[-1]) == (1, 3)
