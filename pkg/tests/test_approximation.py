from datetime import date, timedelta

import numpy as np
import pytest

from models.assessment_model import MAIN_ASSESSMENTS
from models.sensor_model import ActivitySeries, DailyActivity
from scripts.approximation import (evaluate, fit_global_regression, fit_piecewise_regression,
                                   fit_segment_regression, spline_interpolate)
from utils.erros import DadosInsuficientes, ForaDoDominio

D0 = date(2014, 7, 7)


def _dia(k: int) -> date:
    return D0 + timedelta(days=k)


def _serie(valores: dict) -> ActivitySeries:
    return ActivitySeries(flat_id="F1", points=tuple(
        DailyActivity(flat_id="F1", date=_dia(k), value=v, per_sensor_window_counts={})
        for k, v in sorted(valores.items())))


class TestSpline:

    def test_passa_pelos_nos_e_interpola_linearmente(self):
        f = spline_interpolate([(_dia(0), 3.0), (_dia(28), 5.0), (_dia(56), 1.0)])
        assert evaluate(f, _dia(0)) == pytest.approx(3.0, abs=1e-9)
        assert evaluate(f, _dia(14)) == pytest.approx(4.0, abs=1e-9)
        assert evaluate(f, _dia(56)) == pytest.approx(1.0, abs=1e-9)

    def test_continua_nas_fronteiras(self):
        f = spline_interpolate([(_dia(0), 3.0), (_dia(28), 5.0), (_dia(56), 1.0)])
        esquerda, direita = f.segments[0], f.segments[1]
        x = f.x(_dia(28))
        assert esquerda.slope * x + esquerda.intercept == pytest.approx(
            direita.slope * x + direita.intercept, abs=1e-9)

    def test_menos_de_dois_nos(self):
        with pytest.raises(DadosInsuficientes) as erro:
            spline_interpolate([(_dia(0), 3.0)])
        assert erro.value.motivo == "insufficient knots"

    def test_datas_repetidas(self):
        with pytest.raises(ValueError, match="repetida"):
            spline_interpolate([(_dia(0), 3.0), (_dia(0), 4.0)])

    def test_tabelas_embutidas(self, fixture_records):
        participantes = sorted({r.participant_id for r in fixture_records})
        for participante in participantes:
            registros = [r for r in fixture_records if r.participant_id == participante]
            for nome in MAIN_ASSESSMENTS:
                nos = [(r.date, float(r.score(nome))) for r in registros if r.score(nome) is not None]
                f = spline_interpolate(nos)
                for dia, escore in nos:
                    assert evaluate(f, dia) == pytest.approx(escore, abs=1e-9)
                for (d0, a0), (d1, a1) in zip(nos, nos[1:]):
                    meio = d0 + (d1 - d0) / 2
                    t = (meio - d0).days / (d1 - d0).days
                    assert evaluate(f, meio) == pytest.approx((1 - t) * a0 + t * a1, abs=1e-9)


class TestRegressao:

    def test_recupera_reta_sem_ruido(self):
        ajuste = fit_segment_regression([(x, 2.5 * x - 4.0) for x in range(10)])
        assert ajuste.slope == pytest.approx(2.5, abs=1e-12)
        assert ajuste.intercept == pytest.approx(-4.0, abs=1e-12)

    def test_abscissa_degenerada(self):
        with pytest.raises(DadosInsuficientes, match="degenerate abscissa"):
            fit_segment_regression([(3, 1.0), (3, 2.0)])

    def test_um_ponto(self):
        with pytest.raises(DadosInsuficientes, match="insufficient activity"):
            fit_segment_regression([(3, 1.0)])

    @pytest.mark.slow
    def test_residuos_ortogonais(self):
        rng = np.random.default_rng(7)
        for _ in range(1000):
            n = int(rng.integers(2, 60))
            x = np.sort(rng.choice(400, size=n, replace=False)).astype(float)
            v = rng.normal(500.0, 200.0, size=n)
            m, b = fit_segment_regression(list(zip(x, v)))
            r = v - (m * x + b)
            escala = np.abs(v).sum() * max(1.0, x.max())
            assert abs(r.sum()) <= 1e-9 * np.abs(v).sum()
            assert abs((r * x).sum()) <= 1e-9 * escala

    def test_trecho_vazio_e_ultimo_intervalo_fechado(self):
        serie = _serie({0: 1.0, 1: 2.0, 15: 4.0, 28: 7.0})
        f = fit_piecewise_regression(serie, [_dia(0), _dia(14), _dia(28)])
        primeiro, segundo = f.segments
        assert primeiro.n_points == 2 and not primeiro.empty
        # dia 28 entra no último intervalo
        assert segundo.n_points == 2
        assert evaluate(f, _dia(28)) == pytest.approx(7.0)

        f = fit_piecewise_regression(_serie({0: 1.0, 1: 2.0, 15: 4.0}), [_dia(0), _dia(14), _dia(28)])
        assert f.segments[1].empty
        with pytest.raises(ForaDoDominio):
            evaluate(f, _dia(20))

    def test_regressao_global_tem_um_trecho(self):
        serie = _serie({k: 10.0 + k for k in range(0, 40, 3)})
        f = fit_global_regression(serie, [_dia(0), _dia(14), _dia(39)])
        assert len(f.segments) == 1
        assert f.domain == (_dia(0), _dia(39))
        assert evaluate(f, _dia(20)) == pytest.approx(30.0)

    def test_fora_do_dominio(self):
        f = spline_interpolate([(_dia(0), 3.0), (_dia(28), 5.0)])
        with pytest.raises(ForaDoDominio, match="out of domain"):
            evaluate(f, _dia(29))


class TestPropriedades:

    def test_tenda(self):
        f = spline_interpolate([(_dia(0), 0.0), (_dia(10), 10.0), (_dia(20), 0.0)])
        assert evaluate(f, _dia(5)) == pytest.approx(5.0, abs=1e-9)
        assert evaluate(f, _dia(15)) == pytest.approx(5.0, abs=1e-9)

    def test_tres_pontos(self):
        m, b = fit_segment_regression([(0, 0.0), (1, 1.0), (2, 1.0)])
        assert m == pytest.approx(0.5, abs=1e-12)
        assert b == pytest.approx(1 / 6, abs=1e-12)

    @pytest.mark.slow
    def test_deslocar_e_escalar_a_atividade(self):
        rng = np.random.default_rng(17)
        for _ in range(500):
            n = int(rng.integers(2, 40))
            x = np.sort(rng.choice(200, size=n, replace=False)).astype(float)
            v = rng.normal(100.0, 30.0, size=n)
            c = float(rng.uniform(-50.0, 50.0))
            m, b = fit_segment_regression(list(zip(x, v)))

            m_desl, b_desl = fit_segment_regression(list(zip(x, v + c)))
            assert m_desl == pytest.approx(m, rel=1e-9, abs=1e-9)
            assert b_desl == pytest.approx(b + c, rel=1e-9, abs=1e-9)

            m_esc, b_esc = fit_segment_regression(list(zip(x, v * c)))
            assert m_esc == pytest.approx(m * c, rel=1e-9, abs=1e-9)
            assert b_esc == pytest.approx(b * c, rel=1e-9, abs=1e-9)
