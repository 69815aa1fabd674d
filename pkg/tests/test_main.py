import pandas as pd
import pytest

from main import main
from scripts.ingest import serialize_event_log, serialize_flats_table

from conftest import days_between, one_event_per_day

SIMULACAO = ["--seed", "7", "--days", "60", "--sensors", "2", "--base-rate", "5",
             "--trend", "-0.5", "--interval", "15"]


def _ler(caminho):
    return pd.read_csv(caminho, dtype=str, keep_default_na=False)


@pytest.fixture
def simulado(tmp_path):
    pasta = tmp_path / "sim"
    assert main(["simulate", *SIMULACAO, "--out", str(pasta)]) == 0
    return pasta


class TestValidate:

    def test_tabelas_embutidas(self, fixture_path, tmp_path, capsys):
        errata = tmp_path / "errata.csv"
        assert main(["validate", "--assessments", str(fixture_path), "--errata", str(errata)]) == 0
        linhas = _ler(errata)
        assert len(linhas) == 5
        assert set(linhas["participant_id"]) == {"6", "9", "11", "12"}
        assert "0 violação(ões)" in capsys.readouterr().out

    def test_registro_corrompido(self, fixture_path, tmp_path, capsys):
        texto = fixture_path.read_text(encoding="utf-8").splitlines()
        campos = texto[1].split(",")
        campos[7] = "40"
        arquivo = tmp_path / "corrompido.csv"
        arquivo.write_text("\n".join([texto[0], ",".join(campos)] + texto[2:]) + "\n", encoding="utf-8")

        assert main(["validate", "--assessments", str(arquivo)]) == 1
        assert "tinetti28=40 fora da faixa [0, 28]" in capsys.readouterr().out

    def test_arquivo_vazio(self, tmp_path):
        arquivo = tmp_path / "vazio.csv"
        arquivo.write_text("")
        assert main(["validate", "--assessments", str(arquivo)]) == 2


class TestSimulate:

    def test_mesma_semente_mesmos_bytes(self, simulado, tmp_path):
        outra = tmp_path / "sim2"
        assert main(["simulate", *SIMULACAO, "--out", str(outra)]) == 0
        for nome in ("events.csv", "assessments.csv", "flats.csv", "ground_truth.csv"):
            assert (simulado / nome).read_bytes() == (outra / nome).read_bytes()

    def test_intensidade_decrescente(self, simulado):
        verdade = pd.read_csv(simulado / "ground_truth.csv")
        esperado = verdade["expected_windows"].tolist()
        assert esperado == sorted(esperado, reverse=True)
        assert esperado[0] > esperado[-1]

    def test_taxa_negativa(self, tmp_path):
        assert main(["simulate", "--base-rate", "-1", "--out", str(tmp_path / "x")]) == 2


class TestAnalyze:

    def _analisar(self, pasta, saida, *extras):
        return main(["analyze", "--events", str(pasta / "events.csv"),
                     "--assessments", str(pasta / "assessments.csv"),
                     "--flats", str(pasta / "flats.csv"), "--out", str(saida), *extras])

    def test_relatorio_da_simulacao(self, simulado, tmp_path):
        saida = tmp_path / "rel"
        assert self._analisar(simulado, saida) == 0

        correlacoes = _ler(saida / "correlations.csv")
        assert list(correlacoes.columns) == ["participant_id", "assessment", "rho", "p", "effect",
                                             "significant", "n_pairs", "reason"]
        assert list(correlacoes["assessment"]) == ["SPPB", "Tinetti13", "Tinetti28", "TUG"]
        assert list(_ler(saida / "sppb_items.csv")["assessment"]) == ["SPPB_balance", "SPPB_4m", "SPPB_5CRT"]
        for nome in ("exclusions.csv", "summary.csv", "report.txt"):
            assert (saida / nome).exists()

    def test_saida_deterministica(self, simulado, tmp_path):
        assert self._analisar(simulado, tmp_path / "a", "--regression", "global") == 0
        assert self._analisar(simulado, tmp_path / "b", "--regression", "global") == 0
        for nome in ("correlations.csv", "sppb_items.csv", "exclusions.csv", "summary.csv", "report.txt"):
            assert (tmp_path / "a" / nome).read_bytes() == (tmp_path / "b" / nome).read_bytes()

    def test_excel_opcional(self, simulado, tmp_path):
        saida = tmp_path / "xl"
        assert self._analisar(simulado, saida, "--excel") == 0
        planilha = pd.read_excel(saida / "report.xlsx", sheet_name="correlations")
        assert len(planilha) == 4

    def test_eventos_vazios(self, simulado, tmp_path, capsys):
        (simulado / "events.csv").write_text("")
        assert self._analisar(simulado, tmp_path / "rel") == 2
        assert "no events" in capsys.readouterr().err

    def test_arquivo_inexistente(self, simulado, tmp_path):
        (simulado / "flats.csv").unlink()
        assert self._analisar(simulado, tmp_path / "rel") == 2

    def test_tabelas_embutidas_com_atividade_constante(self, fixture_path, fixture_records,
                                                       fixture_flats, tmp_path):
        eventos = []
        for flat in fixture_flats:
            datas = [r.date for r in fixture_records if r.participant_id == flat.participant_id]
            eventos += one_event_per_day(flat, days_between(datas[0], datas[-1]))
        (tmp_path / "events.csv").write_text(serialize_event_log(eventos), encoding="utf-8")
        (tmp_path / "flats.csv").write_text(serialize_flats_table(fixture_flats), encoding="utf-8")
        (tmp_path / "assessments.csv").write_bytes(fixture_path.read_bytes())

        assert self._analisar(tmp_path, tmp_path / "rel") == 0
        correlacoes = _ler(tmp_path / "rel" / "correlations.csv")
        tug = correlacoes[correlacoes["assessment"] == "TUG"]
        assert (tug["rho"] == "N/A").all()
        constantes = tug[tug["reason"] == "constant score series"]["participant_id"]
        assert set(constantes) == {"1", "2", "4", "10"}

    def test_horarios_com_e_sem_fuso(self, tmp_path):
        (tmp_path / "events.csv").write_text(
            "flat_id,sensor_id,timestamp,kind\n"
            "F1,a,2014-07-07T08:00:00,motion\n"
            "F1,a,2014-07-07T09:00:00+00:00,motion\n", encoding="utf-8")
        (tmp_path / "flats.csv").write_text(
            "flat_id,participant_id,sensor_id,room,timezone_offset\n"
            "F1,1,a,kitchen,0\n", encoding="utf-8")
        (tmp_path / "assessments.csv").write_text(
            "participant_id,date,sppb_total,sppb_balance,sppb_gait4m,sppb_5crt,"
            "tinetti13,tinetti28,tug_seconds,tug_points\n"
            "1,2014-07-07,8,N/A,N/A,N/A,9,20,12.0,2\n"
            "1,2014-08-04,7,N/A,N/A,N/A,8,19,13.0,2\n", encoding="utf-8")

        assert self._analisar(tmp_path, tmp_path / "rel") == 0
        correlacoes = _ler(tmp_path / "rel" / "correlations.csv")
        assert len(correlacoes) == 4
