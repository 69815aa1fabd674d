from datetime import date

import pytest
from pydantic import ValidationError

from models.assessment_model import (AssessmentName, AssessmentRecord, participant_key,
                                     validate_record)


def _registro(**campos) -> AssessmentRecord:
    return AssessmentRecord(participant_id="1", date=date(2014, 7, 7), **campos)


def test_registro_maximo_valido():
    registro = _registro(sppb_total=12, sppb_balance=4, sppb_gait4m=4, sppb_5crt=4)
    assert validate_record(registro) == []


def test_tinetti_no_topo_das_escalas():
    assert validate_record(_registro(tinetti13=13, tinetti28=28)) == []


def test_tinetti28_menor_que_tinetti13():
    violacoes = validate_record(_registro(tinetti13=13, tinetti28=12))
    assert len(violacoes) == 1
    assert violacoes[0].startswith("tinetti28 < tinetti13")


def test_registro_sem_nenhum_escore():
    registro = _registro()
    assert registro.all_missing
    assert validate_record(registro) == []


def test_violacao_nomeia_campo_valor_e_faixa():
    assert validate_record(_registro(sppb_total=13)) == ["sppb_total=13 fora da faixa [0, 12]"]
    assert validate_record(_registro(tug_points=4)) == ["tug_points=4 fora da faixa [1, 3]"]


def test_total_do_sppb_difere_da_soma_dos_itens():
    violacoes = validate_record(_registro(sppb_total=10, sppb_balance=4, sppb_gait4m=4, sppb_5crt=4))
    assert violacoes == ["sppb_total=10 difere da soma dos itens (12)"]


def test_itens_parciais_nao_checam_soma():
    assert validate_record(_registro(sppb_total=10, sppb_balance=4)) == []


def test_tug_em_segundos_precisa_ser_positivo():
    with pytest.raises(ValidationError):
        _registro(tug_seconds=0.0)


def test_tug_correlaciona_pelos_pontos():
    registro = _registro(tug_seconds=21.7, tug_points=3)
    assert AssessmentName.TUG.field == "tug_points"
    assert registro.score(AssessmentName.TUG) == 3


def test_ordem_numerica_dos_participantes():
    assert sorted(["10", "2", "b", "1", "a"], key=participant_key) == ["1", "2", "10", "a", "b"]
