"""
Atividade diária a partir dos eventos de movimento.

O dia local é dividido em 10800 janelas semiabertas [8k, 8k+8) alinhadas à
meia-noite. Para cada sensor conta-se quantas janelas tiveram ao menos um
evento; o valor do dia é a soma dessas contagens dividida pelo número de
sensores instalados (inclusive os que ficaram em silêncio).
"""

from collections import defaultdict
from datetime import date, datetime, timedelta, timezone
from typing import Dict, Iterable, List, Optional, Set, Tuple

import pandas as pd

from models.sensor_model import (WINDOW_SECONDS, ActivitySeries, DailyActivity,
                                 FlatConfig, SensorEvent, SensorKind)
from utils.logger import configura_logger

logger = configura_logger(__name__, "atividade.log")


def local_time(timestamp: datetime, timezone_offset: int = 0) -> datetime:
    """Horário local do apartamento; timestamps sem fuso já são locais."""
    if timestamp.tzinfo is None:
        return timestamp
    fuso = timezone(timedelta(minutes=timezone_offset))
    return timestamp.astimezone(fuso).replace(tzinfo=None)


def window_index(timestamp: datetime, timezone_offset: int = 0) -> int:
    """Índice da janela de 8 s do dia local, em [0, 10800)."""
    local = local_time(timestamp, timezone_offset)
    segundos = local.hour * 3600 + local.minute * 60 + local.second
    return segundos // WINDOW_SECONDS


def daily_activity(events: Iterable[SensorEvent], flat: FlatConfig,
                   day: Optional[date] = None) -> DailyActivity:
    """
    Calcula a atividade de um dia de um apartamento.

    Args:
        events: eventos do apartamento em um único dia local. Eventos que não
                são de movimento são ignorados.
        flat: configuração do apartamento (define n e o fuso).
        day: dia calculado; obrigatório quando não há eventos.

    Returns:
        DailyActivity com o valor médio e as contagens de janelas por sensor.

    Raises:
        ValueError: sensor fora da configuração, apartamento diferente ou
                    eventos de dias distintos.
    """
    instalados = set(flat.motion_sensor_ids)
    ocupadas: Set[Tuple[str, int]] = set()
    dias: Set[date] = set()

    for evento in events:
        if evento.kind is not SensorKind.MOTION:
            continue
        if evento.flat_id != flat.flat_id:
            raise ValueError(
                f"evento do apartamento {evento.flat_id} passado para {flat.flat_id}")
        if evento.sensor_id not in instalados:
            raise ValueError(
                f"sensor {evento.sensor_id} não está instalado no apartamento {flat.flat_id}")
        local = local_time(evento.timestamp, flat.timezone_offset)
        dias.add(local.date())
        ocupadas.add((evento.sensor_id, window_index(local)))

    if len(dias) > 1:
        raise ValueError(f"eventos de mais de um dia: {sorted(dias)}")
    if dias:
        dia_eventos = dias.pop()
        if day is not None and day != dia_eventos:
            raise ValueError(f"eventos de {dia_eventos} passados para o dia {day}")
        day = dia_eventos
    if day is None:
        raise ValueError("sem eventos e sem dia informado")

    contagens: Dict[str, int] = {sensor: 0 for sensor in flat.motion_sensor_ids}
    for sensor_id, _ in ocupadas:
        contagens[sensor_id] += 1

    return DailyActivity(
        flat_id=flat.flat_id,
        date=day,
        value=sum(contagens.values()) / flat.n,
        per_sensor_window_counts=contagens,
    )


def events_frame(events: Iterable[SensorEvent], flat: FlatConfig) -> pd.DataFrame:
    """DataFrame de eventos de movimento com dia local e janela."""
    linhas = [
        (e.sensor_id, local_time(e.timestamp, flat.timezone_offset))
        for e in events
        if e.kind is SensorKind.MOTION and e.flat_id == flat.flat_id
    ]
    df = pd.DataFrame(linhas, columns=["sensor_id", "local"])
    if df.empty:
        return df.assign(date=pd.Series(dtype=object), window=pd.Series(dtype="int64"))

    desconhecidos = set(df["sensor_id"]) - set(flat.motion_sensor_ids)
    if desconhecidos:
        raise ValueError(
            f"sensores não instalados no apartamento {flat.flat_id}: {sorted(desconhecidos)}")

    local = pd.to_datetime(df["local"])
    segundos = local.dt.hour * 3600 + local.dt.minute * 60 + local.dt.second
    df["date"] = local.dt.date
    df["window"] = (segundos // WINDOW_SECONDS).astype("int64")
    return df


def activity_series(events: Iterable[SensorEvent], flat: FlatConfig,
                    start: date, end: date) -> ActivitySeries:
    """
    Série de atividade diária entre start e end (inclusive).

    Dias sem nenhum evento de movimento são omitidos.
    """
    if end < start:
        raise ValueError(f"intervalo de datas vazio: {start} > {end}")

    df = events_frame(events, flat)
    if df.empty:
        return ActivitySeries(flat_id=flat.flat_id)

    df = df[(df["date"] >= start) & (df["date"] <= end)]
    ocupadas = df.drop_duplicates(subset=["sensor_id", "date", "window"])
    contagens = ocupadas.groupby(["date", "sensor_id"]).size()

    pontos: List[DailyActivity] = []
    por_dia: Dict[date, Dict[str, int]] = defaultdict(dict)
    for (dia, sensor_id), contagem in contagens.items():
        por_dia[dia][sensor_id] = int(contagem)

    for dia in sorted(por_dia):
        janelas = {sensor: por_dia[dia].get(sensor, 0) for sensor in flat.motion_sensor_ids}
        pontos.append(DailyActivity(
            flat_id=flat.flat_id,
            date=dia,
            value=sum(janelas.values()) / flat.n,
            per_sensor_window_counts=janelas,
        ))

    logger.debug(f"Apartamento {flat.flat_id}: {len(pontos)} dias com atividade "
                 f"entre {start} e {end}")
    return ActivitySeries(flat_id=flat.flat_id, points=tuple(pontos))


def active_days(events: Iterable[SensorEvent], flat: FlatConfig) -> List[date]:
    """Dias locais com pelo menos um evento de movimento."""
    df = events_frame(events, flat)
    if df.empty:
        return []
    return sorted(set(df["date"]))
