"""
Gerador sintético de apartamentos, eventos de sensores e avaliações.

Cada janela de 8 s de cada sensor dispara de forma independente com
probabilidade p(dia) = clamp(base_rate * (1 + trend * dia / 30) / 450, 0, 1).
No máximo um evento por janela, no início dela, então o resfriamento de 8 s
vale por construção. Os escores seguem a intensidade média de cada intervalo
entre visitas por um elo monótono.

Os fluxos aleatórios são PCG64 (numpy.random.default_rng) semeados por
SeedSequence(seed, spawn_key=(apartamento, fluxo)): 0 eventos, 1 escores,
2 visitas. O mesmo seed gera sempre os mesmos arquivos.
"""

from concurrent.futures import ThreadPoolExecutor
from datetime import date, datetime, time, timedelta
from typing import Dict, List, NamedTuple, Optional

import numpy as np
import pandas as pd

from models.assessment_model import AssessmentRecord
from models.configuracao_model import SimConfig
from models.sensor_model import (WINDOW_SECONDS, WINDOWS_PER_DAY, FlatConfig, SensorEvent,
                                 SensorKind)
from scripts.assessment_scoring import tug_points
from utils.configs import settings
from utils.logger import configura_logger

logger = configura_logger(__name__, "simulador.log")

ROOMS = ("living_room", "kitchen", "bedroom", "bathroom", "hallway")
DOOR_SENSOR = "door"

_FLUXO_EVENTOS = 0
_FLUXO_ESCORES = 1
_FLUXO_VISITAS = 2


class SimulatedFlat(NamedTuple):
    flat: FlatConfig
    events: List[SensorEvent]
    # Janelas ativas esperadas por sensor em cada dia (10800 * p)
    intensity: Dict[date, float]
    window_counts: Dict[date, Dict[str, int]]


class SimulatedStudy(NamedTuple):
    flats: List[FlatConfig]
    events: List[SensorEvent]
    assessments: List[AssessmentRecord]
    ground_truth: pd.DataFrame


def _rng(config: SimConfig, indice: int, fluxo: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(config.seed, spawn_key=(indice, fluxo)))


def relative_rate(config: SimConfig, dia: int) -> float:
    return max(0.0, 1.0 + config.trend * dia / 30.0)


def window_probability(config: SimConfig, dia: int) -> float:
    return min(1.0, max(0.0, config.base_probability * relative_rate(config, dia)))


def _flat_config(config: SimConfig, indice: int) -> FlatConfig:
    sensores = tuple(f"pir{i + 1}" for i in range(config.n_sensors))
    return FlatConfig(
        flat_id=f"flat{indice + 1}",
        motion_sensor_ids=sensores,
        timezone_offset=config.timezone_offset,
        participant_id=str(indice + 1),
        sensor_rooms={s: ROOMS[i % len(ROOMS)] for i, s in enumerate(sensores)},
    )


def _visitas(config: SimConfig, flat: FlatConfig, indice: int) -> List[SensorEvent]:
    """Pares de teclas entrada/saída de visitante, dentro do mesmo dia."""
    if config.visitor_rate == 0:
        return []
    rng = _rng(config, indice, _FLUXO_VISITAS)
    eventos: List[SensorEvent] = []
    for dia in range(config.study_days):
        meia_noite = datetime.combine(config.start_date + timedelta(days=dia), time())
        for _ in range(int(rng.poisson(config.visitor_rate))):
            entrada = int(rng.integers(8 * 3600, 20 * 3600))
            saida = min(entrada + int(rng.integers(30 * 60, 120 * 60)), 86399)
            for segundo, tecla in ((entrada, 1), (saida, 2)):
                eventos.append(SensorEvent.model_construct(
                    flat_id=flat.flat_id, sensor_id=DOOR_SENSOR,
                    timestamp=meia_noite + timedelta(seconds=segundo),
                    kind=SensorKind.OCCUPANCY_SWITCH, key=tecla, line=None))
    return eventos


def simulate_flat(config: SimConfig, index: int = 0) -> SimulatedFlat:
    """
    Gera o apartamento `index`, seus eventos e a intensidade verdadeira por dia.

    Raises:
        pydantic.ValidationError: taxa fora de [0, 450] (na construção do SimConfig).
    """
    flat = _flat_config(config, index)
    rng = _rng(config, index, _FLUXO_EVENTOS)
    passos = [timedelta(seconds=w * WINDOW_SECONDS) for w in range(WINDOWS_PER_DAY)]

    eventos: List[SensorEvent] = []
    intensidade: Dict[date, float] = {}
    contagens: Dict[date, Dict[str, int]] = {}
    for dia in range(config.study_days):
        data = config.start_date + timedelta(days=dia)
        p = window_probability(config, dia)
        intensidade[data] = WINDOWS_PER_DAY * p
        if p == 0.0:
            contagens[data] = {s: 0 for s in flat.motion_sensor_ids}
            continue

        disparos = rng.random((flat.n, WINDOWS_PER_DAY)) < p
        contagens[data] = {s: int(c) for s, c in zip(flat.motion_sensor_ids, disparos.sum(axis=1))}
        meia_noite = datetime.combine(data, time())
        for i, w in zip(*np.nonzero(disparos)):
            eventos.append(SensorEvent.model_construct(
                flat_id=flat.flat_id, sensor_id=flat.motion_sensor_ids[i],
                timestamp=meia_noite + passos[w], kind=SensorKind.MOTION, key=None, line=None))

    eventos.extend(_visitas(config, flat, index))
    eventos.sort(key=lambda e: (e.timestamp, e.sensor_id))
    logger.info(f"Apartamento {flat.flat_id}: {len(eventos)} evento(s) em {config.study_days} dias")
    return SimulatedFlat(flat, eventos, intensidade, contagens)


def _limita(valor: int, minimo: int, maximo: int) -> int:
    return max(minimo, min(maximo, valor))


def simulate_assessments(intensity: Dict[date, float], config: SimConfig,
                         participant_id: str = "1", index: int = 0) -> List[AssessmentRecord]:
    """
    Uma visita a cada `assessment_interval_days` dias a partir do primeiro dia.

    O escore da visita k vem da intensidade relativa média r em
    [d_k, d_k + intervalo): cada item do SPPB = 3 + coupling * (r - 1) * 4,
    Tinetti13 = 10 + coupling * (r - 1) * 13, Tinetti28 = 22 + coupling * (r - 1) * 28,
    TUG = 12 - coupling * (r - 1) * 20 segundos. Depois vêm o ruído inteiro
    em [-score_noise, score_noise] e o corte na faixa de cada escala.
    """
    dias = sorted(intensity)
    rng = _rng(config, index, _FLUXO_ESCORES)
    nominal = WINDOWS_PER_DAY * config.base_probability

    def ruido() -> int:
        if config.score_noise == 0:
            return 0
        return int(rng.integers(-config.score_noise, config.score_noise + 1))

    registros: List[AssessmentRecord] = []
    for inicio in range(0, len(dias), config.assessment_interval_days):
        bloco = [intensity[d] for d in dias[inicio:inicio + config.assessment_interval_days]]
        relativo = float(np.mean(bloco)) / nominal if nominal > 0 else 1.0
        elo = config.coupling * (relativo - 1.0)

        itens = [_limita(round(3 + elo * 4) + ruido(), 0, 4) for _ in range(3)]
        tinetti13 = _limita(round(10 + elo * 13) + ruido(), 0, 13)
        tinetti28 = max(_limita(round(22 + elo * 28) + ruido(), 0, 28), tinetti13)
        segundos = max(1.0, round(12.0 - elo * 20.0 + ruido(), 1))

        registros.append(AssessmentRecord(
            participant_id=participant_id,
            date=dias[inicio],
            sppb_total=sum(itens),
            sppb_balance=itens[0],
            sppb_gait4m=itens[1],
            sppb_5crt=itens[2],
            tinetti13=tinetti13,
            tinetti28=tinetti28,
            tug_seconds=segundos,
            tug_points=tug_points(segundos),
        ))
    return registros


def ground_truth_frame(simulado: SimulatedFlat) -> pd.DataFrame:
    """Intensidade esperada e contagem observada (média por sensor) por dia."""
    flat = simulado.flat
    linhas = [
        (flat.flat_id, dia.isoformat(), esperado / WINDOWS_PER_DAY, esperado,
         sum(simulado.window_counts[dia].values()) / flat.n)
        for dia, esperado in simulado.intensity.items()
    ]
    return pd.DataFrame(linhas, columns=["flat_id", "date", "probability",
                                         "expected_windows", "observed_windows"])


def simulate_cohort(config: SimConfig, max_workers: Optional[int] = None) -> SimulatedStudy:
    """
    Gera `config.n_flats` apartamentos, cada um com o próprio fluxo aleatório.
    A concorrência não altera o resultado: a ordem é a dos índices.
    """
    def _um(indice: int):
        simulado = simulate_flat(config, indice)
        avaliacoes = simulate_assessments(simulado.intensity, config,
                                          simulado.flat.participant_id, indice)
        return simulado, avaliacoes

    with ThreadPoolExecutor(max_workers=max_workers or settings.MAX_WORKERS) as executor:
        saidas = list(executor.map(_um, range(config.n_flats)))

    return SimulatedStudy(
        flats=[s.flat for s, _ in saidas],
        events=[e for s, _ in saidas for e in s.events],
        assessments=[r for _, avaliacoes in saidas for r in avaliacoes],
        ground_truth=pd.concat([ground_truth_frame(s) for s, _ in saidas], ignore_index=True),
    )
