import os
from datetime import date, datetime, timedelta
from pathlib import Path
from typing import Iterable, List

import pytest

# Sem arquivos de log durante os testes
os.environ.setdefault("LOG_DIR", "")

from models.assessment_model import AssessmentRecord  # noqa: E402
from models.sensor_model import FlatConfig, SensorEvent, SensorKind  # noqa: E402
from scripts.ingest import parse_assessment_table  # noqa: E402
from utils.configs import settings  # noqa: E402

FIXTURE_PATH = Path(__file__).resolve().parent.parent / settings.DIR_BASE / settings.FIXTURE_ASSESSMENTS


def motion(flat_id: str, sensor_id: str, instante: datetime) -> SensorEvent:
    return SensorEvent(flat_id=flat_id, sensor_id=sensor_id, timestamp=instante,
                       kind=SensorKind.MOTION)


def one_event_per_day(flat: FlatConfig, dias: Iterable[date], hora: int = 10) -> List[SensorEvent]:
    """Um evento por sensor por dia, sempre no mesmo horário: atividade constante 1.0."""
    return [motion(flat.flat_id, sensor, datetime.combine(dia, datetime.min.time()) + timedelta(hours=hora))
            for dia in dias for sensor in flat.motion_sensor_ids]


def days_between(inicio: date, fim: date) -> List[date]:
    return [inicio + timedelta(days=k) for k in range((fim - inicio).days + 1)]


@pytest.fixture(scope="session")
def fixture_path() -> Path:
    return FIXTURE_PATH


@pytest.fixture(scope="session")
def fixture_records() -> List[AssessmentRecord]:
    return parse_assessment_table(FIXTURE_PATH)


@pytest.fixture
def flat() -> FlatConfig:
    return FlatConfig(flat_id="F1", motion_sensor_ids=("a", "b"), participant_id="1",
                      sensor_rooms={"a": "kitchen", "b": "bedroom"})


@pytest.fixture
def fixture_flats() -> List[FlatConfig]:
    """Um apartamento de um sensor para cada participante das tabelas."""
    return [FlatConfig(flat_id=f"F{p}", motion_sensor_ids=("pir",), participant_id=str(p))
            for p in range(1, 13)]
