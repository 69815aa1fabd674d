from datetime import date, datetime
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, model_validator

from models.assessment_model import AssessmentRecord
from models.sensor_model import FlatConfig, SensorEvent


class ExclusionEntry(BaseModel):
    """Uma remoção registrada: entidade, regra aplicada e detalhe."""
    model_config = ConfigDict(frozen=True)

    entity: str
    rule: str
    detail: str = ""


class StudyDataset(BaseModel):
    """
    Modelo Pydantic para o conjunto de dados limpo após as exclusões
    """
    model_config = ConfigDict(frozen=True)

    flats: Tuple[FlatConfig, ...] = ()
    events: Dict[str, Tuple[SensorEvent, ...]] = {}
    assessments: Dict[str, Tuple[AssessmentRecord, ...]] = {}
    exclusion_log: Tuple[ExclusionEntry, ...] = ()
    eligible_days: Dict[str, Tuple[date, ...]] = {}
    multi_occupancy: Dict[str, Tuple[Tuple[datetime, datetime], ...]] = {}
    cooldown_violations: Tuple[SensorEvent, ...] = ()

    @model_validator(mode="after")
    def _consistencia(self) -> "StudyDataset":
        ids = {f.flat_id for f in self.flats}
        for flat_id in self.events:
            if flat_id not in ids:
                raise ValueError(f"eventos para apartamento desconhecido: {flat_id}")
        for participante, registros in self.assessments.items():
            for anterior, atual in zip(registros, registros[1:]):
                if atual.date <= anterior.date:
                    raise ValueError(
                        f"avaliações do participante {participante} fora de ordem: "
                        f"{anterior.date} >= {atual.date}")
        return self

    @property
    def participants(self) -> List[str]:
        return list(self.assessments)

    def flat_for_participant(self, participant_id: str) -> Optional[FlatConfig]:
        for flat in self.flats:
            if flat.participant_id == participant_id:
                return flat
        return None

    def all_events(self) -> List[SensorEvent]:
        return [e for flat in self.flats for e in self.events.get(flat.flat_id, ())]

    def all_assessments(self) -> List[AssessmentRecord]:
        return [r for registros in self.assessments.values() for r in registros]
