"""
Leitura dos arquivos do estudo e aplicação das regras de exclusão.

Formatos (UTF-8, separados por vírgula):

    eventos:     flat_id,sensor_id,timestamp,kind[,key]
    avaliações:  participant_id,date,sppb_total,sppb_balance,sppb_gait4m,sppb_5crt,
                 tinetti13,tinetti28,tug_seconds,tug_points   (N/A = ausente)
    apartamentos: flat_id,participant_id,sensor_id,room,timezone_offset

Linhas malformadas derrubam o arquivo inteiro; o erro aponta linha e campo.
"""

import calendar
import io
import os
import re
from collections import defaultdict
from datetime import date, datetime, timedelta
from typing import (BinaryIO, Dict, Iterable, List, NamedTuple, Optional,
                    Sequence, Tuple, Union)

import pandas as pd

from models.assessment_model import AssessmentRecord, participant_key
from models.configuracao_model import (DEFAULT_KEY_MAP, ExclusionConfig,
                                       OccupancyAction)
from models.sensor_model import WINDOW_SECONDS, FlatConfig, SensorEvent, SensorKind
from models.study_model import ExclusionEntry, StudyDataset
from scripts.activity_features import active_days, local_time
from utils.erros import ErroDeEntrada
from utils.logger import configura_logger

logger = configura_logger(__name__, "ingest.log")

Fonte = Union[bytes, str, os.PathLike, BinaryIO]

EVENT_COLUMNS = ["flat_id", "sensor_id", "timestamp", "kind"]
EVENT_OPTIONAL_COLUMNS = ["key"]
ASSESSMENT_COLUMNS = ["participant_id", "date", "sppb_total", "sppb_balance",
                      "sppb_gait4m", "sppb_5crt", "tinetti13", "tinetti28",
                      "tug_seconds", "tug_points"]
FLAT_COLUMNS = ["flat_id", "participant_id", "sensor_id", "room", "timezone_offset"]
INTEGER_SCORE_COLUMNS = ["sppb_total", "sppb_balance", "sppb_gait4m", "sppb_5crt",
                         "tinetti13", "tinetti28", "tug_points"]
MISSING = "N/A"

_ISO = re.compile(r"^(\d{4})-(\d{2})-(\d{2})(?:[T ](\d{2}):(\d{2})(?::(\d{2}))?)?")


def _ler_texto(fonte: Fonte) -> str:
    if isinstance(fonte, bytes):
        dados = fonte
    elif isinstance(fonte, (str, os.PathLike)):
        with open(fonte, "rb") as arquivo:
            dados = arquivo.read()
    else:
        dados = fonte.read()
    if isinstance(dados, str):
        return dados
    try:
        return dados.decode("utf-8-sig")
    except UnicodeDecodeError as e:
        raise ErroDeEntrada(f"arquivo não está em UTF-8: {e}") from e


def _ler_tabela(fonte: Fonte, obrigatorias: Sequence[str],
                opcionais: Sequence[str] = ()) -> pd.DataFrame:
    """Lê o CSV como texto puro e confere o cabeçalho."""
    texto = _ler_texto(fonte)
    if not texto.strip():
        raise ErroDeEntrada("arquivo vazio")
    try:
        df = pd.read_csv(io.StringIO(texto), dtype=str, keep_default_na=False)
    except pd.errors.ParserError as e:
        raise ErroDeEntrada(f"CSV malformado: {e}") from e

    colunas = [c.strip() for c in df.columns]
    df.columns = colunas
    faltando = [c for c in obrigatorias if c not in colunas]
    if faltando:
        raise ErroDeEntrada(f"colunas ausentes no cabeçalho: {', '.join(faltando)}", linha=1)
    extras = [c for c in colunas if c not in obrigatorias and c not in opcionais]
    if extras:
        raise ErroDeEntrada(f"colunas desconhecidas no cabeçalho: {', '.join(extras)}", linha=1)
    for coluna in colunas:
        # linhas curtas chegam como NaN nas últimas colunas
        df[coluna] = df[coluna].fillna("").astype(str).str.strip()
    return df


def _campo_invalido(valor: str) -> Optional[str]:
    """Primeiro componente fora da faixa em um timestamp ISO bem formado."""
    partes = _ISO.match(valor)
    if partes is None:
        return None
    ano, mes, dia, hora, minuto, segundo = (int(p) if p else 0 for p in partes.groups())
    if not 1 <= mes <= 12:
        return "month"
    if not 1 <= dia <= calendar.monthrange(ano, mes)[1]:
        return "day"
    if hora > 23:
        return "hour"
    if minuto > 59:
        return "minute"
    if segundo > 59:
        return "second"
    return None


def _timestamp(valor: str, linha: int) -> datetime:
    try:
        return datetime.fromisoformat(valor)
    except ValueError as e:
        campo = _campo_invalido(valor)
        if campo:
            raise ErroDeEntrada(f"invalid {campo}", linha=linha, campo="timestamp") from e
        raise ErroDeEntrada(f"invalid timestamp '{valor}'", linha=linha, campo="timestamp") from e


def _obrigatorio(valor: str, linha: int, campo: str) -> str:
    if not valor:
        raise ErroDeEntrada("campo vazio", linha=linha, campo=campo)
    return valor


def parse_event_log(fonte: Fonte) -> List[SensorEvent]:
    """
    Converte o log de eventos em SensorEvent, na ordem de entrada.

    Um arquivo só com cabeçalho devolve lista vazia.

    Raises:
        ErroDeEntrada: linha malformada (com número da linha e campo) ou
                       tipo desconhecido (com a lista de tipos aceitos).
    """
    df = _ler_tabela(fonte, EVENT_COLUMNS, EVENT_OPTIONAL_COLUMNS)
    tem_tecla = "key" in df.columns
    permitidos = [k.value for k in SensorKind]

    eventos: List[SensorEvent] = []
    for posicao, linha_df in enumerate(df.itertuples(index=False)):
        linha = posicao + 2
        flat_id = _obrigatorio(linha_df.flat_id, linha, "flat_id")
        sensor_id = _obrigatorio(linha_df.sensor_id, linha, "sensor_id")
        instante = _timestamp(_obrigatorio(linha_df.timestamp, linha, "timestamp"), linha)

        try:
            tipo = SensorKind(linha_df.kind)
        except ValueError:
            raise ErroDeEntrada(
                f"unknown kind '{linha_df.kind}'; allowed: {', '.join(permitidos)}",
                linha=linha, campo="kind") from None

        tecla: Optional[int] = None
        texto_tecla = linha_df.key if tem_tecla else ""
        if tipo is SensorKind.OCCUPANCY_SWITCH:
            if not texto_tecla.isdigit() or not 1 <= int(texto_tecla) <= 4:
                raise ErroDeEntrada(f"tecla inválida '{texto_tecla}' (esperado 1-4)",
                                    linha=linha, campo="key")
            tecla = int(texto_tecla)
        elif texto_tecla:
            raise ErroDeEntrada("tecla só é válida para occupancy_switch",
                                linha=linha, campo="key")

        eventos.append(SensorEvent.model_construct(
            flat_id=flat_id, sensor_id=sensor_id, timestamp=instante,
            kind=tipo, key=tecla, line=linha))

    logger.info(f"Log de eventos lido: {len(eventos)} evento(s)")
    return eventos


def _inteiro(valor: str, linha: int, campo: str) -> Optional[int]:
    if valor in (MISSING, ""):
        return None
    try:
        return int(valor)
    except ValueError:
        raise ErroDeEntrada(f"non-integer points '{valor}'", linha=linha, campo=campo) from None


def _segundos(valor: str, linha: int) -> Optional[float]:
    if valor in (MISSING, ""):
        return None
    try:
        segundos = float(valor)
    except ValueError:
        raise ErroDeEntrada(f"invalid seconds '{valor}'", linha=linha, campo="tug_seconds") from None
    if not segundos > 0:
        raise ErroDeEntrada(f"non-positive seconds '{valor}'", linha=linha, campo="tug_seconds")
    return segundos


def parse_assessment_table(fonte: Fonte) -> List[AssessmentRecord]:
    """
    Converte a tabela de avaliações em AssessmentRecord ordenados por
    (participante, data). Células N/A viram None.

    Raises:
        ErroDeEntrada: pontos não inteiros, segundos não positivos, data
                       inválida ou visita repetida para o mesmo participante.
    """
    df = _ler_tabela(fonte, ASSESSMENT_COLUMNS)

    registros: List[AssessmentRecord] = []
    vistos: Dict[Tuple[str, date], int] = {}
    for posicao, linha_df in enumerate(df.itertuples(index=False)):
        linha = posicao + 2
        participante = _obrigatorio(linha_df.participant_id, linha, "participant_id")
        try:
            dia = date.fromisoformat(_obrigatorio(linha_df.date, linha, "date"))
        except ValueError:
            raise ErroDeEntrada(f"invalid date '{linha_df.date}'", linha=linha, campo="date") from None

        chave = (participante, dia)
        if chave in vistos:
            raise ErroDeEntrada(
                f"visita repetida para o participante {participante} em {dia} "
                f"(já na linha {vistos[chave]})", linha=linha, campo="date")
        vistos[chave] = linha

        pontos = {campo: _inteiro(getattr(linha_df, campo), linha, campo)
                  for campo in INTEGER_SCORE_COLUMNS}
        registros.append(AssessmentRecord(
            participant_id=participante, date=dia,
            tug_seconds=_segundos(linha_df.tug_seconds, linha), **pontos))

    registros.sort(key=lambda r: (participant_key(r.participant_id), r.date))
    logger.info(f"Tabela de avaliações lida: {len(registros)} registro(s)")
    return registros


def parse_flats_table(fonte: Fonte) -> List[FlatConfig]:
    """
    Converte a tabela de apartamentos (uma linha por sensor de movimento)
    em FlatConfig, na ordem em que cada apartamento aparece.
    """
    df = _ler_tabela(fonte, FLAT_COLUMNS)
    por_apartamento: Dict[str, dict] = {}

    for posicao, linha_df in enumerate(df.itertuples(index=False)):
        linha = posicao + 2
        flat_id = _obrigatorio(linha_df.flat_id, linha, "flat_id")
        sensor_id = _obrigatorio(linha_df.sensor_id, linha, "sensor_id")
        try:
            fuso = int(linha_df.timezone_offset or 0)
        except ValueError:
            raise ErroDeEntrada(f"invalid offset '{linha_df.timezone_offset}'",
                                linha=linha, campo="timezone_offset") from None

        dados = por_apartamento.setdefault(flat_id, {
            "participant_id": linha_df.participant_id or None,
            "timezone_offset": fuso, "sensores": [], "comodos": {}})
        if dados["timezone_offset"] != fuso:
            raise ErroDeEntrada(f"fuso diferente para o mesmo apartamento {flat_id}",
                                linha=linha, campo="timezone_offset")
        if (linha_df.participant_id or None) != dados["participant_id"]:
            raise ErroDeEntrada(f"participante diferente para o mesmo apartamento {flat_id}",
                                linha=linha, campo="participant_id")
        if sensor_id in dados["sensores"]:
            raise ErroDeEntrada(f"sensor repetido {sensor_id}", linha=linha, campo="sensor_id")
        dados["sensores"].append(sensor_id)
        if linha_df.room:
            dados["comodos"][sensor_id] = linha_df.room

    return [
        FlatConfig(flat_id=flat_id, motion_sensor_ids=tuple(dados["sensores"]),
                   timezone_offset=dados["timezone_offset"],
                   participant_id=dados["participant_id"], sensor_rooms=dados["comodos"])
        for flat_id, dados in por_apartamento.items()
    ]


def _csv(df: pd.DataFrame) -> str:
    return df.to_csv(index=False, lineterminator="\n")


def serialize_event_log(events: Iterable[SensorEvent]) -> str:
    linhas = [(e.flat_id, e.sensor_id, e.timestamp.isoformat(), e.kind.value,
               "" if e.key is None else str(e.key)) for e in events]
    return _csv(pd.DataFrame(linhas, columns=EVENT_COLUMNS + EVENT_OPTIONAL_COLUMNS))


def _celula(valor) -> str:
    return MISSING if valor is None else str(valor)


def serialize_assessment_table(records: Iterable[AssessmentRecord]) -> str:
    linhas = [[r.participant_id, r.date.isoformat()] +
              [_celula(getattr(r, campo)) for campo in ASSESSMENT_COLUMNS[2:]]
              for r in records]
    return _csv(pd.DataFrame(linhas, columns=ASSESSMENT_COLUMNS))


def serialize_flats_table(flats: Iterable[FlatConfig]) -> str:
    linhas = [(f.flat_id, f.participant_id or "", sensor, f.sensor_rooms.get(sensor, ""),
               str(f.timezone_offset))
              for f in flats for sensor in f.motion_sensor_ids]
    return _csv(pd.DataFrame(linhas, columns=FLAT_COLUMNS))


class OccupancyScan(NamedTuple):
    intervals: List[Tuple[datetime, datetime]]
    warnings: List[str]


def scan_occupancy(events: Sequence[SensorEvent],
                   key_map: Optional[Dict[int, OccupancyAction]] = None) -> OccupancyScan:
    """
    Varre as teclas do interruptor da porta e devolve os intervalos máximos
    com mais de uma pessoa no apartamento. Teclas sem par geram aviso, não erro.
    """
    key_map = key_map or DEFAULT_KEY_MAP
    teclas = sorted((e for e in events if e.kind is SensorKind.OCCUPANCY_SWITCH),
                    key=lambda e: e.timestamp)
    intervalos: List[Tuple[datetime, datetime]] = []
    avisos: List[str] = []
    if not teclas:
        return OccupancyScan(intervalos, avisos)

    residente, visitantes = 1, 0
    inicio: Optional[datetime] = None
    for evento in teclas:
        acao = key_map.get(evento.key)
        if acao is OccupancyAction.ENTER_VISITOR:
            visitantes += 1
        elif acao is OccupancyAction.LEAVE_VISITOR:
            if visitantes == 0:
                avisos.append(f"{evento.timestamp.isoformat()}: saída de visitante sem entrada")
            else:
                visitantes -= 1
        elif acao is OccupancyAction.RESIDENT_OUT:
            if residente == 0:
                avisos.append(f"{evento.timestamp.isoformat()}: saída do morador já ausente")
            residente = 0
        elif acao is OccupancyAction.RESIDENT_HOME:
            residente, visitantes = 1, 0
        else:
            avisos.append(f"{evento.timestamp.isoformat()}: tecla {evento.key} sem significado")
            continue

        pessoas = residente + visitantes
        if pessoas > 1 and inicio is None:
            inicio = evento.timestamp
        elif pessoas <= 1 and inicio is not None:
            intervalos.append((inicio, evento.timestamp))
            inicio = None

    if inicio is not None:
        fim = max(e.timestamp for e in events)
        intervalos.append((inicio, fim))
        avisos.append(f"{inicio.isoformat()}: entrada sem saída; intervalo fechado em {fim.isoformat()}")

    for aviso in avisos:
        logger.warning(f"Interruptor de ocupação: {aviso}")
    return OccupancyScan(intervalos, avisos)


def occupancy_intervals(events: Sequence[SensorEvent],
                        key_map: Optional[Dict[int, OccupancyAction]] = None
                        ) -> List[Tuple[datetime, datetime]]:
    return scan_occupancy(events, key_map).intervals


def cooldown_violations(events: Iterable[SensorEvent]) -> List[SensorEvent]:
    """Eventos de movimento a menos de 8 s do anterior do mesmo sensor."""
    por_sensor: Dict[Tuple[str, str], List[SensorEvent]] = defaultdict(list)
    for evento in events:
        if evento.kind is SensorKind.MOTION:
            por_sensor[(evento.flat_id, evento.sensor_id)].append(evento)

    limite = timedelta(seconds=WINDOW_SECONDS)
    violacoes: List[SensorEvent] = []
    for chave in sorted(por_sensor):
        serie = sorted(por_sensor[chave], key=lambda e: e.timestamp)
        for anterior, atual in zip(serie, serie[1:]):
            if atual.timestamp - anterior.timestamp < limite:
                violacoes.append(atual)
    return violacoes


def _dias(inicio: date, fim: date) -> List[date]:
    return [inicio + timedelta(days=k) for k in range((fim - inicio).days + 1)]


def _dentro(instante: datetime, intervalos: Sequence[Tuple[datetime, datetime]]) -> bool:
    return any(inicio <= instante <= fim for inicio, fim in intervalos)


def apply_exclusions(events: Sequence[SensorEvent],
                     assessments: Sequence[AssessmentRecord],
                     flats: Sequence[FlatConfig],
                     config: Optional[ExclusionConfig] = None,
                     exclusion_log: Sequence[ExclusionEntry] = ()) -> StudyDataset:
    """
    Monta o StudyDataset limpo.

    Remove dos dias elegíveis os dias sem eventos de movimento, exclui
    participantes sem cobertura mínima ou sem sensores nos cômodos exigidos e,
    se configurado, descarta eventos de movimento em intervalos com mais de
    uma pessoa. Cada remoção entra no exclusion_log com o nome da regra.

    `exclusion_log` permite reaplicar as regras sobre a saída anterior: as
    entradas já registradas não se repetem.

    Raises:
        ErroDeEntrada: evento de um apartamento ausente da lista de apartamentos,
                       ou visitas repetidas de um participante.
    """
    config = config or ExclusionConfig()
    apartamentos = {f.flat_id: f for f in flats}

    eventos_por_apto: Dict[str, List[SensorEvent]] = {f.flat_id: [] for f in flats}
    for evento in events:
        if evento.flat_id not in apartamentos:
            raise ErroDeEntrada(
                f"flat {evento.flat_id} referenced by events but absent from flats",
                linha=evento.line, campo="flat_id")
        if evento.timestamp.tzinfo is not None:
            # horário com fuso vira horário local do apartamento
            local = local_time(evento.timestamp, apartamentos[evento.flat_id].timezone_offset)
            evento = evento.model_copy(update={"timestamp": local})
        eventos_por_apto[evento.flat_id].append(evento)

    avaliacoes: Dict[str, List[AssessmentRecord]] = defaultdict(list)
    for registro in assessments:
        avaliacoes[registro.participant_id].append(registro)
    for participante, registros in avaliacoes.items():
        registros.sort(key=lambda r: r.date)
        for anterior, atual in zip(registros, registros[1:]):
            if anterior.date == atual.date:
                raise ErroDeEntrada(
                    f"visita repetida para o participante {participante} em {atual.date}")

    novas: List[ExclusionEntry] = []
    multi_ocupacao: Dict[str, Tuple[Tuple[datetime, datetime], ...]] = {}
    for flat_id, lista in eventos_por_apto.items():
        intervalos = scan_occupancy(lista, config.occupancy_keys).intervals
        multi_ocupacao[flat_id] = tuple(intervalos)
        if not (config.drop_multi_occupancy_intervals and intervalos):
            continue
        mantidos = [e for e in lista
                    if e.kind is not SensorKind.MOTION or not _dentro(e.timestamp, intervalos)]
        logger.info(f"Apartamento {flat_id}: {len(lista) - len(mantidos)} evento(s) "
                    f"descartados em {len(intervalos)} intervalo(s) com visitas")
        eventos_por_apto[flat_id] = mantidos
        for inicio, fim in intervalos:
            novas.append(ExclusionEntry(
                entity=f"flat {flat_id} {inicio.isoformat()}/{fim.isoformat()}",
                rule="multi_occupancy",
                detail="eventos de movimento com mais de uma pessoa no apartamento"))

    ativos: Dict[str, List[date]] = {}
    periodo: Dict[str, Optional[Tuple[date, date]]] = {}
    for flat_id, flat in apartamentos.items():
        dias_ativos = active_days(eventos_por_apto[flat_id], flat)
        registros = avaliacoes.get(flat.participant_id or "", [])
        if registros:
            periodo[flat_id] = (registros[0].date, registros[-1].date)
        elif dias_ativos:
            periodo[flat_id] = (dias_ativos[0], dias_ativos[-1])
        else:
            periodo[flat_id] = None
        ativos[flat_id] = dias_ativos

    excluidos: set = set()
    for participante in sorted(avaliacoes, key=participant_key):
        flat = next((f for f in flats if f.participant_id == participante), None)
        registros = avaliacoes[participante]
        dias_estudo = _dias(registros[0].date, registros[-1].date)
        cobertos = 0
        if flat is not None:
            conjunto = set(ativos[flat.flat_id])
            cobertos = sum(1 for d in dias_estudo if d in conjunto)
        cobertura = cobertos / len(dias_estudo)
        if cobertura < config.min_participant_coverage:
            excluidos.add(participante)
            novas.append(ExclusionEntry(
                entity=f"participant {participante}", rule="coverage",
                detail=f"{cobertos}/{len(dias_estudo)} dias com atividade "
                       f"(mínimo {config.min_participant_coverage:.2f})"))
            continue
        if config.required_sensor_rooms:
            comodos = flat.rooms if flat is not None else frozenset()
            faltando = sorted(config.required_sensor_rooms - comodos)
            if faltando:
                excluidos.add(participante)
                novas.append(ExclusionEntry(
                    entity=f"participant {participante}", rule="required_rooms",
                    detail=f"sem sensores em: {', '.join(faltando)}"))

    flats_mantidos = [f for f in flats if f.participant_id not in excluidos]
    elegiveis: Dict[str, Tuple[date, ...]] = {}
    for flat in flats_mantidos:
        span = periodo[flat.flat_id]
        if span is None:
            elegiveis[flat.flat_id] = ()
            continue
        conjunto = set(ativos[flat.flat_id])
        todos = _dias(*span)
        if config.exclude_zero_event_days:
            elegiveis[flat.flat_id] = tuple(d for d in todos if d in conjunto)
            for dia in todos:
                if dia not in conjunto:
                    novas.append(ExclusionEntry(
                        entity=f"flat {flat.flat_id} {dia.isoformat()}", rule="zero_event_day",
                        detail="nenhum evento de movimento no dia"))
        else:
            elegiveis[flat.flat_id] = tuple(todos)

    log = list(exclusion_log)
    registradas = set(log)
    for entrada in novas:
        if entrada not in registradas:
            log.append(entrada)
            registradas.add(entrada)

    mantidos_ids = {f.flat_id for f in flats_mantidos}
    violacoes = cooldown_violations(
        e for flat in flats_mantidos for e in eventos_por_apto[flat.flat_id])
    if violacoes:
        logger.warning(f"{len(violacoes)} evento(s) de movimento dentro do resfriamento de "
                       f"{WINDOW_SECONDS} s")

    dataset = StudyDataset(
        flats=tuple(flats_mantidos),
        events={flat_id: tuple(lista) for flat_id, lista in eventos_por_apto.items()
                if flat_id in mantidos_ids},
        assessments={p: tuple(avaliacoes[p]) for p in sorted(avaliacoes, key=participant_key)
                     if p not in excluidos},
        exclusion_log=tuple(log),
        eligible_days=elegiveis,
        multi_occupancy={k: v for k, v in multi_ocupacao.items() if k in mantidos_ids},
        cooldown_violations=tuple(violacoes),
    )
    logger.info(f"Exclusões aplicadas: {len(dataset.flats)} apartamento(s), "
                f"{len(dataset.assessments)} participante(s), {len(novas)} remoção(ões)")
    return dataset
