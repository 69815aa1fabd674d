"""
mobilitycorr: correlação entre a atividade dos sensores de movimento e as
avaliações geriátricas de mobilidade.

    python main.py analyze --events E.csv --assessments A.csv --flats F.csv --out DIR
    python main.py simulate --seed 7 --days 300 --sensors 5 --out DIR
    python main.py validate --assessments A.csv [--errata ERRATA.csv]

Códigos de saída: 0 sucesso, 1 violações encontradas pelo validate,
2 erro de uso ou de entrada. MOBILITYCORR_LOG controla o nível de log.
"""

import argparse
import os
import sys
from typing import List, Optional, Sequence

from pydantic import ValidationError

from models.configuracao_model import ExclusionConfig, SimConfig
from models.assessment_model import validate_record
from models.sensor_model import SensorEvent
from scripts.assessment_scoring import tug_errata, tug_fidelity
from scripts.ingest import (apply_exclusions, parse_assessment_table, parse_event_log,
                            parse_flats_table, serialize_assessment_table,
                            serialize_event_log, serialize_flats_table)
from scripts.pairing_analysis import correlate_cohort
from scripts.report import errata_frame, render_text, write_analysis_report
from scripts.simulator import simulate_cohort
from utils.erros import ErroDeEntrada
from utils.gerar_aquivo import salvar_em_csv, salvar_texto
from utils.logger import configura_logger

logger = configura_logger(__name__, "mobilitycorr.log")

EXIT_OK = 0
EXIT_VIOLATIONS = 1
EXIT_INPUT_ERROR = 2


def _ler_eventos(caminho: str) -> List[SensorEvent]:
    if os.path.getsize(caminho) == 0:
        raise ErroDeEntrada("no events", campo=caminho)
    eventos = parse_event_log(caminho)
    if not eventos:
        raise ErroDeEntrada("no events", campo=caminho)
    return eventos


def cmd_analyze(args: argparse.Namespace) -> int:
    eventos = _ler_eventos(args.events)
    avaliacoes = parse_assessment_table(args.assessments)
    apartamentos = parse_flats_table(args.flats)

    config = ExclusionConfig(min_participant_coverage=args.min_coverage,
                             drop_multi_occupancy_intervals=args.drop_multi_occupancy)
    dataset = apply_exclusions(eventos, avaliacoes, apartamentos, config)
    coorte = correlate_cohort(dataset, regression_mode=args.regression)

    write_analysis_report(coorte, dataset, args.out, excel=args.excel)
    sys.stdout.write(render_text(coorte))
    return EXIT_OK


def cmd_simulate(args: argparse.Namespace) -> int:
    config = SimConfig(
        seed=args.seed,
        n_sensors=args.sensors,
        study_days=args.days,
        base_rate=args.base_rate,
        trend=args.trend,
        assessment_interval_days=args.interval,
        score_noise=args.noise,
        n_flats=args.flats,
        visitor_rate=args.visitors,
    )
    estudo = simulate_cohort(config)

    salvar_texto(serialize_event_log(estudo.events), args.out, "events.csv")
    salvar_texto(serialize_assessment_table(estudo.assessments), args.out, "assessments.csv")
    salvar_texto(serialize_flats_table(estudo.flats), args.out, "flats.csv")
    salvar_em_csv(estudo.ground_truth, args.out, "ground_truth.csv")

    print(f"{len(estudo.flats)} apartamento(s), {len(estudo.events)} evento(s), "
          f"{len(estudo.assessments)} avaliação(ões) gravados em {args.out}")
    return EXIT_OK


def cmd_validate(args: argparse.Namespace) -> int:
    registros = parse_assessment_table(args.assessments)

    total = 0
    for registro in registros:
        for violacao in validate_record(registro):
            total += 1
            print(f"participant {registro.participant_id} {registro.date.isoformat()}: {violacao}")

    errata = tug_errata(registros)
    for entrada in errata:
        print(f"errata: participant {entrada.participant_id} {entrada.date}: "
              f"TUG {entrada.tug_seconds:.1f} s impresso {entrada.points_printed}, "
              f"calculado {entrada.points_computed}")
    fidelidade = tug_fidelity(registros)
    if fidelidade is not None:
        print(f"TUG: {fidelidade:.1%} dos pares (segundos, pontos) reproduzidos")

    if args.errata:
        pasta, nome = os.path.split(os.path.abspath(args.errata))
        salvar_em_csv(errata_frame(errata), pasta, nome)

    print(f"{len(registros)} registro(s), {total} violação(ões), {len(errata)} errata")
    return EXIT_VIOLATIONS if total else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mobilitycorr",
        description="Correlação entre atividade de sensores e avaliações de mobilidade")
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", help="Correlaciona atividade e avaliações")
    analyze.add_argument("--events", required=True)
    analyze.add_argument("--assessments", required=True)
    analyze.add_argument("--flats", required=True)
    analyze.add_argument("--out", required=True)
    analyze.add_argument("--min-coverage", type=float, default=0.0)
    analyze.add_argument("--drop-multi-occupancy", action="store_true")
    analyze.add_argument("--regression", choices=["piecewise", "global"], default="piecewise")
    analyze.add_argument("--excel", action="store_true", help="Também grava report.xlsx")
    analyze.set_defaults(func=cmd_analyze)

    simulate = sub.add_parser("simulate", help="Gera dados sintéticos")
    simulate.add_argument("--seed", type=int, default=0)
    simulate.add_argument("--days", type=int, default=300)
    simulate.add_argument("--sensors", type=int, default=5)
    simulate.add_argument("--base-rate", type=float, default=45.0)
    simulate.add_argument("--trend", type=float, default=0.0)
    simulate.add_argument("--interval", type=int, default=31)
    simulate.add_argument("--noise", type=int, default=0)
    simulate.add_argument("--flats", type=int, default=1)
    simulate.add_argument("--visitors", type=float, default=0.0)
    simulate.add_argument("--out", required=True)
    simulate.set_defaults(func=cmd_simulate)

    validate = sub.add_parser("validate", help="Confere faixas das escalas e o TUG")
    validate.add_argument("--assessments", required=True)
    validate.add_argument("--errata", help="Grava a errata do TUG neste CSV")
    validate.set_defaults(func=cmd_validate)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_INPUT_ERROR

    try:
        return args.func(args)
    except (ErroDeEntrada, ValidationError, ValueError, OSError) as e:
        logger.error(f"{args.command}: {e}")
        print(f"erro: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == '__main__':
    sys.exit(main())
