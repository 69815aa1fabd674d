"""
Correlação de Spearman com empates, p-valores e tamanho de efeito.

rho é a correlação de Pearson entre os vetores de postos médios. O p-valor
usado nos relatórios vem da aproximação t com n - 2 graus de liberdade; o
teste de permutação (exato até n = 8, Monte-Carlo acima) serve de
referência independente.
"""

from itertools import permutations
from typing import Literal, Optional, Sequence

import numpy as np
from scipy import stats

from models.analysis_model import CorrelationResult, EffectSize
from utils.configs import settings
from utils.erros import DadosInsuficientes

# Folga para comparar |rho| de permutações com o observado
_TOLERANCIA = 1e-12
_MAX_EXATO = 8
_BLOCO_MONTE_CARLO = 10_000


def assign_ranks(values: Sequence[float]) -> np.ndarray:
    """Postos crescentes; valores empatados recebem a média dos postos que ocupam."""
    if len(values) == 0:
        raise ValueError("lista de valores vazia")
    return stats.rankdata(np.asarray(values, dtype=float), method="average")


def _centered_ranks(values: Sequence[float]) -> np.ndarray:
    postos = assign_ranks(values)
    return postos - postos.mean()


def _check_pair(x: Sequence[float], y: Sequence[float]) -> None:
    if len(x) != len(y):
        raise ValueError(f"tamanhos diferentes: {len(x)} != {len(y)}")
    if len(x) < 3:
        raise DadosInsuficientes("insufficient sample", f"n={len(x)} < 3")


def _rho(dx: np.ndarray, dy: np.ndarray) -> Optional[float]:
    sxx = float(np.dot(dx, dx))
    syy = float(np.dot(dy, dy))
    if sxx == 0.0 or syy == 0.0:
        return None
    rho = float(np.dot(dx, dy)) / np.sqrt(sxx * syy)
    return float(min(1.0, max(-1.0, rho)))


def spearman_rho(x: Sequence[float], y: Sequence[float]) -> CorrelationResult:
    """
    rho de Spearman com postos médios. Se uma das séries for constante o
    denominador é zero e o resultado é não computável ("constant series").
    O p-valor fica vazio; use p_value_t_approx ou correlate().
    """
    _check_pair(x, y)
    rho = _rho(_centered_ranks(x), _centered_ranks(y))
    if rho is None:
        return CorrelationResult.not_computable("constant series", n_pairs=len(x))
    return CorrelationResult(rho=rho, n_pairs=len(x), effect=classify_effect(rho))


def p_value_t_approx(rho: float, n: int) -> float:
    """p bilateral de t = rho·sqrt((n−2)/(1−rho²)) com n − 2 graus de liberdade."""
    if n < 4:
        raise DadosInsuficientes("insufficient sample", f"n={n} < 4")
    if abs(rho) > 1.0:
        raise ValueError(f"|rho| > 1: {rho}")
    if abs(rho) == 1.0:
        return 0.0
    t = rho * np.sqrt((n - 2) / (1.0 - rho * rho))
    p = 2.0 * stats.t.sf(abs(t), n - 2)
    return float(min(1.0, max(0.0, p)))


def p_value_permutation(x: Sequence[float], y: Sequence[float],
                        mode: Literal["exact", "monte-carlo"] = "exact",
                        samples: Optional[int] = None,
                        seed: int = 0) -> Optional[float]:
    """
    Fração das permutações de y com |rho| >= |rho observado|.

    mode="exact" enumera as n! permutações (n <= 8); mode="monte-carlo"
    sorteia `samples` permutações com semente fixa, em blocos, de modo que o
    resultado só depende da semente. Devolve None quando rho não é computável.
    """
    _check_pair(x, y)
    dx = _centered_ranks(x)
    dy = _centered_ranks(y)
    observado = _rho(dx, dy)
    if observado is None:
        return None
    limiar = abs(observado) - _TOLERANCIA
    denominador = np.sqrt(float(np.dot(dx, dx)) * float(np.dot(dy, dy)))

    if mode == "exact":
        if len(x) > _MAX_EXATO:
            raise ValueError(f"n={len(x)} > {_MAX_EXATO}: use monte-carlo")
        todas = np.array(list(permutations(dy)))
        rhos = todas @ dx / denominador
        return float(np.count_nonzero(np.abs(rhos) >= limiar)) / len(todas)

    samples = samples or settings.PERMUTATION_SAMPLES
    rng = np.random.default_rng(seed)
    extremos = 0
    restantes = samples
    while restantes > 0:
        bloco = min(_BLOCO_MONTE_CARLO, restantes)
        sorteio = rng.permuted(np.tile(dy, (bloco, 1)), axis=1)
        rhos = sorteio @ dx / denominador
        extremos += int(np.count_nonzero(np.abs(rhos) >= limiar))
        restantes -= bloco
    return extremos / samples


def classify_effect(rho: float) -> EffectSize:
    """Faixas de Cohen sobre |rho|; 0.1, 0.3 e 0.5 pertencem à faixa de cima."""
    pequeno, moderado, grande = settings.EFFECT_THRESHOLDS
    magnitude = abs(rho)
    if magnitude < pequeno:
        return EffectSize.NEGLIGIBLE
    if magnitude < moderado:
        return EffectSize.SMALL
    if magnitude < grande:
        return EffectSize.MODERATE
    return EffectSize.LARGE


def is_significant(p: float) -> bool:
    return p < settings.SIGNIFICANCE_LEVEL


def correlate(x: Sequence[float], y: Sequence[float]) -> CorrelationResult:
    """rho, p-valor (aproximação t), efeito e significância em um só resultado."""
    resultado = spearman_rho(x, y)
    if not resultado.computable:
        return resultado
    if resultado.n_pairs < 4:
        return CorrelationResult.not_computable("insufficient sample", resultado.n_pairs)
    p = p_value_t_approx(resultado.rho, resultado.n_pairs)
    return resultado.model_copy(update={"p_value": p, "significant": is_significant(p)})
