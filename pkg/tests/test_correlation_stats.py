import numpy as np
import pytest

from models.analysis_model import EffectSize
from scripts.correlation_stats import (assign_ranks, classify_effect, correlate, is_significant,
                                       p_value_permutation, p_value_t_approx, spearman_rho)
from utils.erros import DadosInsuficientes


def _postos_por_enumeracao(valores):
    """Posto médio: menores + (iguais + 1) / 2, comparando par a par."""
    return [sum(1 for w in valores if w < v) + (sum(1 for w in valores if w == v) + 1) / 2
            for v in valores]


def _pearson(a, b):
    ma, mb = sum(a) / len(a), sum(b) / len(b)
    num = sum((x - ma) * (y - mb) for x, y in zip(a, b))
    den = (sum((x - ma) ** 2 for x in a) * sum((y - mb) ** 2 for y in b)) ** 0.5
    return num / den


def test_postos_medios_nos_empates():
    assert list(assign_ranks([10, 20, 20, 30])) == [1.0, 2.5, 2.5, 4.0]


def test_correlacao_perfeita():
    resultado = spearman_rho([1, 2, 3, 4, 5], [2, 4, 6, 8, 10])
    assert resultado.rho == pytest.approx(1.0)
    assert resultado.effect is EffectSize.LARGE


def test_serie_constante_nao_e_computavel():
    resultado = spearman_rho([3, 3, 3, 3], [1, 2, 3, 4])
    assert not resultado.computable
    assert resultado.reason == "constant series"
    assert resultado.p_value is None


def test_tamanhos_diferentes():
    with pytest.raises(ValueError, match="tamanhos diferentes"):
        spearman_rho([1, 2, 3], [1, 2])


def test_amostra_pequena():
    with pytest.raises(DadosInsuficientes) as erro:
        spearman_rho([1, 2], [1, 2])
    assert erro.value.motivo == "insufficient sample"
    assert correlate([1, 2, 3], [3, 1, 2]).reason == "insufficient sample"


@pytest.mark.slow
def test_formula_sem_empates_e_enumeracao_com_empates():
    rng = np.random.default_rng(11)
    for _ in range(1000):
        n = int(rng.integers(3, 13))
        x, y = rng.permutation(n).astype(float), rng.permutation(n).astype(float)
        d = assign_ranks(x) - assign_ranks(y)
        esperado = 1 - 6 * float(np.sum(d * d)) / (n * (n * n - 1))
        assert spearman_rho(x, y).rho == pytest.approx(esperado, abs=1e-12)

    for _ in range(1000):
        n = int(rng.integers(3, 13))
        x, y = list(rng.integers(0, 4, size=n)), list(rng.integers(0, 4, size=n))
        resultado = spearman_rho(x, y)
        if len(set(x)) == 1 or len(set(y)) == 1:
            assert not resultado.computable
            continue
        esperado = _pearson(_postos_por_enumeracao(x), _postos_por_enumeracao(y))
        assert resultado.rho == pytest.approx(esperado, abs=1e-12)


class TestPValor:

    def test_aproximacao_t(self):
        assert p_value_t_approx(1.0, 10) == 0.0
        assert p_value_t_approx(0.0, 10) == pytest.approx(1.0)
        with pytest.raises(DadosInsuficientes):
            p_value_t_approx(0.5, 3)

    def test_permutacao_exata(self):
        # só a identidade e a inversão atingem |rho| = 1
        assert p_value_permutation([1, 2, 3, 4, 5], [1, 2, 3, 4, 5]) == pytest.approx(2 / 120)

    def test_exata_limitada_a_oito(self):
        with pytest.raises(ValueError, match="monte-carlo"):
            p_value_permutation(list(range(9)), list(range(9)))

    def test_monte_carlo_deterministico(self):
        x, y = list(range(12)), [3, 1, 4, 1, 5, 9, 2, 6, 5, 3, 5, 8]
        a = p_value_permutation(x, y, mode="monte-carlo", samples=5000, seed=3)
        b = p_value_permutation(x, y, mode="monte-carlo", samples=5000, seed=3)
        assert a == b

    def test_constante_sem_p_valor(self):
        assert p_value_permutation([1, 1, 1, 1], [1, 2, 3, 4]) is None

    @pytest.mark.slow
    def test_aproximacao_t_contra_permutacao_exata(self):
        rng = np.random.default_rng(5)
        for n in range(5, 9):
            # em n = 5 a distribuição exata é discreta e a aproximação t erra até ~0.08
            tolerancia = 0.1 if n == 5 else 0.05
            for _ in range(50):
                x, y = rng.normal(size=n), rng.normal(size=n)
                rho = spearman_rho(x, y).rho
                assert abs(p_value_t_approx(rho, n) - p_value_permutation(x, y)) <= tolerancia

    @pytest.mark.slow
    @pytest.mark.parametrize("n", [15, 30])
    def test_aproximacao_t_contra_monte_carlo(self, n):
        rng = np.random.default_rng(n)
        for k in range(10):
            x, y = rng.normal(size=n), rng.normal(size=n)
            rho = spearman_rho(x, y).rho
            p = p_value_permutation(x, y, mode="monte-carlo", samples=100_000, seed=k)
            assert abs(p_value_t_approx(rho, n) - p) <= 0.02


@pytest.mark.parametrize("rho, efeito", [
    (0.30, EffectSize.MODERATE),
    (0.26, EffectSize.SMALL),
    (-0.56, EffectSize.LARGE),
    (0.1, EffectSize.SMALL),
    (0.5, EffectSize.LARGE),
    (0.0999, EffectSize.NEGLIGIBLE),
])
def test_faixas_de_efeito(rho, efeito):
    assert classify_effect(rho) is efeito


def test_significancia_estrita():
    assert is_significant(0.0009)
    assert not is_significant(0.001)


def test_correlate_completa_o_resultado():
    x = list(range(60))
    y = [v * 2 + (v % 3) for v in x]
    resultado = correlate(x, y)
    assert resultado.rho > 0.99
    assert resultado.significant
    assert resultado.n_pairs == 60


def test_efeito_simetrico_no_sinal():
    for rho in np.linspace(-1.0, 1.0, 2001):
        assert classify_effect(rho) is classify_effect(-rho)


@pytest.mark.slow
class TestPropriedadesDoRho:

    @staticmethod
    def _pares(seed):
        rng = np.random.default_rng(seed)
        for _ in range(300):
            n = int(rng.integers(4, 30))
            # inteiros pequenos geram empates
            yield rng.integers(0, 6, size=n).astype(float), rng.integers(0, 6, size=n).astype(float)

    def test_simetria(self):
        for x, y in self._pares(41):
            a, b = spearman_rho(x, y), spearman_rho(y, x)
            assert a.computable == b.computable
            if a.computable:
                assert a.rho == pytest.approx(b.rho, abs=1e-12)

    def test_inverter_y_inverte_o_sinal(self):
        for x, y in self._pares(42):
            a, b = spearman_rho(x, y), spearman_rho(x, -y)
            assert a.computable == b.computable
            if a.computable:
                assert b.rho == pytest.approx(-a.rho, abs=1e-12)

    def test_transformacao_crescente_nao_muda_rho(self):
        for x, y in self._pares(43):
            a = spearman_rho(x, y)
            b = spearman_rho(np.exp(x / 3.0), y ** 3 + 2.0 * y)
            assert a.computable == b.computable
            if a.computable:
                assert b.rho == pytest.approx(a.rho, abs=1e-12)
