"""
Exceções compartilhadas entre os serviços.

O CLI traduz ErroDeEntrada em código de saída 2; os demais erros
indicam pré-condições numéricas não atendidas.
"""

from typing import Optional


class ErroDeEntrada(ValueError):
    """Entrada malformada (arquivo, linha ou campo inválido)."""

    def __init__(self, mensagem: str, linha: Optional[int] = None, campo: Optional[str] = None):
        self.mensagem = mensagem
        self.linha = linha
        self.campo = campo
        partes = []
        if linha is not None:
            partes.append(f"line {linha}")
        if campo:
            partes.append(campo)
        partes.append(mensagem)
        super().__init__(": ".join(partes))


class DadosInsuficientes(ValueError):
    """Poucos nós, pontos ou pares para o cálculo pedido."""

    def __init__(self, motivo: str, detalhe: str = ""):
        self.motivo = motivo
        super().__init__(f"{motivo}: {detalhe}" if detalhe else motivo)


class ForaDoDominio(ValueError):
    """Avaliação fora do domínio de uma função por partes."""
