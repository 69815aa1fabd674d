import os
from typing import Dict, Optional, Sequence

import pandas as pd
from openpyxl.styles import Alignment, Border, Font, PatternFill, Side

from utils.logger import configura_logger

logger = configura_logger(__name__, "arquivos.log")


def criar_pasta_saida(caminho_pasta: str) -> str:
    """
    Cria a pasta de saída se ela não existir.

    Args:
        caminho_pasta: Caminho da pasta a ser criada

    Returns:
        str: Caminho da pasta
    """
    if not os.path.exists(caminho_pasta):
        os.makedirs(caminho_pasta)
        logger.info(f"Pasta criada: {caminho_pasta}")
    return caminho_pasta


def salvar_texto(conteudo: str, caminho_pasta: str, nome_arquivo: str) -> str:
    """Grava texto UTF-8 com quebras de linha '\\n' e devolve o caminho."""
    caminho_completo = os.path.join(criar_pasta_saida(caminho_pasta), nome_arquivo)
    with open(caminho_completo, "w", encoding="utf-8", newline="\n") as arquivo:
        arquivo.write(conteudo)
    logger.info(f"Arquivo salvo: {caminho_completo}")
    return caminho_completo


def salvar_em_csv(df: pd.DataFrame, caminho_pasta: str, nome_arquivo: str) -> str:
    """
    Salva um DataFrame em CSV (UTF-8, sem índice, separador vírgula).

    Mesma entrada gera sempre os mesmos bytes.

    Returns:
        str: Caminho completo do arquivo salvo
    """
    caminho_completo = os.path.join(criar_pasta_saida(caminho_pasta), nome_arquivo)
    df.to_csv(caminho_completo, index=False, encoding="utf-8", lineterminator="\n")
    logger.info(f"CSV salvo: {caminho_completo} ({len(df)} linha(s))")
    return caminho_completo


def salvar_em_excel(planilhas: Dict[str, pd.DataFrame], caminho_pasta: str, nome_arquivo: str,
                    destaques: Optional[Dict[str, Sequence[bool]]] = None) -> str:
    """
    Salva várias tabelas em um arquivo Excel, uma por aba.

    Args:
        planilhas: Nome da aba -> DataFrame
        caminho_pasta: Pasta de saída
        nome_arquivo: Nome do arquivo (.xlsx)
        destaques: Nome da aba -> uma flag por linha; linhas marcadas ficam em negrito

    Returns:
        str: Caminho completo do arquivo salvo
    """
    destaques = destaques or {}
    caminho_completo = os.path.join(criar_pasta_saida(caminho_pasta), nome_arquivo)

    header_fill = PatternFill(start_color="4472C4", end_color="4472C4", fill_type="solid")
    header_font = Font(bold=True, color="FFFFFF", size=11)
    negrito = Font(bold=True)
    thin_border = Border(
        left=Side(style='thin'),
        right=Side(style='thin'),
        top=Side(style='thin'),
        bottom=Side(style='thin')
    )

    with pd.ExcelWriter(caminho_completo, engine='openpyxl') as writer:
        for aba, df in planilhas.items():
            df.to_excel(writer, sheet_name=aba, index=False)
            worksheet = writer.sheets[aba]

            for cell in worksheet[1]:
                cell.fill = header_fill
                cell.font = header_font
                cell.alignment = Alignment(horizontal="center", vertical="center")

            marcadas = list(destaques.get(aba, ()))
            for indice, row in enumerate(worksheet.iter_rows(min_row=2, max_row=len(df) + 1,
                                                             max_col=len(df.columns))):
                for cell in row:
                    cell.border = thin_border
                    if indice < len(marcadas) and marcadas[indice]:
                        cell.font = negrito

            for coluna in worksheet.columns:
                largura = max(len(str(c.value)) if c.value is not None else 0 for c in coluna)
                worksheet.column_dimensions[coluna[0].column_letter].width = largura + 2

            worksheet.freeze_panes = "A2"

    logger.info(f"Excel salvo: {caminho_completo} ({len(planilhas)} aba(s))")
    return caminho_completo
