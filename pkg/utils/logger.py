import logging
import os
import sys
from typing import Optional

from utils.configs import settings


def nivel_configurado() -> int:
    """Converte o nível textual de MOBILITYCORR_LOG para o valor do logging."""
    nivel = logging.getLevelName(settings.MOBILITYCORR_LOG.strip().upper())
    return nivel if isinstance(nivel, int) else logging.WARNING


def configura_logger(nome_modulo: str, nome_arquivo: str, nivel: Optional[int] = None) -> logging.Logger:
    """
    Configura e retorna um logger que escreve mensagens em um arquivo e no console.

    Esta função garante que o logger seja configurado apenas uma vez por nome de módulo,
    evitando a duplicação de handlers e mensagens de log.

    Args:
        nome_modulo (str): O nome do módulo que está solicitando o logger (geralmente __name__).
        nome_arquivo (str): O nome do arquivo onde os logs serão salvos (ex: "ingest.log").
                            O arquivo é criado dentro de settings.LOG_DIR; se LOG_DIR
                            for vazio, apenas o console é usado.
        nivel (int, optional): O nível mínimo de logging. Quando omitido, usa o nível
                               da variável de ambiente MOBILITYCORR_LOG.

    Returns:
        logging.Logger: Uma instância do logger configurada e pronta para uso.

    Exemplo de Uso:
        from utils.logger import configura_logger
        logger = configura_logger(__name__, "ingest.log")
        logger.info("Arquivo de eventos carregado.")
    """
    logger = logging.getLogger(nome_modulo)

    # getLogger() devolve a mesma instância para o mesmo nome
    if logger.handlers:
        return logger

    if nivel is None:
        nivel = nivel_configurado()
    logger.setLevel(nivel)

    formatter = logging.Formatter(
        '%(asctime)s - %(name)s - %(levelname)s - %(message)s')

    pasta_logs = settings.LOG_DIR
    if pasta_logs:
        try:
            os.makedirs(pasta_logs, exist_ok=True)
            log_file_path = os.path.join(pasta_logs, nome_arquivo)
            file_handler = logging.FileHandler(log_file_path, encoding='utf-8')
            file_handler.setLevel(nivel)
            file_handler.setFormatter(formatter)
            logger.addHandler(file_handler)
        except OSError as e:
            # Segue apenas com o console
            print(
                f"ERRO: Não foi possível configurar o log em arquivo '{pasta_logs}': {e}", file=sys.stderr)

    # stderr: o stdout fica livre para a saída dos relatórios
    stream_handler = logging.StreamHandler(sys.stderr)
    stream_handler.setLevel(nivel)
    stream_handler.setFormatter(formatter)
    logger.addHandler(stream_handler)

    return logger
