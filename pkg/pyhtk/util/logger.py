"""ログ設定とロガー管理モジュール

環境 (production / debug / test) に応じて .conf ファイルからログ設定を読み込みます。
ハンドラはすべて標準エラー出力に書くので、--json の出力は汚れません。
"""

import logging
from typing import Optional

from .logging_config import detect_environment, get_config_info, load_logging_config

ROOT_LOGGER = "pyhtk"

_initialized = False
_current_environment: Optional[str] = None


def setup_logging(environment: Optional[str] = None, force_reinit: bool = False) -> None:
    """ログシステムを初期化します。

    Args:
        environment: 環境名（'production', 'test', 'debug'）。
                    Noneの場合は自動検出します。
        force_reinit: 既に初期化済みでも強制的に再初期化するかどうか。
    """
    global _initialized, _current_environment

    if _initialized and not force_reinit:
        return

    if environment is None:
        environment = detect_environment()

    load_logging_config(environment)

    _initialized = True
    _current_environment = environment
    logging.getLogger(f"{ROOT_LOGGER}.util.logger").debug(
        f"ログシステムを初期化しました (環境: {environment})"
    )


def get_logger(name: Optional[str] = None) -> logging.Logger:
    """"pyhtk." を前置したロガーを返す。未初期化なら初期化する"""
    if not _initialized:
        setup_logging()

    if name is None:
        name = ROOT_LOGGER
    elif name != ROOT_LOGGER and not name.startswith(f"{ROOT_LOGGER}."):
        name = f"{ROOT_LOGGER}.{name}"
    return logging.getLogger(name)


def switch_to_test_mode() -> None:
    setup_logging("test", force_reinit=True)


def switch_to_debug_mode() -> None:
    setup_logging("debug", force_reinit=True)


def switch_to_production_mode() -> None:
    setup_logging("production", force_reinit=True)


def get_current_environment() -> str:
    if _current_environment is not None:
        return _current_environment
    return detect_environment()


def get_logging_info() -> dict:
    """現在のログ設定情報を取得します。"""
    current_env = get_current_environment()
    package_logger = logging.getLogger(ROOT_LOGGER)
    return {
        "initialized": _initialized,
        "current_environment": current_env,
        "config_info": get_config_info(current_env),
        "loggers": {
            "root": {
                "level": logging.getLogger().level,
                "handlers": len(logging.getLogger().handlers),
            },
            ROOT_LOGGER: {
                "level": package_logger.level,
                "handlers": len(package_logger.handlers),
            },
        },
    }


def reset_logging() -> None:
    """ハンドラを外して未初期化に戻す (テスト用)"""
    global _initialized, _current_environment

    for logger_name in list(logging.Logger.manager.loggerDict):
        logger_obj = logging.getLogger(logger_name)
        for handler in logger_obj.handlers[:]:
            logger_obj.removeHandler(handler)

    root_logger = logging.getLogger()
    for handler in root_logger.handlers[:]:
        root_logger.removeHandler(handler)

    _initialized = False
    _current_environment = None
