import logging
import logging.config
import os
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

ENVIRONMENTS = ("production", "test", "debug")
CONFIG_DIR = Path(__file__).parent.parent / "config" / "logging"


def get_config_file_path(environment: str) -> Optional[Path]:
    """指定された環境の設定ファイルパスを取得します。"""
    config_file = CONFIG_DIR / f"{environment}.conf"
    if config_file.exists():
        return config_file

    # インストール先ではパッケージリソースとして探す
    try:
        from importlib import resources

        candidate = resources.files("pyhtk.config.logging") / f"{environment}.conf"
        if candidate.is_file():
            return Path(str(candidate))
    except (ImportError, ModuleNotFoundError, FileNotFoundError):
        pass
    return None


def setup_programmatic_logging(environment: str) -> None:
    """設定ファイルが使えない場合のプログラム的ログ設定"""
    levels = {
        "production": logging.INFO,
        "debug": logging.DEBUG,
        "test": logging.WARNING,
    }
    level = levels.get(environment, logging.INFO)

    # 標準出力は機械可読な出力専用
    logging.basicConfig(
        level=logging.WARNING,
        stream=sys.stderr,
        format="[%(asctime)s] %(levelname)-8s %(name)s - %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
    )
    logging.getLogger("pyhtk").setLevel(level)


def detect_environment() -> str:
    """実行環境を自動検出します。

    Returns:
        環境名（'test', 'debug', 'production'）
    """
    if "PYTEST_CURRENT_TEST" in os.environ:
        return "test"

    if os.environ.get("HTK_DEBUG", "").lower() in ("1", "true", "yes"):
        return "debug"

    env = os.environ.get("HTK_ENV", "").lower()
    if env in ("development", "debug"):
        return "debug"
    if env in ENVIRONMENTS:
        return env

    return "production"


def load_logging_config(environment: str) -> None:
    """指定された環境のログ設定を読み込みます。"""
    if environment not in ENVIRONMENTS:
        raise ValueError(
            f"未知の環境: {environment}. 使用可能な環境: {list(ENVIRONMENTS)}"
        )

    config_file = get_config_file_path(environment)
    if config_file is None:
        setup_programmatic_logging(environment)
        return
    try:
        logging.config.fileConfig(config_file, disable_existing_loggers=False)
    except Exception as e:
        print(
            f"警告: ログ設定の読み込みに失敗しました ({e})。デフォルト設定を使用します。",
            file=sys.stderr,
        )
        setup_programmatic_logging(environment)


def get_available_environments() -> List[str]:
    if not CONFIG_DIR.exists():
        return []
    return sorted(p.stem for p in CONFIG_DIR.glob("*.conf"))


def validate_config_files() -> Dict[str, bool]:
    """環境名と設定ファイルの有無"""
    return {env: get_config_file_path(env) is not None for env in ENVIRONMENTS}


def get_config_info(environment: str) -> Dict[str, Any]:
    config_file = get_config_file_path(environment)
    if config_file is None:
        return {
            "environment": environment,
            "config_file": None,
            "exists": False,
            "programmatic": True,
        }
    stat = config_file.stat()
    return {
        "environment": environment,
        "config_file": str(config_file),
        "exists": True,
        "size": stat.st_size,
        "modified": stat.st_mtime,
    }
