"""
テスト共通設定とフィクスチャ

モジュラーパラメータ・問題ファイルの場所など、
pyhtk 全体のテストで共有される設定を定義します。
"""

from pathlib import Path

import pytest

from pyhtk.core.elliptic import ModularParam
from pyhtk.util.logger import switch_to_test_mode

# 受け入れ基準で使う定数
TAU = complex(0.3, 1.1)
TRUNCATION = 40


@pytest.fixture
def modular() -> ModularParam:
    """τ = 0.3 + 1.1i"""
    return ModularParam(TAU)


@pytest.fixture
def spec_dir() -> Path:
    """同梱の問題ファイル"""
    return Path(__file__).parent.parent / "sample_usage" / "specs"


@pytest.fixture(scope="session", autouse=True)
def test_session():
    """テスト用ログ設定に切り替える"""
    switch_to_test_mode()
    yield
