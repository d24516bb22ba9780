"""
测试公共夹具
"""

import json
import sys
from pathlib import Path

import pytest

# 允许在未安装包的情况下直接运行测试
sys.path.insert(0, str(Path(__file__).parent.parent))

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture
def write_manifest(tmp_path):
    """把记录列表写成JSONL清单，返回路径"""

    def _write(records, name: str = "manifest.jsonl") -> Path:
        path = tmp_path / name
        lines = [r if isinstance(r, str) else json.dumps(r, ensure_ascii=False) for r in records]
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        return path

    return _write


@pytest.fixture
def sample_manifest(data_dir) -> Path:
    return data_dir / "sample_manifest.jsonl"


@pytest.fixture
def sample_cases(data_dir) -> Path:
    return data_dir / "sample_attention.jsonl"
