"""
MCP服务器启动脚本测试（只测参数处理，不启动服务）
"""

import pytest

pytest.importorskip("fastmcp")

import start_mcp_server
from ceps_eval import mcp_server


@pytest.fixture(autouse=True)
def isolated_settings(monkeypatch):
    monkeypatch.setattr(mcp_server, "ALLOWED_PATHS", list(mcp_server.ALLOWED_PATHS))
    monkeypatch.setattr(mcp_server, "MAX_FILE_SIZE", mcp_server.MAX_FILE_SIZE)


def test_defaults():
    args = start_mcp_server.build_parser().parse_args([])
    assert not args.http
    assert args.port == 8765
    assert args.allow_dir == []


def test_allow_dir_extends_whitelist(tmp_path):
    manifest = tmp_path / "m.jsonl"
    manifest.write_text("", encoding="utf-8")

    args = start_mcp_server.build_parser().parse_args(["--allow-dir", str(tmp_path), "--allow-dir", str(tmp_path)])
    start_mcp_server.apply_settings(args)
    assert mcp_server.ALLOWED_PATHS.count(str(tmp_path.resolve())) == 1
    assert mcp_server.validate_file_path(str(manifest))


def test_max_file_size():
    args = start_mcp_server.build_parser().parse_args(["--max-file-mb", "2"])
    start_mcp_server.apply_settings(args)
    assert mcp_server.MAX_FILE_SIZE == 2 * 1024 * 1024


def test_max_file_size_rejects_zero():
    args = start_mcp_server.build_parser().parse_args(["--max-file-mb", "0"])
    with pytest.raises(SystemExit):
        start_mcp_server.apply_settings(args)


def test_tool_list_matches_server():
    assert set(start_mcp_server.TOOLS) <= {name for name in dir(mcp_server)}
