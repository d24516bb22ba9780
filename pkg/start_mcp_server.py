#!/usr/bin/env python3
"""
CepsEval MCP服务器启动脚本

在标准MCP传输（stdio / HTTP）上暴露评测工具：
score_manifest, batch_score, corpus_stats, correlate, attention_spread, simulate, ceps_curve

工具只读取 ALLOWED_PATHS 白名单内的清单和表格；容器部署时用 --allow-dir
把挂载的数据目录加入白名单。
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

# 添加项目路径
sys.path.insert(0, str(Path(__file__).parent))

from ceps_eval import mcp_server
from ceps_eval.version import __version__

TOOLS = (
    "score_manifest",
    "batch_score",
    "corpus_stats",
    "correlate",
    "attention_spread",
    "simulate",
    "ceps_curve",
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description=f"CepsEval {__version__} MCP服务器：把CER/CEPS评测、相关分析和模拟实验提供给MCP客户端",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
示例:
  # stdio模式，由MCP客户端拉起
  python start_mcp_server.py

  # HTTP模式，允许读取挂载的清单目录和报告目录
  python start_mcp_server.py --http --port 8765 --allow-dir /app/data --allow-dir /app/reports

  # 调用方式见 tests/test_mcp_client.py 中的 MCPClient
        """,
    )
    parser.add_argument("--http", action="store_true", help="使用HTTP传输（默认: stdio）")
    parser.add_argument("--host", default="0.0.0.0", help="HTTP监听地址（默认: 0.0.0.0）")
    parser.add_argument("--port", type=int, default=8765, help="HTTP端口（默认: 8765）")
    parser.add_argument(
        "--allow-dir",
        action="append",
        default=[],
        metavar="DIR",
        help="额外允许工具读写的目录，可重复指定",
    )
    parser.add_argument(
        "--max-file-mb",
        type=int,
        help=f"单个清单/表格的大小上限MB（默认: {mcp_server.MAX_FILE_SIZE // (1024 * 1024)}）",
    )
    parser.add_argument(
        "--log-level",
        choices=("DEBUG", "INFO", "WARNING", "ERROR"),
        default="INFO",
        help="日志级别（默认: INFO）",
    )
    return parser


def apply_settings(args: argparse.Namespace) -> None:
    """把命令行设置写入服务器模块的安全配置"""
    logging.getLogger().setLevel(args.log_level)

    for directory in args.allow_dir:
        resolved = str(Path(directory).resolve())
        if resolved not in mcp_server.ALLOWED_PATHS:
            mcp_server.ALLOWED_PATHS.append(resolved)

    if args.max_file_mb is not None:
        if args.max_file_mb < 1:
            raise SystemExit(f"❌ --max-file-mb 必须 ≥ 1: {args.max_file_mb}")
        mcp_server.MAX_FILE_SIZE = args.max_file_mb * 1024 * 1024


def main(argv: Optional[Sequence[str]] = None) -> None:
    args = build_parser().parse_args(argv)
    apply_settings(args)

    logger = mcp_server.logger
    logger.info(f"🚀 启动CepsEval MCP服务器 {__version__}")
    logger.info("=" * 60)
    logger.info(f"工具: {', '.join(TOOLS)}")
    logger.info(f"允许目录: {', '.join(mcp_server.ALLOWED_PATHS)}")
    logger.info(f"文件上限: {mcp_server.MAX_FILE_SIZE // (1024 * 1024)}MB")

    if args.http:
        logger.info(f"模式: HTTP  http://{args.host}:{args.port}/mcp")
        logger.info("=" * 60)
        mcp_server.mcp.run(transport="http", host=args.host, port=args.port)
    else:
        logger.info("模式: stdio")
        logger.info("=" * 60)
        mcp_server.mcp.run(transport="stdio")


if __name__ == "__main__":
    main()
