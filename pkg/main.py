# main.py - MOBBO-OCD 属性网络重叠社区检测工具
"""
MOBBO-OCD - 基于多目标生物地理学优化的重叠社区检测

同时最大化扩展模块度（链接密度）与属性相似度（节点属性同质性），
输出非支配解集，并用 α_SAEM 选出折中解。子命令说明见 src/cli.py。
"""

import sys

from src.cli import main as cli_main


def main():
    """主函数，处理命令行参数"""
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
