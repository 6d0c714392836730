#!/usr/bin/env python3
"""
配置校验器
用于验证YAML运行配置的完整性和合理性
"""

import argparse
import sys
from pathlib import Path
from typing import List

from src.run_config import RunConfigLoader, RunProfile

CONFIGS_DIR = Path(__file__).parent.parent / "configs"


class ConfigValidator:
    """配置校验器"""

    def __init__(self):
        self.errors: List[str] = []
        self.warnings: List[str] = []

    def validate_run_profile(self, config_path: Path) -> bool:
        """验证单个运行配置"""
        self.errors.clear()
        self.warnings.clear()

        # 每次校验都重新读取文件
        loader = RunConfigLoader()
        try:
            profile = loader.load_run_profile(config_path)
        except Exception as e:
            self.errors.append(f"加载配置失败: {e}")
            return False

        # 基础验证
        self.errors.extend(loader.validate_profile(profile))

        # 扩展验证
        self._validate_scale(profile)
        self._validate_reporting(profile)

        return len(self.errors) == 0

    def _validate_scale(self, profile: RunProfile) -> None:
        """规模与执行参数的合理性"""
        run = profile.run
        if 2 <= run.n_habitat < 10:
            self.warnings.append(f"种群规模 {run.n_habitat} 过小，前沿可能不完整")
        if run.lc_threshold > 1:
            self.warnings.append(f"LC 阈值 {run.lc_threshold} 大于 1，几乎所有节点都会被视为候选重叠节点")
        if profile.execution.workers is not None and not profile.execution.parallel:
            self.warnings.append("设置了 execution.workers 但未启用 parallel，workers 不会生效")

    def _validate_reporting(self, profile: RunProfile) -> None:
        """报告相关检查"""
        run = profile.run
        if len(set(run.alphas)) != len(run.alphas):
            self.warnings.append(f"alphas 中存在重复值: {list(run.alphas)}")

    def print_results(self, config_path: Path) -> None:
        """打印验证结果"""
        print(f"\n=== {config_path.name} 的验证结果 ===")

        if self.errors:
            print(f"\n[ERROR] 错误 ({len(self.errors)}):")
            for error in self.errors:
                print(f"  - {error}")

        if self.warnings:
            print(f"\n[WARNING] 警告 ({len(self.warnings)}):")
            for warning in self.warnings:
                print(f"  - {warning}")

        if not self.errors and not self.warnings:
            print("\n[OK] 配置有效!")
        elif not self.errors:
            print(f"\n[OK] 配置有效（{len(self.warnings)} 条警告）")
        else:
            print(f"\n[ERROR] 配置有 {len(self.errors)} 个错误")


def validate_all_configs(configs_dir: Path = CONFIGS_DIR) -> bool:
    """验证目录下的所有运行配置"""
    validator = ConfigValidator()
    all_valid = True

    yaml_files = sorted(configs_dir.glob("*.yaml"))

    if not yaml_files:
        print(f"在 {configs_dir} 中没有找到运行配置")
        return False

    print(f"找到 {len(yaml_files)} 个运行配置")

    for config_file in yaml_files:
        print(f"\n{'='*60}")
        print(f"验证: {config_file}")
        print("=" * 60)

        is_valid = validator.validate_run_profile(config_file)
        validator.print_results(config_file)

        if not is_valid:
            all_valid = False

    print(f"\n{'='*60}")
    if all_valid:
        print("[OK] 所有配置均有效!")
    else:
        print("[ERROR] 部分配置存在错误!")
    print("=" * 60)

    return all_valid


def main() -> None:
    """主函数"""
    parser = argparse.ArgumentParser(description="验证运行配置")
    parser.add_argument("config_path", nargs="?", help="运行配置文件或配置目录")
    parser.add_argument("--all", action="store_true", help="验证 configs/ 下的全部运行配置")

    args = parser.parse_args()

    if args.all or not args.config_path:
        if not CONFIGS_DIR.exists():
            print(f"配置目录不存在: {CONFIGS_DIR}")
            sys.exit(1)
        sys.exit(0 if validate_all_configs(CONFIGS_DIR) else 1)

    config_path = Path(args.config_path)
    if not config_path.exists():
        print(f"配置文件不存在: {config_path}")
        sys.exit(1)
    if config_path.is_dir():
        sys.exit(0 if validate_all_configs(config_path) else 1)

    validator = ConfigValidator()
    is_valid = validator.validate_run_profile(config_path)
    validator.print_results(config_path)
    sys.exit(0 if is_valid else 1)


if __name__ == "__main__":
    main()
