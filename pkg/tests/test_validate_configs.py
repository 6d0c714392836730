"""
配置验证器测试
测试 validate_configs.py 的核心功能与命令行入口
"""

import sys

import pytest

from src import validate_configs
from src.validate_configs import ConfigValidator, validate_all_configs


def write(path, text):
    path.write_text(text, encoding="utf-8")
    return path


VALID = """
meta:
  name: ok
run:
  n_habitat: 20
  generations: 5
"""


class TestConfigValidatorInit:
    """测试ConfigValidator初始化"""

    def test_init_creates_empty_lists(self):
        validator = ConfigValidator()
        assert validator.errors == []
        assert validator.warnings == []


class TestValidateRunProfile:
    """测试单个运行配置的验证"""

    def test_valid(self, tmp_path):
        validator = ConfigValidator()
        assert validator.validate_run_profile(write(tmp_path / "ok.yaml", VALID)) is True
        assert validator.errors == []
        assert validator.warnings == []

    def test_bundled_configs_valid(self, configs_dir):
        validator = ConfigValidator()
        for path in sorted(configs_dir.glob("*.yaml")):
            assert validator.validate_run_profile(path), validator.errors

    def test_invalid_values(self, invalid_profile_file):
        validator = ConfigValidator()
        assert validator.validate_run_profile(invalid_profile_file) is False
        assert len(validator.errors) >= 4

    def test_load_failure(self, tmp_path):
        """YAML 语法错误与未知字段都记为错误"""
        validator = ConfigValidator()
        assert not validator.validate_run_profile(write(tmp_path / "a.yaml", "run: [\n"))
        assert any("加载配置失败" in e for e in validator.errors)
        assert not validator.validate_run_profile(write(tmp_path / "b.yaml", "run:\n  foo: 1\n"))
        assert any("foo" in e for e in validator.errors)

    def test_missing_file(self, tmp_path):
        validator = ConfigValidator()
        assert not validator.validate_run_profile(tmp_path / "missing.yaml")

    def test_warnings(self, tmp_path):
        """可疑但合法的取值只给出警告"""
        text = """
run:
  n_habitat: 4
  lc_threshold: 2.5
  alphas: [1, 1]
execution:
  workers: 3
"""
        validator = ConfigValidator()
        assert validator.validate_run_profile(write(tmp_path / "w.yaml", text)) is True
        assert len(validator.warnings) == 4

    def test_clears_previous_results(self, tmp_path, invalid_profile_file):
        validator = ConfigValidator()
        validator.validate_run_profile(invalid_profile_file)
        assert validator.errors
        assert validator.validate_run_profile(write(tmp_path / "ok.yaml", VALID))
        assert validator.errors == []

    def test_rereads_changed_file(self, tmp_path):
        """同一路径的文件修改后重新读取"""
        path = write(tmp_path / "p.yaml", VALID)
        validator = ConfigValidator()
        assert validator.validate_run_profile(path)
        write(path, "run:\n  n_habitat: 1\n")
        assert not validator.validate_run_profile(path)


class TestPrintResults:
    """测试结果输出"""

    def test_ok(self, tmp_path, capsys):
        path = write(tmp_path / "ok.yaml", VALID)
        validator = ConfigValidator()
        validator.validate_run_profile(path)
        validator.print_results(path)
        assert "[OK] 配置有效!" in capsys.readouterr().out

    def test_errors(self, invalid_profile_file, capsys):
        validator = ConfigValidator()
        validator.validate_run_profile(invalid_profile_file)
        validator.print_results(invalid_profile_file)
        out = capsys.readouterr().out
        assert "[ERROR]" in out
        assert "invalid.yaml" in out


class TestValidateAllConfigs:
    """测试目录批量验证"""

    def test_all_valid(self, tmp_path):
        write(tmp_path / "a.yaml", VALID)
        write(tmp_path / "b.yaml", VALID)
        assert validate_all_configs(tmp_path) is True

    def test_some_invalid(self, tmp_path):
        write(tmp_path / "a.yaml", VALID)
        write(tmp_path / "b.yaml", "run:\n  generations: 0\n")
        assert validate_all_configs(tmp_path) is False

    def test_empty_dir(self, tmp_path, capsys):
        assert validate_all_configs(tmp_path) is False
        assert "没有找到运行配置" in capsys.readouterr().out


class TestMain:
    """测试命令行入口"""

    def _run(self, monkeypatch, *argv):
        monkeypatch.setattr(sys, "argv", ["validate_configs", *argv])
        with pytest.raises(SystemExit) as exc_info:
            validate_configs.main()
        return exc_info.value.code

    def test_single_file(self, monkeypatch, tmp_path):
        assert self._run(monkeypatch, str(write(tmp_path / "ok.yaml", VALID))) == 0

    def test_invalid_file(self, monkeypatch, invalid_profile_file):
        assert self._run(monkeypatch, str(invalid_profile_file)) == 1

    def test_missing_file(self, monkeypatch, tmp_path):
        assert self._run(monkeypatch, str(tmp_path / "none.yaml")) == 1

    def test_directory(self, monkeypatch, tmp_path):
        write(tmp_path / "ok.yaml", VALID)
        assert self._run(monkeypatch, str(tmp_path)) == 0

    def test_all(self, monkeypatch):
        assert self._run(monkeypatch, "--all") == 0
