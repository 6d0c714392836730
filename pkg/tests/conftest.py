"""
pytest 配置文件和共享 fixtures
为所有测试提供公共的网络、栖息地与配置文件
"""

import sys
from pathlib import Path
from typing import Generator

import numpy as np
import pytest

# 添加项目根目录到路径
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.graph import AttributedNetwork, load_network_files  # noqa: E402
from src.run_config import RunConfig  # noqa: E402
from tests.helpers.network_builder import NetworkBuilder, fig1_network  # noqa: E402


@pytest.fixture
def project_root() -> Path:
    """项目根目录"""
    return Path(__file__).parent.parent


@pytest.fixture
def configs_dir(project_root: Path) -> Path:
    """运行配置目录"""
    return project_root / "configs"


@pytest.fixture
def datasets_dir(project_root: Path) -> Path:
    """内置数据集目录"""
    return project_root / "datasets"


@pytest.fixture
def fig1_net() -> AttributedNetwork:
    """两个三角形共享节点 3 的 5 节点网络（外部编号 1..5 对应内部编号 0..4）"""
    return fig1_network()


@pytest.fixture
def fig1_dataset(datasets_dir: Path) -> AttributedNetwork:
    """从 datasets/fig1 加载的同一网络"""
    folder = datasets_dir / "fig1"
    return load_network_files(folder / "edges.txt", folder / "attributes.csv")


@pytest.fixture
def triangle_net() -> AttributedNetwork:
    """单个三角形"""
    return NetworkBuilder().edges([("a", "b"), ("b", "c"), ("a", "c")]).attributes(
        "a", "x"
    ).attributes("b", "x").attributes("c", "y").build()


@pytest.fixture
def two_disconnected_triangles() -> AttributedNetwork:
    """两个互不相连的三角形"""
    builder = NetworkBuilder()
    builder.edges([(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
    for v in range(6):
        builder.attributes(v, "same")
    return builder.build()


@pytest.fixture
def path2_net() -> AttributedNetwork:
    """只有一条边的两节点网络，两个节点属性不同"""
    return NetworkBuilder().edge(0, 1).attributes(0, "p").attributes(1, "q").build()


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240601)


@pytest.fixture
def quick_config() -> RunConfig:
    """小规模运行参数"""
    return RunConfig(n_habitat=20, generations=30, seed=0)


@pytest.fixture
def temp_profile_file(tmp_path: Path) -> Generator[Path, None, None]:
    """创建临时运行配置文件"""
    import yaml

    profile_data = {
        "meta": {"name": "temp", "description": "临时配置"},
        "run": {"n_habitat": 12, "generations": 5, "seed": 7, "alphas": [1, 2]},
        "execution": {"parallel": True, "workers": 2},
        "runs": 3,
    }

    config_file = tmp_path / "temp.yaml"
    with open(config_file, "w", encoding="utf-8") as f:
        yaml.dump(profile_data, f, allow_unicode=True)

    yield config_file


@pytest.fixture
def invalid_profile_file(tmp_path: Path) -> Generator[Path, None, None]:
    """创建参数非法的临时运行配置（用于测试错误处理）"""
    import yaml

    invalid_data = {
        "meta": {"name": "invalid"},
        "run": {"n_habitat": 1, "generations": 0, "alphas": [-1]},
        "runs": 0,
    }

    config_file = tmp_path / "invalid.yaml"
    with open(config_file, "w", encoding="utf-8") as f:
        yaml.dump(invalid_data, f, allow_unicode=True)

    yield config_file


# pytest 配置
def pytest_configure(config):
    """pytest 配置钩子"""
    config.addinivalue_line("markers", "unit: 单元测试标记")
    config.addinivalue_line("markers", "integration: 集成测试标记")
    config.addinivalue_line("markers", "slow: 慢速测试标记")


@pytest.fixture(autouse=True)
def cleanup_global_state():
    """每个测试后自动清理全局状态

    清空 MyLogger 的全局路径集合与运行配置缓存，保证测试之间相互独立、可并行执行。
    """
    yield

    from src.m_print import MyLogger
    from src.run_config import run_config_loader

    MyLogger._file_paths.clear()
    run_config_loader._cache.clear()
