"""
文件名称: m_print.py
内容摘要: 日志记录模块，提供运行日志记录与进度显示
当前版本: v2.0.0

主要功能：
1. MyLogger: 通用日志记录器（支持 INFO/DEBUG/WARNING/ERROR 级别）
2. LogMode: 日志模式枚举（仅保存/仅打印/保存并打印）
3. progress_bar: 进化代数进度条

特性：
- 基于标准库 logging 的处理器，文件按大小自动轮换
- 同一路径只允许一个记录器实例
- 彩色终端输出
- 记录调用者模块、函数与行号
"""

import datetime
import logging
import os
import sys
import threading
from enum import Enum
from logging.handlers import RotatingFileHandler
from typing import Optional, Set, Union

# 模块级常量
DEFAULT_MAX_LOG_SIZE = 1024 * 1024  # 默认最大日志文件大小（1MB）
DEFAULT_MAX_LOG_FILES = 3  # 默认最大保留日志文件数

_COLORS = {
    logging.DEBUG: "\033[0m",
    logging.INFO: "\033[32m",
    logging.WARNING: "\033[33m",
    logging.ERROR: "\033[31m",
}
_RESET = "\033[0m"


class LogMode(Enum):
    """
    日志模式枚举类。
    """

    SAVE_ONLY = 1  # 仅保存，不打印
    PRINT_ONLY = 2  # 仅打印，不保存
    PRINT_AND_SAVE = 3  # 打印并保存


class _RecordFormatter(logging.Formatter):
    """[时间] 消息 [模块.函数():行号]"""

    def __init__(self, colored: bool = False):
        super().__init__()
        self.colored = colored

    def format(self, record: logging.LogRecord) -> str:
        now = datetime.datetime.fromtimestamp(record.created)
        stamp = now.strftime("%Y-%m-%d %H:%M:%S.") + f"{now.microsecond // 1000:03d}"
        caller = f"{record.module}.{record.funcName}():{record.lineno}"
        line = f"[{stamp}] {record.getMessage()} [{caller}]"
        if self.colored:
            return f"{_COLORS.get(record.levelno, _RESET)}{line}{_RESET}"
        return line


class _PlainFormatter(logging.Formatter):
    def format(self, record: logging.LogRecord) -> str:
        return record.getMessage()


class MyLogger:
    """
    日志记录器类。

    每个实例拥有一个独立的 logging.Logger（名称 mobbo.<log_file>），
    根据 LogMode 挂载文件处理器和/或终端处理器。
    """

    _file_paths: Set[str] = set()
    _lock = threading.Lock()

    def __init__(
        self,
        log_file: Union[int, str] = 0,
        log_mode: LogMode = LogMode.PRINT_ONLY,
        log_dir: Optional[str] = None,
        max_size: int = DEFAULT_MAX_LOG_SIZE,
        max_files: int = DEFAULT_MAX_LOG_FILES,
    ):
        """
        初始化日志记录器
        :param log_file: 日志文件名，生成的文件名为log_{log_file}.txt
        :param log_mode: 日志模式
        :param log_dir: 可选的日志文件保存目录
        :param max_size: 日志文件最大大小，默认1MB
        :param max_files: 最大保留的日志文件数量（含当前文件）
        """
        self.config = {
            "max_files": max_files,
            "base_file_name": f"log_{log_file}",
            "log_dir": log_dir or "log",
            "log_mode": log_mode,
            "max_size": max_size,
        }
        self.file_path: Optional[str] = None

        self._logger = logging.getLogger(f"mobbo.{log_file}.{id(self)}")
        self._logger.setLevel(logging.DEBUG)
        self._logger.propagate = False

        if log_mode in (LogMode.SAVE_ONLY, LogMode.PRINT_AND_SAVE):
            file_path = os.path.join(self.config["log_dir"], f"{self.config['base_file_name']}.txt")
            with self._lock:
                if file_path in self._file_paths:
                    raise ValueError(f"日志文件路径 '{file_path}' 已存在。")
                self._file_paths.add(file_path)
            os.makedirs(self.config["log_dir"], exist_ok=True)
            self.file_path = file_path
            file_handler = RotatingFileHandler(
                file_path,
                maxBytes=max_size,
                backupCount=max(max_files - 1, 0),
                encoding="utf-8",
                delay=True,
            )
            file_handler.setFormatter(_RecordFormatter(colored=False))
            self._logger.addHandler(file_handler)

        if log_mode in (LogMode.PRINT_ONLY, LogMode.PRINT_AND_SAVE):
            stream_handler = logging.StreamHandler(sys.stdout)
            stream_handler.setFormatter(_RecordFormatter(colored=True))
            self._logger.addHandler(stream_handler)

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        self.close_file()
        return False

    def close_file(self) -> None:
        """关闭所有处理器并释放文件路径"""
        for handler in list(self._logger.handlers):
            handler.flush()
            handler.close()
            self._logger.removeHandler(handler)
        if self.file_path:
            with self._lock:
                self._file_paths.discard(self.file_path)

    def _emit(self, level: int, args) -> None:
        # stacklevel=3: _emit -> x_print -> 调用者
        self._logger.log(level, " ".join(map(str, args)), stacklevel=3)

    def e_print(self, *args: object) -> None:
        """打印错误日志"""
        self._emit(logging.ERROR, args)

    def w_print(self, *args: object) -> None:
        """打印警告日志"""
        self._emit(logging.WARNING, args)

    def d_print(self, *args: object) -> None:
        """打印调试日志"""
        self._emit(logging.DEBUG, args)

    def i_print(self, *args: object) -> None:
        """打印信息日志"""
        self._emit(logging.INFO, args)

    def printf(self, *args: object) -> None:
        """
        输出不带时间戳的消息：终端直接打印，文件模式下同时写入日志。
        """
        message = " ".join(map(str, args))
        if self.config["log_mode"] in (LogMode.PRINT_ONLY, LogMode.PRINT_AND_SAVE):
            print(message)
        if self.config["log_mode"] in (LogMode.SAVE_ONLY, LogMode.PRINT_AND_SAVE):
            for handler in self._logger.handlers:
                if isinstance(handler, RotatingFileHandler):
                    record = self._logger.makeRecord(
                        self._logger.name, logging.INFO, __file__, 0, message, None, None
                    )
                    formatter = handler.formatter
                    handler.setFormatter(_PlainFormatter())
                    try:
                        handler.handle(record)
                    finally:
                        handler.setFormatter(formatter)


def progress_bar(done: int, total: int, rate: float = 0) -> None:
    """
    进度条显示
    :param done: 已完成代数
    :param total: 总代数
    :param rate: 速率（代/秒）
    """
    progress = 100.0 * done / total if total else 100.0
    now = datetime.datetime.now()
    current_time = now.strftime("%Y-%m-%d %H:%M:%S.") + f"{now.microsecond // 1000:03d}"
    sys.stdout.write("\r")
    sys.stdout.write(f"[{current_time}] 进化进度: [{progress:.2f}%][{rate:.2f} 代/s]")
    if done >= total:
        sys.stdout.write("\n")
    sys.stdout.flush()
