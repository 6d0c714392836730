from src.m_print import LogMode, MyLogger

# 进程级日志实例，仅保存到文件，不打印到终端
# 进化循环内的调试信息量较大，终端只输出命令行汇总
log = MyLogger("mobbo", LogMode.SAVE_ONLY)
