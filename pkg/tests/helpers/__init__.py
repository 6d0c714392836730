"""
测试辅助工具包
"""
