"""
nashtoric Test Suite
"""
