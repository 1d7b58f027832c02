"""Exact-arithmetic engine for the third-order obstruction of shrinking Ricci solitons on S²×S² and S²×N."""

__version__ = "0.1.0"
