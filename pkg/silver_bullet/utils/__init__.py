from .reporting import render, to_json, to_text

__all__ = ["render", "to_json", "to_text"]
