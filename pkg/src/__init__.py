"""
multiref-dialogue-eval

Multi-reference quality and diversity evaluation of dialogue responses.
"""

__version__ = "0.1.0"
