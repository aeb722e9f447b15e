"""Test suite for multiref-dialogue-eval."""
