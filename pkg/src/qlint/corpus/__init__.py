"""Bundled evaluation corpus: small labeled quantum programs.

The ``.py`` files in this directory are analysis fixtures, not importable
modules; ``manifest.txt`` labels each with the detector expected to fire
(or NONE).
"""
from pathlib import Path

CORPUS_DIR = Path(__file__).parent
MANIFEST_PATH = CORPUS_DIR / "manifest.txt"


def corpus_path(name: str) -> Path:
    return CORPUS_DIR / name
