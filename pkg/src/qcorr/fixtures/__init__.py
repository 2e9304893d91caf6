"""Bundled example states, channels, gates and protocols.

Set QCORR_FIXTURES to point lookups somewhere else, e.g. a directory of
locally generated cases with the same file names.
"""
import os
from importlib import resources
from pathlib import Path


def fixture_dir() -> Path:
    env = os.environ.get("QCORR_FIXTURES")
    if env:
        return Path(env)
    return Path(str(resources.files(__package__)))


def fixture_path(name: str) -> Path:
    return fixture_dir() / name


def list_fixtures() -> list[str]:
    return sorted(p.name for p in fixture_dir().glob("*.json"))
