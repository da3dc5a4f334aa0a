"""Locations of the bundled model files."""
import json
from pathlib import Path

DATA_DIR = Path(__file__).resolve().parent / "data"


def bundled_path(name):
    p = DATA_DIR / name
    if not p.exists():
        raise FileNotFoundError("no bundled data file named %r" % name)
    return p


def load_bundled(name):
    with open(bundled_path(name)) as fh:
        return json.load(fh)


def bundled_names():
    return sorted(p.name for p in DATA_DIR.glob("*.json"))
