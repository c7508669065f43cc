"""Bundled scenario documents, one JSON file per reduction family."""

import json
from importlib import resources

PRESET_NAMES = (
    "so3-classical",
    "dgla-identity",
    "aff1-bialgebra",
    "quasi-chi",
    "group-valued-so3",
    "abelian-translation",
)


def load_preset(name: str) -> dict:
    if name not in PRESET_NAMES:
        raise KeyError(f"unknown preset {name!r}; available: {PRESET_NAMES}")
    text = resources.files(__package__).joinpath(f"{name}.json").read_text()
    return json.loads(text)
