"""
Bundled example corpus

Each JSON file under carnot_conformal/data has a "kind" (pair, group, ring or
points) and a description. Group and ring files name the pair they live on
through their "pair" key.
"""

import json
from functools import lru_cache
from importlib.resources import files
from typing import Any, Dict, List, Mapping

from ..algebra.heintze import DiagonalHeintzePair
from ..exceptions import ValidationError
from .serialization import parse_inner_products, parse_pair

DATA_PACKAGE = "carnot_conformal.data"


def available_examples() -> List[str]:
    """Names of the bundled examples, sorted."""
    return sorted(
        entry.name[: -len(".json")]
        for entry in files(DATA_PACKAGE).iterdir()
        if entry.name.endswith(".json")
    )


@lru_cache(maxsize=None)
def _load_text(name: str) -> str:
    resource = files(DATA_PACKAGE) / f"{name}.json"
    if not resource.is_file():
        available = ", ".join(available_examples())
        raise ValidationError(f"unknown example '{name}'; available: {available}")
    return resource.read_text(encoding="utf-8")


def load_example(name: str) -> Dict[str, Any]:
    """
    The raw JSON document of a bundled example.

    Raises:
        ValidationError: If no example has that name
    """
    return json.loads(_load_text(name))


def resolve_pair(obj: Mapping[str, Any]) -> DiagonalHeintzePair:
    """
    The pair a document lives on: a named example under "pair", an inline
    pair object under "pair", or the document itself.
    """
    ref = obj.get("pair")
    if isinstance(ref, str):
        return example_pair(ref)
    if isinstance(ref, Mapping):
        return parse_pair(ref)
    return parse_pair(obj)


def example_pair(name: str) -> DiagonalHeintzePair:
    return resolve_pair(load_example(name))


def example_inner_products(name: str) -> Dict[str, Any]:
    doc = load_example(name)
    return parse_inner_products(resolve_pair(doc), doc)


def example_index() -> List[Dict[str, str]]:
    """name, kind and description of every bundled example."""
    out = []
    for name in available_examples():
        doc = load_example(name)
        description = doc.get("description", "")
        out.append({"name": name, "kind": doc.get("kind", "pair"), "description": description})
    return out


__all__ = [
    "DATA_PACKAGE",
    "available_examples",
    "load_example",
    "resolve_pair",
    "example_pair",
    "example_inner_products",
    "example_index",
]
