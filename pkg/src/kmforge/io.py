"""JSON input formats and canonical report serialization.

Every loader accepts either a path to a JSON file or the JSON text itself,
and returns the parsed object together with the raw bytes it was read from
(reports hash those bytes).
"""
from __future__ import annotations

import hashlib
import json
import os
import re
from importlib import resources
from typing import Any

from . import catalog
from .algebras import Algebra, AlgebraError, LinearEndo, Subspace
from .groups import FiniteGroup, GroupError, Subgroup, group_from_cayley, group_from_permutations, subgroup_generate

__all__ = [
    "InputError",
    "read_source",
    "load_group",
    "load_subgroup",
    "parse_generator_word",
    "load_algebra",
    "load_subspace",
    "load_endos",
    "algebra_corpus",
    "sha256",
    "canonical_json",
]


class InputError(ValueError):
    pass


def sha256(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def canonical_json(obj: Any) -> str:
    """Sorted keys, fixed separators, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def read_source(arg: str) -> tuple[Any, bytes]:
    """Parse ``arg`` as inline JSON if it looks like JSON, else as a file path."""
    text = arg.strip()
    if text[:1] in "{[":
        raw = text.encode()
    else:
        if not os.path.exists(arg):
            raise InputError(f"no such file: {arg}")
        with open(arg, "rb") as fh:
            raw = fh.read()
    try:
        return json.loads(raw), raw
    except json.JSONDecodeError as e:
        raise InputError(f"malformed JSON in {arg if len(arg) < 60 else arg[:57] + '...'}: {e}") from None


def _group_from_dict(data: dict, name=None) -> FiniteGroup:
    if not isinstance(data, dict):
        raise InputError("group JSON must be an object")
    kind = data.get("kind")
    if kind == "permutation":
        try:
            return group_from_permutations(int(data["degree"]), data.get("generators", []), name=name)
        except (KeyError, TypeError) as e:
            raise InputError(f"permutation group needs 'degree' and 'generators': {e}") from None
    if kind == "cayley":
        if "table" not in data:
            raise InputError("cayley group needs 'table'")
        return group_from_cayley(data["table"], name=name)
    raise InputError(f"unknown group kind {kind!r}; use 'permutation' or 'cayley'")


def load_group(arg: str) -> tuple[FiniteGroup, bytes]:
    """``catalog:NAME``, a JSON file, or inline JSON."""
    if arg.startswith("catalog:"):
        name = arg[len("catalog:"):]
        try:
            G = catalog.get(name)
        except KeyError as e:
            raise InputError(e.args[0]) from None
        return G, f"catalog:{name}@v{catalog.CATALOG_VERSION}".encode()
    data, raw = read_source(arg)
    return _group_from_dict(data, name=data.get("name") if isinstance(data, dict) else None), raw


_TOKEN = re.compile(r"g(\d+)(?:\^(-?\d+))?$")


def parse_generator_word(G: FiniteGroup, text: str) -> int:
    """Evaluate ``g0*g1^-1*...`` against ``G.generators``; ``e`` is the identity."""
    out = 0
    for part in text.replace(" ", "").split("*"):
        if part in ("e", "1"):
            continue
        m = _TOKEN.match(part)
        if not m:
            raise InputError(f"bad generator word {text!r}: cannot read {part!r}")
        i = int(m.group(1))
        if i >= len(G.generators):
            raise InputError(f"bad generator word {text!r}: group has {len(G.generators)} generators")
        x = G.power(G.generators[i], int(m.group(2) or 1))
        out = G.mul(out, x)
    return out


def load_subgroup(G: FiniteGroup, arg: str) -> tuple[Subgroup, bytes]:
    data, raw = read_source(arg)
    if not isinstance(data, dict) or not ({"generators", "generator_words"} & set(data)):
        raise InputError("subgroup JSON needs 'generators' (element indices) or 'generator_words'")
    seed = []
    for g in data.get("generators", []):
        if not isinstance(g, int) or not 0 <= g < G.order:
            raise InputError(f"element index {g!r} out of range 0..{G.order - 1}")
        seed.append(g)
    seed.extend(parse_generator_word(G, w) for w in data.get("generator_words", []))
    return subgroup_generate(G, seed), raw


def load_algebra(arg: str) -> tuple[Algebra, bytes]:
    if arg.startswith("corpus:"):
        name = arg[len("corpus:"):]
        path = resources.files("kmforge") / "data" / "algebras" / f"{name}.json"
        if not path.is_file():
            raise InputError(f"unknown corpus algebra {name!r}; known: {', '.join(algebra_corpus())}")
        raw = path.read_bytes()
        data = json.loads(raw)
    else:
        data, raw = read_source(arg)
    try:
        return Algebra.from_dict(data), raw
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"bad algebra JSON: {e}") from None


def load_subspace(A: Algebra, arg: str) -> tuple[Subspace, bytes]:
    data, raw = read_source(arg)
    if not isinstance(data, dict):
        raise InputError("subspace JSON must be an object")
    return Subspace.from_dict(A, data), raw


def load_endos(A: Algebra, arg: str) -> tuple[list[LinearEndo], bytes]:
    """``{"endos": [matrix, ...]}`` or a bare list of matrices (rows are images of basis vectors)."""
    data, raw = read_source(arg)
    mats = data.get("endos") if isinstance(data, dict) else data
    if not isinstance(mats, list):
        raise InputError("endomorphism JSON needs a list of matrices")
    return [LinearEndo(A, M) for M in mats], raw


def algebra_corpus() -> dict[str, Algebra]:
    """The shipped structure-constant algebras, by name."""
    folder = resources.files("kmforge") / "data" / "algebras"
    out = {}
    for entry in sorted(folder.iterdir(), key=lambda p: p.name):
        if entry.name.endswith(".json"):
            data = json.loads(entry.read_bytes())
            out[entry.name[:-5]] = Algebra.from_dict(data, name=entry.name[:-5])
    return out


INPUT_ERRORS = (InputError, GroupError, AlgebraError)
