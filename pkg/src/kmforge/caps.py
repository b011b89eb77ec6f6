"""Size caps shared by all engines.

Defaults can only be raised, via the ``KMFORGE_CAPS`` environment variable,
e.g. ``KMFORGE_CAPS="group_order=8192,aut_order=1024"``.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace


class CapExceeded(ValueError):
    """An input is larger than the configured size cap."""


@dataclass(frozen=True)
class Caps:
    group_order: int = 4096
    aut_order: int = 512
    lattice_order: int = 64
    tuple_space: int = 10**7
    word_weight: int = 6
    census_weight: int = 4
    algebra_search: int = 10**7
    bound_bits: int = 10**6


def _parse_env(text: str, base: Caps) -> Caps:
    known = {f.name for f in fields(Caps)}
    updates = {}
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        key, sep, value = item.partition("=")
        key = key.strip()
        if not sep or key not in known:
            raise ValueError(f"bad KMFORGE_CAPS entry {item!r}; known keys: {sorted(known)}")
        new = int(float(value))
        # caps are only ever raised
        updates[key] = max(new, getattr(base, key))
    return replace(base, **updates)


def get_caps() -> Caps:
    return _parse_env(os.environ.get("KMFORGE_CAPS", ""), Caps())
