"""Characteristic subgroups and invariant ideals satisfying outer commutator identities."""
__version__ = "0.1.0"
