"""Bundled example posets in the plain text format."""

from __future__ import annotations

from importlib import resources

from ..posets import Poset, parse_poset_text

FIXTURE_NAMES = ("a2", "c2", "v3")


def fixture_text(name: str) -> str:
    if name not in FIXTURE_NAMES:
        raise KeyError(f"unknown fixture {name!r}; have {FIXTURE_NAMES}")
    return (resources.files(__package__) / f"{name}.poset").read_text()


def load_fixture(name: str) -> tuple[Poset, dict[str, frozenset[str]] | None]:
    return parse_poset_text(fixture_text(name))
