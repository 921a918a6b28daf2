"""Bounded satisfiability search for formulas over downset algebras.

A conjunction of atoms ``t = 0`` / ``t != 0`` holds in some algebra iff it
holds in a small one, so enumerating posets by isomorphism class and
sweeping variable assignments is a complete procedure below the caps.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .algebra import Algebra, Element
from .config import DEFAULT_CAPS, Caps
from .posets import Poset, enumerate_posets, parse_point_list, parse_poset_text, poset_to_text
from .terms import Formula, eval_formula


@dataclass(frozen=True)
class Witness:
    """Satisfying poset and assignment, with a replay certificate."""

    poset: Poset
    assignment: dict[str, Element]
    replayed: bool

    def describe(self) -> str:
        lines = ["witness poset:"]
        lines.append(poset_to_text(self.poset).rstrip("\n"))
        for name in sorted(self.assignment):
            lines.append(f"assignment: {name}={self.assignment[name]}")
        lines.append(f"replay: {'ok' if self.replayed else 'FAILED'}")
        return "\n".join(lines)


def _replay(formula: Formula, poset: Poset, assignment: dict[str, Element]) -> bool:
    """Round-trip the witness through text and re-evaluate from scratch."""
    fresh, _ = parse_poset_text(poset_to_text(poset))
    algebra = Algebra(fresh)
    env = {
        name: algebra.element(parse_point_list(str(elem), fresh))
        for name, elem in assignment.items()
    }
    return eval_formula(formula, algebra, env)


def fmp_search(
    formula: Formula,
    max_points: int,
    max_assignments: int,
    caps: Caps = DEFAULT_CAPS,
) -> Witness | None:
    """First witness in the deterministic enumeration order, or None.

    ``max_assignments`` caps the number of variable assignments tried per
    poset.
    """
    names = sorted(formula.variables())
    for poset in enumerate_posets(max_points, caps):
        algebra = Algebra(poset)
        elements = algebra.elements(caps)
        tried = 0
        for combo in itertools.product(elements, repeat=len(names)):
            tried += 1
            if tried > max_assignments:
                break
            env = dict(zip(names, combo))
            if eval_formula(formula, algebra, env):
                return Witness(
                    poset=poset,
                    assignment=env,
                    replayed=_replay(formula, poset, env),
                )
    return None
