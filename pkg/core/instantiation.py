# -*- coding: utf-8 -*-
"""Skolem instances and their availability in a finite term set Λ.

An instance is available in Λ when every term occurring as a direct argument
of one of its atoms (both sides of = and <= included) is an element of Λ.
Subterms of Λ-members need not be members themselves. When instances are
enumerated, the free variables range over Λ only.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, Iterator, List, Mapping, Optional, Sequence, Set, Tuple, Union

from core.constants import DEFAULT_BUDGET_INSTANCES
from core.errors import BudgetExceededError, HerbrandError, SubstitutionError
from core.skolemizer import SkolemizedFormula
from core.syntax_core import (
    Atom,
    Formula,
    Signature,
    Term,
    atoms_of,
    is_ground,
    parse_term_lines,
    render_formula,
    render_term,
    replace_symbol,
    substitute,
    substitute_term,
    subterms,
    term_sort_key,
    term_variables,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TermSet:
    """A finite set Λ of ground terms, kept in a canonical order."""

    elements: Tuple[Term, ...] = ()
    label: str = ""

    def __post_init__(self):
        for t in self.elements:
            if not is_ground(t):
                raise HerbrandError(f"term set element is not ground: {render_term(t)}")
        ordered = tuple(sorted(set(self.elements), key=term_sort_key))
        object.__setattr__(self, "elements", ordered)

    @classmethod
    def of(cls, terms: Iterable[Term], label: str = "") -> "TermSet":
        return cls(tuple(terms), label)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[Term]:
        return iter(self.elements)

    def __contains__(self, t: object) -> bool:
        return t in self.members

    @cached_property
    def members(self) -> FrozenSet[Term]:
        return frozenset(self.elements)

    @cached_property
    def positions(self) -> Dict[Term, int]:
        return {t: i for i, t in enumerate(self.elements)}

    def index(self, t: Term) -> int:
        return self.positions[t]

    def union(self, other: Iterable[Term], label: Optional[str] = None) -> "TermSet":
        return TermSet(self.elements + tuple(other), self.label if label is None else label)

    def without(self, t: Term) -> "TermSet":
        return TermSet(tuple(x for x in self.elements if x != t), self.label)

    def issubset(self, other: "TermSet") -> bool:
        return self.members <= other.members

    def closure_under_subterms(self) -> "TermSet":
        closed: Set[Term] = set()
        for t in self.elements:
            closed |= subterms(t)
        return TermSet(tuple(closed), self.label)

    def substitute_constants(self, mapping: Mapping[str, Term], label: Optional[str] = None) -> "TermSet":
        """Γ(t̄): replace constants (typically Skolem constants) by ground terms."""
        return TermSet(tuple(replace_symbol(t, mapping) for t in self.elements), label or self.label)

    def render_lines(self) -> str:
        return "".join(render_term(t) + "\n" for t in self.elements)


def parse_term_set(text: str, sig: Signature, label: str = "") -> TermSet:
    return TermSet(tuple(parse_term_lines(text, sig)), label)


def load_term_set(path: Union[str, Path], sig: Signature) -> TermSet:
    path = Path(path)
    return parse_term_set(path.read_text(encoding="utf-8"), sig, label=path.stem)


@dataclass(frozen=True)
class SkolemInstance:
    source: SkolemizedFormula
    substitution: Tuple[Tuple[str, Term], ...]
    ground: Formula
    source_index: int = field(default=0, compare=False)

    @property
    def mapping(self) -> Dict[str, Term]:
        return dict(self.substitution)

    def describe(self) -> str:
        binding = ", ".join(f"{name}:={render_term(t)}" for name, t in self.substitution)
        origin = self.source.label or render_formula(self.source.open)
        return f"{render_formula(self.ground)}    [{origin}; {binding or 'closed'}]"


def instantiate(sf: SkolemizedFormula, subst: Mapping[str, Term], source_index: int = 0) -> SkolemInstance:
    """Simultaneous substitution of ground terms for every free variable of sf."""
    missing = [v for v in sf.variables if v not in subst]
    if missing:
        raise SubstitutionError(f"substitution misses variables {missing}")
    for name in sf.variables:
        if not is_ground(subst[name]):
            raise SubstitutionError(f"substitute for {name} is not ground: {render_term(subst[name])}")
    pairs = tuple((name, subst[name]) for name in sf.variables)
    return SkolemInstance(sf, pairs, substitute(sf.open, dict(pairs)), source_index)


def is_available(inst: SkolemInstance, lam: TermSet) -> bool:
    return all(arg in lam for atom in atoms_of(inst.ground) for arg in atom.args)


def _atoms_by_level(sf: SkolemizedFormula) -> List[List[Atom]]:
    """Atoms grouped by the position of the last variable they need (-1 → index 0)."""
    order = {name: i for i, name in enumerate(sf.variables)}
    levels: List[List[Atom]] = [[] for _ in range(len(sf.variables) + 1)]
    seen: Set[Atom] = set()
    for atom in atoms_of(sf.open):
        if atom in seen:
            continue
        seen.add(atom)
        needed = [order[v] for a in atom.args for v in term_variables(a)]
        levels[max(needed) + 1 if needed else 0].append(atom)
    return levels


def _instances_of(sf: SkolemizedFormula, lam: TermSet, source_index: int) -> Iterator[SkolemInstance]:
    levels = _atoms_by_level(sf)
    variables = sf.variables
    assignment: Dict[str, Term] = {}

    def atoms_ok(atoms: Sequence[Atom]) -> bool:
        for atom in atoms:
            for arg in atom.args:
                if substitute_term(arg, assignment) not in lam:
                    return False
        return True

    def extend(depth: int) -> Iterator[SkolemInstance]:
        if depth == len(variables):
            yield instantiate(sf, assignment, source_index)
            return
        name = variables[depth]
        for t in lam.elements:
            assignment[name] = t
            if atoms_ok(levels[depth + 1]):
                yield from extend(depth + 1)
        assignment.pop(name, None)

    if atoms_ok(levels[0]):
        yield from extend(0)


def available_instances(
    t_sk: Sequence[SkolemizedFormula],
    lam: TermSet,
    budget: int = DEFAULT_BUDGET_INSTANCES,
) -> List[SkolemInstance]:
    """All available instances, source order then lexicographic substitution, deduplicated by ground formula."""
    for sf in t_sk:
        requested = len(lam) ** len(sf.variables)
        if requested > budget:
            raise BudgetExceededError("instances", budget, requested)
    seen: Set[Formula] = set()
    result: List[SkolemInstance] = []
    for index, sf in enumerate(t_sk):
        for inst in _instances_of(sf, lam, index):
            if inst.ground not in seen:
                seen.add(inst.ground)
                result.append(inst)
    logger.debug("%d available instances over |Λ|=%d", len(result), len(lam))
    return result
