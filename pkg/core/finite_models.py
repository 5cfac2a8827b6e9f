# -*- coding: utf-8 -*-
"""Finite structures over a signature, enumerated exhaustively.

Small domains only: this is the semantic oracle behind the normal-form and
Skolemization checks, not a model finder for real theories.
"""

import itertools
import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterator, Mapping, Optional, Sequence, Tuple

from core.constants import EQUALITY
from core.errors import BudgetExceededError, HerbrandError
from core.skolemizer import SkolemizedFormula
from core.syntax_core import (
    And,
    Apply,
    Atom,
    Exists,
    Forall,
    Formula,
    Implies,
    Not,
    Or,
    Signature,
    Term,
    Theory,
    Variable,
)

logger = logging.getLogger(__name__)

DEFAULT_STRUCTURE_CAP = 200_000

Table = Mapping[Tuple[int, ...], int]


@dataclass(frozen=True)
class FiniteStructure:
    size: int
    functions: Mapping[str, Table]
    relations: Mapping[str, FrozenSet[Tuple[int, ...]]]

    @property
    def domain(self) -> range:
        return range(self.size)

    def value(self, t: Term, assignment: Mapping[str, int]) -> int:
        if isinstance(t, Variable):
            return assignment[t.name]
        args = tuple(self.value(a, assignment) for a in t.args)
        return self.functions[t.symbol][args]

    def describe(self) -> str:
        lines = [f"domain: 0..{self.size - 1}"]
        for name, table in self.functions.items():
            lines.append(f"{name}: " + ", ".join(f"{k}->{v}" for k, v in sorted(table.items())))
        for name, rows in self.relations.items():
            lines.append(f"{name}: {sorted(rows)}")
        return "\n".join(lines)


def count_structures(sig: Signature, n: int) -> int:
    total = 1
    for _, arity in sig.functions:
        total *= n ** (n ** arity)
    for _, arity in sig.predicates:
        total *= 2 ** (n ** arity)
    return total


def enumerate_structures(sig: Signature, n: int, cap: int = DEFAULT_STRUCTURE_CAP) -> Iterator[FiniteStructure]:
    """Every structure with domain {0..n-1}; `=` is identity and is never enumerated."""
    if n < 1:
        raise HerbrandError("domain size must be positive")
    requested = count_structures(sig, n)
    if requested > cap:
        raise BudgetExceededError("structures", cap, requested)
    domain = range(n)
    function_choices = []
    for name, arity in sig.functions:
        points = list(itertools.product(domain, repeat=arity))
        function_choices.append([
            (name, dict(zip(points, values)))
            for values in itertools.product(domain, repeat=len(points))
        ])
    relation_choices = []
    for name, arity in sig.predicates:
        points = list(itertools.product(domain, repeat=arity))
        relation_choices.append([
            (name, frozenset(p for p, bit in zip(points, bits) if bit))
            for bits in itertools.product((False, True), repeat=len(points))
        ])
    for functions in itertools.product(*function_choices):
        for relations in itertools.product(*relation_choices):
            yield FiniteStructure(n, dict(functions), dict(relations))


def holds(m: FiniteStructure, f: Formula, assignment: Optional[Mapping[str, int]] = None) -> bool:
    assignment = dict(assignment or {})
    if isinstance(f, Atom):
        values = tuple(m.value(a, assignment) for a in f.args)
        if f.predicate == EQUALITY:
            return values[0] == values[1]
        return values in m.relations[f.predicate]
    if isinstance(f, Not):
        return not holds(m, f.body, assignment)
    if isinstance(f, And):
        return holds(m, f.left, assignment) and holds(m, f.right, assignment)
    if isinstance(f, Or):
        return holds(m, f.left, assignment) or holds(m, f.right, assignment)
    if isinstance(f, Implies):
        return not holds(m, f.left, assignment) or holds(m, f.right, assignment)
    if isinstance(f, Forall):
        return all(holds(m, f.body, {**assignment, f.var: d}) for d in m.domain)
    if isinstance(f, Exists):
        return any(holds(m, f.body, {**assignment, f.var: d}) for d in m.domain)
    raise HerbrandError(f"not a formula: {f!r}")


def holds_universally(m: FiniteStructure, sf: SkolemizedFormula) -> bool:
    """The universal closure of an open Skolemized formula."""
    for values in itertools.product(m.domain, repeat=len(sf.variables)):
        if not holds(m, sf.open, dict(zip(sf.variables, values))):
            return False
    return True


def satisfiable(
    theory: Theory,
    max_size: int,
    sig: Optional[Signature] = None,
    cap: int = DEFAULT_STRUCTURE_CAP,
) -> Optional[FiniteStructure]:
    """A model of the theory with at most max_size elements, smallest first."""
    sig = sig or theory.signature
    for n in range(1, max_size + 1):
        for m in enumerate_structures(sig, n, cap):
            if all(holds(m, axiom) for axiom in theory.axioms):
                logger.debug("model of %s with %d elements", theory.name, n)
                return m
    return None


def skolem_expansion_satisfiable(
    t_sk: Sequence[SkolemizedFormula],
    sig: Signature,
    max_size: int,
    cap: int = DEFAULT_STRUCTURE_CAP,
) -> Optional[FiniteStructure]:
    """A structure for sig (Skolem symbols included) satisfying every ∀-closure in t_sk."""
    for n in range(1, max_size + 1):
        for m in enumerate_structures(sig, n, cap):
            if all(holds_universally(m, sf) for sf in t_sk):
                return m
    return None


def reduct(m: FiniteStructure, sig: Signature) -> FiniteStructure:
    """Forget every symbol outside sig."""
    functions: Dict[str, Table] = {n: m.functions[n] for n, _ in sig.functions}
    relations = {n: m.relations[n] for n, _ in sig.predicates}
    return FiniteStructure(m.size, functions, relations)


def ground_term_value(m: FiniteStructure, t: Apply) -> int:
    return m.value(t, {})
