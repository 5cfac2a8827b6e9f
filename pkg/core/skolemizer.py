# -*- coding: utf-8 -*-
"""Canonical Skolemization with a deterministic Skolem-symbol registry.

For an RNNF formula the Skolemized form is computed by structural recursion:
atoms and negated atoms stay as they are, conjunctions, disjunctions and
universal quantifiers are traversed, and an existential ∃xφ is replaced by
φ^S[f(ȳ)/x], where f is the symbol registered for ∃xφ and ȳ are its free
variables in first-occurrence order. The outer existential is registered
before its body is visited, so symbol numbers follow a pre-order walk.

Registry keys are the rendered RNNF text of ∃xφ with bound variables renamed
canonically (b1, b2, ...) and free variables replaced by positional
placeholders (#1, #2, ...). Alpha-variants therefore share one symbol, and
repeated occurrences of the same existential share it too.
"""

import logging
import threading
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Dict, Iterator, List, Mapping, Optional, Tuple

from core.constants import CANONICAL_BOUND_PREFIX, PLACEHOLDER_PREFIX, SKOLEM_PREFIX
from core.normalizer import rnnf
from core.syntax_core import (
    BINARY,
    Apply,
    Atom,
    Exists,
    Forall,
    Formula,
    Not,
    Signature,
    Theory,
    Variable,
    free_vars,
    function_symbols,
    induction_axiom,
    render_formula,
    substitute,
    substitute_term,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SkolemSymbol:
    name: str
    arity: int
    key: str
    source: Formula  # canonical ∃-formula; free variables are the placeholders #1..#m

    @property
    def is_constant(self) -> bool:
        return self.arity == 0

    def provenance(self) -> str:
        return f"f[{self.key}]"


RegistrySnapshot = Tuple[SkolemSymbol, ...]


@dataclass(frozen=True)
class SkolemizedFormula:
    open: Formula
    variables: Tuple[str, ...]
    symbols: Tuple[SkolemSymbol, ...]
    source: Formula
    label: str = ""

    def __str__(self) -> str:
        return render_formula(self.open)


def canonical_existential(f: Exists) -> Tuple[Formula, List[str]]:
    """Canonical representative of ∃xφ and the free variables in placeholder order."""
    frees = free_vars(f)
    mapping = {name: Variable(f"{PLACEHOLDER_PREFIX}{i}") for i, name in enumerate(frees, start=1)}
    counter = [0]

    def walk(g: Formula, renaming: Dict[str, Variable]) -> Formula:
        if isinstance(g, Atom):
            return Atom(g.predicate, tuple(substitute_term(a, renaming) for a in g.args))
        if isinstance(g, Not):
            return Not(walk(g.body, renaming))
        if isinstance(g, BINARY):
            left = walk(g.left, renaming)
            return type(g)(left, walk(g.right, renaming))
        counter[0] += 1
        new = f"{CANONICAL_BOUND_PREFIX}{counter[0]}"
        return type(g)(new, walk(g.body, {**renaming, g.var: Variable(new)}))

    return walk(f, dict(mapping)), frees


def canonical_key(f: Exists) -> str:
    return render_formula(canonical_existential(f)[0])


class SkolemRegistry:
    """Maps canonical existential formulas to Skolem symbols sk1, sk2, ..."""

    def __init__(self, prefix: str = SKOLEM_PREFIX):
        self.prefix = prefix
        self._by_key: Dict[str, SkolemSymbol] = {}
        self._by_name: Dict[str, SkolemSymbol] = {}
        self._order: List[SkolemSymbol] = []
        self._aliases: Dict[str, str] = {}
        self._lock = threading.RLock()

    def __len__(self) -> int:
        return len(self._order)

    def __iter__(self) -> Iterator[SkolemSymbol]:
        return iter(tuple(self._order))

    def __contains__(self, name: str) -> bool:
        return name in self._by_name

    @contextmanager
    def exclusive(self):
        with self._lock:
            yield self

    def register(self, f: Exists) -> Tuple[SkolemSymbol, List[str]]:
        """Symbol for ∃xφ (created on first use) and the argument variables ȳ."""
        canonical, frees = canonical_existential(f)
        key = render_formula(canonical)
        with self._lock:
            symbol = self._by_key.get(key)
            if symbol is None:
                symbol = SkolemSymbol(f"{self.prefix}{len(self._order) + 1}", len(frees), key, canonical)
                self._by_key[key] = symbol
                self._by_name[symbol.name] = symbol
                self._order.append(symbol)
                logger.debug("registered %s/%d for %s", symbol.name, symbol.arity, key)
        return symbol, frees

    def lookup(self, name: str) -> SkolemSymbol:
        return self._by_name[name]

    def get(self, name: str) -> Optional[SkolemSymbol]:
        return self._by_name.get(name)

    def symbol_for(self, f: Exists) -> Optional[SkolemSymbol]:
        return self._by_key.get(canonical_key(f))

    def snapshot(self) -> RegistrySnapshot:
        with self._lock:
            return tuple(self._order)

    def signature_entries(self) -> List[Tuple[str, int]]:
        return [(s.name, s.arity) for s in self._order]

    def extend_signature(self, sig: Signature) -> Signature:
        return sig.extend(functions=self.signature_entries())

    def set_alias(self, name: str, display: str) -> None:
        self._aliases[name] = display

    @property
    def aliases(self) -> Mapping[str, str]:
        return dict(self._aliases)

    def display(self, name: str) -> str:
        symbol = self._by_name[name]
        shown = self._aliases.get(name, name)
        return f"{shown}/{symbol.arity} = {symbol.provenance()}"

    def table(self) -> List[Dict[str, object]]:
        """Registry rows (symbol, arity, source) in creation order."""
        return [
            {"symbol": s.name, "arity": s.arity, "source": s.key, "alias": self._aliases.get(s.name)}
            for s in self._order
        ]


def skolem_step(f: Formula, reg: SkolemRegistry) -> Formula:
    """φ^S for an RNNF formula; universal quantifiers are kept."""
    if isinstance(f, (Atom, Not)):
        return f
    if isinstance(f, BINARY):
        return type(f)(skolem_step(f.left, reg), skolem_step(f.right, reg))
    if isinstance(f, Forall):
        return Forall(f.var, skolem_step(f.body, reg))
    symbol, args = reg.register(f)
    witness = Apply(symbol.name, tuple(Variable(y) for y in args))
    return substitute(skolem_step(f.body, reg), {f.var: witness})


def strip_universals(f: Formula) -> Formula:
    if isinstance(f, (Atom, Not)):
        return f
    if isinstance(f, BINARY):
        return type(f)(strip_universals(f.left), strip_universals(f.right))
    if isinstance(f, Forall):
        return strip_universals(f.body)
    raise ValueError("existential quantifier left after Skolemization")


def skolemize(f: Formula, reg: SkolemRegistry, label: str = "") -> SkolemizedFormula:
    """ψ^Sk: strip the universals of skolem_step(rnnf(ψ))."""
    open_form = strip_universals(skolem_step(rnnf(f), reg))
    used = function_symbols(open_form)
    symbols = tuple(s for s in reg.snapshot() if s.name in used)
    return SkolemizedFormula(open_form, tuple(free_vars(open_form)), symbols, f, label)


def skolemize_theory(theory: Theory, reg: SkolemRegistry) -> List[SkolemizedFormula]:
    """T^Sk in axiom order, sharing one registry."""
    with reg.exclusive():
        result = [
            skolemize(axiom, reg, label=f"{theory.name}:{index}")
            for index, axiom in enumerate(theory.axioms, start=1)
        ]
    logger.info("skolemized %s: %d axioms, %d Skolem symbols", theory.name, len(result), len(reg))
    return result


def skolemize_induction(body: Formula, reg: SkolemRegistry, var: Optional[str] = None) -> SkolemizedFormula:
    """Skolemized induction axiom ind_ψ for ψ with exactly one free variable."""
    if var is None:
        variables = free_vars(body)
        var = variables[0] if len(variables) == 1 else ""
    axiom = induction_axiom(var, body)
    return skolemize(axiom, reg, label=f"ind[{render_formula(body)}]")


def skolem_constants(sf: SkolemizedFormula) -> List[str]:
    return [s.name for s in sf.symbols if s.is_constant]
