# -*- coding: utf-8 -*-
"""Rectified negation normal form (RNNF).

The six rewriting rules are applied outermost-first until no rule applies:

    (A -> B)      =>  (~A | B)
    ~~A           =>  A
    ~(A & B)      =>  (~A | ~B)
    ~(A | B)      =>  (~A & ~B)
    ~forall x A   =>  exists x ~A
    ~exists x A   =>  forall x ~A

Rectification then renames bound variables x1, x2, ... in leftmost-outermost
order of the quantifier occurrences, skipping names that occur free.
"""

import logging
from typing import Dict, Iterator, List, Optional, Set, Tuple

from core.constants import BOUND_PREFIX
from core.errors import HerbrandError
from core.syntax_core import (
    BINARY,
    QUANTIFIERS,
    And,
    Atom,
    Exists,
    Forall,
    Formula,
    Implies,
    Not,
    Or,
    Variable,
    free_vars,
    substitute_term,
)

logger = logging.getLogger(__name__)


def rank(f: Formula) -> int:
    """Termination measure: every rewrite step strictly decreases it.

    Each node weighs 3^(number of enclosing negations) and implications
    weigh three times as much, so removing an implication, pushing a negation
    inward or cancelling two negations always loses weight.
    """
    return _rank(f, 0)


def _rank(f: Formula, negations: int) -> int:
    weight = 3 ** negations
    if isinstance(f, Atom):
        return weight
    if isinstance(f, Not):
        return weight + _rank(f.body, negations + 1)
    if isinstance(f, Implies):
        return 3 * weight + _rank(f.left, negations + 1) + _rank(f.right, negations)
    if isinstance(f, BINARY):
        return weight + _rank(f.left, negations) + _rank(f.right, negations)
    return weight + _rank(f.body, negations)


def _rewrite_root(f: Formula) -> Optional[Formula]:
    """Apply one rule at the root, or return None."""
    if isinstance(f, Implies):
        return Or(Not(f.left), f.right)
    if not isinstance(f, Not):
        return None
    body = f.body
    if isinstance(body, Not):
        return body.body
    if isinstance(body, And):
        return Or(Not(body.left), Not(body.right))
    if isinstance(body, Or):
        return And(Not(body.left), Not(body.right))
    if isinstance(body, Forall):
        return Exists(body.var, Not(body.body))
    if isinstance(body, Exists):
        return Forall(body.var, Not(body.body))
    return None


def _step(f: Formula) -> Optional[Formula]:
    """One outermost-first rewrite step (leftmost redex among the outermost)."""
    rewritten = _rewrite_root(f)
    if rewritten is not None:
        return rewritten
    if isinstance(f, Not):
        inner = _step(f.body)
        return None if inner is None else Not(inner)
    if isinstance(f, BINARY):
        left = _step(f.left)
        if left is not None:
            return type(f)(left, f.right)
        right = _step(f.right)
        return None if right is None else type(f)(f.left, right)
    if isinstance(f, QUANTIFIERS):
        body = _step(f.body)
        return None if body is None else type(f)(f.var, body)
    return None


def rewrite_trace(f: Formula) -> Iterator[Formula]:
    """Yield f and every intermediate formula of the rewrite sequence."""
    yield f
    budget = rank(f)
    steps = 0
    while True:
        nxt = _step(f)
        if nxt is None:
            return
        steps += 1
        if steps > budget:
            raise HerbrandError("NNF rewriting exceeded its rank bound")
        f = nxt
        yield f


def nnf(f: Formula) -> Formula:
    """Negation normal form under the six rules, outermost-first to fixpoint."""
    result = f
    for result in rewrite_trace(f):
        pass
    return result


def is_nnf(f: Formula) -> bool:
    if isinstance(f, Atom):
        return True
    if isinstance(f, Not):
        return isinstance(f.body, Atom)
    if isinstance(f, Implies):
        return False
    if isinstance(f, BINARY):
        return is_nnf(f.left) and is_nnf(f.right)
    return is_nnf(f.body)


def is_rectified(f: Formula) -> bool:
    """No variable both free and bound; distinct quantifiers bind distinct variables."""
    free = set(free_vars(f))
    seen: Set[str] = set()

    def walk(g: Formula) -> bool:
        if isinstance(g, Atom):
            return True
        if isinstance(g, Not):
            return walk(g.body)
        if isinstance(g, BINARY):
            return walk(g.left) and walk(g.right)
        if g.var in seen or g.var in free:
            return False
        seen.add(g.var)
        return walk(g.body)

    return walk(f)


def is_rnnf(f: Formula) -> bool:
    return is_nnf(f) and is_rectified(f)


def rectify(f: Formula) -> Formula:
    """Alpha-rename bound variables to x1, x2, ... in leftmost-outermost order."""
    taken = set(free_vars(f))
    counter = [0]

    def next_name() -> str:
        while True:
            counter[0] += 1
            candidate = f"{BOUND_PREFIX}{counter[0]}"
            if candidate not in taken:
                return candidate

    def walk(g: Formula, renaming: Dict[str, str]) -> Formula:
        if isinstance(g, Atom):
            if not renaming:
                return g
            mapping = {old: Variable(new) for old, new in renaming.items()}
            return Atom(g.predicate, tuple(substitute_term(a, mapping) for a in g.args))
        if isinstance(g, Not):
            return Not(walk(g.body, renaming))
        if isinstance(g, BINARY):
            left = walk(g.left, renaming)
            return type(g)(left, walk(g.right, renaming))
        new = next_name()
        return type(g)(new, walk(g.body, {**renaming, g.var: new}))

    return walk(f, {})


def rnnf(f: Formula) -> Formula:
    """rectify(nnf(f)); bit-identical across runs."""
    result = rectify(nnf(f))
    logger.debug("rnnf: %s", result)
    return result


def quantifier_order(f: Formula) -> List[Tuple[str, str]]:
    """(kind, variable) for every quantifier in leftmost-outermost order."""
    out: List[Tuple[str, str]] = []

    def walk(g: Formula) -> None:
        if isinstance(g, Not):
            walk(g.body)
        elif isinstance(g, BINARY):
            walk(g.left)
            walk(g.right)
        elif isinstance(g, QUANTIFIERS):
            out.append(("forall" if isinstance(g, Forall) else "exists", g.var))
            walk(g.body)

    walk(f)
    return out
