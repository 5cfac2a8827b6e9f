# -*- coding: utf-8 -*-
"""Abstract syntax, signatures, parsing and printing of first-order logic.

Terms and formulas are immutable frozen dataclasses so they can be shared
across threads and used as dictionary keys. The concrete syntax is parsed with
a LALR grammar (``lark``); shift/reduce choices resolve as shift, which is what
makes quantifiers extend as far right as possible.

Parsing runs in two phases: the grammar produces a raw tree that knows nothing
about scope, then a resolver walks it top-down, deciding for every identifier
whether it is a bound variable, a declared constant or a declared free
variable, and checking arities with source positions.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, Iterator, List, Mapping, NamedTuple, Optional, Sequence, Set, Tuple, Union

from lark import Lark, Token, Transformer, v_args
from lark.exceptions import UnexpectedInput, VisitError

from core.constants import EQUALITY, LESS_EQUAL, ONE, PLUS, SUCCESSOR, TIMES, ZERO
from core.errors import HerbrandError, ParseError, SignatureError, SubstitutionError

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Terms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Variable:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Apply:
    symbol: str
    args: Tuple["Term", ...] = ()

    def __str__(self) -> str:
        return render_term(self)


Term = Union[Variable, Apply]


def const(name: str) -> Apply:
    return Apply(name, ())


def app(symbol: str, *args: Term) -> Apply:
    return Apply(symbol, tuple(args))


def is_ground(t: Term) -> bool:
    if isinstance(t, Variable):
        return False
    return all(is_ground(a) for a in t.args)


def term_size(t: Term) -> int:
    if isinstance(t, Variable):
        return 1
    return 1 + sum(term_size(a) for a in t.args)


def term_depth(t: Term) -> int:
    if isinstance(t, Variable) or not t.args:
        return 0
    return 1 + max(term_depth(a) for a in t.args)


def term_sort_key(t: Term) -> Tuple[int, str]:
    """Deterministic order used for term sets: smaller terms first, then by text."""
    return (term_size(t), render_term(t))


def subterms(t: Term) -> Set[Term]:
    """t together with all of its proper subterms."""
    found: Set[Term] = set()
    stack = [t]
    while stack:
        current = stack.pop()
        if current in found:
            continue
        found.add(current)
        if isinstance(current, Apply):
            stack.extend(current.args)
    return found


def term_variables(t: Term) -> Iterator[str]:
    if isinstance(t, Variable):
        yield t.name
    else:
        for a in t.args:
            yield from term_variables(a)


def substitute_term(t: Term, mapping: Mapping[str, Term]) -> Term:
    if isinstance(t, Variable):
        return mapping.get(t.name, t)
    if not t.args:
        return t
    return Apply(t.symbol, tuple(substitute_term(a, mapping) for a in t.args))


def replace_symbol(t: Term, mapping: Mapping[str, Term]) -> Term:
    """Replace constants by terms (used to transport term sets, e.g. Γ(t̄))."""
    if isinstance(t, Variable):
        return t
    if not t.args and t.symbol in mapping:
        return mapping[t.symbol]
    return Apply(t.symbol, tuple(replace_symbol(a, mapping) for a in t.args))


# ---------------------------------------------------------------------------
# Formulas
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Atom:
    predicate: str
    args: Tuple[Term, ...] = ()

    def __str__(self) -> str:
        return render_formula(self)


@dataclass(frozen=True)
class Not:
    body: "Formula"

    def __str__(self) -> str:
        return render_formula(self)


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"

    def __str__(self) -> str:
        return render_formula(self)


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"

    def __str__(self) -> str:
        return render_formula(self)


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"

    def __str__(self) -> str:
        return render_formula(self)


@dataclass(frozen=True)
class Forall:
    var: str
    body: "Formula"

    def __str__(self) -> str:
        return render_formula(self)


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Formula"

    def __str__(self) -> str:
        return render_formula(self)


Formula = Union[Atom, Not, And, Or, Implies, Forall, Exists]
BINARY = (And, Or, Implies)
QUANTIFIERS = (Forall, Exists)


def eq(left: Term, right: Term) -> Atom:
    return Atom(EQUALITY, (left, right))


def le(left: Term, right: Term) -> Atom:
    return Atom(LESS_EQUAL, (left, right))


def disjunction(parts: Sequence[Formula]) -> Formula:
    """Left-nested disjunction of a non-empty sequence."""
    result = parts[0]
    for part in parts[1:]:
        result = Or(result, part)
    return result


def conjunction(parts: Sequence[Formula]) -> Formula:
    result = parts[0]
    for part in parts[1:]:
        result = And(result, part)
    return result


def free_vars(f: Formula) -> List[str]:
    """Free variables in order of first (leftmost) occurrence, without duplicates."""
    seen: List[str] = []
    _collect_free(f, frozenset(), seen)
    return seen


def _collect_free(f: Formula, bound: FrozenSet[str], out: List[str]) -> None:
    if isinstance(f, Atom):
        for a in f.args:
            for name in term_variables(a):
                if name not in bound and name not in out:
                    out.append(name)
    elif isinstance(f, Not):
        _collect_free(f.body, bound, out)
    elif isinstance(f, BINARY):
        _collect_free(f.left, bound, out)
        _collect_free(f.right, bound, out)
    else:
        _collect_free(f.body, bound | {f.var}, out)


def is_closed(f: Formula) -> bool:
    return not free_vars(f)


def is_open(f: Formula) -> bool:
    """True when the formula has no quantifiers."""
    if isinstance(f, Atom):
        return True
    if isinstance(f, Not):
        return is_open(f.body)
    if isinstance(f, BINARY):
        return is_open(f.left) and is_open(f.right)
    return False


def atoms_of(f: Formula) -> Iterator[Atom]:
    if isinstance(f, Atom):
        yield f
    elif isinstance(f, Not):
        yield from atoms_of(f.body)
    elif isinstance(f, BINARY):
        yield from atoms_of(f.left)
        yield from atoms_of(f.right)
    else:
        yield from atoms_of(f.body)


def bound_vars(f: Formula) -> Iterator[str]:
    if isinstance(f, Not):
        yield from bound_vars(f.body)
    elif isinstance(f, BINARY):
        yield from bound_vars(f.left)
        yield from bound_vars(f.right)
    elif isinstance(f, QUANTIFIERS):
        yield f.var
        yield from bound_vars(f.body)


def function_symbols(f: Formula) -> Set[str]:
    found: Set[str] = set()
    for atom in atoms_of(f):
        for a in atom.args:
            for t in subterms(a):
                if isinstance(t, Apply):
                    found.add(t.symbol)
    return found


def fresh_name(base: str, taken: Iterable[str]) -> str:
    taken = set(taken)
    index = 1
    while f"{base}{index}" in taken:
        index += 1
    return f"{base}{index}"


def substitute(f: Formula, mapping: Mapping[str, Term]) -> Formula:
    """Capture-avoiding simultaneous substitution of terms for free variables."""
    if not mapping:
        return f
    if isinstance(f, Atom):
        return Atom(f.predicate, tuple(substitute_term(a, mapping) for a in f.args))
    if isinstance(f, Not):
        return Not(substitute(f.body, mapping))
    if isinstance(f, BINARY):
        return type(f)(substitute(f.left, mapping), substitute(f.right, mapping))
    inner = {k: v for k, v in mapping.items() if k != f.var}
    incoming = {name for t in inner.values() for name in term_variables(t)}
    if f.var in incoming:
        fresh = fresh_name(f.var + "_", incoming | set(free_vars(f.body)) | set(inner))
        body = substitute(f.body, {f.var: Variable(fresh)})
        return type(f)(fresh, substitute(body, inner))
    return type(f)(f.var, substitute(f.body, inner))


# ---------------------------------------------------------------------------
# Signatures and theories
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Signature:
    """Function and predicate symbols; constants are 0-ary functions, `=` is built in."""

    functions: Tuple[Tuple[str, int], ...] = ()
    predicates: Tuple[Tuple[str, int], ...] = ()

    def __post_init__(self):
        names = [n for n, _ in self.functions] + [n for n, _ in self.predicates]
        duplicates = {n for n in names if names.count(n) > 1}
        if duplicates:
            raise SignatureError(f"duplicate symbol names: {sorted(duplicates)}")
        if EQUALITY in names:
            raise SignatureError("'=' is built in and cannot be declared")
        for name, arity in self.functions + self.predicates:
            if arity < 0:
                raise SignatureError(f"negative arity for {name}")
            if name in (PLUS, TIMES) and arity != 2:
                raise SignatureError(f"infix symbol {name} must be binary")
        for name, arity in self.predicates:
            if name == LESS_EQUAL and arity != 2:
                raise SignatureError("infix predicate <= must be binary")
        if not any(arity == 0 for _, arity in self.functions):
            raise SignatureError("a signature needs at least one constant symbol")

    @cached_property
    def function_arities(self) -> Dict[str, int]:
        return dict(self.functions)

    @cached_property
    def predicate_arities(self) -> Dict[str, int]:
        return {EQUALITY: 2, **dict(self.predicates)}

    @property
    def all_predicates(self) -> Tuple[Tuple[str, int], ...]:
        return ((EQUALITY, 2),) + self.predicates

    @property
    def constants(self) -> List[str]:
        return [name for name, arity in self.functions if arity == 0]

    def has_function(self, name: str) -> bool:
        return name in self.function_arities

    def extend(self, functions: Iterable[Tuple[str, int]] = (), predicates: Iterable[Tuple[str, int]] = ()) -> "Signature":
        """Signature with extra symbols; already present names are skipped."""
        known = set(self.function_arities) | set(self.predicate_arities)
        new_functions = tuple((n, a) for n, a in functions if n not in known)
        new_predicates = tuple((n, a) for n, a in predicates if n not in known)
        if not new_functions and not new_predicates:
            return self
        return Signature(self.functions + new_functions, self.predicates + new_predicates)


@dataclass(frozen=True)
class Theory:
    name: str
    signature: Signature
    axioms: Tuple[Formula, ...] = ()

    def __post_init__(self):
        for axiom in self.axioms:
            if free_vars(axiom):
                raise HerbrandError(f"axiom is not a sentence: {render_formula(axiom)}")

    def with_axioms(self, *extra: Formula, name: Optional[str] = None) -> "Theory":
        return Theory(name or self.name, self.signature, self.axioms + tuple(extra))


# ---------------------------------------------------------------------------
# Numerals
# ---------------------------------------------------------------------------

def ground_numeral(j: int, sig: Optional[Signature] = None) -> Term:
    """j̲ = s^j(0); without `s` but with `1` and `+`, j+1 is spelled j + 1."""
    if j < 0:
        raise ValueError("numerals are natural numbers")
    if sig is None or sig.has_function(SUCCESSOR):
        t: Term = const(ZERO)
        for _ in range(j):
            t = Apply(SUCCESSOR, (t,))
        return t
    if not (sig.has_function(ONE) and sig.has_function(PLUS)):
        raise SignatureError("numerals need either s or both 1 and +")
    if j == 0:
        return const(ZERO)
    t = const(ONE)
    for _ in range(j - 1):
        t = Apply(PLUS, (t, const(ONE)))
    return t


def numeral_value(t: Term) -> Optional[int]:
    """Inverse of ground_numeral for the successor form; None for other terms."""
    count = 0
    while isinstance(t, Apply) and t.symbol == SUCCESSOR and len(t.args) == 1:
        count += 1
        t = t.args[0]
    if isinstance(t, Apply) and t.symbol == ZERO and not t.args:
        return count
    return None


def induction_axiom(var: str, body: Formula) -> Formula:
    """ind_ψ = ψ(0) ∧ ∀x(ψ(x) → ψ(s x)) → ∀x ψ(x) for ψ with the single free variable var."""
    variables = free_vars(body)
    if variables != [var]:
        raise SubstitutionError(
            f"induction formula must have exactly one free variable {var!r}, found {variables}"
        )
    at_zero = substitute(body, {var: const(ZERO)})
    at_successor = substitute(body, {var: Apply(SUCCESSOR, (Variable(var),))})
    premise = And(at_zero, Forall(var, Implies(body, at_successor)))
    return Implies(premise, Forall(var, body))


# ---------------------------------------------------------------------------
# Printing
# ---------------------------------------------------------------------------

_PREC_IMPLIES, _PREC_OR, _PREC_AND, _PREC_UNARY, _PREC_ATOM = 1, 2, 3, 4, 5
_TERM_PREC = {PLUS: 1, TIMES: 2}


def render_term(t: Term, aliases: Optional[Mapping[str, str]] = None) -> str:
    return _render_term(t, aliases or {})[0]


def _render_term(t: Term, aliases: Mapping[str, str]) -> Tuple[str, int]:
    if isinstance(t, Variable):
        return t.name, 3
    name = aliases.get(t.symbol, t.symbol)
    if t.symbol in _TERM_PREC and len(t.args) == 2:
        prec = _TERM_PREC[t.symbol]
        left, left_prec = _render_term(t.args[0], aliases)
        right, right_prec = _render_term(t.args[1], aliases)
        if left_prec < prec:
            left = f"({left})"
        if right_prec <= prec:
            right = f"({right})"
        return f"{left} {t.symbol} {right}", prec
    if not t.args:
        return name, 3
    inner = ", ".join(_render_term(a, aliases)[0] for a in t.args)
    return f"{name}({inner})", 3


def render_atom(a: Atom, aliases: Optional[Mapping[str, str]] = None, negated: bool = False) -> str:
    aliases = aliases or {}
    if a.predicate in (EQUALITY, LESS_EQUAL) and len(a.args) == 2:
        op = a.predicate if not negated else "!" + a.predicate
        return f"{render_term(a.args[0], aliases)} {op} {render_term(a.args[1], aliases)}"
    name = aliases.get(a.predicate, a.predicate)
    text = name if not a.args else f"{name}({', '.join(render_term(x, aliases) for x in a.args)})"
    return "~" + text if negated else text


def render_formula(f: Formula, aliases: Optional[Mapping[str, str]] = None) -> str:
    return _render(f, aliases or {})[0]


def _render(f: Formula, aliases: Mapping[str, str]) -> Tuple[str, int, bool]:
    """Returns (text, precedence, open_tail); an open tail ends in an unparenthesized quantifier."""
    if isinstance(f, Atom):
        return render_atom(f, aliases), _PREC_ATOM, False
    if isinstance(f, Not):
        if isinstance(f.body, Atom) and f.body.predicate in (EQUALITY, LESS_EQUAL):
            return render_atom(f.body, aliases, negated=True), _PREC_ATOM, False
        text, prec, open_tail = _render(f.body, aliases)
        if prec < _PREC_UNARY:
            return f"~({text})", _PREC_UNARY, False
        return "~" + text, _PREC_UNARY, open_tail
    if isinstance(f, QUANTIFIERS):
        keyword = "forall" if isinstance(f, Forall) else "exists"
        body = _render(f.body, aliases)[0]
        return f"{keyword} {f.var}. {body}", _PREC_UNARY, True
    if isinstance(f, Implies):
        prec, op = _PREC_IMPLIES, "->"
        left_assoc = False
    elif isinstance(f, Or):
        prec, op = _PREC_OR, "|"
        left_assoc = True
    else:
        prec, op = _PREC_AND, "&"
        left_assoc = True
    left, left_prec, left_open = _render(f.left, aliases)
    right, right_prec, right_open = _render(f.right, aliases)
    if left_prec < prec or left_open or (not left_assoc and left_prec == prec):
        left = f"({left})"
    if right_prec < prec or (left_assoc and right_prec == prec):
        right = f"({right})"
        right_open = False
    return f"{left} {op} {right}", prec, right_open


def render_signature(sig: Signature) -> str:
    functions = " ".join(f"{n}/{a}" for n, a in sig.functions)
    predicates = " ".join(f"{n}/{a}" for n, a in sig.predicates)
    return f"signature: {functions} ; {predicates}".rstrip()


def render_theory(theory: Theory) -> str:
    lines = [render_signature(theory.signature)]
    lines.extend(render_formula(a) for a in theory.axioms)
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

GRAMMAR = r"""
formula_input: formula
term_input: sum

?formula: iff
?iff: impl
    | impl ("<->" | "↔") iff                      -> iff
?impl: disj
     | disj ("->" | "→") impl                     -> implies
?disj: conj
     | disj ("|" | "∨") conj                      -> or_
?conj: unary
     | conj ("&" | "∧") unary                     -> and_
?unary: ("~" | "¬") unary                         -> not_
      | quantifier NAME "." formula               -> quantified
      | atom
      | "(" formula ")"
!quantifier: "forall" | "exists" | "∀" | "∃"

?atom: sum "=" sum                                -> eq
     | sum ("!=" | "≠") sum                        -> neq
     | sum ("<=" | "≤") sum                        -> le
     | sum ("!<=" | "≰") sum                       -> nle
     | sum                                        -> bare

?sum: sum "+" product                             -> plus
    | product
?product: product "*" primary                     -> times
        | primary
?primary: NAME "(" arguments ")"                  -> application
        | NAME "(" ")"                            -> application
        | NAME                                    -> name
        | "(" sum ")"
arguments: sum ("," sum)*

NAME: /[A-Za-z_][A-Za-z0-9_']*/ | /[0-9]+/

%import common.WS
%ignore WS
"""


class _RawTerm(NamedTuple):
    name: str
    args: Tuple["_RawTerm", ...]
    line: Optional[int]
    column: Optional[int]


@v_args(inline=True)
class _RawBuilder(Transformer):
    """Builds scope-free raw trees; identifiers are resolved later."""

    def formula_input(self, f):
        return f

    def term_input(self, t):
        return t

    def name(self, token: Token):
        return _RawTerm(str(token), (), token.line, token.column)

    def arguments(self, *args):
        return tuple(args)

    def application(self, token: Token, args=()):
        return _RawTerm(str(token), tuple(args), token.line, token.column)

    def plus(self, left, right):
        return _RawTerm(PLUS, (left, right), left.line, left.column)

    def times(self, left, right):
        return _RawTerm(TIMES, (left, right), left.line, left.column)

    def eq(self, left, right):
        return ("atom", EQUALITY, (left, right), False)

    def neq(self, left, right):
        return ("atom", EQUALITY, (left, right), True)

    def le(self, left, right):
        return ("atom", LESS_EQUAL, (left, right), False)

    def nle(self, left, right):
        return ("atom", LESS_EQUAL, (left, right), True)

    def bare(self, term):
        return ("bare", term)

    def not_(self, body):
        return ("not", body)

    def and_(self, left, right):
        return ("and", left, right)

    def or_(self, left, right):
        return ("or", left, right)

    def implies(self, left, right):
        return ("implies", left, right)

    def iff(self, left, right):
        return ("iff", left, right)

    def quantifier(self, token: Token):
        return "forall" if str(token) in ("forall", "∀") else "exists"

    def quantified(self, kind, token: Token, body):
        return (kind, str(token), body)


_parser: Optional[Lark] = None


def _get_parser() -> Lark:
    global _parser
    if _parser is None:
        _parser = Lark(GRAMMAR, parser="lalr", start=["formula_input", "term_input"], propagate_positions=False)
    return _parser


class _Resolver:
    """Turns raw trees into Terms/Formulas against a signature and a scope."""

    def __init__(self, sig: Signature):
        self.sig = sig

    def term(self, raw: _RawTerm, scope: FrozenSet[str]) -> Term:
        if raw.name in scope and not raw.args:
            return Variable(raw.name)
        arity = self.sig.function_arities.get(raw.name)
        if arity is None:
            if raw.name in self.sig.predicate_arities:
                raise SignatureError(f"predicate {raw.name!r} used as a term", raw.line, raw.column)
            if raw.name in scope:
                raise SignatureError(f"variable {raw.name!r} applied to arguments", raw.line, raw.column)
            raise SignatureError(f"unknown symbol {raw.name!r}", raw.line, raw.column)
        if arity != len(raw.args):
            raise SignatureError(
                f"arity mismatch for {raw.name!r}: expected {arity}, got {len(raw.args)}", raw.line, raw.column
            )
        return Apply(raw.name, tuple(self.term(a, scope) for a in raw.args))

    def formula(self, raw, scope: FrozenSet[str]) -> Formula:
        kind = raw[0]
        if kind == "atom":
            _, predicate, (left, right), negated = raw
            if predicate not in self.sig.predicate_arities:
                raise SignatureError(f"predicate {predicate!r} is not declared", left.line, left.column)
            atom = Atom(predicate, (self.term(left, scope), self.term(right, scope)))
            return Not(atom) if negated else atom
        if kind == "bare":
            term = raw[1]
            arity = self.sig.predicate_arities.get(term.name)
            if arity is None:
                raise SignatureError(f"expected a formula, found term {term.name!r}", term.line, term.column)
            if arity != len(term.args):
                raise SignatureError(
                    f"arity mismatch for {term.name!r}: expected {arity}, got {len(term.args)}", term.line, term.column
                )
            return Atom(term.name, tuple(self.term(a, scope) for a in term.args))
        if kind == "not":
            return Not(self.formula(raw[1], scope))
        if kind == "and":
            return And(self.formula(raw[1], scope), self.formula(raw[2], scope))
        if kind == "or":
            return Or(self.formula(raw[1], scope), self.formula(raw[2], scope))
        if kind == "implies":
            return Implies(self.formula(raw[1], scope), self.formula(raw[2], scope))
        if kind == "iff":
            left = self.formula(raw[1], scope)
            right = self.formula(raw[2], scope)
            return And(Implies(left, right), Implies(right, left))
        _, var, body = raw
        inner = self.formula(body, scope | {var})
        return Forall(var, inner) if kind == "forall" else Exists(var, inner)


def _parse_raw(text: str, start: str):
    try:
        tree = _get_parser().parse(text, start=start)
        return _RawBuilder().transform(tree)
    except UnexpectedInput as exc:
        raise ParseError(f"syntax error: {exc.__class__.__name__}", exc.line, exc.column) from None
    except VisitError as exc:  # pragma: no cover - builder never raises
        raise ParseError(str(exc.orig_exc)) from exc


def parse_formula(text: str, sig: Signature, variables: Iterable[str] = ()) -> Formula:
    """Parse a formula; `variables` declares free variables allowed in open formulas."""
    return _Resolver(sig).formula(_parse_raw(text, "formula_input"), frozenset(variables))


def parse_term(text: str, sig: Signature, variables: Iterable[str] = ()) -> Term:
    return _Resolver(sig).term(_parse_raw(text, "term_input"), frozenset(variables))


# ---------------------------------------------------------------------------
# Files
# ---------------------------------------------------------------------------

def _content_lines(text: str) -> Iterator[Tuple[int, str]]:
    for number, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if stripped:
            yield number, stripped


def parse_signature(line: str) -> Signature:
    """Parse `signature: f/2 g/1 c/0 ; P/2 R/1`."""
    if not line.startswith("signature:"):
        raise ParseError("theory file must start with a 'signature:' line", 1, 1)
    body = line[len("signature:"):]
    function_part, _, predicate_part = body.partition(";")

    def entries(part: str) -> Tuple[Tuple[str, int], ...]:
        out = []
        for item in part.split():
            name, slash, arity = item.rpartition("/")
            if not slash or not name or not arity.isdigit():
                raise ParseError(f"bad signature entry {item!r}", 1, 1)
            out.append((name, int(arity)))
        return tuple(out)

    return Signature(entries(function_part), entries(predicate_part))


def parse_theory(text: str, name: str = "theory") -> Theory:
    """Theory text: a signature line, then one axiom or `induction x: ψ` directive per line."""
    lines = list(_content_lines(text))
    if not lines:
        raise ParseError("empty theory file")
    sig = parse_signature(lines[0][1])
    axioms: List[Formula] = []
    for number, line in lines[1:]:
        try:
            if line.startswith("induction "):
                header, colon, body = line[len("induction "):].partition(":")
                var = header.strip()
                if not colon or not var:
                    raise ParseError("expected 'induction <var>: <formula>'")
                axioms.append(induction_axiom(var, parse_formula(body, sig, variables=[var])))
            else:
                axioms.append(parse_formula(line, sig))
        except ParseError as exc:
            raise type(exc)(f"{exc} in axiom on line {number}") from None
    logger.debug("parsed theory %s with %d axioms", name, len(axioms))
    return Theory(name, sig, tuple(axioms))


def load_theory(path: Union[str, Path]) -> Theory:
    path = Path(path)
    return parse_theory(path.read_text(encoding="utf-8"), name=path.stem)


def parse_term_lines(text: str, sig: Signature) -> List[Term]:
    return [parse_term(line, sig) for _, line in _content_lines(text)]


def parse_atom_lines(text: str, sig: Signature) -> List[Atom]:
    atoms = []
    for number, line in _content_lines(text):
        f = parse_formula(line, sig)
        if not isinstance(f, Atom):
            raise ParseError("expected a single positive atom", number, 1)
        atoms.append(f)
    return atoms
