"""
Constraint Expressions

A MiniZinc-flavoured expression language over integer and enumeration
variables:

    + - * div mod   = != < <= > >=   /\\ \\/ not -> <->
    x in {a, b, c}   x in lo..hi   all_different([...])   all_equal([...])

Enumeration labels are interned into a shared `Universe` and handled as their
integer index. Integer division truncates toward zero and `mod` takes the
sign of the dividend. A division by zero makes the enclosing comparison,
membership test or global constraint false.
"""

import re
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

from ltlf_datagen.exceptions import ConstraintSyntaxError, DomainViolationError


class Universe:
    """Every enumeration label across all domains, sorted and densely indexed."""

    def __init__(self, labels: Iterable[str] = ()):
        self.labels: Tuple[str, ...] = tuple(sorted(set(labels)))
        self._index = {label: i for i, label in enumerate(self.labels)}

    def __contains__(self, label) -> bool:
        return label in self._index

    def __len__(self) -> int:
        return len(self.labels)

    def __eq__(self, other) -> bool:
        return isinstance(other, Universe) and self.labels == other.labels

    def __hash__(self) -> int:
        return hash(self.labels)

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise DomainViolationError(f"unknown enumeration label {label!r}") from None

    def label(self, index: int) -> str:
        return self.labels[index]


class _Undefined(Exception):
    """Raised by a division by zero; absorbed by the enclosing test."""


@dataclass(frozen=True)
class Expr:
    def variables(self) -> FrozenSet[str]:
        return frozenset().union(*(child.variables() for child in self.children()))

    def children(self) -> tuple:
        return ()


@dataclass(frozen=True)
class IntLit(Expr):
    value: int


@dataclass(frozen=True)
class BoolLit(Expr):
    value: bool


@dataclass(frozen=True)
class EnumLit(Expr):
    label: str
    index: int


@dataclass(frozen=True)
class VarRef(Expr):
    name: str

    def variables(self) -> FrozenSet[str]:
        return frozenset({self.name})


@dataclass(frozen=True)
class UnaryOp(Expr):
    op: str  # "neg" or "not"
    operand: Expr

    def children(self) -> tuple:
        return (self.operand,)


@dataclass(frozen=True)
class BinOp(Expr):
    op: str
    left: Expr
    right: Expr

    def children(self) -> tuple:
        return (self.left, self.right)


@dataclass(frozen=True)
class SetLit(Expr):
    items: Tuple[Expr, ...]

    def children(self) -> tuple:
        return self.items


@dataclass(frozen=True)
class RangeLit(Expr):
    low: Expr
    high: Expr

    def children(self) -> tuple:
        return (self.low, self.high)


@dataclass(frozen=True)
class Member(Expr):
    element: Expr
    collection: Expr

    def children(self) -> tuple:
        return (self.element, self.collection)


@dataclass(frozen=True)
class GlobalCall(Expr):
    name: str  # "all_different" or "all_equal"
    args: Tuple[Expr, ...]

    def children(self) -> tuple:
        return self.args


def rename_variables(expr: Expr, mapping: Mapping[str, str]) -> Expr:
    """Copy of expr with variable references renamed; unmapped names are kept."""
    if isinstance(expr, VarRef):
        return VarRef(mapping.get(expr.name, expr.name))
    if isinstance(expr, UnaryOp):
        return UnaryOp(expr.op, rename_variables(expr.operand, mapping))
    if isinstance(expr, BinOp):
        return BinOp(expr.op, rename_variables(expr.left, mapping),
                     rename_variables(expr.right, mapping))
    if isinstance(expr, SetLit):
        return SetLit(tuple(rename_variables(item, mapping) for item in expr.items))
    if isinstance(expr, RangeLit):
        return RangeLit(rename_variables(expr.low, mapping), rename_variables(expr.high, mapping))
    if isinstance(expr, Member):
        return Member(rename_variables(expr.element, mapping),
                      rename_variables(expr.collection, mapping))
    if isinstance(expr, GlobalCall):
        return GlobalCall(expr.name, tuple(rename_variables(arg, mapping) for arg in expr.args))
    return expr


ARITHMETIC = ("+", "-", "*", "div", "mod")
COMPARISONS = ("=", "!=", "<", "<=", ">", ">=")
CONNECTIVES = ("/\\", "\\/", "->", "<->")
GLOBALS = ("all_different", "all_equal")


def _div(a: int, b: int) -> int:
    if b == 0:
        raise _Undefined()
    quotient = abs(a) // abs(b)
    return quotient if (a >= 0) == (b > 0) else -quotient


def _mod(a: int, b: int) -> int:
    return a - b * _div(a, b)


_ARITH_FN: Dict[str, Callable[[int, int], int]] = {
    "+": lambda a, b: a + b,
    "-": lambda a, b: a - b,
    "*": lambda a, b: a * b,
    "div": _div,
    "mod": _mod,
}

_COMPARE_FN: Dict[str, Callable[[Any, Any], bool]] = {
    "=": lambda a, b: a == b,
    "!=": lambda a, b: a != b,
    "<": lambda a, b: a < b,
    "<=": lambda a, b: a <= b,
    ">": lambda a, b: a > b,
    ">=": lambda a, b: a >= b,
}


def compile_expr(expr: Expr) -> Callable[[Mapping[str, int]], Any]:
    """Turn an expression tree into a closure over an assignment mapping."""
    if isinstance(expr, IntLit):
        value = expr.value
        return lambda env: value
    if isinstance(expr, BoolLit):
        flag = expr.value
        return lambda env: flag
    if isinstance(expr, EnumLit):
        index = expr.index
        return lambda env: index
    if isinstance(expr, VarRef):
        name = expr.name
        return lambda env: env[name]
    if isinstance(expr, UnaryOp):
        inner = compile_expr(expr.operand)
        if expr.op == "neg":
            return lambda env: -inner(env)
        return lambda env: not inner(env)
    if isinstance(expr, BinOp):
        left, right = compile_expr(expr.left), compile_expr(expr.right)
        if expr.op in _ARITH_FN:
            fn = _ARITH_FN[expr.op]
            return lambda env: fn(left(env), right(env))
        if expr.op in _COMPARE_FN:
            cmp = _COMPARE_FN[expr.op]
            return _guarded(lambda env: cmp(left(env), right(env)))
        if expr.op == "/\\":
            return lambda env: left(env) and right(env)
        if expr.op == "\\/":
            return lambda env: left(env) or right(env)
        if expr.op == "->":
            return lambda env: (not left(env)) or right(env)
        if expr.op == "<->":
            return lambda env: bool(left(env)) == bool(right(env))
    if isinstance(expr, SetLit):
        items = [compile_expr(item) for item in expr.items]
        return lambda env: frozenset(item(env) for item in items)
    if isinstance(expr, RangeLit):
        low, high = compile_expr(expr.low), compile_expr(expr.high)
        return lambda env: range(low(env), high(env) + 1)
    if isinstance(expr, Member):
        element, collection = compile_expr(expr.element), compile_expr(expr.collection)
        return _guarded(lambda env: element(env) in collection(env))
    if isinstance(expr, GlobalCall):
        args = [compile_expr(arg) for arg in expr.args]
        if expr.name == "all_different":
            return _guarded(lambda env: len({arg(env) for arg in args}) == len(args))
        return _guarded(lambda env: len({arg(env) for arg in args}) <= 1)
    raise TypeError(f"Unsupported expression node: {expr!r}")


def _guarded(test: Callable[[Mapping[str, int]], bool]) -> Callable[[Mapping[str, int]], bool]:
    def run(env):
        try:
            return test(env)
        except _Undefined:
            return False
    return run


@dataclass(frozen=True)
class ConstraintDef:
    """
    A named relation over ordered parameters.

    Attributes:
        name: Constraint identifier (an atom of the temporal formula)
        params: Ordered variable names the body ranges over
        body: Boolean expression tree
        source: Original expression text
    """

    name: str
    params: Tuple[str, ...]
    body: Expr
    source: str = ""
    _fn: Callable = field(default=None, compare=False, repr=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "_fn", compile_expr(self.body))

    def evaluate(self, assignment: Mapping[str, int]) -> bool:
        """Truth value under an assignment of encoded values (no domain checks)."""
        return bool(self._fn(assignment))


def eval_constraint(constraint: ConstraintDef, assignment: Mapping[str, int],
                    domains: Optional[Mapping[str, Sequence[int]]] = None) -> bool:
    """
    Evaluate a constraint under an assignment.

    Args:
        constraint: The constraint
        assignment: Variable -> encoded value; must cover the parameters
        domains: Optional variable -> allowed values, checked when given

    Raises:
        DomainViolationError: If a parameter is unassigned or out of its domain
    """
    for param in constraint.params:
        if param not in assignment:
            raise DomainViolationError(
                f"constraint {constraint.name} needs variable {param}, which is unassigned")
        if domains is not None and param in domains and assignment[param] not in domains[param]:
            raise DomainViolationError(
                f"value {assignment[param]!r} of {param} is outside its domain")
    return constraint.evaluate(assignment)


# --- parsing ---------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"\s*(?:"
    r"(?P<int>\d+)"
    r"|(?P<string>\"[^\"]*\")"
    r"|(?P<op><->|->|/\\|\\/|!=|<=|>=|==|\.\.|[=<>+\-*(){}\[\],])"
    r"|(?P<word>[A-Za-z_][A-Za-z0-9_]*)"
    r")"
)

_KEYWORDS = frozenset({"not", "div", "mod", "in", "true", "false"}) | frozenset(GLOBALS)


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    position: int


def _tokenize(text: str) -> List[_Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        match = _TOKEN_RE.match(text, pos)
        if match is None or match.end() == pos:
            raise ConstraintSyntaxError(f"unexpected character {text[pos]!r}", text, pos)
        kind = match.lastgroup
        raw = match.group(kind)
        if kind == "word" and raw in _KEYWORDS:
            kind = "op"
        if raw == "==":
            raw = "="
        tokens.append(_Token(kind, raw, match.start(kind)))
        pos = match.end()
    tokens.append(_Token("end", "", len(text)))
    return tokens


class _ExprParser:
    def __init__(self, text: str, params: Sequence[str], universe: Universe):
        self.text = text
        self.tokens = _tokenize(text)
        self.index = 0
        self.params = set(params)
        self.universe = universe

    @property
    def current(self) -> _Token:
        return self.tokens[self.index]

    def accept(self, *texts: str) -> Optional[_Token]:
        token = self.current
        if token.kind == "op" and token.text in texts:
            self.index += 1
            return token
        return None

    def expect(self, text: str):
        if not self.accept(text):
            self.fail(f"expected {text!r}")

    def fail(self, message: str, position: Optional[int] = None):
        raise ConstraintSyntaxError(message, self.text,
                                    self.current.position if position is None else position)

    def parse(self) -> Expr:
        expr = self.parse_iff()
        if self.current.kind != "end":
            self.fail(f"unexpected token {self.current.text!r}")
        return expr

    def parse_iff(self) -> Expr:
        left = self.parse_implies()
        while self.accept("<->"):
            left = BinOp("<->", left, self.parse_implies())
        return left

    def parse_implies(self) -> Expr:
        left = self.parse_or()
        if self.accept("->"):
            return BinOp("->", left, self.parse_implies())
        return left

    def parse_or(self) -> Expr:
        left = self.parse_and()
        while self.accept("\\/"):
            left = BinOp("\\/", left, self.parse_and())
        return left

    def parse_and(self) -> Expr:
        left = self.parse_not()
        while self.accept("/\\"):
            left = BinOp("/\\", left, self.parse_not())
        return left

    def parse_not(self) -> Expr:
        if self.accept("not"):
            return UnaryOp("not", self.parse_not())
        return self.parse_comparison()

    def parse_comparison(self) -> Expr:
        left = self.parse_sum()
        token = self.accept(*COMPARISONS)
        if token is not None:
            return BinOp(token.text, left, self.parse_sum())
        if self.accept("in"):
            return Member(left, self.parse_collection())
        return left

    def parse_collection(self) -> Expr:
        if self.accept("{"):
            items = []
            if not self.accept("}"):
                items.append(self.parse_sum())
                while self.accept(","):
                    items.append(self.parse_sum())
                self.expect("}")
            return SetLit(tuple(items))
        low = self.parse_sum()
        self.expect("..")
        return RangeLit(low, self.parse_sum())

    def parse_sum(self) -> Expr:
        left = self.parse_product()
        while True:
            token = self.accept("+", "-")
            if token is None:
                return left
            left = BinOp(token.text, left, self.parse_product())

    def parse_product(self) -> Expr:
        left = self.parse_unary()
        while True:
            token = self.accept("*", "div", "mod")
            if token is None:
                return left
            left = BinOp(token.text, left, self.parse_unary())

    def parse_unary(self) -> Expr:
        if self.accept("-"):
            return UnaryOp("neg", self.parse_unary())
        return self.parse_primary()

    def parse_primary(self) -> Expr:
        token = self.current
        if token.kind == "int":
            self.index += 1
            return IntLit(int(token.text))
        if token.kind == "string":
            self.index += 1
            return self.enum_literal(token.text[1:-1], token.position)
        if self.accept("true"):
            return BoolLit(True)
        if self.accept("false"):
            return BoolLit(False)
        if self.accept("("):
            inner = self.parse_iff()
            self.expect(")")
            return inner
        if token.kind == "op" and token.text in GLOBALS:
            self.index += 1
            self.expect("(")
            self.expect("[")
            args = [self.parse_sum()]
            while self.accept(","):
                args.append(self.parse_sum())
            self.expect("]")
            self.expect(")")
            return GlobalCall(token.text, tuple(args))
        if token.kind == "word":
            self.index += 1
            if token.text in self.params:
                return VarRef(token.text)
            if token.text in self.universe:
                return self.enum_literal(token.text, token.position)
            self.fail(f"unknown variable {token.text}", token.position)
        if token.kind == "end":
            self.fail("unexpected end of expression")
        self.fail(f"unexpected token {token.text!r}")
        return BoolLit(False)  # unreachable

    def enum_literal(self, label: str, position: int) -> Expr:
        if label not in self.universe:
            self.fail(f"unknown enumeration label {label!r}", position)
        return EnumLit(label, self.universe.index(label))


def _check_boolean(expr: Expr, text: str):
    """Reject bodies that are plainly not boolean (a bare number or variable)."""
    if isinstance(expr, (IntLit, EnumLit, VarRef, SetLit, RangeLit)) or (
            isinstance(expr, UnaryOp) and expr.op == "neg") or (
            isinstance(expr, BinOp) and expr.op in ARITHMETIC):
        raise ConstraintSyntaxError("constraint body is not a boolean expression", text, 0)


def parse_expression(text: str, params: Sequence[str], universe: Optional[Universe] = None) -> Expr:
    """Parse an expression whose identifiers are parameters or enumeration labels."""
    if not text or not text.strip():
        raise ConstraintSyntaxError("empty expression", text or "", 0)
    return _ExprParser(text, params, universe or Universe()).parse()


def parse_constraint(name: str, params: Sequence[str], text: str,
                     universe: Optional[Universe] = None) -> ConstraintDef:
    """
    Parse a constraint definition.

    Raises:
        ConstraintSyntaxError: On malformed text, unknown identifiers or a non-boolean body
    """
    body = parse_expression(text, params, universe)
    _check_boolean(body, text)
    return ConstraintDef(name, tuple(params), body, text)
