"""Key-policy language: parsing, evaluation, and compilation to LSSS.

Grammar (keywords are lowercase and reserved):

    expr   := term {"or" term}
    term   := factor {"and" factor}
    factor := NAME | INT "of" "(" expr {"," expr} ")" | "(" expr ")"

"and" binds tighter than "or".  A threshold gate "t of (c1, ..., cn)"
is satisfied when at least t of its children are.  "and" is sugar for
t = n, "or" for t = 1.

Compilation uses the standard Vandermonde expansion: a t-of-n gate with
vector v hands child j the vector v extended by (j, j^2, ..., j^(t-1))
in t-1 fresh columns, so the children hold Shamir shares of the gate
secret.  Reconstruction therefore needs the group order p to exceed the
largest gate fan-in (evaluation points 1..n must stay distinct mod p).
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass

from .errors import (
    PolicySyntaxError,
    ThresholdRangeError,
    UniverseError,
    UnknownAttributeError,
)
from .lsss import AccessMatrix

__all__ = [
    "Universe",
    "Leaf",
    "Gate",
    "parse_policy",
    "evaluate",
    "pretty_print",
    "attributes",
    "to_lsss",
]

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_KEYWORDS = frozenset({"and", "or", "of"})


class Universe:
    """Ordered set of attribute names shared by all parties."""

    def __init__(self, names):
        names = tuple(names)
        if not names:
            raise UniverseError("universe must not be empty")
        seen = set()
        for nm in names:
            if not isinstance(nm, str) or not _NAME_RE.fullmatch(nm):
                raise UniverseError(f"bad attribute name {nm!r}")
            if nm in _KEYWORDS:
                raise UniverseError(f"attribute name {nm!r} is a reserved word")
            if nm in seen:
                raise UniverseError(f"duplicate attribute name {nm!r}")
            seen.add(nm)
        self.names = names
        self._index = {nm: i for i, nm in enumerate(names)}

    @classmethod
    def from_file(cls, path) -> "Universe":
        names = []
        with open(path, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.split("#", 1)[0].strip()
                if line:
                    names.extend(line.split())
        return cls(names)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownAttributeError(name) from None

    def digest_hex(self) -> str:
        """Stable hash binding serialized artifacts to this universe."""
        blob = "\n".join(self.names).encode("utf-8")
        return hashlib.sha256(blob).hexdigest()

    def __contains__(self, name) -> bool:
        return name in self._index

    def __iter__(self):
        return iter(self.names)

    def __len__(self) -> int:
        return len(self.names)

    def __eq__(self, other):
        return isinstance(other, Universe) and self.names == other.names

    def __repr__(self):
        return f"Universe({list(self.names)!r})"


@dataclass(frozen=True)
class Leaf:
    attribute: str


@dataclass(frozen=True)
class Gate:
    threshold: int
    children: tuple

    def __post_init__(self):
        ch = tuple(self.children)
        object.__setattr__(self, "children", ch)
        if not ch:
            raise ThresholdRangeError(self.threshold, 0)
        if not 1 <= self.threshold <= len(ch):
            raise ThresholdRangeError(self.threshold, len(ch))
        for c in ch:
            if not isinstance(c, (Leaf, Gate)):
                raise TypeError(f"bad policy child {c!r}")


# -- parsing -----------------------------------------------------------------

_TOKEN_RE = re.compile(r"\s*(?:(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<int>\d+)"
                       r"|(?P<lp>\()|(?P<rp>\))|(?P<comma>,))")


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            bad = len(text) - len(stripped)
            raise PolicySyntaxError(f"unexpected character {text[bad]!r}", bad)
        kind = m.lastgroup
        value = m.group(kind)
        offset = m.end() - len(value)
        if kind == "name" and value in _KEYWORDS:
            kind = value
        tokens.append((kind, value, offset))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, tokens, universe: Universe):
        self.tokens = tokens
        self.universe = universe
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind, what):
        tok = self.take()
        if tok[0] != kind:
            raise PolicySyntaxError(f"expected {what}", tok[2])
        return tok

    def expr(self):
        children = [self.term()]
        while self.peek()[0] == "or":
            self.take()
            children.append(self.term())
        if len(children) == 1:
            return children[0]
        return Gate(1, tuple(children))

    def term(self):
        children = [self.factor()]
        while self.peek()[0] == "and":
            self.take()
            children.append(self.factor())
        if len(children) == 1:
            return children[0]
        return Gate(len(children), tuple(children))

    def factor(self):
        kind, value, offset = self.take()
        if kind == "name":
            if value not in self.universe:
                raise UnknownAttributeError(value, offset)
            return Leaf(value)
        if kind == "int":
            t = int(value)
            self.expect("of", "'of' after threshold count")
            self.expect("lp", "'(' after 'of'")
            children = [self.expr()]
            while self.peek()[0] == "comma":
                self.take()
                children.append(self.expr())
            self.expect("rp", "')' closing threshold gate")
            if not 1 <= t <= len(children):
                raise ThresholdRangeError(t, len(children), offset)
            return Gate(t, tuple(children))
        if kind == "lp":
            node = self.expr()
            self.expect("rp", "')'")
            return node
        raise PolicySyntaxError("expected attribute, threshold gate, or '('", offset)


def parse_policy(text: str, universe: Universe):
    """Parse policy text into an AST.  Raises PolicySyntaxError with the
    character offset on malformed input, UnknownAttributeError for names
    outside the universe, ThresholdRangeError for t out of 1..n."""
    tokens = _tokenize(text)
    parser = _Parser(tokens, universe)
    node = parser.expr()
    tok = parser.peek()
    if tok[0] != "eof":
        raise PolicySyntaxError("unexpected trailing input", tok[2])
    return node


# -- semantics ----------------------------------------------------------------

def evaluate(node, attrs) -> bool:
    """Boolean satisfaction of the policy by an attribute set."""
    if isinstance(node, Leaf):
        return node.attribute in attrs
    hits = sum(1 for c in node.children if evaluate(c, attrs))
    return hits >= node.threshold


def attributes(node) -> frozenset:
    """All attribute names mentioned by the policy."""
    if isinstance(node, Leaf):
        return frozenset((node.attribute,))
    out = frozenset()
    for c in node.children:
        out |= attributes(c)
    return out


def _is_or(node) -> bool:
    return isinstance(node, Gate) and node.threshold == 1 and len(node.children) >= 2


def _is_and(node) -> bool:
    return (isinstance(node, Gate) and len(node.children) >= 2
            and node.threshold == len(node.children))


def pretty_print(node) -> str:
    """Canonical text for an AST; parsing it back yields an equal AST."""
    if isinstance(node, Leaf):
        return node.attribute
    if _is_or(node):
        parts = []
        for c in node.children:
            s = pretty_print(c)
            # a nested or must keep its parens or it would flatten
            parts.append(f"({s})" if _is_or(c) else s)
        return " or ".join(parts)
    if _is_and(node):
        parts = []
        for c in node.children:
            s = pretty_print(c)
            parts.append(f"({s})" if _is_or(c) or _is_and(c) else s)
        return " and ".join(parts)
    inner = ", ".join(pretty_print(c) for c in node.children)
    return f"{node.threshold} of ({inner})"


# -- compilation ----------------------------------------------------------------

def _extra_cols(node) -> int:
    if isinstance(node, Leaf):
        return 0
    own = node.threshold - 1
    return own + sum(_extra_cols(c) for c in node.children)


def to_lsss(node) -> AccessMatrix:
    """Compile a policy AST to a share-generating matrix.

    Row order is the left-to-right leaf order of the AST.  For every set S
    of attributes, the rows labeled by S span (1, 0, ..., 0) over Z_p iff
    evaluate(node, S) is true, provided p exceeds the largest gate fan-in.
    """
    width = 1 + _extra_cols(node)
    rows = []
    rho = []
    next_col = 1

    def assign(nd, vec):
        nonlocal next_col
        if isinstance(nd, Leaf):
            rows.append(tuple(vec))
            rho.append(nd.attribute)
            return
        t = nd.threshold
        if t == 1:
            for c in nd.children:
                assign(c, vec)
            return
        base = next_col
        next_col += t - 1
        for j, c in enumerate(nd.children, start=1):
            child = list(vec)
            pw = 1
            for d in range(t - 1):
                pw *= j
                child[base + d] = pw
            assign(c, child)

    assign(node, [1] + [0] * (width - 1))
    return AccessMatrix(tuple(rows), tuple(rho))
