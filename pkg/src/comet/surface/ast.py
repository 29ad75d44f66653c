"""Surface syntax: core forms plus every derived construction, with spans."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from ..syntax import Span, Type


@dataclass(frozen=True)
class Node:
    span: Span | None = field(default=None, compare=False, repr=False, kw_only=True)


# ---------------------------------------------------------------- terms


@dataclass(frozen=True)
class SVar(Node):
    name: str


@dataclass(frozen=True)
class SStar(Node):
    pass


@dataclass(frozen=True)
class SScalar(Node):
    value: Fraction
    text: str = ""


@dataclass(frozen=True)
class STop(Node):
    pass


@dataclass(frozen=True)
class SBot(Node):
    pass


@dataclass(frozen=True)
class SPair(Node):
    left: Node
    right: Node


@dataclass(frozen=True)
class SLetPair(Node):
    x: str
    y: str
    bound: Node
    body: Node


@dataclass(frozen=True)
class SLet(Node):
    name: str
    bound: Node
    body: Node


@dataclass(frozen=True)
class SLetFun(Node):
    name: str
    params: tuple[str, ...]
    fun_body: Node
    body: Node


@dataclass(frozen=True)
class SCall(Node):
    name: str
    args: tuple[Node, ...]


@dataclass(frozen=True)
class SMagic(Node):
    term: Node
    ty: Type | None = None


@dataclass(frozen=True)
class SInl(Node):
    term: Node
    ty: Type | None = None


@dataclass(frozen=True)
class SInr(Node):
    term: Node
    ty: Type | None = None


@dataclass(frozen=True)
class SCase(Node):
    scrutinee: Node
    x: str
    left: Node
    y: str
    right: Node


@dataclass(frozen=True)
class SEnumCase(Node):
    scrutinee: Node
    arms: tuple[tuple[str, Node], ...]


@dataclass(frozen=True)
class SInlr(Node):
    left: Node
    right: Node


@dataclass(frozen=True)
class SLft(Node):
    term: Node


@dataclass(frozen=True)
class SInstr(Node):
    pred: "Pred"
    arg: Node


@dataclass(frozen=True)
class SAssert(Node):
    pred: "Pred"
    arg: Node


@dataclass(frozen=True)
class SNorm(Node):
    term: Node


@dataclass(frozen=True)
class SOvee(Node):
    left: Node
    right: Node


@dataclass(frozen=True)
class SOrtho(Node):
    term: Node


@dataclass(frozen=True)
class SAnd(Node):
    left: Node
    right: Node


@dataclass(frozen=True)
class SReturn(Node):
    term: Node


@dataclass(frozen=True)
class SFail(Node):
    ty: Type | None = None


@dataclass(frozen=True)
class SDo(Node):
    x: str
    bound: Node
    body: Node


@dataclass(frozen=True)
class SBind(Node):
    bound: Node
    fn: "Pred"


@dataclass(frozen=True)
class SDom(Node):
    term: Node


@dataclass(frozen=True)
class SKer(Node):
    term: Node


@dataclass(frozen=True)
class SInlTest(Node):
    term: Node


@dataclass(frozen=True)
class SInrTest(Node):
    term: Node


@dataclass(frozen=True)
class SMeasure(Node):
    arms: tuple[tuple[Node, Node], ...]


@dataclass(frozen=True)
class SIf(Node):
    test: Node
    then: Node
    orelse: Node


@dataclass(frozen=True)
class SCondition(Node):
    state: Node
    pred: "Pred"


@dataclass(frozen=True)
class SFst(Node):
    term: Node


@dataclass(frozen=True)
class SSnd(Node):
    term: Node


@dataclass(frozen=True)
class SInj(Node):
    n: int
    i: int
    term: Node


@dataclass(frozen=True)
class SNum(Node):
    n: int
    i: int


@dataclass(frozen=True)
class SNabla(Node):
    n: int
    term: Node


@dataclass(frozen=True)
class SIdx(Node):
    n: int
    term: Node


@dataclass(frozen=True)
class SProj(Node):
    n: int
    indices: tuple[int, ...]
    term: Node


@dataclass(frozen=True)
class STest(Node):
    n: int
    i: int
    term: Node


@dataclass(frozen=True)
class SAnn(Node):
    term: Node
    ty: Type


# ---------------------------------------------------------------- predicates


@dataclass(frozen=True)
class PLam(Node):
    """``\\x -> body`` or ``\\(x (x) y) -> body``."""

    params: tuple[str, ...]
    body: Node


@dataclass(frozen=True)
class PName(Node):
    """A defined function (or closed scalar) used as a predicate."""

    name: str


@dataclass(frozen=True)
class PCompose(Node):
    """``outer . inner``: ``\\params(inner) -> outer(inner(params))``."""

    outer: "Pred"
    inner: "Pred"


@dataclass(frozen=True)
class PKeyword(Node):
    """``inl``, ``inr`` or ``return`` on the right of ``>>=``."""

    name: str


@dataclass(frozen=True)
class PConst(Node):
    """A constant predicate such as ``top``, ``bot`` or a literal scalar."""

    term: Node


Pred = PLam | PName | PCompose | PKeyword | PConst


# ---------------------------------------------------------------- programs


@dataclass(frozen=True)
class TypeDecl(Node):
    name: str
    constructors: tuple[str, ...]


@dataclass(frozen=True)
class Param:
    name: str
    ty: Type


@dataclass(frozen=True)
class Def(Node):
    name: str
    params: tuple[Param, ...]
    ty: Type
    body: Node


@dataclass(frozen=True)
class QueryDecl(Node):
    """``query eval NAME``, ``query infer T given P [marginal k]``, ``query validity T given P``."""

    kind: str
    term: Node
    pred: Pred | None = None
    marginal: int | None = None
    text: str = ""


@dataclass(frozen=True)
class SourceProgram(Node):
    items: tuple[TypeDecl | Def | QueryDecl, ...]
