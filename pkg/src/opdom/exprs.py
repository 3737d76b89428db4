"""Expression trees for operators on (possibly unbounded) Hilbert-space domains.

Two interleaved term algebras live here:

* OperatorExpr -- atoms, identity/zero, scalar multiples, sums, products,
  adjoints, closures, inverses, restrictions and square block matrices;
* DomainExpr  -- the symbolic natural domains those expressions induce:
  full space, named atom domains D(A)/D(A*)/..., the trivial subspace {0},
  intersections, finite direct products, pullbacks {x in inner : op x in
  outer}, and operator ranges.

Nodes are immutable and hash-consed: building the same tree twice returns
the same object, so structural equality is identity.  The interning table
is the only shared mutable structure and is insert-only behind a lock.

Nothing in this module consults a fact base.  natural_domain is purely
structural except for one thing: an atom declared everywhere defined at
creation carries that in its flags, and its domain is then Full rather
than Named.
"""

from __future__ import annotations

import threading
from .scalars import Scalar

_INTERN: dict = {}
_LOCK = threading.Lock()


def _intern(node):
    key = node.key
    with _LOCK:
        hit = _INTERN.get(key)
        if hit is not None:
            return hit
        _INTERN[key] = node
        return node


class ExprError(Exception):
    pass


class SpaceMismatch(ExprError):
    pass


ATOM_FLAGS = frozenset(
    {
        "bounded",
        "unbounded",
        "closed",
        "closable",
        "not-closable",
        "densely-defined",
        "everywhere-defined",
        "self-adjoint",
        "symmetric",
        "injective",
        "surjective",
    }
)


class Space:
    """A Hilbert space H^arity over a named base space.

    Products are flat: a k-by-k block of operators on Space(name, a) acts
    on Space(name, k*a).  Distinct base names never mix inside one tree.
    """

    __slots__ = ("name", "arity", "key", "skey")

    def __init__(self, name: str, arity: int = 1):
        if arity < 1:
            raise SpaceMismatch("space arity must be >= 1")
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "arity", arity)
        object.__setattr__(self, "key", ("Space", name, arity))
        object.__setattr__(self, "skey", f"S:{name}^{arity}")

    def __setattr__(self, *_):
        raise AttributeError("Space is immutable")

    def __repr__(self):
        return f"Space({self.name!r}, {self.arity})"


def space(name: str = "H", arity: int = 1) -> Space:
    return _intern(Space(name, arity))


H = space("H", 1)


# ---------------------------------------------------------------------------
# nodes


class _Node:
    __slots__ = ("key", "skey", "space")

    def __setattr__(self, *_):
        raise AttributeError("expression nodes are immutable")

    def _init(self, space_, key, skey):
        object.__setattr__(self, "space", space_)
        object.__setattr__(self, "key", key)
        object.__setattr__(self, "skey", skey)

    def __repr__(self):
        return self.skey


class OperatorExpr(_Node):
    __slots__ = ()

    def __mul__(self, other):
        if isinstance(other, OperatorExpr):
            return product(self, other)
        return scalar_mul(other, self)

    def __rmul__(self, other):
        return scalar_mul(other, self)

    def __add__(self, other):
        return op_sum(self, other)

    def __sub__(self, other):
        return op_sum(self, scalar_mul(-1, other))

    def __neg__(self):
        return scalar_mul(-1, self)

    def __pow__(self, n):
        return power(self, n)


class DomainExpr(_Node):
    __slots__ = ()


# -- operator variants -------------------------------------------------------


class Atom(OperatorExpr):
    __slots__ = ("name", "flags")

    def __init__(self, name, sp, flags):
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "flags", flags)
        self._init(sp, ("Atom", name, sp.key, tuple(sorted(flags))), f"a.{name}")


class Identity(OperatorExpr):
    __slots__ = ()

    def __init__(self, sp):
        self._init(sp, ("Id", sp.key), f"I[{sp.skey}]")


class Zero(OperatorExpr):
    __slots__ = ()

    def __init__(self, sp):
        self._init(sp, ("Zero", sp.key), f"0[{sp.skey}]")


class ScalarMul(OperatorExpr):
    __slots__ = ("c", "child")

    def __init__(self, c, child):
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "child", child)
        self._init(child.space, ("SM", c.key(), id(child)), f"({c})*{child.skey}")


class Sum(OperatorExpr):
    __slots__ = ("terms",)

    def __init__(self, terms):
        object.__setattr__(self, "terms", terms)
        self._init(
            terms[0].space,
            ("Sum",) + tuple(id(t) for t in terms),
            "(" + "+".join(t.skey for t in terms) + ")",
        )


class Product(OperatorExpr):
    """Ordered composition: factors (f1, ..., fn) mean f1 o f2 o ... o fn,
    the rightmost acting first.  Composition is associative, domains
    included, so nested products flatten at construction."""

    __slots__ = ("factors",)

    def __init__(self, factors):
        object.__setattr__(self, "factors", factors)
        self._init(
            factors[0].space,
            ("Prod",) + tuple(id(f) for f in factors),
            "(" + "*".join(f.skey for f in factors) + ")",
        )


class Adjoint(OperatorExpr):
    __slots__ = ("child",)

    def __init__(self, child):
        object.__setattr__(self, "child", child)
        self._init(child.space, ("Adj", id(child)), f"adj({child.skey})")


class Closure(OperatorExpr):
    __slots__ = ("child",)

    def __init__(self, child):
        object.__setattr__(self, "child", child)
        self._init(child.space, ("Clo", id(child)), f"clo({child.skey})")


class Inverse(OperatorExpr):
    __slots__ = ("child",)

    def __init__(self, child):
        object.__setattr__(self, "child", child)
        self._init(child.space, ("Inv", id(child)), f"inv({child.skey})")


class Restrict(OperatorExpr):
    __slots__ = ("child", "dom")

    def __init__(self, child, dom):
        object.__setattr__(self, "child", child)
        object.__setattr__(self, "dom", dom)
        self._init(
            child.space, ("Restr", id(child), id(dom)), f"{child.skey}|{dom.skey}"
        )


class Block(OperatorExpr):
    __slots__ = ("n", "rows", "comp_space")

    def __init__(self, n, rows, comp_space, sp):
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "comp_space", comp_space)
        self._init(
            sp,
            ("Block", n) + tuple(id(e) for row in rows for e in row),
            "[" + ";".join(",".join(e.skey for e in row) for row in rows) + "]",
        )

    def entry(self, i, j):
        return self.rows[i][j]


# -- domain variants ----------------------------------------------------------


class DFull(DomainExpr):
    __slots__ = ()

    def __init__(self, sp):
        self._init(sp, ("DFull", sp.key), f"full[{sp.skey}]")


class DTrivial(DomainExpr):
    __slots__ = ()

    def __init__(self, sp):
        self._init(sp, ("DTriv", sp.key), f"{{0}}[{sp.skey}]")


class DNamed(DomainExpr):
    """D(subject), D(subject*), D(subject**)... for stars = 0, 1, 2, ...

    subject is normally an Atom; a compound subject marks a domain the
    calculus treats as opaque (e.g. the domain of the adjoint of a general
    block, which is deliberately not computed)."""

    __slots__ = ("subject", "stars")

    def __init__(self, subject, stars):
        object.__setattr__(self, "subject", subject)
        object.__setattr__(self, "stars", stars)
        self._init(
            subject.space,
            ("DNamed", id(subject), stars),
            f"D({subject.skey}{'*' * stars})",
        )


class DInter(DomainExpr):
    __slots__ = ("parts",)

    def __init__(self, parts):
        object.__setattr__(self, "parts", parts)
        self._init(
            parts[0].space,
            ("DInter",) + tuple(id(p) for p in parts),
            "(" + "&".join(p.skey for p in parts) + ")",
        )


class DProd(DomainExpr):
    __slots__ = ("parts",)

    def __init__(self, parts, sp):
        object.__setattr__(self, "parts", parts)
        self._init(
            sp,
            ("DProd",) + tuple(id(p) for p in parts),
            "(" + " (+) ".join(p.skey for p in parts) + ")",
        )


class DPullback(DomainExpr):
    """{x in inner : op x in outer} -- the domain of a composition."""

    __slots__ = ("op", "outer", "inner")

    def __init__(self, op, outer, inner):
        object.__setattr__(self, "op", op)
        object.__setattr__(self, "outer", outer)
        object.__setattr__(self, "inner", inner)
        self._init(
            inner.space,
            ("DPull", id(op), id(outer), id(inner)),
            f"pull[{op.skey};{outer.skey};{inner.skey}]",
        )


class DRange(DomainExpr):
    __slots__ = ("op",)

    def __init__(self, op):
        object.__setattr__(self, "op", op)
        self._init(op.space, ("DRange", id(op)), f"ran({op.skey})")


# ---------------------------------------------------------------------------
# constructors (all interning, all space-checked)


def atom(name: str, sp: Space = H, flags=()) -> Atom:
    flags = frozenset(flags)
    bad = flags - ATOM_FLAGS
    if bad:
        raise ExprError(f"unknown atom flags: {sorted(bad)}")
    a = Atom.__new__(Atom)
    Atom.__init__(a, name, sp, flags)
    return _intern(a)


def identity(sp: Space = H) -> Identity:
    e = Identity.__new__(Identity)
    Identity.__init__(e, sp)
    return _intern(e)


def zero(sp: Space = H) -> Zero:
    e = Zero.__new__(Zero)
    Zero.__init__(e, sp)
    return _intern(e)


def scalar_mul(c, e: OperatorExpr) -> OperatorExpr:
    c = Scalar.of(c)
    node = ScalarMul.__new__(ScalarMul)
    ScalarMul.__init__(node, c, e)
    return _intern(node)


def _same_space(parts, what):
    sp = parts[0].space
    for p in parts[1:]:
        if p.space is not sp:
            raise SpaceMismatch(
                f"{what} mixes spaces {p.space.skey} and {sp.skey}"
            )
    return sp


def op_sum(*terms) -> OperatorExpr:
    flat = []
    for t in terms:
        if isinstance(t, Sum):
            flat.extend(t.terms)
        else:
            flat.append(t)
    if not flat:
        raise ExprError("empty sum")
    _same_space(flat, "sum")
    if len(flat) == 1:
        return flat[0]
    node = Sum.__new__(Sum)
    Sum.__init__(node, tuple(flat))
    return _intern(node)


def product(*factors) -> OperatorExpr:
    flat = []
    for f in factors:
        if isinstance(f, Product):
            flat.extend(f.factors)
        else:
            flat.append(f)
    if not flat:
        raise ExprError("empty product")
    _same_space(flat, "product")
    if len(flat) == 1:
        return flat[0]
    node = Product.__new__(Product)
    Product.__init__(node, tuple(flat))
    return _intern(node)


def adjoint(e: OperatorExpr) -> Adjoint:
    node = Adjoint.__new__(Adjoint)
    Adjoint.__init__(node, e)
    return _intern(node)


def closure(e: OperatorExpr) -> Closure:
    node = Closure.__new__(Closure)
    Closure.__init__(node, e)
    return _intern(node)


def inverse(e: OperatorExpr) -> Inverse:
    node = Inverse.__new__(Inverse)
    Inverse.__init__(node, e)
    return _intern(node)


def restrict(e: OperatorExpr, d: DomainExpr) -> OperatorExpr:
    if d.space is not e.space:
        raise SpaceMismatch(
            f"restriction domain lives on {d.space.skey}, operator on {e.space.skey}"
        )
    if isinstance(d, DFull):
        return e
    node = Restrict.__new__(Restrict)
    Restrict.__init__(node, e, d)
    return _intern(node)


def block(rows) -> Block:
    rows = tuple(tuple(r) for r in rows)
    n = len(rows)
    if n == 0 or any(len(r) != n for r in rows):
        raise ExprError("block must be a square k-by-k grid")
    comp = _same_space([e for row in rows for e in row], "block")
    sp = space(comp.name, comp.arity * n)
    node = Block.__new__(Block)
    Block.__init__(node, n, rows, comp, sp)
    return _intern(node)


def power(e: OperatorExpr, n: int) -> OperatorExpr:
    if not isinstance(n, int) or n < 1:
        raise ExprError(f"power requires an integer exponent >= 1, got {n!r}")
    return product(*((e,) * n))


def block_diag(*entries) -> Block:
    comp = _same_space(list(entries), "block")
    z = zero(comp)
    n = len(entries)
    return block(
        [[entries[i] if i == j else z for j in range(n)] for i in range(n)]
    )


# ---------------------------------------------------------------------------
# domain constructors


def dom_full(sp: Space) -> DFull:
    d = DFull.__new__(DFull)
    DFull.__init__(d, sp)
    return _intern(d)


def dom_trivial(sp: Space) -> DTrivial:
    d = DTrivial.__new__(DTrivial)
    DTrivial.__init__(d, sp)
    return _intern(d)


def dom_named(subject: OperatorExpr, stars: int = 0) -> DNamed:
    d = DNamed.__new__(DNamed)
    DNamed.__init__(d, subject, stars)
    return _intern(d)


def dom_inter(*parts) -> DomainExpr:
    flat = []
    for p in parts:
        if isinstance(p, DInter):
            flat.extend(p.parts)
        else:
            flat.append(p)
    if not flat:
        raise ExprError("empty intersection")
    sp = _same_space(flat, "intersection")
    for p in flat:
        if isinstance(p, DTrivial):
            return dom_trivial(sp)
    kept = [p for p in flat if not isinstance(p, DFull)]
    if not kept:
        return dom_full(sp)
    seen, uniq = set(), []
    for p in sorted(kept, key=lambda q: q.skey):
        if id(p) not in seen:
            seen.add(id(p))
            uniq.append(p)
    if len(uniq) == 1:
        return uniq[0]
    d = DInter.__new__(DInter)
    DInter.__init__(d, tuple(uniq))
    return _intern(d)


def dom_prod(*parts) -> DomainExpr:
    flat = []
    for p in parts:
        if isinstance(p, DProd):
            flat.extend(p.parts)
        else:
            flat.append(p)
    if not flat:
        raise ExprError("empty product domain")
    base = flat[0].space.name
    for p in flat:
        if p.space.name != base:
            raise SpaceMismatch("product domain mixes base spaces")
    if len(flat) == 1:
        return flat[0]
    sp = space(base, sum(p.space.arity for p in flat))
    d = DProd.__new__(DProd)
    DProd.__init__(d, tuple(flat), sp)
    return _intern(d)


def dom_pullback(op: OperatorExpr, outer: DomainExpr, inner: DomainExpr) -> DPullback:
    d = DPullback.__new__(DPullback)
    DPullback.__init__(d, op, outer, inner)
    return _intern(d)


def dom_range(op: OperatorExpr) -> DRange:
    d = DRange.__new__(DRange)
    DRange.__init__(d, op)
    return _intern(d)


# ---------------------------------------------------------------------------
# natural domains


def natural_domain(e: OperatorExpr) -> DomainExpr:
    """The symbolic domain an expression is naturally defined on.

    Purely structural: D(S o T) = {x in D(T) : Tx in D(S)}, sums intersect,
    a block's domain is the product over columns of the intersection down
    each column, D(A*) = Named(A, 1), inverses live on the range.  Adjoints
    and closures of compound expressions get opaque Named domains; the
    calculus never guesses those.
    """
    if isinstance(e, Atom):
        if "everywhere-defined" in e.flags:
            return dom_full(e.space)
        return dom_named(e, 0)
    if isinstance(e, (Identity, Zero)):
        return dom_full(e.space)
    if isinstance(e, ScalarMul):
        return natural_domain(e.child)
    if isinstance(e, Sum):
        return dom_inter(*[natural_domain(t) for t in e.terms])
    if isinstance(e, Product):
        return _product_domain(e.factors)
    if isinstance(e, Adjoint):
        inner, stars = e.child, 1
        while isinstance(inner, Adjoint):
            inner, stars = inner.child, stars + 1
        if isinstance(inner, Atom):
            return dom_named(inner, stars)
        if isinstance(inner, (Identity, Zero)):
            return dom_full(inner.space)
        return dom_named(e, 0)
    if isinstance(e, Closure):
        return dom_named(e, 0)
    if isinstance(e, Inverse):
        return dom_range(e.child)
    if isinstance(e, Restrict):
        return dom_inter(natural_domain(e.child), e.dom)
    if isinstance(e, Block):
        cols = []
        for j in range(e.n):
            cols.append(dom_inter(*[natural_domain(e.rows[i][j]) for i in range(e.n)]))
        return dom_prod(*cols)
    raise ExprError(f"no domain rule for {type(e).__name__}")


def _product_domain(factors):
    if len(factors) == 1:
        return natural_domain(factors[0])
    head, tail = factors[0], factors[1:]
    rest = product(*tail) if len(tail) > 1 else tail[0]
    return dom_pullback(rest, natural_domain(head), _product_domain(tail))


# ---------------------------------------------------------------------------
# traversal helpers


def children(e):
    if isinstance(e, (ScalarMul, Adjoint, Closure, Inverse)):
        return (e.child,)
    if isinstance(e, Restrict):
        return (e.child,)
    if isinstance(e, Sum):
        return e.terms
    if isinstance(e, Product):
        return e.factors
    if isinstance(e, Block):
        return tuple(x for row in e.rows for x in row)
    return ()


def walk(e):
    yield e
    for c in children(e):
        yield from walk(c)


def atoms_of(e):
    out = []
    seen = set()
    for sub in walk(e):
        if isinstance(sub, Atom) and id(sub) not in seen:
            seen.add(id(sub))
            out.append(sub)
    return out


# ---------------------------------------------------------------------------
# text form (matches the script grammar; see dsl.py)


def to_text(e: OperatorExpr) -> str:
    return _render(e, 0)


# precedence levels: 0 sum, 1 product, 2 power/tight
def _render(e, level):
    if isinstance(e, Atom):
        return e.name
    if isinstance(e, Identity):
        return "I"
    if isinstance(e, Zero):
        return "0"
    if isinstance(e, ScalarMul):
        txt = f"{e.c}*{_render(e.child, 2)}"
        return f"({txt})" if level >= 2 else txt
    if isinstance(e, Sum):
        txt = " + ".join(_render(t, 1) for t in e.terms)
        return f"({txt})" if level >= 1 else txt
    if isinstance(e, Product):
        base = e.factors[0]
        if len(e.factors) > 1 and all(f is base for f in e.factors):
            return f"{_render(base, 2)}^{len(e.factors)}"
        txt = "*".join(_render(f, 2) for f in e.factors)
        return f"({txt})" if level >= 2 else txt
    if isinstance(e, Adjoint):
        return f"adj({_render(e.child, 0)})"
    if isinstance(e, Closure):
        return f"clo({_render(e.child, 0)})"
    if isinstance(e, Inverse):
        return f"inv({_render(e.child, 0)})"
    if isinstance(e, Restrict):
        return f"restr({_render(e.child, 0)}, {dom_text(e.dom)})"
    if isinstance(e, Block):
        rows = ",".join(
            "[" + ", ".join(_render(x, 0) for x in row) + "]" for row in e.rows
        )
        return f"[{rows}]"
    raise ExprError(f"cannot render {type(e).__name__}")


def dom_text(d: DomainExpr) -> str:
    if isinstance(d, DFull):
        return "full"
    if isinstance(d, DTrivial):
        return "{0}"
    if isinstance(d, DNamed):
        if isinstance(d.subject, Atom):
            return f"D({d.subject.name}{'*' * d.stars})"
        return f"dom({_render(adjoint_times(d.subject, d.stars), 0)})"
    if isinstance(d, DInter):
        return " & ".join(_dom_atom_text(p) for p in d.parts)
    if isinstance(d, DProd):
        return " oplus ".join(_dom_atom_text(p) for p in d.parts)
    if isinstance(d, DPullback):
        return f"pull({_render(d.op, 0)}; {dom_text(d.outer)}; {dom_text(d.inner)})"
    if isinstance(d, DRange):
        return f"ran({_render(d.op, 0)})"
    raise ExprError(f"cannot render {type(d).__name__}")


def _dom_atom_text(d):
    if isinstance(d, (DInter, DProd)):
        return f"({dom_text(d)})"
    return dom_text(d)


def adjoint_times(e, stars):
    for _ in range(stars):
        e = adjoint(e)
    return e
