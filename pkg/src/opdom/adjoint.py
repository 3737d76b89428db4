"""Formal adjoints with an honesty tag.

For unbounded operators the naive rules ((S+T)* = S*+T*, (ST)* = T*S*,
blockwise star-transpose) are inclusions, not identities.  formal_adjoint
computes the formal expression and reports how it relates to the true
adjoint:

* EQUAL      -- the formal expression IS the adjoint (a license applied);
* SUBSET_OF  -- the formal expression is a restriction of the adjoint
                (the adjoint extends it); always true once every piece is
                densely defined;
* UNKNOWN    -- some piece has no adjoint we can name.

Licenses used for EQUAL:
* sums: all summands but at most one are bounded and everywhere defined;
* products: every factor left of the last is bounded and everywhere
  defined (peeling (B o T)* = T* o B* for B bounded);
* blocks: entries that are not bounded-everywhere-defined form a
  generalized permutation pattern (at most one per row and per column)
  of densely defined entries; the bounded part is split off as a bounded
  everywhere-defined summand.  Diagonal and antidiagonal matrices of
  densely defined operators are special cases.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import domains as dm
from .domains import RelTag
from .exprs import (
    Adjoint,
    Atom,
    Block,
    Closure,
    Identity,
    Inverse,
    OperatorExpr,
    Product,
    Restrict,
    ScalarMul,
    Sum,
    Zero,
    adjoint as mk_adjoint,
    block,
    closure as mk_closure,
    inverse as mk_inverse,
    natural_domain,
    op_sum,
    product,
    scalar_mul,
    zero,
)
from .rewrite import Normalizer, is_zeroish


@dataclass(frozen=True)
class AdjointResult:
    expr: OperatorExpr
    tag: RelTag
    notes: tuple = ()


def _meet(*tags: RelTag) -> RelTag:
    if any(t is RelTag.UNKNOWN for t in tags):
        return RelTag.UNKNOWN
    if all(t is RelTag.EQUAL for t in tags):
        return RelTag.EQUAL
    return RelTag.SUBSET_OF


class _AdjointCalc:
    def __init__(self, ctx: dm.Ctx):
        self.ctx = ctx
        self.norm = Normalizer(ctx)

    def _bounded_ewd(self, e) -> bool:
        return bool(self.ctx.prop(e, "bounded")) and dm.is_full_dom(
            natural_domain(e), self.ctx
        )

    def _densely_defined(self, e) -> bool:
        v, _ = dm.dom_dense(natural_domain(e), self.ctx)
        return bool(v)

    def run(self, e) -> AdjointResult:
        e = self.norm.canon(e)
        return self._adj(e)

    def _adj(self, e) -> AdjointResult:
        if isinstance(e, Identity):
            return AdjointResult(e, RelTag.EQUAL)
        if isinstance(e, Zero):
            return AdjointResult(e, RelTag.EQUAL)
        if isinstance(e, Atom):
            if not self._densely_defined(e):
                return AdjointResult(
                    mk_adjoint(e), RelTag.UNKNOWN, ("atom is not densely defined",)
                )
            if self.ctx.prop(e, "self-adjoint"):
                return AdjointResult(e, RelTag.EQUAL, ("self-adjoint atom",))
            return AdjointResult(mk_adjoint(e), RelTag.EQUAL)
        if isinstance(e, ScalarMul):
            if e.c.is_zero():
                return AdjointResult(zero(e.space), RelTag.EQUAL)
            sub = self._adj(e.child)
            return AdjointResult(
                self.norm.canon(scalar_mul(e.c.conjugate(), sub.expr)),
                sub.tag,
                sub.notes,
            )
        if isinstance(e, Restrict):
            return self._adj_restrict(e)
        if isinstance(e, Adjoint):
            return self._adj_adjoint(e)
        if isinstance(e, Closure):
            x = e.child
            if self._densely_defined(x) and self.ctx.prop(x, "closable"):
                sub = self._adj(x)  # closure(T)* = T* for closable T
                return AdjointResult(sub.expr, sub.tag, sub.notes + ("adjoint of closure",))
            return AdjointResult(mk_adjoint(e), RelTag.UNKNOWN)
        if isinstance(e, Inverse):
            x = e.child
            if self.ctx.prop(x, "boundedly-invertible"):
                sub = self._adj(x)
                if sub.tag is RelTag.EQUAL:
                    return AdjointResult(
                        self.norm.canon(mk_inverse(sub.expr)),
                        RelTag.EQUAL,
                        sub.notes + ("adjoint of a boundedly invertible operator",),
                    )
            return AdjointResult(mk_adjoint(e), RelTag.UNKNOWN)
        if isinstance(e, Sum):
            return self._adj_sum(e)
        if isinstance(e, Product):
            return self._adj_product(e)
        if isinstance(e, Block):
            return self._adj_block(e)
        return AdjointResult(mk_adjoint(e), RelTag.UNKNOWN)

    def _adj_restrict(self, e) -> AdjointResult:
        dense, _ = dm.dom_dense(e.dom, self.ctx)
        if dense and isinstance(e.child, (Identity, Zero)):
            return AdjointResult(e.child, RelTag.EQUAL, ("densely restricted constant",))
        if dense and self._bounded_ewd(e.child):
            sub = self._adj(e.child)
            return AdjointResult(
                sub.expr, sub.tag, sub.notes + ("dense restriction of a bounded operator",)
            )
        return AdjointResult(mk_adjoint(e), RelTag.UNKNOWN)

    def _adj_adjoint(self, e) -> AdjointResult:
        x = e.child
        if self._densely_defined(x):
            if self.ctx.prop(x, "closed"):
                return AdjointResult(x, RelTag.EQUAL, ("T** = T for closed T",))
            if self.ctx.prop(x, "closable"):
                return AdjointResult(
                    self.norm.canon(mk_closure(x)),
                    RelTag.EQUAL,
                    ("T** is the closure of T",),
                )
        return AdjointResult(mk_adjoint(e), RelTag.UNKNOWN)

    def _adj_sum(self, e) -> AdjointResult:
        parts = [self._adj(t) for t in e.terms]
        if any(p.tag is RelTag.UNKNOWN for p in parts):
            return AdjointResult(mk_adjoint(e), RelTag.UNKNOWN)
        expr = self.norm.canon(op_sum(*[p.expr for p in parts]))
        notes = tuple(n for p in parts for n in p.notes)
        rough = [t for t in e.terms if not self._bounded_ewd(t)]
        if len(rough) <= 1 and all(p.tag is RelTag.EQUAL for p in parts):
            return AdjointResult(
                expr, RelTag.EQUAL, notes + ("sum with bounded everywhere-defined summands",)
            )
        return AdjointResult(expr, RelTag.SUBSET_OF, notes)

    def _adj_product(self, e) -> AdjointResult:
        parts = [self._adj(f) for f in e.factors]
        if any(p.tag is RelTag.UNKNOWN for p in parts):
            return AdjointResult(mk_adjoint(e), RelTag.UNKNOWN)
        expr = self.norm.canon(product(*[p.expr for p in reversed(parts)]))
        notes = tuple(n for p in parts for n in p.notes)
        left_ok = all(self._bounded_ewd(f) for f in e.factors[:-1])
        if left_ok and all(p.tag is RelTag.EQUAL for p in parts):
            return AdjointResult(
                expr,
                RelTag.EQUAL,
                notes + ("product with bounded everywhere-defined left factors",),
            )
        return AdjointResult(expr, RelTag.SUBSET_OF, notes)

    def _adj_block(self, e) -> AdjointResult:
        n = e.n
        parts = [[self._adj(e.rows[j][i]) for j in range(n)] for i in range(n)]
        flat = [p for row in parts for p in row]
        if any(p.tag is RelTag.UNKNOWN for p in flat):
            return AdjointResult(mk_adjoint(e), RelTag.UNKNOWN)
        expr = self.norm.canon(
            block([[parts[i][j].expr for j in range(n)] for i in range(n)])
        )
        notes = tuple(n_ for p in flat for n_ in p.notes)
        if all(p.tag is RelTag.EQUAL for p in flat) and self._block_license(e):
            return AdjointResult(expr, RelTag.EQUAL, notes + ("blockwise star-transpose",))
        if all(self._densely_defined(x) for row in e.rows for x in row):
            return AdjointResult(expr, RelTag.SUBSET_OF, notes)
        return AdjointResult(mk_adjoint(e), RelTag.UNKNOWN)

    def _block_license(self, e) -> bool:
        # entries that are not bounded-everywhere-defined must form a
        # generalized permutation pattern of densely defined operators,
        # with plain zeros sharing no row or column condition
        rough = []
        for i in range(e.n):
            for j in range(e.n):
                x = e.rows[i][j]
                if isinstance(x, Zero) or self._bounded_ewd(x):
                    continue
                if is_zeroish(x):
                    return False  # a restricted zero carries a domain condition
                if not self._densely_defined(x):
                    return False
                rough.append((i, j))
        rows_used = [i for i, _ in rough]
        cols_used = [j for _, j in rough]
        return len(set(rows_used)) == len(rows_used) and len(set(cols_used)) == len(
            cols_used
        )


def formal_adjoint(e: OperatorExpr, facts=None, ctx=None) -> AdjointResult:
    """Formal adjoint of e plus its relation to the true adjoint."""
    if ctx is None:
        from .facts import EMPTY

        ctx = dm.base_ctx(facts if facts is not None else EMPTY)
    return _AdjointCalc(ctx).run(e)
