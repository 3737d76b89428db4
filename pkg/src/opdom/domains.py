"""Domain simplification, containment, and the domain-level predicates
(dense, closed, full, provably-distinct) that the inference engine builds
its chains from.

Everything here is three-valued and sound-by-construction: a predicate
answers True or False only when a structural rule or a declared fact
forces it, and None otherwise.  Answers come paired with Derivation
leaves so the engine can assemble replayable trees.

All queries run inside a Ctx, which bundles a sealed FactBase with a
property oracle `propq(expr, prop) -> True/False/None`.  The default
oracle (base_ctx) only sees declared facts and node intrinsics; the
engine supplies a stronger, inference-backed oracle.
"""

from __future__ import annotations

import enum

from . import exprs, facts as factsmod
from .exprs import (
    Atom,
    Block,
    DFull,
    DInter,
    DNamed,
    DProd,
    DPullback,
    DRange,
    DTrivial,
    DomainExpr,
    Identity,
    Product,
    Restrict,
    ScalarMul,
    Sum,
    Zero,
    dom_full,
    dom_inter,
    dom_named,
    dom_prod,
    dom_pullback,
    dom_range,
    dom_trivial,
    natural_domain,
)
from .facts import Derivation, declared


class RelTag(enum.Enum):
    EQUAL = "Equal"
    SUBSET_OF = "SubsetOf"
    SUPERSET_OF = "SupersetOf"
    UNKNOWN = "Unknown"

    def __str__(self):
        return self.value


_INTRINSIC = {
    Identity: {
        "bounded": True,
        "everywhere-defined": True,
        "densely-defined": True,
        "closed": True,
        "closable": True,
        "self-adjoint": True,
        "injective": True,
        "surjective": True,
        "boundedly-invertible": True,
        "invertible": True,
        "left-invertible": True,
        "right-invertible": True,
        "nilpotent": False,
        "nonzero": True,
    },
    Zero: {
        "bounded": True,
        "everywhere-defined": True,
        "densely-defined": True,
        "closed": True,
        "closable": True,
        "self-adjoint": True,
        "injective": False,
        "surjective": False,
        "invertible": False,
        "boundedly-invertible": False,
        "left-invertible": False,
        "right-invertible": False,
        "nilpotent": True,
        "nonzero": False,
    },
}


def intrinsic_prop(e, prop):
    table = _INTRINSIC.get(type(e))
    if table is not None:
        return table.get(prop)
    return None


class Ctx:
    """A fact base plus a property oracle, with memo tables."""

    def __init__(self, facts, propq=None):
        self.facts = facts
        self._propq = propq
        self._simp = {}
        self._eq_subst = None

    def prop(self, e, p):
        v = intrinsic_prop(e, p)
        if v is not None:
            return v
        if isinstance(e, Atom):
            if p in e.flags:
                return True
            neg = {"bounded": "unbounded", "closable": "not-closable"}.get(p)
            if neg and neg in e.flags:
                return False
        v, _ = self.facts.declared_prop(e, p)
        if v is not None:
            return v
        if p == "bounded":
            v = _structural_bounded(e, self)
            if v is not None:
                return v
        if self._propq is not None:
            return self._propq(e, p)
        return None

    def prop_reason(self, e, p):
        """Like prop, but also returns a Derivation leaf for the answer."""
        v = intrinsic_prop(e, p)
        if v is not None:
            word = "is" if v else "is not"
            return v, Derivation("intrinsic", f"{exprs.to_text(e)} {word} {p}")
        if isinstance(e, Atom):
            if p in e.flags:
                return True, Derivation("declared", f"{e.name} is {p}")
            neg = {"bounded": "unbounded", "closable": "not-closable"}.get(p)
            if neg and neg in e.flags:
                return False, Derivation("declared", f"{e.name} is {neg}")
        v, f = self.facts.declared_prop(e, p)
        if v is not None:
            return v, declared(f)
        if p == "bounded":
            v = _structural_bounded(e, self)
            if v is True:
                return True, Derivation(
                    "bounded-composite",
                    f"{exprs.to_text(e)} is bounded: built from bounded pieces",
                )
            if v is False:
                return False, Derivation(
                    "bounded-composite",
                    f"{exprs.to_text(e)} is unbounded: it extends or scales "
                    "an unbounded operator",
                )
        if self._propq is not None:
            v = self._propq(e, p)
            if v is not None:
                word = "is" if v else "is not"
                return v, Derivation("derived", f"{exprs.to_text(e)} {word} {p}")
        return None, None


def base_ctx(facts) -> Ctx:
    return Ctx(facts)


def _structural_bounded(e, ctx):
    """Boundedness (on the operator's own domain) is compositional."""
    if isinstance(e, (Identity, Zero)):
        return True
    if isinstance(e, Atom):
        return True if "bounded" in e.flags else (False if "unbounded" in e.flags else None)
    if isinstance(e, ScalarMul):
        if e.c.is_zero():
            return True
        return ctx.prop(e.child, "bounded")
    if isinstance(e, Restrict):
        return True if ctx.prop(e.child, "bounded") else None
    if isinstance(e, (Sum, Product)):
        parts = e.terms if isinstance(e, Sum) else e.factors
        if all(ctx.prop(x, "bounded") for x in parts):
            return True
        return None
    if isinstance(e, Block):
        if all(ctx.prop(x, "bounded") for row in e.rows for x in row):
            return True
        return None
    if isinstance(e, exprs.Closure):
        # the closure extends the operator, so boundedness transfers both ways
        return ctx.prop(e.child, "bounded")
    if isinstance(e, exprs.Adjoint):
        x = e.child
        if ctx.prop(x, "bounded"):
            dense, _ = dom_dense(natural_domain(x), ctx)
            if dense:
                return True
        return None
    return None


# ---------------------------------------------------------------------------
# simplification


def simplify_domain(d: DomainExpr, ctx: Ctx) -> DomainExpr:
    cached = ctx._simp.get(id(d))
    if cached is not None:
        return cached
    out = d
    for _ in range(64):
        new = _simp_once(out, ctx)
        if new is out:
            break
        out = new
    ctx._simp[id(d)] = out
    ctx._simp[id(out)] = out
    return out


def _domain_eq_subst(ctx):
    # orient each declared DomainEq toward the lexicographically smaller side
    if ctx._eq_subst is None:
        subst = {}
        for f in ctx.facts.domain_eqs():
            a, b = f.d1, f.d2
            if a is b:
                continue
            big, small = (a, b) if a.skey > b.skey else (b, a)
            subst[id(big)] = (small, f)
        ctx._eq_subst = subst
    return ctx._eq_subst


def _simp_once(d, ctx):
    subst = _domain_eq_subst(ctx)
    hit = subst.get(id(d))
    if hit is not None:
        return hit[0]

    if isinstance(d, DNamed):
        subj, stars = d.subject, d.stars
        if stars == 0:
            if isinstance(subj, Atom) and ctx.prop(subj, "everywhere-defined"):
                return dom_full(d.space)
        elif stars == 1:
            if ctx.prop(subj, "bounded") and ctx.prop(subj, "everywhere-defined"):
                return dom_full(d.space)  # adjoint of an everywhere-defined bounded op
        elif stars == 2:
            if ctx.prop(subj, "closed") and ctx.prop(subj, "densely-defined"):
                return simplify_domain(dom_named(subj, 0), ctx)  # T** = T
        elif stars >= 3:
            if ctx.prop(subj, "closable") and ctx.prop(subj, "densely-defined"):
                return dom_named(subj, stars - 2)  # T*** = T*
        return d

    if isinstance(d, DInter):
        parts = [simplify_domain(p, ctx) for p in d.parts]
        new = dom_inter(*parts)
        if new is not d:
            return new
        # drop parts that provably contain the rest
        for i, p in enumerate(parts):
            rest = [q for j, q in enumerate(parts) if j != i]
            if rest and all(_sub(q, p, ctx) for q in rest):
                return dom_inter(*rest)
        return d

    if isinstance(d, DProd):
        new = dom_prod(*[simplify_domain(p, ctx) for p in d.parts])
        return new if new is not d else d

    if isinstance(d, DPullback):
        op = d.op
        outer = simplify_domain(d.outer, ctx)
        inner = simplify_domain(d.inner, ctx)
        # {x in inner : op x in outer} = inner when every value op takes on
        # inner already lies in outer; inner never exceeds D(op) here because
        # pullbacks only arise as composition domains.
        if is_full_dom(outer, ctx):
            return inner
        rb = range_bound(op)
        if _sub(rb, outer, ctx):
            return inner
        if outer is not d.outer or inner is not d.inner:
            return dom_pullback(op, outer, inner)
        return d

    if isinstance(d, DRange):
        op = d.op
        if isinstance(op, Identity):
            return dom_full(d.space)
        if _is_zero_op(op):
            return dom_trivial(d.space)
        if ctx.prop(op, "surjective"):
            return dom_full(d.space)
        return d

    return d


def _is_zero_op(e):
    if isinstance(e, Zero):
        return True
    if isinstance(e, Restrict):
        return _is_zero_op(e.child)
    if isinstance(e, ScalarMul):
        return e.c.is_zero() or _is_zero_op(e.child)
    return False


def range_bound(e) -> DomainExpr:
    """A structural over-approximation of the closure of ran(e), built from
    Full/Trivial components.  Sound: ran(e) is always contained in it."""
    if _is_zero_op(e):
        return dom_trivial(e.space)
    if isinstance(e, ScalarMul):
        return range_bound(e.child)
    if isinstance(e, Restrict):
        return range_bound(e.child)
    if isinstance(e, Product):
        return range_bound(e.factors[0])
    if isinstance(e, Sum):
        parts = [range_bound(t) for t in e.terms]
        if all(isinstance(p, DTrivial) for p in parts):
            return dom_trivial(e.space)
        return dom_full(e.space)
    if isinstance(e, Block):
        rows = []
        for i in range(e.n):
            if all(_is_zero_op(e.rows[i][j]) for j in range(e.n)):
                rows.append(dom_trivial(e.comp_space))
            else:
                rows.append(dom_full(e.comp_space))
        return dom_prod(*rows)
    return dom_full(e.space)


# ---------------------------------------------------------------------------
# containment and relation


def is_full_dom(d, ctx) -> bool:
    d = simplify_domain(d, ctx)
    return _struct_full(d)


def _struct_full(d):
    if isinstance(d, DFull):
        return True
    if isinstance(d, DProd):
        return all(_struct_full(p) for p in d.parts)
    return False


def _struct_trivial(d):
    if isinstance(d, DTrivial):
        return True
    if isinstance(d, DProd):
        return all(_struct_trivial(p) for p in d.parts)
    return False


def _sub(a, b, ctx, depth=0) -> bool:
    """Provable containment a <= b (False means 'not proved')."""
    if a is b:
        return True
    if depth > 24:
        return False
    if _struct_trivial(a) or _struct_full(b):
        return True
    if isinstance(a, DInter):
        if any(_sub(p, b, ctx, depth + 1) for p in a.parts):
            return True
    if isinstance(b, DInter):
        if all(_sub(a, q, ctx, depth + 1) for q in b.parts):
            return True
    if isinstance(a, DProd) and isinstance(b, DProd):
        if _prod_componentwise(a, b, lambda x, y: _sub(x, y, ctx, depth + 1)):
            return True
    if isinstance(a, DPullback):
        if _sub(a.inner, b, ctx, depth + 1):
            return True
        if (
            isinstance(b, DPullback)
            and a.op is b.op
            and _sub(a.outer, b.outer, ctx, depth + 1)
            and _sub(a.inner, b.inner, ctx, depth + 1)
        ):
            return True
    for f in ctx.facts.domain_subsets():
        d1 = simplify_domain(f.d1, ctx)
        d2 = simplify_domain(f.d2, ctx)
        if _sub(a, d1, ctx, depth + 1) and _sub(d2, b, ctx, depth + 1):
            return True
    return False


def _prod_componentwise(a, b, pred):
    if len(a.parts) == len(b.parts) and all(
        pa.space is pb.space for pa, pb in zip(a.parts, b.parts)
    ):
        return all(pred(pa, pb) for pa, pb in zip(a.parts, b.parts))
    return False


def domain_relation(d1: DomainExpr, d2: DomainExpr, ctx: Ctx) -> RelTag:
    a = simplify_domain(d1, ctx)
    b = simplify_domain(d2, ctx)
    if a is b or (_struct_full(a) and _struct_full(b)) or (
        _struct_trivial(a) and _struct_trivial(b)
    ):
        return RelTag.EQUAL
    down = _sub(a, b, ctx)
    up = _sub(b, a, ctx)
    if down and up:
        return RelTag.EQUAL
    if down:
        return RelTag.SUBSET_OF
    if up:
        return RelTag.SUPERSET_OF
    return RelTag.UNKNOWN


# ---------------------------------------------------------------------------
# predicates with derivations


def dom_dense(d, ctx):
    """(True/False/None, Derivation) for density of d in its space."""
    d = simplify_domain(d, ctx)
    v, f = ctx.facts.declared_prop(d, "dense")
    if v is not None:
        return v, declared(f)
    if _struct_full(d):
        return True, Derivation("dom-full-dense", f"{exprs.dom_text(d)} is the full space")
    if _struct_trivial(d):
        return False, Derivation(
            "dom-trivial-not-dense",
            f"{exprs.dom_text(d)} = {{0}} is not dense (space is nonzero)",
        )
    if isinstance(d, DNamed):
        return _named_dense(d, ctx)
    if isinstance(d, DProd):
        subs = []
        for p in d.parts:
            v, why = dom_dense(p, ctx)
            if v is False:
                return False, Derivation(
                    "dom-prod-dense",
                    f"{exprs.dom_text(d)} is not dense: component "
                    f"{exprs.dom_text(p)} is not dense",
                    (why,),
                )
            if v is None:
                return None, None
            subs.append(why)
        return True, Derivation(
            "dom-prod-dense",
            f"{exprs.dom_text(d)} is dense: every component is dense",
            tuple(subs),
        )
    return None, None


def _named_dense(d, ctx):
    subj, stars = d.subject, d.stars
    if stars == 0:
        v, why = ctx.prop_reason(subj, "densely-defined")
        if v is not None:
            return v, why
        v, why = ctx.prop_reason(subj, "everywhere-defined")
        if v is True:
            return True, why
        return None, None
    if stars == 1:
        # von Neumann: for densely defined T, T is closable iff D(T*) is dense
        dd, dd_why = ctx.prop_reason(subj, "densely-defined")
        if dd is not True:
            dd, dd_why = ctx.prop_reason(subj, "everywhere-defined")
        if dd is True:
            cl, cl_why = ctx.prop_reason(subj, "closable")
            if cl is not None:
                word = "dense" if cl else "not dense"
                return cl, Derivation(
                    "closable-iff-adjoint-dense",
                    f"{exprs.dom_text(d)} is {word}: a densely defined operator "
                    "is closable iff its adjoint is densely defined",
                    (dd_why, cl_why),
                )
    return None, None


def dom_closed(d, ctx):
    """(True/False/None, Derivation) for closedness of d as a subspace."""
    d = simplify_domain(d, ctx)
    v, f = ctx.facts.declared_prop(d, "closed")
    if v is not None:
        return v, declared(f)
    if _struct_full(d) or _struct_trivial(d):
        return True, Derivation(
            "dom-closed-trivially", f"{exprs.dom_text(d)} is a closed subspace"
        )
    if isinstance(d, DNamed):
        # effective owner of the domain: the subject with stars adjoints on top
        subj = d.subject
        for _ in range(d.stars):
            subj = exprs.adjoint(subj)
        cl, cl_why = ctx.prop_reason(subj, "closed")
        bd, bd_why = ctx.prop_reason(subj, "bounded")
        if cl is True and bd is False:
            return False, Derivation(
                "closed-unbounded-domain-not-closed",
                f"{exprs.dom_text(d)} is not closed: a closed operator on a "
                "closed domain would be bounded (closed graph theorem)",
                (cl_why, bd_why),
            )
        if cl is True and bd is True:
            return True, Derivation(
                "bounded-closed-domain",
                f"{exprs.dom_text(d)} is closed: a bounded operator is closed "
                "iff its domain is closed",
                (cl_why, bd_why),
            )
        if bd is True and cl is False:
            return False, Derivation(
                "bounded-closed-domain",
                f"{exprs.dom_text(d)} is not closed: a bounded operator is "
                "closed iff its domain is closed",
                (bd_why, cl_why),
            )
    if isinstance(d, DProd):
        subs = []
        for p in d.parts:
            v, why = dom_closed(p, ctx)
            if v is False:
                return False, Derivation(
                    "dom-prod-closed",
                    f"{exprs.dom_text(d)} is not closed: component "
                    f"{exprs.dom_text(p)} is not closed",
                    (why,),
                )
            if v is None:
                return None, None
            subs.append(why)
        return True, Derivation(
            "dom-prod-closed",
            f"{exprs.dom_text(d)} is closed: every component is closed",
            tuple(subs),
        )
    return None, None


def dom_distinct(d1, d2, ctx):
    """(bool, Derivation): True only when d1 != d2 is provable."""
    a = simplify_domain(d1, ctx)
    b = simplify_domain(d2, ctx)
    if a is b:
        return False, None
    for pred in (dom_closed, dom_dense):
        va, wa = pred(a, ctx)
        vb, wb = pred(b, ctx)
        if va is not None and vb is not None and va != vb:
            return True, Derivation(
                "dom-distinct",
                f"{exprs.dom_text(a)} != {exprs.dom_text(b)}: they differ on "
                f"{'closedness' if pred is dom_closed else 'density'}",
                tuple(w for w in (wa, wb) if w is not None),
            )
    if _struct_full(a) != _struct_full(b):
        full, other = (a, b) if _struct_full(a) else (b, a)
        if _struct_trivial(other):
            return True, Derivation(
                "dom-distinct", f"{exprs.dom_text(full)} != {{0}} (space is nonzero)"
            )
        vc, wc = dom_closed(other, ctx)
        if vc is False:
            return True, Derivation(
                "dom-distinct",
                f"{exprs.dom_text(other)} is not closed, so it is not the full space",
                (wc,),
            )
        vd, wd = dom_dense(other, ctx)
        if vd is False:
            return True, Derivation(
                "dom-distinct",
                f"{exprs.dom_text(other)} is not dense, so it is not the full space",
                (wd,),
            )
    if isinstance(a, DProd) and isinstance(b, DProd):
        if len(a.parts) == len(b.parts):
            for pa, pb in zip(a.parts, b.parts):
                if pa.space is pb.space:
                    hit, why = dom_distinct(pa, pb, ctx)
                    if hit:
                        return True, Derivation(
                            "dom-distinct",
                            f"{exprs.dom_text(a)} != {exprs.dom_text(b)}: "
                            "components differ",
                            (why,),
                        )
    return False, None
