"""Goal-directed property inference, identity checking, and spectrum rules.

The Engine wraps a sealed FactBase with:

* infer(expr, prop)            -- three-valued property queries with
                                  replayable Derivation trees;
* check_identity(lhs, rhs)     -- Proved / Refuted / Unknown, where Proved
                                  means equality as operators (domains
                                  included) and Refuted means a provable
                                  difference (a distinguishing entry,
                                  boundedness mismatch, or provably
                                  different domains);
* spectrum(expr)               -- a SpectrumSet when a rule pins it down,
                                  otherwise constraints such as
                                  "not equal to {0}";
* check_spectrum / check_domains_equal -- claim-level wrappers.

Every rule is registered in RULES with a human-readable statement and,
where it rests on a classical theorem, an anchor naming that theorem.
Inference is monotone over declared facts; if two rules (or a rule and a
declaration) force opposite answers, InconsistentFacts is raised rather
than picking a side.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from . import domains as dm
from .adjoint import formal_adjoint
from .domains import RelTag
from .exprs import (
    Adjoint,
    Atom,
    Block,
    Closure,
    DomainExpr,
    Identity,
    Inverse,
    OperatorExpr,
    Product,
    Restrict,
    ScalarMul,
    Sum,
    Zero,
    dom_full,
    dom_trivial,
    natural_domain,
    op_sum,
    power,
    product,
    restrict,
    scalar_mul,
    to_text,
)
from .facts import (
    Derivation,
    FactBase,
    HasProp,
    IdentityOn,
    InconsistentFacts,
    LacksProp,
    SpectrumIs,
    SpectrumNot,
    declared,
)
from .rewrite import Normalizer, is_identityish, is_zeroish
from .spectrum import (
    ALL_C,
    POINT0,
    POINT1,
    PointSet,
    SpectrumSet,
    point_set,
    spectrum_equal,
    squared,
)

PROVED = "Proved"
REFUTED = "Refuted"
UNKNOWN = "Unknown"


@dataclass(frozen=True)
class Rule:
    name: str
    statement: str
    anchor: str = ""


_RULES = [
    Rule(
        "closed-graph",
        "an everywhere-defined closable operator is bounded",
        "closed graph theorem",
    ),
    Rule(
        "bounded-not-closable",
        "a bounded operator is closable; hence a non-closable operator is unbounded",
    ),
    Rule(
        "bounded-composite",
        "sums, products, blocks, restrictions, closures and adjoints built "
        "from bounded pieces are bounded on their domains",
    ),
    Rule(
        "bounded-closed-iff-domain-closed",
        "a bounded operator is closed exactly when its domain is a closed subspace",
    ),
    Rule(
        "ewd-unbounded-not-closable",
        "an everywhere-defined unbounded operator is not closable",
        "closed graph theorem",
    ),
    Rule(
        "adjoint-dense-closable",
        "a densely defined operator is closable exactly when its adjoint "
        "is densely defined",
        "von Neumann's closability criterion",
    ),
    Rule("closed-implies-closable", "every closed operator is closable"),
    Rule(
        "closable-implies-not-closed",
        "an operator that is not closable is in particular not closed",
    ),
    Rule(
        "sum-bounded-perturbation",
        "adding bounded everywhere-defined terms preserves closedness, "
        "closability, and unboundedness, in both directions",
    ),
    Rule(
        "product-closed-outer",
        "C o B is closed when C is closed and B is bounded and everywhere defined",
    ),
    Rule(
        "product-closed-inner",
        "B o C is closed when B is boundedly invertible and C is closed",
    ),
    Rule(
        "block-pattern-closed",
        "a block matrix whose entries outside a generalized permutation "
        "pattern are bounded and everywhere defined is closed (closable) "
        "when the pattern entries are closed (closable)",
    ),
    Rule(
        "block-column-witness-not-closable",
        "a block matrix is not closable when some entry is not closable "
        "and every other entry in that column is bounded and everywhere defined",
    ),
    Rule(
        "block-unbounded-entry",
        "a block matrix is unbounded when some entry is unbounded and "
        "every other entry in that column is everywhere defined",
    ),
    Rule(
        "adjoint-of-unbounded",
        "the adjoint of a closable densely defined unbounded operator is unbounded",
        "closed graph theorem",
    ),
    Rule(
        "adjoint-closed",
        "the adjoint of a densely defined operator is closed",
    ),
    Rule(
        "closure-closed",
        "the closure of a closable operator is closed",
    ),
    Rule(
        "closed-bijection-bounded-inverse",
        "a closed bijection between Hilbert spaces has a bounded inverse",
        "closed graph theorem / open mapping theorem",
    ),
    Rule(
        "bounded-inverse-implies-closed",
        "a boundedly invertible operator is closed, injective, and surjective",
    ),
    Rule(
        "square-root-of-invertible",
        "a closed operator whose square is boundedly invertible is itself "
        "boundedly invertible; conversely a square of a boundedly "
        "invertible operator is boundedly invertible",
    ),
    Rule(
        "product-of-invertibles",
        "a composition of boundedly invertible operators is boundedly invertible",
    ),
    Rule("composition-of-injectives", "a composition of injective operators is injective"),
    Rule(
        "composition-of-surjectives",
        "a composition of surjective operators is surjective",
    ),
    Rule(
        "left-inverse-witness",
        "a declared identity L o E = I makes E injective and left-invertible",
    ),
    Rule(
        "right-inverse-witness",
        "a declared identity E o R = I makes E surjective and right-invertible",
    ),
    Rule(
        "triangular-injective",
        "a triangular block matrix with injective diagonal entries is injective",
    ),
    Rule(
        "block-row-range",
        "a block row that only passes component j through confines the "
        "range; if the column-j domain is a proper subspace the block is "
        "not surjective, and an all-zero row never is",
    ),
    Rule("restriction-injective", "a restriction of an injective operator is injective"),
    Rule(
        "restriction-range",
        "Restrict(I, D) has range exactly D: it is left-invertible, and "
        "not surjective when D is a proper subspace",
    ),
    Rule(
        "zero-operator-range",
        "a (restricted) zero operator on a nonzero space is not surjective; "
        "on a provably nontrivial domain it is not injective",
    ),
    Rule(
        "nilpotent-power",
        "an operator with a vanishing power is nilpotent",
    ),
    Rule(
        "bounded-nilpotent-spectrum",
        "a bounded nilpotent operator on a nonzero complex space has spectrum {0}",
        "spectral radius formula",
    ),
    Rule(
        "non-closed-spectrum",
        "an operator that is not closed has empty resolvent set, so its "
        "spectrum is all of C",
    ),
    Rule(
        "spectral-mapping-square",
        "for a closed operator T, the spectrum of T^2 is the set of "
        "squares of the spectrum of T",
        "spectral mapping theorem for squares of closed operators",
    ),
    Rule(
        "square-spectrum-constraint",
        "if the spectrum of T were S, the spectrum of T^2 would be the "
        "squares of S; a contradicting spectrum of T^2 rules S out",
        "spectral mapping theorem for squares of closed operators",
    ),
    Rule(
        "commuting-nilpotent-perturbation",
        "adding a bounded nilpotent operator that commutes with T does "
        "not change the spectrum",
        "resolvent Neumann-series argument for quasinilpotent commuting perturbations",
    ),
    Rule("constant-spectrum", "I, 0, and c*I have spectra {1}, {0}, and {c}"),
    Rule(
        "closable-iff-adjoint-dense",
        "density of D(T*) for densely defined T is equivalent to closability of T",
        "von Neumann's closability criterion",
    ),
    Rule(
        "closed-unbounded-domain-not-closed",
        "the domain of a closed unbounded operator is never a closed subspace",
        "closed graph theorem",
    ),
    Rule(
        "bounded-closed-domain",
        "for a bounded operator, domain closed and operator closed are equivalent",
    ),
    Rule("dom-prod-dense", "a product domain is dense iff every component is dense"),
    Rule("dom-prod-closed", "a product domain is closed iff every component is closed"),
    Rule("dom-distinct", "domains provably differing in closedness or density differ"),
    Rule("dom-full-dense", "the full space is dense and closed"),
    Rule("dom-trivial-not-dense", "the zero subspace is closed and not dense"),
    Rule("dom-closed-trivially", "the full and zero subspaces are closed"),
    Rule("domain-full", "the operator's domain is the whole space"),
    Rule("domain-not-full", "the operator's domain is provably proper"),
    Rule("domain-density", "density is read off the simplified domain"),
    Rule("normalize", "both sides rewrite to the same canonical operator"),
    Rule("declared", "a declared fact"),
    Rule("derived", "combination of declared facts"),
    Rule("intrinsic", "an intrinsic property of I or 0"),
]

RULES = {r.name: r for r in _RULES}
ANCHORS = {r.name: r.anchor for r in _RULES if r.anchor}


def derivation_lines(d: Derivation, indent: int = 0):
    pad = "  " * indent
    line = f"{pad}[{d.rule}] {d.statement}"
    if d.rule in ANCHORS:
        line += f"  ({ANCHORS[d.rule]})"
    out = [line]
    for p in d.premises:
        out.extend(derivation_lines(p, indent + 1))
    return out


def derivation_dict(d: Derivation) -> dict:
    """JSON-ready derivation tree: rule_id, anchor, conclusion, premises."""
    return {
        "rule_id": d.rule,
        "anchor": ANCHORS.get(d.rule, ""),
        "conclusion": d.statement,
        "premises": [derivation_dict(p) for p in d.premises],
    }


@dataclass(frozen=True)
class PropAnswer:
    prop: str
    value: Optional[bool]
    derivation: Optional[Derivation]


@dataclass(frozen=True)
class IdentityVerdict:
    status: str
    detail: str
    derivation: Optional[Derivation] = None


@dataclass(frozen=True)
class SpectrumAnswer:
    value: Optional[SpectrumSet]
    constraints: tuple = ()  # (kind, SpectrumSet, Derivation)
    derivation: Optional[Derivation] = None


class Engine:
    def __init__(self, factbase: FactBase):
        self.fb = factbase
        self.ctx = dm.Ctx(factbase, propq=self._propq)
        self.base = dm.base_ctx(factbase)
        self.norm = Normalizer(self.ctx)
        self._memo = {}
        self._active = set()
        self._spec_active = set()

    # -- plumbing -----------------------------------------------------------

    def normalize(self, e: OperatorExpr) -> OperatorExpr:
        return self.norm.canon(e)

    def domain(self, e: OperatorExpr) -> DomainExpr:
        return dm.simplify_domain(natural_domain(self.normalize(e)), self.ctx)

    def adjoint(self, e: OperatorExpr):
        return formal_adjoint(e, ctx=self.ctx)

    def _propq(self, e, p):
        v, _ = self._infer(e, p)
        return v

    def _nd(self, e):
        return dm.simplify_domain(natural_domain(e), self.ctx)

    def _ewd(self, e):
        return dm.is_full_dom(natural_domain(e), self.ctx)

    def _bewd(self, e):
        return bool(self.ctx.prop(e, "bounded")) and self._ewd(e)

    # -- property inference ---------------------------------------------------

    def infer(self, e: OperatorExpr, prop: str) -> PropAnswer:
        v, d = self._infer(e, prop)
        return PropAnswer(prop, v, d)

    def property_report(self, e: OperatorExpr, props=None) -> dict:
        """Three-valued verdict per property, with derivations where decided."""
        return {p: self.infer(e, p) for p in (props or PROPS)}

    def _infer(self, e, prop):
        if prop == "unbounded":
            v, d = self._infer(e, "bounded")
            return (None if v is None else not v), d
        e = self.norm.canon(e)
        key = (id(e), prop)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        if key in self._active or len(self._active) > 160:
            return None, None
        self._active.add(key)
        try:
            candidates = []
            v, d = self.base.prop_reason(e, prop)
            if v is not None:
                candidates.append((v, d))
            for fn in _PROP_RULES.get(prop, ()):
                r = fn(self, e)
                if r is not None:
                    candidates.append(r)
            truths = [c for c in candidates if c[0] is True]
            lies = [c for c in candidates if c[0] is False]
            if truths and lies:
                raise InconsistentFacts(
                    f"{to_text(e)} is {prop} [{truths[0][1].statement}]",
                    f"{to_text(e)} is not {prop} [{lies[0][1].statement}]",
                )
            if truths:
                out = truths[0]
            elif lies:
                out = lies[0]
            else:
                out = (None, None)
        finally:
            self._active.discard(key)
        if out[0] is not None:
            self._memo[key] = out
        return out

    # each rule: fn(self, e) -> (bool, Derivation) or None

    def _r_ewd(self, e):
        nd = self._nd(e)
        if dm._struct_full(nd):
            return True, Derivation(
                "domain-full", f"D({to_text(e)}) is the whole space"
            )
        rel = dm.domain_relation(nd, dom_full(e.space), self.ctx)
        if rel is RelTag.EQUAL:
            return True, Derivation(
                "domain-full", f"D({to_text(e)}) equals the whole space"
            )
        hit, why = dm.dom_distinct(nd, dom_full(e.space), self.ctx)
        if hit:
            return False, Derivation(
                "domain-not-full",
                f"D({to_text(e)}) is provably not the whole space",
                (why,),
            )
        return None

    def _r_densely_defined(self, e):
        v, why = dm.dom_dense(self._nd(e), self.ctx)
        if v is None:
            return None
        word = "is" if v else "is not"
        return v, Derivation(
            "domain-density",
            f"{to_text(e)} {word} densely defined",
            (why,) if why else (),
        )

    # bounded ------------------------------------------------------------------

    def _r_bounded_closed_graph(self, e):
        ev, ed = self._infer(e, "everywhere-defined")
        if ev is not True:
            return None
        cv, cd = self._infer(e, "closable")
        if cv is True:
            return True, Derivation(
                "closed-graph",
                f"{to_text(e)} is bounded: everywhere defined and closable",
                (ed, cd),
            )
        return None

    def _r_bounded_not_closable(self, e):
        cv, cd = self._infer(e, "closable")
        if cv is False:
            return False, Derivation(
                "bounded-not-closable",
                f"{to_text(e)} is unbounded: it is not even closable",
                (cd,),
            )
        return None

    def _r_bounded_sum(self, e):
        if not isinstance(e, Sum):
            return None
        rough = []
        whys = []
        for t in e.terms:
            if self._bewd(t):
                continue
            rough.append(t)
        if len(rough) != 1:
            return None
        v, d = self._infer(rough[0], "bounded")
        if v is False:
            return False, Derivation(
                "sum-bounded-perturbation",
                f"{to_text(e)} is unbounded: term {to_text(rough[0])} is "
                "unbounded and the rest is bounded and everywhere defined",
                (d,),
            )
        return None

    def _r_bounded_block_entry(self, e):
        if not isinstance(e, Block):
            return None
        for j in range(e.n):
            for i in range(e.n):
                v, d = self._infer(e.rows[i][j], "bounded")
                if v is False and all(
                    self._ewd(e.rows[k][j]) for k in range(e.n) if k != i
                ):
                    return False, Derivation(
                        "block-unbounded-entry",
                        f"{to_text(e)} is unbounded: entry ({i + 1},{j + 1}) is "
                        "unbounded and the rest of its column is everywhere defined",
                        (d,),
                    )
        return None

    def _r_bounded_adjoint(self, e):
        if not isinstance(e, Adjoint):
            return None
        x = e.child
        dd, _ = dm.dom_dense(self._nd(x), self.ctx)
        if not dd:
            return None
        # T* = (closure T)*, and the closure of an unbounded operator stays
        # unbounded, so closability is enough
        if self.ctx.prop(x, "closed") or self.ctx.prop(x, "closable"):
            v, d = self._infer(x, "bounded")
            if v is False:
                return False, Derivation(
                    "adjoint-of-unbounded",
                    f"{to_text(e)} is unbounded: it is the adjoint of a "
                    "closable densely defined unbounded operator",
                    (d,),
                )
        return None

    # closed ---------------------------------------------------------------------

    def _r_closed_bounded_domain(self, e):
        bv, bd = self._infer(e, "bounded")
        if bv is not True:
            return None
        dv, dd = dm.dom_closed(self._nd(e), self.ctx)
        if dv is None:
            return None
        word = "is" if dv else "is not"
        return dv, Derivation(
            "bounded-closed-iff-domain-closed",
            f"{to_text(e)} {word} closed: it is bounded and its domain "
            f"{word} a closed subspace",
            tuple(x for x in (bd, dd) if x),
        )

    def _r_closed_not_closable(self, e):
        cv, cd = self._infer(e, "closable")
        if cv is False:
            return False, Derivation(
                "closable-implies-not-closed",
                f"{to_text(e)} is not closed: it is not even closable",
                (cd,),
            )
        return None

    def _r_closed_sum(self, e):
        if not isinstance(e, Sum):
            return None
        rough = [t for t in e.terms if not self._bewd(t)]
        if len(rough) != 1:
            return None
        v, d = self._infer(rough[0], "closed")
        if v is None:
            return None
        word = "is" if v else "is not"
        return v, Derivation(
            "sum-bounded-perturbation",
            f"{to_text(e)} {word} closed: bounded everywhere-defined terms "
            f"never change closedness and {to_text(rough[0])} {word} closed",
            (d,),
        )

    def _r_closed_product(self, e):
        if not isinstance(e, Product):
            return None
        head, tail = e.factors[0], e.factors[1:]
        rest = tail[0] if len(tail) == 1 else product(*tail)
        rest = self.norm.canon(rest)
        hv, hd = self._infer(head, "closed")
        if hv is True and self._bewd(rest):
            return True, Derivation(
                "product-closed-outer",
                f"{to_text(e)} is closed: {to_text(head)} is closed and the "
                "rest is bounded and everywhere defined",
                (hd,),
            )
        if self.ctx.prop(head, "boundedly-invertible"):
            rv, rd = self._infer(rest, "closed")
            if rv is True:
                return True, Derivation(
                    "product-closed-inner",
                    f"{to_text(e)} is closed: {to_text(head)} is boundedly "
                    f"invertible and {to_text(rest)} is closed",
                    (rd,),
                )
        return None

    def _block_rough(self, e):
        """Entries that are not bounded-everywhere-defined, with positions."""
        out = []
        for i in range(e.n):
            for j in range(e.n):
                x = e.rows[i][j]
                if isinstance(x, Zero) or self._bewd(x):
                    continue
                out.append((i, j, x))
        return out

    def _pattern(self, rough):
        rows = [i for i, _, _ in rough]
        cols = [j for _, j, _ in rough]
        return len(set(rows)) == len(rows) and len(set(cols)) == len(cols)

    def _r_closed_block(self, e):
        if not isinstance(e, Block):
            return None
        rough = self._block_rough(e)
        if not self._pattern(rough):
            return None
        whys = []
        for i, j, x in rough:
            if is_zeroish(x):
                return None  # restricted zeros carry extra domain conditions
            v, d = self._infer(x, "closed")
            if v is not True:
                return None
            whys.append(d)
        return True, Derivation(
            "block-pattern-closed",
            f"{to_text(e)} is closed: its non-bounded entries occupy distinct "
            "rows and columns and each is closed",
            tuple(whys),
        )

    def _r_closed_bdd_inv(self, e):
        v, d = self.base.prop_reason(e, "boundedly-invertible")
        if v is True:
            return True, Derivation(
                "bounded-inverse-implies-closed",
                f"{to_text(e)} is closed: it is boundedly invertible",
                (d,),
            )
        return None

    def _r_closed_adjoint(self, e):
        if not isinstance(e, Adjoint):
            return None
        dd, why = dm.dom_dense(self._nd(e.child), self.ctx)
        if dd is True:
            return True, Derivation(
                "adjoint-closed",
                f"{to_text(e)} is closed: the adjoint of a densely defined "
                "operator is always closed",
                (why,) if why else (),
            )
        return None

    def _r_closed_closure(self, e):
        if not isinstance(e, Closure):
            return None
        v, d = self._infer(e.child, "closable")
        if v is True:
            return True, Derivation(
                "closure-closed",
                f"{to_text(e)} is closed: the closure of a closable operator",
                (d,),
            )
        return None

    # closable ----------------------------------------------------------------------

    def _r_closable_closed(self, e):
        v, d = self._infer(e, "closed")
        if v is True:
            return True, Derivation(
                "closed-implies-closable", f"{to_text(e)} is closed, hence closable", (d,)
            )
        return None

    def _r_closable_bounded(self, e):
        # only structural/declared boundedness: the closed-graph bounded rule
        # depends on closability, so consulting full inference here would
        # just cycle
        v, d = self.base.prop_reason(e, "bounded")
        if v is True:
            return True, Derivation(
                "bounded-not-closable", f"{to_text(e)} is bounded, hence closable", (d,)
            )
        return None

    def _r_closable_ewd_unbounded(self, e):
        ev, ed = self._infer(e, "everywhere-defined")
        if ev is not True:
            return None
        bv, bd = self.base.prop_reason(e, "bounded")
        if bv is False:
            return False, Derivation(
                "ewd-unbounded-not-closable",
                f"{to_text(e)} is not closable: everywhere defined but "
                "unbounded, so its closure would violate the closed graph theorem",
                (ed, bd),
            )
        return None

    def _r_closable_adjoint_dense(self, e):
        dd, dd_why = dm.dom_dense(self._nd(e), self.ctx)
        if dd is not True:
            return None
        adj = formal_adjoint(e, ctx=self.ctx)
        if adj.tag is not RelTag.EQUAL:
            return None
        dv, dwhy = dm.dom_dense(self._nd(adj.expr), self.ctx)
        if dv is None:
            return None
        word = "is" if dv else "is not"
        return dv, Derivation(
            "adjoint-dense-closable",
            f"{to_text(e)} {word} closable: its adjoint {to_text(adj.expr)} "
            f"{word} densely defined",
            tuple(x for x in (dd_why, dwhy) if x),
        )

    def _r_closable_sum(self, e):
        if not isinstance(e, Sum):
            return None
        rough = [t for t in e.terms if not self._bewd(t)]
        if len(rough) != 1:
            return None
        v, d = self._infer(rough[0], "closable")
        if v is None:
            return None
        word = "is" if v else "is not"
        return v, Derivation(
            "sum-bounded-perturbation",
            f"{to_text(e)} {word} closable: bounded everywhere-defined terms "
            f"never change closability and {to_text(rough[0])} {word} closable",
            (d,),
        )

    def _r_closable_block_witness(self, e):
        if not isinstance(e, Block):
            return None
        for j in range(e.n):
            for i in range(e.n):
                v, d = self._infer(e.rows[i][j], "closable")
                if v is False and all(
                    self._bewd(e.rows[k][j]) for k in range(e.n) if k != i
                ):
                    return False, Derivation(
                        "block-column-witness-not-closable",
                        f"{to_text(e)} is not closable: entry ({i + 1},{j + 1}) "
                        "is not closable and the rest of its column is bounded "
                        "and everywhere defined",
                        (d,),
                    )
        return None

    def _r_closable_block_pattern(self, e):
        if not isinstance(e, Block):
            return None
        rough = self._block_rough(e)
        if not self._pattern(rough):
            return None
        whys = []
        for i, j, x in rough:
            if is_zeroish(x):
                return None
            v, d = self._infer(x, "closable")
            if v is not True:
                return None
            whys.append(d)
        return True, Derivation(
            "block-pattern-closed",
            f"{to_text(e)} is closable: its non-bounded entries occupy "
            "distinct rows and columns and each is closable",
            tuple(whys),
        )

    # injective / surjective / invertible -----------------------------------------------

    def _composition_identity_facts(self):
        """Canonicalized declared facts of the form Product(...) = I.

        The product side must be canonicalized with substitution off:
        the fact itself sits in the substitution table, so a full canon
        would collapse its left side to I and hide the factors.
        """
        cached = getattr(self, "_comp_id_facts", None)
        if cached is not None:
            return cached
        out = []
        for f in self.fb.identities():
            if f.on is not None:
                continue
            for x, y in ((f.lhs, f.rhs), (f.rhs, f.lhs)):
                if not isinstance(self.norm.canon(y), Identity):
                    continue
                # the raw shape keeps the factors; block products would
                # multiply out under any canon
                prod = x if isinstance(x, Product) else self.norm.canon_nosubst(x)
                if isinstance(prod, Product):
                    factors = tuple(self.norm.canon(g) for g in prod.factors)
                    out.append((factors, f))
        self._comp_id_facts = out
        return out

    def _r_injective_witness(self, e):
        for factors, f in self._composition_identity_facts():
            if factors[-1] is e:
                word = " o ".join(to_text(g) for g in factors)
                return True, Derivation(
                    "left-inverse-witness",
                    f"{to_text(e)} is injective: {word} = I gives a left inverse",
                    (declared(f),),
                )
        return None

    def _r_injective_from_invertible(self, e):
        for p in ("boundedly-invertible", "invertible", "left-invertible"):
            v, d = self.base.prop_reason(e, p)
            if v is True:
                return True, Derivation(
                    "bounded-inverse-implies-closed",
                    f"{to_text(e)} is injective: it is {p}",
                    (d,),
                )
        return None

    def _r_injective_product(self, e):
        if not isinstance(e, Product):
            return None
        whys = []
        for f in e.factors:
            v, d = self._infer(f, "injective")
            if v is not True:
                return None
            whys.append(d)
        return True, Derivation(
            "composition-of-injectives",
            f"{to_text(e)} is injective: every factor is",
            tuple(whys),
        )

    def _r_injective_restrict(self, e):
        if not isinstance(e, Restrict):
            return None
        v, d = self._infer(e.child, "injective")
        if v is True:
            return True, Derivation(
                "restriction-injective",
                f"{to_text(e)} is injective: it restricts an injective operator",
                (d,),
            )
        return None

    def _r_injective_zero(self, e):
        if not is_zeroish(e):
            return None
        hit, why = dm.dom_distinct(self._nd(e), dom_trivial(e.space), self.ctx)
        if hit:
            return False, Derivation(
                "zero-operator-range",
                f"{to_text(e)} is not injective: it kills a nontrivial domain",
                (why,) if why else (),
            )
        return None

    def _r_injective_triangular(self, e):
        if not isinstance(e, Block):
            return None
        n = e.n
        for upper in (True, False):
            off = [
                e.rows[i][j]
                for i in range(n)
                for j in range(n)
                if (j < i if upper else j > i)
            ]
            if not all(is_zeroish(x) for x in off):
                continue
            whys = []
            ok = True
            for i in range(n):
                v, d = self._infer(e.rows[i][i], "injective")
                if v is not True:
                    ok = False
                    break
                whys.append(d)
            if ok:
                return True, Derivation(
                    "triangular-injective",
                    f"{to_text(e)} is injective: triangular with injective diagonal",
                    tuple(whys),
                )
        return None

    def _r_surjective_witness(self, e):
        for factors, f in self._composition_identity_facts():
            if factors[0] is e:
                word = " o ".join(to_text(g) for g in factors)
                return True, Derivation(
                    "right-inverse-witness",
                    f"{to_text(e)} is surjective: {word} = I gives a right inverse",
                    (declared(f),),
                )
        return None

    def _r_surjective_from_invertible(self, e):
        for p in ("boundedly-invertible", "invertible", "right-invertible"):
            v, d = self.base.prop_reason(e, p)
            if v is True:
                return True, Derivation(
                    "bounded-inverse-implies-closed",
                    f"{to_text(e)} is surjective: it is {p}",
                    (d,),
                )
        return None

    def _r_surjective_product(self, e):
        if not isinstance(e, Product):
            return None
        whys = []
        for f in e.factors:
            v, d = self._infer(f, "surjective")
            if v is not True:
                return None
            whys.append(d)
        return True, Derivation(
            "composition-of-surjectives",
            f"{to_text(e)} is surjective: every factor is",
            tuple(whys),
        )

    def _r_surjective_zero(self, e):
        if is_zeroish(e):
            return False, Derivation(
                "zero-operator-range",
                f"{to_text(e)} is not surjective: its range is {{0}} and the "
                "space is nonzero",
            )
        return None

    def _r_surjective_restrict_identity(self, e):
        if not (isinstance(e, Restrict) and isinstance(e.child, Identity)):
            return None
        hit, why = dm.dom_distinct(e.dom, dom_full(e.space), self.ctx)
        if hit:
            return False, Derivation(
                "restriction-range",
                f"{to_text(e)} is not surjective: its range is the proper "
                f"subspace it is restricted to",
                (why,) if why else (),
            )
        return None

    def _r_surjective_block_row(self, e):
        if not isinstance(e, Block):
            return None
        n = e.n
        for i in range(n):
            live = [(j, e.rows[i][j]) for j in range(n) if not is_zeroish(e.rows[i][j])]
            if not live:
                return False, Derivation(
                    "block-row-range",
                    f"{to_text(e)} is not surjective: row {i + 1} is zero",
                )
            if len(live) != 1:
                continue
            j, x = live[0]
            # the i-th output component only sees ran(x), possibly shrunk
            # further by the column domain
            v, d = self._infer(x, "surjective")
            if v is False:
                return False, Derivation(
                    "block-row-range",
                    f"{to_text(e)} is not surjective: output component {i + 1} "
                    f"is confined to the proper range of {to_text(x)}",
                    (d,),
                )
            if is_identityish(x):
                col = self._column_domain(e, j)
                hit, why = dm.dom_distinct(col, dom_full(col.space), self.ctx)
                if hit:
                    return False, Derivation(
                        "block-row-range",
                        f"{to_text(e)} is not surjective: output component "
                        f"{i + 1} ranges over the proper column-{j + 1} domain",
                        (why,) if why else (),
                    )
        return None

    def _off_diag_plain_zero(self, e):
        return all(
            isinstance(e.rows[i][j], Zero)
            for i in range(e.n)
            for j in range(e.n)
            if i != j
        )

    def _r_surjective_diag(self, e):
        if not (isinstance(e, Block) and self._off_diag_plain_zero(e)):
            return None
        whys = []
        for i in range(e.n):
            v, d = self._infer(e.rows[i][i], "surjective")
            if v is not True:
                return None
            whys.append(d)
        return True, Derivation(
            "block-row-range",
            f"{to_text(e)} is surjective: diagonal with surjective entries",
            tuple(whys),
        )

    def _r_injective_block_column(self, e):
        if not isinstance(e, Block):
            return None
        n = e.n
        for j in range(n):
            live = [
                (i, e.rows[i][j])
                for i in range(n)
                if not isinstance(e.rows[i][j], Zero)
            ]
            if not live:
                return False, Derivation(
                    "block-row-range",
                    f"{to_text(e)} is not injective: column {j + 1} is zero, "
                    "so that whole input component is killed",
                )
            if len(live) != 1:
                continue
            v, d = self._infer(live[0][1], "injective")
            if v is False:
                return False, Derivation(
                    "block-row-range",
                    f"{to_text(e)} is not injective: a kernel vector of "
                    f"{to_text(live[0][1])} embeds in component {j + 1}",
                    (d,),
                )
        return None

    def _column_domain(self, e, j):
        from .exprs import dom_inter

        return dm.simplify_domain(
            dom_inter(*[natural_domain(e.rows[k][j]) for k in range(e.n)]), self.ctx
        )

    def _r_invertible_def(self, e):
        iv, idr = self._infer(e, "injective")
        sv, sdr = self._infer(e, "surjective")
        if iv is True and sv is True:
            return True, Derivation(
                "composition-of-injectives",
                f"{to_text(e)} is invertible: injective and surjective",
                (idr, sdr),
            )
        if iv is False:
            return False, Derivation(
                "composition-of-injectives",
                f"{to_text(e)} is not invertible: not injective",
                (idr,),
            )
        if sv is False:
            return False, Derivation(
                "composition-of-surjectives",
                f"{to_text(e)} is not invertible: not surjective",
                (sdr,),
            )
        return None

    # boundedly invertible -------------------------------------------------------------

    def _r_bddinv_closed_bijection(self, e):
        cv, cd = self._infer(e, "closed")
        if cv is not True:
            return None
        vv, vd = self._infer(e, "invertible")
        if vv is True:
            return True, Derivation(
                "closed-bijection-bounded-inverse",
                f"{to_text(e)} is boundedly invertible: a closed bijection",
                (cd, vd),
            )
        return None

    def _r_bddinv_negations(self, e):
        for p, why_word in (
            ("closed", "it is not closed"),
            ("injective", "it is not injective"),
            ("surjective", "it is not surjective"),
        ):
            v, d = self._infer(e, p)
            if v is False:
                return False, Derivation(
                    "bounded-inverse-implies-closed",
                    f"{to_text(e)} is not boundedly invertible: {why_word}",
                    (d,),
                )
        return None

    def _r_bddinv_product(self, e):
        if not isinstance(e, Product):
            return None
        whys = []
        for f in e.factors:
            v, d = self._infer(f, "boundedly-invertible")
            if v is not True:
                return None
            whys.append(d)
        return True, Derivation(
            "product-of-invertibles",
            f"{to_text(e)} is boundedly invertible: every factor is",
            tuple(whys),
        )

    def _r_bddinv_inverse(self, e):
        if not isinstance(e, Inverse):
            return None
        v, d = self._infer(e.child, "boundedly-invertible")
        if v is True:
            return True, Derivation(
                "product-of-invertibles",
                f"{to_text(e)} is boundedly invertible: the inverse of a "
                "boundedly invertible operator",
                (d,),
            )
        return None

    def _r_bddinv_square(self, e):
        sq = self.norm.canon(power(e, 2))
        if isinstance(sq, Product) and any(f is e for f in sq.factors):
            return None  # square did not simplify; nothing to lift through
        v, d = self._infer(sq, "boundedly-invertible")
        if v is True:
            cv, cd = self._infer(e, "closed")
            if cv is True:
                return True, Derivation(
                    "square-root-of-invertible",
                    f"{to_text(e)} is boundedly invertible: it is closed and "
                    f"its square {to_text(sq)} is boundedly invertible",
                    (cd, d),
                )
            return None
        if v is False:
            return False, Derivation(
                "square-root-of-invertible",
                f"{to_text(e)} is not boundedly invertible: its square "
                f"{to_text(sq)} is not",
                (d,),
            )
        return None

    # left / right invertible ----------------------------------------------------------

    def _r_leftinv(self, e):
        for factors, f in self._composition_identity_facts():
            if factors[-1] is e:
                word = " o ".join(to_text(g) for g in factors)
                return True, Derivation(
                    "left-inverse-witness",
                    f"{to_text(e)} is left-invertible: {word} = I",
                    (declared(f),),
                )
        if isinstance(e, Restrict) and isinstance(e.child, Identity):
            return True, Derivation(
                "restriction-range",
                f"{to_text(e)} is left-invertible: the full identity inverts "
                "it on its domain",
            )
        v, d = self.base.prop_reason(e, "boundedly-invertible")
        if v is True:
            return True, Derivation(
                "bounded-inverse-implies-closed",
                f"{to_text(e)} is left-invertible: boundedly invertible",
                (d,),
            )
        return None

    def _r_rightinv(self, e):
        for factors, f in self._composition_identity_facts():
            if factors[0] is e:
                word = " o ".join(to_text(g) for g in factors)
                return True, Derivation(
                    "right-inverse-witness",
                    f"{to_text(e)} is right-invertible: {word} = I",
                    (declared(f),),
                )
        v, d = self.base.prop_reason(e, "boundedly-invertible")
        if v is True:
            return True, Derivation(
                "bounded-inverse-implies-closed",
                f"{to_text(e)} is right-invertible: boundedly invertible",
                (d,),
            )
        return None

    def _r_leftinv_implies_injective(self, e):
        v, d = self._infer(e, "left-invertible")
        if v is True:
            return True, Derivation(
                "left-inverse-witness",
                f"{to_text(e)} is injective: it is left-invertible",
                (d,),
            )
        return None

    def _r_rightinv_implies_surjective(self, e):
        v, d = self._infer(e, "right-invertible")
        if v is True:
            return True, Derivation(
                "right-inverse-witness",
                f"{to_text(e)} is surjective: it is right-invertible",
                (d,),
            )
        return None

    # nilpotent / nonzero ---------------------------------------------------------------

    def _r_nilpotent(self, e):
        if is_zeroish(e):
            return True, Derivation("nilpotent-power", f"{to_text(e)} is zero")
        if isinstance(e, ScalarMul) and not e.c.is_zero():
            v, d = self._infer(e.child, "nilpotent")
            if v is not None:
                word = "is" if v else "is not"
                return v, Derivation(
                    "nilpotent-power",
                    f"{to_text(e)} {word} nilpotent: scaling preserves nilpotency",
                    (d,),
                )
        if isinstance(e, Identity):
            return False, Derivation("nilpotent-power", "I is not nilpotent")
        # powers past the ambient block size cannot newly vanish
        cap = e.n + 1 if isinstance(e, Block) else 4
        for k in range(2, min(cap, 8) + 1):
            pk = self.norm.canon(power(e, k))
            if is_zeroish(pk):
                return True, Derivation(
                    "nilpotent-power",
                    f"{to_text(e)} is nilpotent: its power {k} normalizes to zero",
                )
        return None

    def _r_nonzero(self, e):
        if is_zeroish(e):
            return False, Derivation("zero-operator-range", f"{to_text(e)} is zero")
        if isinstance(e, Identity):
            return True, Derivation("intrinsic", "I is nonzero (space is nonzero)")
        if isinstance(e, ScalarMul) and not e.c.is_zero():
            v, d = self._infer(e.child, "nonzero")
            if v is not None:
                return v, Derivation(
                    "zero-operator-range",
                    f"{to_text(e)} inherits (non)vanishing from {to_text(e.child)}",
                    (d,),
                )
        if isinstance(e, Block):
            for i in range(e.n):
                for j in range(e.n):
                    v, d = self._infer(e.rows[i][j], "nonzero")
                    if v is True:
                        return True, Derivation(
                            "zero-operator-range",
                            f"{to_text(e)} is nonzero: entry ({i + 1},{j + 1}) is nonzero",
                            (d,),
                        )
        return None

    # -- identity checking -----------------------------------------------------

    def check_identity(self, lhs, rhs, where="natural") -> IdentityVerdict:
        nl = self.norm.canon(lhs)
        nr = self.norm.canon(rhs)
        if isinstance(where, DomainExpr):
            nl = self.norm.canon(restrict(nl, where))
            nr = self.norm.canon(restrict(nr, where))
            where = "natural"
        everywhere = where == "everywhere"

        same = nl is nr
        why_same = None
        if not same:
            diff = self.norm.canon(op_sum(nl, scalar_mul(-1, nr)))
            if is_zeroish(diff):
                rel = dm.domain_relation(self._nd(nl), self._nd(nr), self.ctx)
                if rel is RelTag.EQUAL:
                    same = True
                    why_same = Derivation(
                        "normalize",
                        f"difference normalizes to zero on the common domain "
                        f"and D({to_text(lhs)}) = D({to_text(rhs)})",
                    )
        if same:
            if not everywhere:
                return IdentityVerdict(
                    PROVED,
                    f"both sides are the operator {to_text(nl)}",
                    why_same
                    or Derivation(
                        "normalize", f"both sides normalize to {to_text(nl)}"
                    ),
                )
            ev, ed = self._infer(nl, "everywhere-defined")
            if ev is True:
                return IdentityVerdict(
                    PROVED,
                    f"both sides are the everywhere-defined operator {to_text(nl)}",
                    Derivation(
                        "normalize",
                        f"both sides normalize to {to_text(nl)}, which is "
                        "everywhere defined",
                        (ed,),
                    ),
                )
            if ev is False:
                return IdentityVerdict(
                    REFUTED,
                    "the common value is not everywhere defined",
                    ed,
                )
            return IdentityVerdict(
                UNKNOWN,
                "equal as partial operators, but full-space definedness is unproven",
            )

        if everywhere:
            for side, ne in (("left", nl), ("right", nr)):
                ev, ed = self._infer(ne, "everywhere-defined")
                if ev is False:
                    return IdentityVerdict(
                        REFUTED,
                        f"the {side} side is not everywhere defined",
                        ed,
                    )

        ref = self._refute_pair(nl, nr)
        if ref is not None:
            return ref
        return IdentityVerdict(
            UNKNOWN,
            f"no rule separates {to_text(nl)} from {to_text(nr)}",
        )

    def _refute_pair(self, nl, nr) -> Optional[IdentityVerdict]:
        d = self._distinct(nl, nr)
        if d is not None:
            return IdentityVerdict(REFUTED, d.statement, d)
        # blockwise comparison
        a, b = self._as_blocks(nl, nr)
        if a is not None:
            for i in range(a.n):
                for j in range(a.n):
                    d = self._distinct(a.rows[i][j], b.rows[i][j])
                    if d is not None:
                        return IdentityVerdict(
                            REFUTED,
                            f"entries ({i + 1},{j + 1}) provably differ: "
                            f"{to_text(a.rows[i][j])} vs {to_text(b.rows[i][j])}",
                            d,
                        )
        return None

    def _as_blocks(self, nl, nr):
        a = nl if isinstance(nl, Block) else None
        b = nr if isinstance(nr, Block) else None
        if a is None and b is None:
            return None, None
        shape = a or b
        la = self.norm._as_block(nl, shape.n, shape.comp_space)
        lb = self.norm._as_block(nr, shape.n, shape.comp_space)
        if la is not None and lb is not None:
            return la, lb
        return None, None

    def _distinct(self, x, y) -> Optional[Derivation]:
        """Derivation that x != y as operators, or None."""
        if x is y:
            return None
        # zero vs provably nonzero
        for u, v in ((x, y), (y, x)):
            if is_zeroish(u):
                nv, nd_ = self._infer(v, "nonzero")
                if nv is True:
                    return Derivation(
                        "zero-operator-range",
                        f"{to_text(v)} is provably nonzero but {to_text(u)} is zero",
                        (nd_,) if nd_ else (),
                    )
        # scalar multiples of the identity with different scalars
        cx = self._scalar_of_identity(x)
        cy = self._scalar_of_identity(y)
        if cx is not None and cy is not None and cx != cy:
            return Derivation(
                "constant-spectrum",
                f"{to_text(x)} and {to_text(y)} scale the identity by "
                f"different constants",
            )
        # boundedness mismatch
        bx, dx = self._infer(x, "bounded")
        by, dy = self._infer(y, "bounded")
        if bx is not None and by is not None and bx != by:
            return Derivation(
                "closed-graph",
                f"{to_text(x)} and {to_text(y)} differ: one is bounded, "
                "the other is not",
                tuple(w for w in (dx, dy) if w),
            )
        # provably different domains
        hit, why = dm.dom_distinct(self._nd(x), self._nd(y), self.ctx)
        if hit:
            return Derivation(
                "dom-distinct",
                f"D({to_text(x)}) != D({to_text(y)}), so the operators differ",
                (why,) if why else (),
            )
        return None

    def _scalar_of_identity(self, e):
        if isinstance(e, Identity):
            from .scalars import ONE

            return ONE
        if isinstance(e, ScalarMul) and isinstance(e.child, Identity):
            return e.c
        return None

    def check_domains_equal(self, lhs, rhs) -> IdentityVerdict:
        da = self.domain(lhs)
        db = self.domain(rhs)
        rel = dm.domain_relation(da, db, self.ctx)
        if rel is RelTag.EQUAL:
            return IdentityVerdict(
                PROVED,
                f"both domains simplify to {dm_text(da)}"
                if da is db
                else f"{dm_text(da)} and {dm_text(db)} are mutually contained",
                Derivation(
                    "dom-distinct",
                    f"D({to_text(lhs)}) = D({to_text(rhs)})",
                ),
            )
        hit, why = dm.dom_distinct(da, db, self.ctx)
        if hit:
            return IdentityVerdict(
                REFUTED,
                f"D({to_text(lhs)}) != D({to_text(rhs)})",
                why,
            )
        return IdentityVerdict(UNKNOWN, f"relation is {rel}")

    # -- spectrum ---------------------------------------------------------------

    def spectrum(self, e) -> SpectrumAnswer:
        e = self.norm.canon(e)
        if id(e) in self._spec_active:
            return SpectrumAnswer(None)
        self._spec_active.add(id(e))
        try:
            return self._spectrum_inner(e)
        finally:
            self._spec_active.discard(id(e))

    def _spectrum_inner(self, e) -> SpectrumAnswer:
        constraints = []
        for f in self.fb.spectrum_facts():
            if self.norm.canon(f.e) is e:
                if isinstance(f, SpectrumIs):
                    return SpectrumAnswer(f.sset, (), declared(f))
                constraints.append(("not-equal", f.sset, declared(f)))

        cv, cd = self._infer(e, "closed")
        if cv is False:
            return SpectrumAnswer(
                ALL_C,
                tuple(constraints),
                Derivation(
                    "non-closed-spectrum",
                    f"spectrum({to_text(e)}) = C: the operator is not closed",
                    (cd,),
                ),
            )

        c = self._scalar_of_identity(e)
        if c is not None:
            return SpectrumAnswer(
                point_set(c),
                tuple(constraints),
                Derivation(
                    "constant-spectrum", f"spectrum({to_text(e)}) = {{{c}}}"
                ),
            )
        if isinstance(e, Zero):
            return SpectrumAnswer(
                POINT0,
                tuple(constraints),
                Derivation("constant-spectrum", f"spectrum({to_text(e)}) = {{0}}"),
            )

        bv, bd = self._infer(e, "bounded")
        nv, nd_ = self._infer(e, "nilpotent")
        if bv is True and nv is True:
            return SpectrumAnswer(
                POINT0,
                tuple(constraints),
                Derivation(
                    "bounded-nilpotent-spectrum",
                    f"spectrum({to_text(e)}) = {{0}}: bounded and nilpotent",
                    tuple(w for w in (bd, nd_) if w),
                ),
            )

        if isinstance(e, Sum):
            ans = self._spec_commuting_nilpotent(e, constraints)
            if ans is not None:
                return ans

        if isinstance(e, Product) and len(e.factors) == 2 and e.factors[0] is e.factors[1]:
            x = e.factors[0]
            xv, xd = self._infer(x, "closed")
            if xv is True:
                sub = self.spectrum(x)
                if isinstance(sub.value, PointSet):
                    return SpectrumAnswer(
                        squared(sub.value),
                        tuple(constraints),
                        Derivation(
                            "spectral-mapping-square",
                            f"spectrum({to_text(e)}) is the set of squares of "
                            f"spectrum({to_text(x)})",
                            (xd, sub.derivation),
                        ),
                    )

        # constraint via the square: if spectrum(e) were S, spectrum(e^2)
        # would be squares(S)
        if cv is True:
            sq = self.norm.canon(power(e, 2))
            if not (isinstance(sq, Product) and any(f is e for f in sq.factors)):
                sub = self.spectrum(sq)
                if sub.value is not None:
                    constraints.append(("square-is", sub.value, sub.derivation))
                    if spectrum_equal(sub.value, POINT0) is False:
                        constraints.append(
                            (
                                "not-equal",
                                POINT0,
                                Derivation(
                                    "square-spectrum-constraint",
                                    f"spectrum({to_text(e)}) != {{0}}: that would "
                                    f"force spectrum({to_text(sq)}) = {{0}}, but it "
                                    f"is {sub.value}",
                                    (sub.derivation,) if sub.derivation else (),
                                ),
                            )
                        )

        return SpectrumAnswer(None, tuple(constraints))

    def _spec_commuting_nilpotent(self, e, constraints):
        extend_pairs = []
        for f in self.fb.extends_facts():
            extend_pairs.append(
                (self.norm.canon(f.small), self.norm.canon(f.big), f)
            )
        for t in e.terms:
            bv, _ = self._infer(t, "bounded")
            nv, _ = self._infer(t, "nilpotent")
            if bv is not True or nv is not True:
                continue
            others = [u for u in e.terms if u is not t]
            rest = others[0] if len(others) == 1 else self.norm.canon(op_sum(*others))
            na = self.norm.canon(product(t, rest))
            an = self.norm.canon(product(rest, t))
            for small, big, f in extend_pairs:
                if {small, big} == {na, an} or (small is na and big is an) or (
                    small is an and big is na
                ):
                    sub = self.spectrum(rest)
                    if sub.value is not None:
                        return SpectrumAnswer(
                            sub.value,
                            tuple(constraints),
                            Derivation(
                                "commuting-nilpotent-perturbation",
                                f"spectrum({to_text(e)}) = spectrum({to_text(rest)}): "
                                f"{to_text(t)} is bounded, nilpotent, and commutes",
                                tuple(
                                    w
                                    for w in (declared(f), sub.derivation)
                                    if w
                                ),
                            ),
                        )
        return None

    def check_spectrum(self, e, op, target) -> IdentityVerdict:
        ans = self.spectrum(e)
        name = f"spectrum({to_text(self.norm.canon(e))})"
        if ans.value is not None:
            eq = spectrum_equal(ans.value, target)
            if eq is True:
                status = PROVED if op == "=" else REFUTED
                return IdentityVerdict(status, f"{name} = {ans.value}", ans.derivation)
            if eq is False:
                status = REFUTED if op == "=" else PROVED
                return IdentityVerdict(
                    status, f"{name} = {ans.value} != {target}", ans.derivation
                )
            return IdentityVerdict(UNKNOWN, f"{name} = {ans.value}; cannot compare")
        for kind, s, d in ans.constraints:
            if kind == "not-equal" and spectrum_equal(s, target) is True:
                status = PROVED if op == "!=" else REFUTED
                return IdentityVerdict(status, f"{name} != {target}", d)
            if kind == "square-is":
                sq_target = squared(target)
                if spectrum_equal(sq_target, s) is False:
                    status = PROVED if op == "!=" else REFUTED
                    return IdentityVerdict(
                        status,
                        f"{name} != {target}: squaring would give {sq_target}, "
                        f"but the square's spectrum is {s}",
                        d,
                    )
        return IdentityVerdict(UNKNOWN, f"no spectrum rule applies to {name}")


def dm_text(d):
    from .exprs import dom_text

    return dom_text(d)


_PROP_RULES = {
    "everywhere-defined": (Engine._r_ewd,),
    "densely-defined": (Engine._r_densely_defined,),
    "bounded": (
        Engine._r_bounded_closed_graph,
        Engine._r_bounded_not_closable,
        Engine._r_bounded_sum,
        Engine._r_bounded_block_entry,
        Engine._r_bounded_adjoint,
    ),
    "closed": (
        Engine._r_closed_bounded_domain,
        Engine._r_closed_not_closable,
        Engine._r_closed_sum,
        Engine._r_closed_product,
        Engine._r_closed_block,
        Engine._r_closed_bdd_inv,
        Engine._r_closed_adjoint,
        Engine._r_closed_closure,
    ),
    "closable": (
        Engine._r_closable_closed,
        Engine._r_closable_bounded,
        Engine._r_closable_ewd_unbounded,
        Engine._r_closable_adjoint_dense,
        Engine._r_closable_sum,
        Engine._r_closable_block_witness,
        Engine._r_closable_block_pattern,
    ),
    "injective": (
        Engine._r_injective_witness,
        Engine._r_injective_from_invertible,
        Engine._r_leftinv_implies_injective,
        Engine._r_injective_product,
        Engine._r_injective_restrict,
        Engine._r_injective_zero,
        Engine._r_injective_triangular,
        Engine._r_injective_block_column,
    ),
    "surjective": (
        Engine._r_surjective_witness,
        Engine._r_surjective_from_invertible,
        Engine._r_rightinv_implies_surjective,
        Engine._r_surjective_product,
        Engine._r_surjective_zero,
        Engine._r_surjective_restrict_identity,
        Engine._r_surjective_block_row,
        Engine._r_surjective_diag,
    ),
    "invertible": (Engine._r_invertible_def,),
    "boundedly-invertible": (
        Engine._r_bddinv_closed_bijection,
        Engine._r_bddinv_negations,
        Engine._r_bddinv_product,
        Engine._r_bddinv_inverse,
        Engine._r_bddinv_square,
    ),
    "left-invertible": (Engine._r_leftinv,),
    "right-invertible": (Engine._r_rightinv,),
    "nilpotent": (Engine._r_nilpotent,),
    "nonzero": (Engine._r_nonzero,),
}

PROPS = tuple(sorted(set(_PROP_RULES) | {"unbounded", "self-adjoint"}))
