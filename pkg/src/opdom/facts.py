"""Declared facts about operator expressions and domains.

A FactBase is a sealed, immutable collection of assertions: property
claims (HasProp / LacksProp) about operator expressions or domains,
domain equalities and inclusions, operator identities valid everywhere
or on a stated domain, operator-graph inclusions (Extends, for
commutation hypotheses like NA c AN), and declared spectra.

Atoms carry their creation flags; registering an atom seeds the
corresponding property facts ("unbounded" becomes LacksProp bounded,
"not-closable" becomes LacksProp closable, the rest become HasProp).

Facts never change truth value: inference never mutates a FactBase, and
a base that declares both P and not-P for the same subject refuses to
seal, naming both culprits.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Tuple

from . import exprs
from .exprs import Atom, DomainExpr, OperatorExpr


class InconsistentFacts(Exception):
    def __init__(self, fact_a, fact_b):
        self.fact_a = fact_a
        self.fact_b = fact_b
        super().__init__(
            f"contradictory facts: [{describe(fact_a)}] vs [{describe(fact_b)}]"
        )


# -- assertions ---------------------------------------------------------------


@dataclass(frozen=True)
class HasProp:
    subject: object  # OperatorExpr or DomainExpr
    prop: str


@dataclass(frozen=True)
class LacksProp:
    subject: object
    prop: str


@dataclass(frozen=True)
class DomainEq:
    d1: DomainExpr
    d2: DomainExpr


@dataclass(frozen=True)
class DomainSubset:  # d1 contained in d2
    d1: DomainExpr
    d2: DomainExpr


@dataclass(frozen=True)
class IdentityOn:
    """lhs = rhs; on=None means equality as operators (domains included),
    a domain means equality of the restrictions to it."""

    lhs: OperatorExpr
    rhs: OperatorExpr
    on: Optional[DomainExpr] = None


@dataclass(frozen=True)
class Extends:  # small is a restriction of big (graph inclusion)
    small: OperatorExpr
    big: OperatorExpr


@dataclass(frozen=True)
class SpectrumIs:
    e: OperatorExpr
    sset: object  # SpectrumSet, see spectrum.py


@dataclass(frozen=True)
class SpectrumNot:
    e: OperatorExpr
    sset: object


def dense(d: DomainExpr) -> HasProp:
    return HasProp(d, "dense")


def not_dense(d: DomainExpr) -> LacksProp:
    return LacksProp(d, "dense")


_FLAG_TO_ASSERTION = {
    "unbounded": ("bounded", False),
    "not-closable": ("closable", False),
}


def describe(a) -> str:
    if isinstance(a, str):
        return a
    if isinstance(a, HasProp):
        return f"{_subj(a.subject)} is {a.prop}"
    if isinstance(a, LacksProp):
        return f"{_subj(a.subject)} is not {a.prop}"
    if isinstance(a, DomainEq):
        return f"{exprs.dom_text(a.d1)} = {exprs.dom_text(a.d2)}"
    if isinstance(a, DomainSubset):
        return f"{exprs.dom_text(a.d1)} contained in {exprs.dom_text(a.d2)}"
    if isinstance(a, IdentityOn):
        where = (
            " (as operators)" if a.on is None else f" on {exprs.dom_text(a.on)}"
        )
        return f"{exprs.to_text(a.lhs)} = {exprs.to_text(a.rhs)}{where}"
    if isinstance(a, Extends):
        return f"{exprs.to_text(a.small)} contained in {exprs.to_text(a.big)}"
    if isinstance(a, SpectrumIs):
        return f"spectrum({exprs.to_text(a.e)}) = {a.sset}"
    if isinstance(a, SpectrumNot):
        return f"spectrum({exprs.to_text(a.e)}) != {a.sset}"
    return repr(a)


def _subj(s):
    if isinstance(s, OperatorExpr):
        return exprs.to_text(s)
    return exprs.dom_text(s)


@dataclass(frozen=True)
class Derivation:
    """One step of a replayable derivation: the rule that fired, the
    conclusion it drew, and the sub-derivations it consumed.  Declared
    facts appear as leaves with rule 'declared'."""

    rule: str
    statement: str
    premises: tuple = ()

    def to_json(self, anchors=None):
        out = {"rule": self.rule, "statement": self.statement}
        if anchors and self.rule in anchors:
            out["anchor"] = anchors[self.rule]
        if self.premises:
            out["premises"] = [p.to_json(anchors) for p in self.premises]
        return out

    def walk(self):
        yield self
        for p in self.premises:
            yield from p.walk()


def declared(fact) -> Derivation:
    return Derivation("declared", describe(fact))


# -- the base -------------------------------------------------------------------

_uid_counter = itertools.count(1)


@dataclass(frozen=True)
class FactBase:
    atoms: Tuple[Atom, ...] = ()
    facts: Tuple[object, ...] = ()
    uid: int = field(default_factory=lambda: next(_uid_counter))

    @staticmethod
    def build(atoms=(), facts=()):
        """Seed atom-flag assertions, append the given facts, and seal."""
        seeded = []
        for a in atoms:
            for flag in sorted(a.flags):
                prop, positive = _FLAG_TO_ASSERTION.get(flag, (flag, True))
                seeded.append(HasProp(a, prop) if positive else LacksProp(a, prop))
        base = FactBase(atoms=tuple(atoms), facts=tuple(seeded) + tuple(facts))
        base.check_consistency()
        return base

    def extended(self, *new_facts) -> "FactBase":
        out = FactBase(atoms=self.atoms, facts=self.facts + tuple(new_facts))
        out.check_consistency()
        return out

    def check_consistency(self):
        pos, neg = {}, {}
        for f in self.facts:
            if isinstance(f, HasProp):
                k = (id(f.subject), f.prop)
                if k in neg:
                    raise InconsistentFacts(f, neg[k])
                pos[k] = f
            elif isinstance(f, LacksProp):
                k = (id(f.subject), f.prop)
                if k in pos:
                    raise InconsistentFacts(pos[k], f)
                neg[k] = f

    # -- queries ------------------------------------------------------------

    def declared_prop(self, subject, prop):
        """True/False with the backing fact, or (None, None)."""
        for f in self.facts:
            if isinstance(f, HasProp) and f.subject is subject and f.prop == prop:
                return True, f
            if isinstance(f, LacksProp) and f.subject is subject and f.prop == prop:
                return False, f
        return None, None

    def identities(self):
        return [f for f in self.facts if isinstance(f, IdentityOn)]

    def domain_eqs(self):
        return [f for f in self.facts if isinstance(f, DomainEq)]

    def domain_subsets(self):
        return [f for f in self.facts if isinstance(f, DomainSubset)]

    def extends_facts(self):
        return [f for f in self.facts if isinstance(f, Extends)]

    def spectrum_facts(self):
        return [f for f in self.facts if isinstance(f, (SpectrumIs, SpectrumNot))]


EMPTY = FactBase.build()
