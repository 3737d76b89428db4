"""Catalog of named block-operator constructions.

Each entry packages an operator built from a handful of atoms, the facts
those atoms are assumed to satisfy, and the claims the construction is
supposed to witness.  Claims are three-way routed: symbolic (the inference
engine), numeric (finite matrix stand-ins), or both.  The checker threads
every symbolically proved operator identity back into the fact base, so
later claims (invertibility from a two-sided inverse, say) can cite it
without circularity: the identity was proved from atom-level facts alone.
"""

from __future__ import annotations

import difflib
from dataclasses import dataclass

from .domains import RelTag
from .engine import Engine
from .exprs import (
    DomainExpr,
    OperatorExpr,
    adjoint,
    atom,
    block,
    block_diag,
    closure,
    dom_full,
    dom_named,
    dom_prod,
    identity,
    op_sum,
    power,
    product,
    restrict,
    scalar_mul,
    space,
    to_text,
    zero,
)
from .facts import (
    Derivation,
    DomainEq,
    FactBase,
    HasProp,
    IdentityOn,
    LacksProp,
)
from .scalars import Scalar, parse_scalar
from .spectrum import ALL_C, POINT0

PROVED = "Proved"
REFUTED = "Refuted"
UNKNOWN = "Unknown"
DEFERRED = "Deferred"


# -- claims ---------------------------------------------------------------------


@dataclass(frozen=True)
class Claim:
    """One checkable statement about a construction.

    kind selects the checker; via selects the backend(s):
    "engine", "numeric", or "both".
    """

    kind: str
    label: str
    lhs: OperatorExpr | None = None
    rhs: OperatorExpr | None = None
    where: object = "natural"  # "natural" | "everywhere" | DomainExpr
    prop: str | None = None
    expected: bool = True
    op: str = "="
    sset: object = None
    via: str = "both"
    note: str = ""


def holds_on(label, lhs, rhs, where="natural", via="both", note=""):
    return Claim("identity", label, lhs=lhs, rhs=rhs, where=where, via=via, note=note)


def differs(label, lhs, rhs, where="natural", via="both", note=""):
    return Claim(
        "not-identity", label, lhs=lhs, rhs=rhs, where=where, via=via, note=note
    )


def has(label, e, prop, via="engine", note=""):
    return Claim("property", label, lhs=e, prop=prop, expected=True, via=via, note=note)


def lacks(label, e, prop, via="engine", note=""):
    return Claim(
        "property", label, lhs=e, prop=prop, expected=False, via=via, note=note
    )


def spectrum_is(label, e, sset, via="engine", note=""):
    return Claim("spectrum", label, lhs=e, op="=", sset=sset, via=via, note=note)


def spectrum_not(label, e, sset, via="engine", note=""):
    return Claim("spectrum", label, lhs=e, op="!=", sset=sset, via=via, note=note)


def entries_nonzero(label, e, via="both", note=""):
    return Claim("entrywise-nonzero", label, lhs=e, via=via, note=note)


def same_domain(label, lhs, rhs, via="engine", note=""):
    return Claim("domains-equal", label, lhs=lhs, rhs=rhs, via=via, note=note)


def different_domain(label, lhs, rhs, via="engine", note=""):
    return Claim("domains-differ", label, lhs=lhs, rhs=rhs, via=via, note=note)


def adjoint_is(label, e, rhs, via="both", note=""):
    return Claim("adjoint-is", label, lhs=e, rhs=rhs, via=via, note=note)


def truncation_square_zero(label, note=""):
    return Claim("truncation-nilpotent", label, via="numeric", note=note)


def truncation_norm(label, note=""):
    return Claim("truncation-norm", label, via="numeric", note=note)


# -- constructions ----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Construction:
    name: str
    summary: str
    params: dict
    expr: OperatorExpr
    atoms: tuple
    facts: tuple
    claims: tuple
    aux: tuple = ()  # ordered (name, expr) pairs, principal expr included
    notes: tuple = ()
    space: object = None  # unit space the numeric dim applies to
    fixed_assignment: object = None  # atom name -> nested integer matrix
    samplers: tuple = ()  # ((atom, ...), strategy)
    default_dim: int = 2
    default_dims: tuple = ()  # truncation families only
    numeric_ok: bool = True

    def fact_base(self) -> FactBase:
        return FactBase.build(self.atoms, self.facts)

    def named_exprs(self):
        return dict(self.aux)


@dataclass(frozen=True)
class ClaimReport:
    claim: Claim
    status: str
    ok: bool | None
    detail: str
    derivation: Derivation | None = None


@dataclass(frozen=True, eq=False)
class ConstructionReport:
    construction: Construction
    reports: tuple

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.reports if r.ok is not None)


def check_construction(con: Construction) -> ConstructionReport:
    """Run every engine-checkable claim, threading proved identities.

    A proved identity becomes a declared fact for the remaining claims,
    which is what lets witness-style rules (left/right inverse) fire on
    operators whose algebra was itself established structurally.
    """
    fb = con.fact_base()
    eng = Engine(fb)
    out = []
    for c in con.claims:
        if c.via == "numeric" or c.kind in ("truncation-nilpotent", "truncation-norm"):
            out.append(
                ClaimReport(c, DEFERRED, None, "checked by the numeric backend")
            )
            continue
        status, ok, detail, der = _check_one(eng, c)
        out.append(ClaimReport(c, status, ok, detail, der))
        if ok and c.kind == "identity":
            on = None if c.where in ("natural", "everywhere") else c.where
            fb = fb.extended(IdentityOn(c.lhs, c.rhs, on))
            eng = Engine(fb)
    return ConstructionReport(con, tuple(out))


def _check_one(eng: Engine, c: Claim):
    if c.kind == "identity":
        v = eng.check_identity(c.lhs, c.rhs, c.where)
        return v.status, v.status == PROVED, v.detail, v.derivation
    if c.kind == "not-identity":
        v = eng.check_identity(c.lhs, c.rhs, c.where)
        return v.status, v.status == REFUTED, v.detail, v.derivation
    if c.kind == "property":
        a = eng.infer(c.lhs, c.prop)
        if a.value is None:
            return UNKNOWN, False, f"{c.prop} undecided for {to_text(c.lhs)}", None
        status = PROVED if a.value == c.expected else REFUTED
        word = "has" if a.value else "lacks"
        return (
            status,
            a.value == c.expected,
            f"{to_text(c.lhs)} {word} {c.prop}",
            a.derivation,
        )
    if c.kind == "spectrum":
        v = eng.check_spectrum(c.lhs, c.op, c.sset)
        return v.status, v.status == PROVED, v.detail, v.derivation
    if c.kind == "domains-equal":
        v = eng.check_domains_equal(c.lhs, c.rhs)
        return v.status, v.status == PROVED, v.detail, v.derivation
    if c.kind == "domains-differ":
        v = eng.check_domains_equal(c.lhs, c.rhs)
        return v.status, v.status == REFUTED, v.detail, v.derivation
    if c.kind == "entrywise-nonzero":
        return _check_entrywise(eng, c)
    if c.kind == "adjoint-is":
        return _check_adjoint(eng, c)
    raise ValueError(f"unknown claim kind: {c.kind}")


def _check_entrywise(eng: Engine, c: Claim):
    from .exprs import Block

    m = eng.normalize(c.lhs)
    if not isinstance(m, Block):
        return UNKNOWN, False, f"{to_text(c.lhs)} does not normalize to a block", None
    whys = []
    for i in range(m.n):
        for j in range(m.n):
            a = eng.infer(m.rows[i][j], "nonzero")
            if a.value is not True:
                return (
                    UNKNOWN if a.value is None else REFUTED,
                    False,
                    f"entry ({i + 1},{j + 1}) of {to_text(c.lhs)} not provably nonzero",
                    a.derivation,
                )
            whys.append(a.derivation)
    return (
        PROVED,
        True,
        f"every entry of {to_text(c.lhs)} is provably nonzero",
        Derivation(
            "zero-operator-range",
            f"all {m.n}x{m.n} entries of {to_text(c.lhs)} are nonzero",
            tuple(w for w in whys if w),
        ),
    )


def _check_adjoint(eng: Engine, c: Claim):
    r = eng.adjoint(c.lhs)
    got = eng.normalize(r.expr)
    want = eng.normalize(c.rhs)
    der = Derivation(
        "derived",
        f"adj({to_text(c.lhs)}) computes to {to_text(got)}",
        tuple(Derivation("derived", n) for n in r.notes),
    )
    if r.tag is not RelTag.EQUAL:
        return (
            UNKNOWN,
            False,
            f"adjoint only determined up to containment ({r.tag.name})",
            der,
        )
    if got is want:
        return PROVED, True, f"adj({to_text(c.lhs)}) = {to_text(want)}", der
    return REFUTED, False, f"adjoint computes to {to_text(got)}, not {to_text(want)}", der


# -- shared pieces ---------------------------------------------------------------

H = space("H", 1)


def _sc(x) -> Scalar:
    if isinstance(x, Scalar):
        return x
    if isinstance(x, str):
        return parse_scalar(x)
    return Scalar.of(x)


def _scalar_entry(c, sp):
    c = _sc(c)
    if c.is_zero():
        return zero(sp)
    if c.is_one():
        return identity(sp)
    return scalar_mul(c, identity(sp))


def _scalar_block(rows, sp):
    return block([[_scalar_entry(c, sp) for c in r] for r in rows])


def mercer_rows(n: int):
    """Integer template: nilpotent of index exactly n with no zero entry
    in any lower power."""
    rows = [[2] * (n - 1) + [1 - n]]
    for i in range(2, n + 1):
        r = [1] * (n - 1) + [-n]
        r[i - 2] = n + 2
        rows.append(r)
    return rows


def circulant_rows(n: int, alpha):
    """Cyclic shift with a parameter folded in at (1,3) and (n,2)."""
    a = _sc(alpha)
    rows = [[_sc(0)] * n for _ in range(n)]
    one = _sc(1)
    for i in range(n - 1):
        rows[i][i + 1] = one
    rows[n - 1][0] = one
    if n >= 3:
        rows[0][2] = rows[0][2] + a
        rows[n - 1][1] = rows[n - 1][1] - a
    return rows


def strictly_upper(entry: OperatorExpr, n: int) -> OperatorExpr:
    """n x n block with `entry` strictly above the diagonal, zero elsewhere."""
    z = zero(entry.space)
    return block(
        [[entry if j > i else z for j in range(n)] for i in range(n)]
    )


# -- the catalog -----------------------------------------------------------------


def build_nilpotent_power(n: int = 3, lift: bool = True) -> Construction:
    n = int(n)
    if n < 2:
        raise ValueError("n must be at least 2")
    if lift:
        a = atom("A", H, flags=("everywhere-defined", "unbounded", "not-closable"))
        b = block_diag(a, identity(H))
        atoms = (a,)
        facts = (IdentityOn(power(a, 2), zero(H), None),)
        samplers = ((("A",), "square-zero"),)
        aux_entry = [("A", a), ("B", b)]
        note_b = (
            "the repeated entry B = diag(A, I) squares to diag(0, I), which is "
            "nonzero; that is what blocks the (n-1)st power from vanishing"
        )
    else:
        b = atom("B", H, flags=("everywhere-defined",))
        atoms = (b,)
        facts = ()
        samplers = ((("B",), "invertible"),)
        aux_entry = [("B", b)]
        note_b = (
            "with a bare everywhere-defined entry the (n-1)st power is only "
            "refuted numerically; use lift=true for a symbolic refutation"
        )
    t = strictly_upper(b, n)
    zn = zero(t.space)
    claims = [
        holds_on(f"T^{n} = 0 everywhere", power(t, n), zn, where="everywhere"),
        differs(
            f"T^{n - 1} != 0",
            power(t, n - 1),
            zn,
            via="both" if lift else "numeric",
        ),
        has("T is nilpotent", t, "nilpotent"),
    ]
    if lift:
        # a bare everywhere-defined entry could be bounded; only the
        # diag(A, I) lift pins these down
        claims.append(lacks("T is unbounded", t, "bounded"))
        claims.append(lacks("T is not closable", t, "closable"))
    return Construction(
        name="nilpotent-power",
        summary="strictly upper-triangular block operator whose nth power "
        "vanishes while the (n-1)st provably does not",
        params={"n": n, "lift": lift},
        expr=t,
        atoms=atoms,
        facts=facts,
        claims=tuple(claims),
        aux=tuple(aux_entry + [("T", t)]),
        notes=(note_b,),
        space=H,
        samplers=samplers,
    )


def build_mercer_matrix(n: int = 6) -> Construction:
    n = int(n)
    if n < 2:
        raise ValueError("n must be at least 2")
    rows = mercer_rows(n)
    b = _scalar_block(rows, H)
    claims = [
        holds_on(f"B^{n} = 0 everywhere", power(b, n), zero(b.space), where="everywhere")
    ]
    for p in range(1, n):
        claims.append(
            entries_nonzero(f"every entry of B^{p} is nonzero", power(b, p))
        )
    return Construction(
        name="mercer-matrix",
        summary="integer matrix that is nilpotent of index exactly n although "
        "no entry of any lower power vanishes",
        params={"n": n},
        expr=b,
        atoms=(),
        facts=(),
        claims=tuple(claims),
        aux=(("B", b),),
        notes=("entries are integer multiples of the identity on a single space",),
        space=H,
        default_dim=1,
    )


def build_mercer_operator(n: int = 2) -> Construction:
    n = int(n)
    if n < 2:
        raise ValueError("n must be at least 2")
    t = atom("T", H, flags=("everywhere-defined",))
    rows = mercer_rows(n)
    a = block([[scalar_mul(_sc(c), t) for c in r] for r in rows])
    facts = tuple(HasProp(power(t, p), "nonzero") for p in range(1, n))
    claims = [
        holds_on(f"A^{n} = 0 everywhere", power(a, n), zero(a.space), where="everywhere")
    ]
    for p in range(1, n):
        claims.append(
            entries_nonzero(f"every entry of A^{p} is nonzero", power(a, p))
        )
    return Construction(
        name="mercer-operator",
        summary="the integer nilpotent template with every entry scaled by one "
        "operator; powers inherit the scalar pattern entrywise",
        params={"n": n},
        expr=a,
        atoms=(t,),
        facts=facts,
        claims=tuple(claims),
        aux=(("T", t), ("A", a)),
        notes=(
            "entry (i,j) of A^p is the (i,j) template coefficient times T^p, "
            "so the declared nonvanishing of T^p drives the entrywise claims",
        ),
        space=H,
        samplers=((("T",), "invertible"),),
    )


def build_circulant_root(n: int = 6, alpha="5/2") -> Construction:
    n = int(n)
    if n < 2:
        raise ValueError("n must be at least 2")
    al = _sc(alpha)
    dropped = n == 2 and not al.is_zero()
    rows = circulant_rows(n, al)
    a = _scalar_block(rows, H)
    claims = [
        holds_on(f"A^{n} = I everywhere", power(a, n), identity(a.space), where="everywhere")
    ]
    for p in range(1, n):
        claims.append(differs(f"A^{p} != I", power(a, p), identity(a.space)))
    notes = [
        "a perturbed cyclic shift: the parameter sits at entries (1,3) and (n,2) "
        "and cancels out of the nth power for every value",
    ]
    if dropped:
        notes.append("parameter dropped: the n=2 matrix has no room for it")
    return Construction(
        name="circulant-root",
        summary="parametric permutation-like matrix with A^n = I and A^p != I "
        "for every lower power",
        params={"n": n, "alpha": str(al)},
        expr=a,
        atoms=(),
        facts=(),
        claims=tuple(claims),
        aux=(("A", a),),
        notes=tuple(notes),
        space=H,
        default_dim=1,
    )


def build_root_of_identity(n: int = 3) -> Construction:
    n = int(n)
    if n < 2:
        raise ValueError("n must be at least 2")
    sp = H
    i_, z = identity(sp), zero(sp)
    if n == 2:
        t = block([[z, i_], [i_, z]])
        claims = (
            holds_on("T^2 = I everywhere", power(t, 2), identity(t.space), where="everywhere"),
            differs("T != I", t, identity(t.space)),
            has("T is bounded", t, "bounded"),
        )
        return Construction(
            name="root-of-identity",
            summary="block nth root of the identity with an unbounded, "
            "non-closable parameter entry",
            params={"n": n},
            expr=t,
            atoms=(),
            facts=(),
            claims=claims,
            aux=(("T", t),),
            notes=("operator parameter dropped: the n=2 root is the plain swap",),
            space=H,
        )
    a = atom("A", sp, flags=("everywhere-defined", "unbounded", "not-closable"))
    rows = [[z] * n for _ in range(n)]
    rows[0][1] = i_
    rows[0][2] = a
    for i in range(1, n - 1):
        rows[i][i + 1] = i_
    rows[n - 1][0] = i_
    rows[n - 1][1] = scalar_mul(_sc(-1), a)
    t = block(rows)
    claims = [
        holds_on(f"T^{n} = I everywhere", power(t, n), identity(t.space), where="everywhere")
    ]
    for p in range(1, n):
        claims.append(differs(f"T^{p} != I", power(t, p), identity(t.space)))
    claims += [
        lacks("T is not closable", t, "closable"),
        lacks("T is unbounded", t, "bounded"),
    ]
    return Construction(
        name="root-of-identity",
        summary="block nth root of the identity with an unbounded, "
        "non-closable parameter entry",
        params={"n": n},
        expr=t,
        atoms=(a,),
        facts=(),
        claims=tuple(claims),
        aux=(("A", a), ("T", t)),
        notes=(
            "the parameter cancels from T^n without any algebraic assumption "
            "on A; everywhere-definedness alone drives the cancellation",
        ),
        space=H,
        samplers=((("A",), "generic"),),
    )


def build_involution() -> Construction:
    a = atom("A", H, flags=("everywhere-defined", "unbounded", "not-closable"))
    i_ = identity(H)
    t = block([[a, i_], [i_, scalar_mul(_sc(-1), a)]])
    i2 = identity(t.space)
    claims = (
        holds_on("T^2 = I everywhere", power(t, 2), i2, where="everywhere"),
        has("T is injective", t, "injective"),
        has("T is surjective", t, "surjective"),
        has("T is invertible", t, "invertible"),
        lacks("T is not closable", t, "closable"),
        lacks(
            "T is not boundedly invertible",
            t,
            "boundedly-invertible",
            note="a bounded two-sided inverse would force T closed",
        ),
    )
    return Construction(
        name="involution",
        summary="non-closable involution: T^2 = I built from a square-zero, "
        "everywhere-defined, non-closable entry",
        params={},
        expr=t,
        atoms=(a,),
        facts=(IdentityOn(power(a, 2), zero(H), None),),
        claims=claims,
        aux=(("A", a), ("T", t)),
        notes=(
            "bijectivity follows from the proved identity T^2 = I, not from "
            "any declared invertibility",
        ),
        space=H,
        samplers=((("A",), "square-zero"),),
    )


def build_inverse_pair(style: str = "unitriangular") -> Construction:
    if style not in ("unitriangular", "swap"):
        raise ValueError("style must be 'unitriangular' or 'swap'")
    if style == "swap":
        t = atom("T", H, flags=("everywhere-defined", "unbounded", "not-closable"))
        claims = (
            holds_on("T o T = I everywhere", product(t, t), identity(H), where="everywhere"),
            has("T is invertible", t, "invertible"),
            has("T is left-invertible", t, "left-invertible"),
            has("T is right-invertible", t, "right-invertible"),
            lacks("T is not closable", t, "closable"),
        )
        return Construction(
            name="inverse-pair",
            summary="an operator that is its own two-sided inverse, packaged "
            "as a declared involution",
            params={"style": style},
            expr=t,
            atoms=(t,),
            facts=(IdentityOn(product(t, t), identity(H), None),),
            claims=claims,
            aux=(("T", t),),
            notes=(
                "the declared T^2 = I is realizable by a non-closable operator, "
                "for instance the catalog involution",
            ),
            space=H,
            samplers=((("T",), "involution"),),
        )
    t = atom("T", H, flags=("everywhere-defined", "unbounded", "not-closable"))
    i_, z = identity(H), zero(H)
    m = block([[i_, t], [z, i_]])
    minv = block([[i_, scalar_mul(_sc(-1), t)], [z, i_]])
    i2 = identity(m.space)
    claims = (
        holds_on("M o Minv = I everywhere", product(m, minv), i2, where="everywhere"),
        holds_on("Minv o M = I everywhere", product(minv, m), i2, where="everywhere"),
        has("M is invertible", m, "invertible"),
        lacks("M is not closable", m, "closable"),
        lacks(
            "M is not boundedly invertible",
            m,
            "boundedly-invertible",
            note="invertible without being boundedly invertible: the inverse "
            "exists but M itself is not even closable",
        ),
    )
    return Construction(
        name="inverse-pair",
        summary="unit-triangular block operator with an explicit two-sided "
        "inverse, invertible yet not closable",
        params={"style": style},
        expr=m,
        atoms=(t,),
        facts=(),
        claims=claims,
        aux=(("T", t), ("M", m), ("Minv", minv)),
        notes=(),
        space=H,
        samplers=((("T",), "generic"),),
    )


def build_nilpotent_from_involution() -> Construction:
    t = atom("T", H, flags=("everywhere-defined",))
    i_ = identity(H)
    s = block(
        [[i_, t], [scalar_mul(_sc(-1), t), scalar_mul(_sc(-1), i_)]]
    )
    claims = (
        holds_on("S^2 = 0 everywhere", power(s, 2), zero(s.space), where="everywhere"),
        has("S is nilpotent", s, "nilpotent"),
    )
    return Construction(
        name="nilpotent-from-involution",
        summary="square-zero block operator manufactured from any involution",
        params={},
        expr=s,
        atoms=(t,),
        facts=(IdentityOn(power(t, 2), identity(H), None),),
        claims=claims,
        aux=(("T", t), ("S", s)),
        notes=(),
        space=H,
        samplers=((("T",), "involution"),),
    )


def build_idempotent(flavor: str = "closed") -> Construction:
    if flavor not in ("closed", "nonclosable"):
        raise ValueError("flavor must be 'closed' or 'nonclosable'")
    if flavor == "closed":
        a = atom("A", H, flags=("closed", "densely-defined", "unbounded"))
    else:
        a = atom("A", H, flags=("densely-defined", "unbounded", "not-closable"))
    i_, z = identity(H), zero(H)
    t = block([[i_, a], [z, z]])
    claims = [
        holds_on("T^2 = T", power(t, 2), t),
        same_domain("D(T^2) = D(T)", power(t, 2), t),
        lacks("T is unbounded", t, "bounded"),
    ]
    if flavor == "closed":
        claims.append(has("T is closed", t, "closed"))
    else:
        claims.append(lacks("T is not closable", t, "closable"))
    return Construction(
        name="idempotent",
        summary="unbounded idempotent, either closed or non-closable depending "
        "on the corner entry",
        params={"flavor": flavor},
        expr=t,
        atoms=(a,),
        facts=(),
        claims=tuple(claims),
        aux=(("A", a), ("T", t)),
        notes=("T^2 = T holds with equal domains, no assumption on A beyond flags",),
        space=H,
        samplers=((("A",), "generic"),),
    )


def build_companion_root(n: int = 2) -> Construction:
    n = int(n)
    if n < 2:
        raise ValueError("n must be at least 2")
    t = atom("T", H, flags=("everywhere-defined", "unbounded", "not-closable"))
    i_, z = identity(H), zero(H)
    rows = [[z] * n for _ in range(n)]
    rows[0][n - 1] = t
    for i in range(1, n):
        rows[i][i - 1] = i_
    s = block(rows)
    target = block_diag(*([t] * n))
    claims = (
        holds_on(
            f"S^{n} = diag(T,...,T) everywhere",
            power(s, n),
            target,
            where="everywhere",
        ),
        lacks("S is not closable", s, "closable"),
        lacks("S is unbounded", s, "bounded"),
    )
    return Construction(
        name="companion-root",
        summary="companion-shift nth root of the block diagonal diag(T,...,T), "
        "non-closable whenever T is",
        params={"n": n},
        expr=s,
        atoms=(t,),
        facts=(),
        claims=claims,
        aux=(("T", t), ("S", s)),
        notes=(),
        space=H,
        samplers=((("T",), "generic"),),
    )


def build_asym_domain_roots() -> Construction:
    t = atom("T", H, flags=("self-adjoint", "closed", "densely-defined", "unbounded"))
    i_, z = identity(H), zero(H)
    a = block([[z, t], [i_, z]])
    b = block([[z, i_], [t, z]])
    target = block_diag(t, t)
    claims = (
        holds_on("A^2 = diag(T,T)", power(a, 2), target, via="both"),
        holds_on("B^2 = diag(T,T)", power(b, 2), target, via="both"),
        different_domain("D(A) != D(B)", a, b),
        has("A is closed", a, "closed"),
        has("B is closed", b, "closed"),
    )
    return Construction(
        name="asym-domain-roots",
        summary="two square roots of the same block diagonal whose own domains "
        "provably differ",
        params={},
        expr=a,
        atoms=(t,),
        facts=(),
        claims=claims,
        aux=(("T", t), ("A", a), ("B", b)),
        notes=(
            "D(A) = full oplus D(T) while D(B) = D(T) oplus full; one factor "
            "is closed, the other proper, so the domains cannot agree",
        ),
        space=H,
        samplers=((("T",), "self-adjoint"),),
    )


def build_unit_triangular_closed() -> Construction:
    a = atom("A", H, flags=("closed", "densely-defined", "unbounded"))
    i_, z = identity(H), zero(H)
    m = block([[i_, a], [z, i_]])
    minv = block([[i_, scalar_mul(_sc(-1), a)], [z, i_]])
    i2 = identity(m.space)
    w = dom_prod(dom_full(H), dom_named(a, 0))
    claims = (
        holds_on("M o Minv = I on full oplus D(A)", product(m, minv), i2, where=w),
        differs(
            "M o Minv != I everywhere",
            product(m, minv),
            i2,
            where="everywhere",
            via="engine",
            note="finite-dimensional sections are genuinely invertible, so "
            "this refutation is symbolic only",
        ),
        has("M is closed", m, "closed"),
        has("M is injective", m, "injective"),
        lacks("M is not surjective", m, "surjective"),
        lacks("M is not boundedly invertible", m, "boundedly-invertible"),
    )
    return Construction(
        name="unit-triangular-closed",
        summary="closed unit-triangular operator: injective, with a one-sided "
        "identity on its domain, yet not surjective",
        params={},
        expr=m,
        atoms=(a,),
        facts=(),
        claims=claims,
        aux=(("A", a), ("M", m), ("Minv", minv)),
        notes=(
            "the second output component of M is the input restricted to D(A), "
            "so the range misses everything outside full oplus D(A)",
        ),
        space=H,
        samplers=((("A",), "generic"),),
    )


def build_restricted_identity_product() -> Construction:
    t = atom("T", H, flags=("closed", "densely-defined", "unbounded"))
    i_, z = identity(H), zero(H)
    a = block([[i_, t], [z, i_]])
    b = block([[i_, scalar_mul(_sc(-1), t)], [z, i_]])
    p = product(b, a)
    i2 = identity(a.space)
    w = dom_prod(dom_full(H), dom_named(t, 0))
    claims = (
        holds_on("B o A = I on full oplus D(T)", p, i2, where=w),
        differs(
            "B o A != I everywhere",
            p,
            i2,
            where="everywhere",
            via="engine",
        ),
        spectrum_is("spectrum(B o A) = C", p, ALL_C),
        lacks("B o A is not closed", p, "closed"),
    )
    return Construction(
        name="restricted-identity-product",
        summary="product of two unit-triangular factors equal to the identity "
        "only on a proper dense domain; its spectrum is all of C",
        params={},
        expr=p,
        atoms=(t,),
        facts=(),
        claims=claims,
        aux=(("T", t), ("A", a), ("B", b)),
        notes=(
            "a restriction of the identity to a non-closed domain is bounded "
            "but not closed, and unclosed operators have full spectrum",
        ),
        space=H,
        samplers=((("T",), "generic"),),
    )


def build_nilpotent_spectrum() -> Construction:
    t = atom("T", H, flags=("closed", "densely-defined", "unbounded"))
    z = zero(H)
    n_ = block([[z, t], [z, z]])
    claims = (
        has("N is closed", n_, "closed"),
        has("N is nilpotent", n_, "nilpotent"),
        lacks("N is unbounded", n_, "bounded"),
        spectrum_not(
            "spectrum(N) != {0}",
            n_,
            POINT0,
            note="N^2 lives on a non-closed domain, so its spectrum is all of "
            "C; were spectrum(N) = {0}, squaring would force {0}",
        ),
    )
    return Construction(
        name="nilpotent-spectrum",
        summary="closed nilpotent block operator whose spectrum provably "
        "exceeds {0}",
        params={},
        expr=n_,
        atoms=(t,),
        facts=(),
        claims=claims,
        aux=(("T", t), ("N", n_)),
        notes=("spectral smallness of nilpotents is a bounded-only phenomenon",),
        space=H,
        samplers=((("T",), "generic"),),
    )


def build_left_invertible_not_closed() -> Construction:
    t = atom("T", H, flags=("closed", "densely-defined", "unbounded"))
    idom = restrict(identity(H), dom_named(t, 0))
    claims = (
        has("I_D is left-invertible", idom, "left-invertible"),
        has("I_D is injective", idom, "injective"),
        lacks("I_D is not closed", idom, "closed"),
        lacks("I_D is not surjective", idom, "surjective"),
        lacks("I_D is not boundedly invertible", idom, "boundedly-invertible"),
    )
    return Construction(
        name="left-invertible-not-closed",
        summary="the identity restricted to a proper dense domain: left "
        "invertible, bounded, yet unclosed",
        params={},
        expr=idom,
        atoms=(t,),
        facts=(),
        claims=claims,
        aux=(("T", t), ("I_D", idom)),
        notes=(
            "the full identity is a left inverse since I o I_D = I_D is a "
            "restriction of I",
        ),
        space=H,
        samplers=((("T",), "generic"),),
        numeric_ok=False,
    )


def build_right_invertible_not_closable() -> Construction:
    r = atom("R", H, flags=("everywhere-defined", "unbounded", "not-closable"))
    s = atom("S", H, flags=("bounded", "everywhere-defined"))
    claims = (
        has("R is right-invertible", r, "right-invertible"),
        has("R is surjective", r, "surjective"),
        lacks("R is not closable", r, "closable"),
        lacks("R is not boundedly invertible", r, "boundedly-invertible"),
    )
    return Construction(
        name="right-invertible-not-closable",
        summary="everywhere-defined right-invertible operator that admits no "
        "closure",
        params={},
        expr=r,
        atoms=(r, s),
        facts=(IdentityOn(product(r, s), identity(H), None),),
        claims=claims,
        aux=(("R", r), ("S", s)),
        notes=(
            "R inverts a dense-range contraction from the left; boundedness "
            "on that range would close the range, so R cannot be closable",
        ),
        space=H,
        samplers=((("R", "S"), "inverse-pair"),),
    )


def build_injective_not_surjective() -> Construction:
    t = atom("T", H, flags=("everywhere-defined", "unbounded", "not-closable"))
    s = atom("S", H, flags=("bounded", "everywhere-defined", "injective"))
    a = block_diag(t, s)
    claims = (
        has("A is injective", a, "injective"),
        lacks("A is not surjective", a, "surjective"),
        lacks("A is unbounded", a, "bounded"),
        lacks("A is not closable", a, "closable"),
    )
    return Construction(
        name="injective-not-surjective",
        summary="everywhere-defined unbounded operator that is injective but "
        "not surjective",
        params={},
        expr=a,
        atoms=(t, s),
        facts=(
            IdentityOn(product(t, t), identity(H), None),
            LacksProp(s, "surjective"),
        ),
        claims=claims,
        aux=(("T", t), ("S", s), ("A", a)),
        notes=(
            "the first diagonal slot is a bijection (it squares to I); the "
            "second is injective with proper range, and ranges add up slotwise",
        ),
        space=H,
        numeric_ok=False,
    )


def build_surjective_not_injective() -> Construction:
    t = atom("T", H, flags=("everywhere-defined", "unbounded", "not-closable"))
    r = atom("R", H, flags=("bounded", "everywhere-defined", "surjective"))
    b = block_diag(t, r)
    claims = (
        has("B is surjective", b, "surjective"),
        lacks("B is not injective", b, "injective"),
        lacks("B is unbounded", b, "bounded"),
        lacks("B is not closable", b, "closable"),
    )
    return Construction(
        name="surjective-not-injective",
        summary="everywhere-defined unbounded operator that is surjective but "
        "not injective",
        params={},
        expr=b,
        atoms=(t, r),
        facts=(
            IdentityOn(product(t, t), identity(H), None),
            LacksProp(r, "injective"),
        ),
        claims=claims,
        aux=(("T", t), ("R", r), ("B", b)),
        notes=(),
        space=H,
        numeric_ok=False,
    )


def build_power_gap() -> Construction:
    a = atom("a", H, flags=("bounded", "everywhere-defined"))
    b = atom("b", H, flags=("bounded", "everywhere-defined"))
    z = zero(H)
    t = block([[z, a], [b, z]])
    zt = zero(t.space)
    claims = (
        differs("T^2 != 0", power(t, 2), zt),
        holds_on("T^3 = 0 everywhere", power(t, 3), zt, where="everywhere"),
        has("T is nilpotent", t, "nilpotent"),
    )
    return Construction(
        name="power-gap",
        summary="bounded 2x2 block operator with T^2 nonzero and T^3 = 0: "
        "one-step power gaps need no unboundedness",
        params={},
        expr=t,
        atoms=(a, b),
        facts=(
            IdentityOn(product(a, b), zero(H), None),
            HasProp(product(b, a), "nonzero"),
        ),
        claims=claims,
        aux=(("a", a), ("b", b), ("T", t)),
        notes=(
            "the surviving entry of T^2 is the (2,2) block b o a; the integer "
            "witness puts its nonzero at position (1,2) inside that block",
        ),
        space=H,
        fixed_assignment={"a": ((0, 1), (0, 0)), "b": ((1, 0), (0, 0))},
        default_dim=2,
    )


def build_adjoint_not_square_root() -> Construction:
    a = atom("A", H, flags=("closable", "densely-defined", "unbounded"))
    i_, z = identity(H), zero(H)
    t = block([[i_, a], [z, scalar_mul(_sc(-1), i_)]])
    tstar = block([[i_, z], [adjoint(a), scalar_mul(_sc(-1), i_)]])
    i2 = identity(t.space)
    w = dom_prod(dom_full(H), dom_named(a, 0))
    s = restrict(i2, w)
    claims = (
        holds_on("T^2 = I on full oplus D(A)", power(t, 2), i2, where=w),
        adjoint_is("adj(T) is lower triangular", t, tstar),
        differs(
            "adj(T)^2 != I everywhere",
            power(tstar, 2),
            i2,
            where="everywhere",
            via="engine",
            note="finite-dimensional adjoints do square to I here; the gap "
            "is a domain effect invisible to matrices",
        ),
    )
    return Construction(
        name="adjoint-not-square-root",
        summary="T squares to the identity on its domain, yet adj(T) squared "
        "misses the adjoint of that restricted identity",
        params={},
        expr=t,
        atoms=(a,),
        facts=(),
        claims=claims,
        aux=(("A", a), ("T", t), ("Tstar", tstar), ("S", s)),
        notes=(
            "adj(T)^2 is the identity restricted to D(adj(A)) oplus full, a "
            "proper domain, while the adjoint of T^2 is everywhere defined",
        ),
        space=H,
        samplers=((("A",), "generic"),),
    )


def build_closure_not_square_root() -> Construction:
    a = atom("A", H, flags=("closable", "densely-defined", "unbounded"))
    i_, z = identity(H), zero(H)
    t = block([[i_, a], [z, scalar_mul(_sc(-1), i_)]])
    tstar = block([[i_, z], [adjoint(a), scalar_mul(_sc(-1), i_)]])
    tbar = block([[i_, closure(a)], [z, scalar_mul(_sc(-1), i_)]])
    i2 = identity(t.space)
    wbar = dom_prod(dom_full(H), dom_named(closure(a), 0))
    claims = (
        adjoint_is("adj(adj(T)) is the closure matrix", tstar, tbar),
        holds_on(
            "clo(T)^2 = I on full oplus D(clo(A))", power(tbar, 2), i2, where=wbar
        ),
        differs(
            "clo(T)^2 != I everywhere",
            power(tbar, 2),
            i2,
            where="everywhere",
            via="engine",
        ),
    )
    return Construction(
        name="closure-not-square-root",
        summary="the closure of a square root need not be a square root: "
        "clo(T)^2 still lives on a proper domain",
        params={},
        expr=tbar,
        atoms=(a,),
        facts=(),
        claims=claims,
        aux=(("A", a), ("T", t), ("Tstar", tstar), ("Tbar", tbar)),
        notes=(
            "taking closures enlarges D(A) to D(clo(A)) but cannot reach the "
            "whole space while clo(A) stays unbounded",
        ),
        space=H,
        samplers=((("A",), "generic"),),
    )


def build_square_zero_l2(sizes=(2, 16, 256, 1024)) -> Construction:
    sizes = tuple(int(s) for s in sizes)
    a = atom("A", H, flags=("densely-defined", "unbounded"))
    claims = (
        truncation_square_zero("A_N^2 = 0 exactly for every truncation size"),
        truncation_norm("the truncation norm equals floor(N/2) exactly"),
    )
    return Construction(
        name="square-zero-l2",
        summary="weighted pair shift on square-summable sequences: square "
        "zero at every truncation while the norms grow without bound",
        params={"sizes": sizes},
        expr=a,
        atoms=(a,),
        facts=(IdentityOn(power(a, 2), restrict(zero(H), dom_named(a, 0)), None),),
        claims=claims,
        aux=(("A", a),),
        notes=(
            "the full operator maps (x_n) to (x_2, 0, 2 x_4, 0, ...); its "
            "square vanishes on D(A^2) = D(A), facts not visible to finite "
            "sections beyond the exact truncation checks",
            "closedness of the full operator is documented, not checked",
        ),
        space=H,
        samplers=((("A",), "l2-shift"),),
        default_dims=sizes,
    )


def build_equal_domain_lemma() -> Construction:
    a = atom("A", H, flags=("symmetric", "densely-defined", "unbounded"))
    b = atom("B", H, flags=("symmetric", "densely-defined", "unbounded"))
    anticom = op_sum(product(a, b), product(b, a))
    diffsq = op_sum(power(a, 2), scalar_mul(_sc(-1), power(b, 2)))
    claims = (
        same_domain("D(A^2) = D(B o A)", power(a, 2), product(b, a)),
        same_domain("D(B^2) = D(A o B)", power(b, 2), product(a, b)),
        same_domain("D(AB + BA) = D(A^2 - B^2)", anticom, diffsq),
    )
    return Construction(
        name="equal-domain-lemma",
        summary="for symmetric operators with a shared domain, mixed and pure "
        "second-order domains coincide",
        params={},
        expr=anticom,
        atoms=(a, b),
        facts=(DomainEq(dom_named(a, 0), dom_named(b, 0)),),
        claims=claims,
        aux=(("A", a), ("B", b)),
        notes=(),
        space=H,
        samplers=((("A",), "self-adjoint"), (("B",), "self-adjoint")),
        numeric_ok=False,
    )


# -- registry ---------------------------------------------------------------------


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    summary: str
    builder: object
    params: tuple  # (name, default, doc)


CATALOG = (
    CatalogEntry(
        "nilpotent-power",
        "strictly upper block operator: T^n = 0 everywhere, T^(n-1) != 0",
        build_nilpotent_power,
        (
            ("n", 3, "nilpotency index, n >= 2"),
            ("lift", True, "use the diag(A, I) entry so the gap is symbolic"),
        ),
    ),
    CatalogEntry(
        "mercer-matrix",
        "integer matrix, nilpotent of index n, lower powers entrywise nonzero",
        build_mercer_matrix,
        (("n", 6, "matrix size, n >= 2"),),
    ),
    CatalogEntry(
        "mercer-operator",
        "the same template with operator entries c*T",
        build_mercer_operator,
        (("n", 2, "block size, n >= 2"),),
    ),
    CatalogEntry(
        "circulant-root",
        "parametric shift with A^n = I and A^p != I for p < n",
        build_circulant_root,
        (
            ("n", 6, "root order, n >= 2"),
            ("alpha", "5/2", "free parameter, any exact scalar"),
        ),
    ),
    CatalogEntry(
        "root-of-identity",
        "block nth root of I with a non-closable operator entry",
        build_root_of_identity,
        (("n", 3, "root order, n >= 2"),),
    ),
    CatalogEntry(
        "involution",
        "non-closable T with T^2 = I, hence bijective",
        build_involution,
        (),
    ),
    CatalogEntry(
        "inverse-pair",
        "invertible operator with explicit inverse, not boundedly invertible",
        build_inverse_pair,
        (("style", "unitriangular", "'unitriangular' or 'swap'"),),
    ),
    CatalogEntry(
        "nilpotent-from-involution",
        "square-zero block built from an involution",
        build_nilpotent_from_involution,
        (),
    ),
    CatalogEntry(
        "idempotent",
        "unbounded idempotent, closed or non-closable by choice",
        build_idempotent,
        (("flavor", "closed", "'closed' or 'nonclosable'"),),
    ),
    CatalogEntry(
        "companion-root",
        "companion-shift nth root of diag(T,...,T)",
        build_companion_root,
        (("n", 2, "root order, n >= 2"),),
    ),
    CatalogEntry(
        "asym-domain-roots",
        "two square roots of one operator with different domains",
        build_asym_domain_roots,
        (),
    ),
    CatalogEntry(
        "unit-triangular-closed",
        "closed, injective, not surjective, identity on its domain",
        build_unit_triangular_closed,
        (),
    ),
    CatalogEntry(
        "restricted-identity-product",
        "product equal to I only on a dense proper domain; spectrum C",
        build_restricted_identity_product,
        (),
    ),
    CatalogEntry(
        "nilpotent-spectrum",
        "closed nilpotent with spectrum provably not {0}",
        build_nilpotent_spectrum,
        (),
    ),
    CatalogEntry(
        "left-invertible-not-closed",
        "restricted identity: left invertible yet unclosed",
        build_left_invertible_not_closed,
        (),
    ),
    CatalogEntry(
        "right-invertible-not-closable",
        "everywhere-defined right-invertible operator with no closure",
        build_right_invertible_not_closable,
        (),
    ),
    CatalogEntry(
        "injective-not-surjective",
        "everywhere-defined unbounded, injective, range proper",
        build_injective_not_surjective,
        (),
    ),
    CatalogEntry(
        "surjective-not-injective",
        "everywhere-defined unbounded, onto, kernel nontrivial",
        build_surjective_not_injective,
        (),
    ),
    CatalogEntry(
        "power-gap",
        "integer 2x2 blocks with T^2 != 0 and T^3 = 0",
        build_power_gap,
        (),
    ),
    CatalogEntry(
        "adjoint-not-square-root",
        "adjoints do not pass through square roots",
        build_adjoint_not_square_root,
        (),
    ),
    CatalogEntry(
        "closure-not-square-root",
        "closures do not pass through square roots",
        build_closure_not_square_root,
        (),
    ),
    CatalogEntry(
        "square-zero-l2",
        "weighted pair shift: exact square zero truncations, growing norms",
        build_square_zero_l2,
        (("sizes", (2, 16, 256, 1024), "truncation sizes"),),
    ),
    CatalogEntry(
        "equal-domain-lemma",
        "shared-domain symmetric pair: second-order domains coincide",
        build_equal_domain_lemma,
        (),
    ),
)

REGISTRY = {c.name: c for c in CATALOG}


def catalog_names():
    return tuple(c.name for c in CATALOG)


def suggest(name: str):
    return difflib.get_close_matches(name, catalog_names(), n=3, cutoff=0.4)


def build(name: str, **params) -> Construction:
    entry = REGISTRY.get(name)
    if entry is None:
        near = suggest(name)
        hint = f"; did you mean {', '.join(near)}?" if near else ""
        raise KeyError(f"unknown construction {name!r}{hint}")
    allowed = {p[0] for p in entry.params}
    bad = set(params) - allowed
    if bad:
        raise ValueError(
            f"{name} takes parameters {sorted(allowed) or 'none'}, "
            f"not {sorted(bad)}"
        )
    return entry.builder(**params)
