"""The script language: parse, emit, run.

A script is a flat list of statements, one per line:

    atom A : unbounded, everywhere-defined, not-closable
    fact A^2 = 0 everywhere
    let T = [[A, I],[I, -1*A]]
    check T^2 = I everywhere

`atom` declares a named operator with property flags, `fact` records a
hypothesis, `let` binds a name to an expression, and `check` states a
claim for the engine (and optionally the numeric backend) to settle.
Comments run from `#` to end of line.  Proper names may contain hyphens
(`not-closable`); there is no binary minus, so this is unambiguous, and
negative coefficients are written `-1*A`.

Expression grammar, loosest to tightest:  sums `X + Y`, products
`X*Y`, powers `X^3`, then atoms: names, `I`, `0`, `scalar*expr`,
`adj(e)`, `inv(e)`, `clo(e)`, `restr(e, domain)`, blocks
`[[A, I],[I, -1*A]]`, and parentheses.  Bare `I` and `0` take the
space their context forces (the other side of an equation, the other
entries of a block); a lone `I` defaults to the base space.

Domains:  `full`, `{0}`, `D(A)` / `D(A*)`, `dom(expr)`, `ran(expr)`,
glued by `&` (intersection, tighter) and `oplus` (products).

Facts:  `e = e [everywhere | on domain]`, `dense d`, `not dense d`,
`d = d`, `commutes N A` (the graph inclusion NA inside AN),
`<property> e`, `not <property> e`, `spectrum e = S`.

Checks mirror facts and add `not e = e`, `spectrum e != S`,
`entries-nonzero e`, and domain comparisons.  A check whose left side
is a top-level `adj(...)` states what the formal adjoint IS, not an
operator equation about it.  A trailing `[symbolic]` or `[numeric]`
pins the claim to one backend.

parse(emit(script)) reproduces the script statement for statement;
every catalog construction passes through `construction_script`.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .constructions import (
    PROVED,
    REFUTED,
    UNKNOWN,
    Claim,
    Construction,
    check_construction,
)
from .engine import PROPS, derivation_dict
from .exprs import (
    ATOM_FLAGS,
    Adjoint,
    Atom,
    Block,
    Closure,
    DFull,
    DInter,
    DNamed,
    DProd,
    DRange,
    DTrivial,
    DomainExpr,
    H,
    Identity,
    Inverse,
    OperatorExpr,
    Product,
    Restrict,
    ScalarMul,
    Sum,
    Zero,
    adjoint,
    atom,
    block,
    dom_full,
    dom_inter,
    dom_named,
    dom_prod,
    dom_range,
    dom_trivial,
    identity,
    inverse,
    closure,
    power,
    product,
    restrict,
    scalar_mul,
    op_sum,
    zero,
)
from .facts import (
    DomainEq,
    Extends,
    HasProp,
    IdentityOn,
    InconsistentFacts,
    LacksProp,
    SpectrumIs,
    dense,
    not_dense,
)
from .numeric import FAILS, HOLDS, infer_samplers, verify_construction
from .scalars import Scalar
from .spectrum import ALL_C, REALS, point_set

PROP_WORDS = frozenset(PROPS) | {"nonzero", "unbounded"}
# R and C are spectrum-set literals but only in set position, so they stay
# usable as operator names; I and i are reserved outright.
_KEYWORDS = frozenset(
    {
        "atom", "fact", "let", "check", "on", "everywhere", "not", "dense",
        "commutes", "spectrum", "entries-nonzero", "full", "dom", "D", "ran",
        "oplus", "adj", "inv", "clo", "restr", "I", "i",
    }
) | PROP_WORDS


# -- statements -----------------------------------------------------------------


@dataclass(frozen=True)
class AtomDecl:
    name: str
    flags: tuple


@dataclass(frozen=True)
class FactDecl:
    fact: object


@dataclass(frozen=True)
class LetBinding:
    name: str
    expr: OperatorExpr


@dataclass(frozen=True)
class CheckDirective:
    claim: Claim


@dataclass(frozen=True)
class Script:
    statements: tuple

    @property
    def atoms(self):
        return tuple(
            s for s in self.statements if isinstance(s, AtomDecl)
        )

    @property
    def facts(self):
        return tuple(s.fact for s in self.statements if isinstance(s, FactDecl))

    @property
    def claims(self):
        return tuple(
            s.claim for s in self.statements if isinstance(s, CheckDirective)
        )


class SyntaxErr(Exception):
    def __init__(self, msg, line, col, expected=()):
        self.line = line
        self.col = col
        self.expected = tuple(expected)
        extra = f" (expected {', '.join(expected)})" if expected else ""
        super().__init__(f"line {line}, column {col}: {msg}{extra}")


class EmitError(Exception):
    pass


# -- tokenizer ------------------------------------------------------------------

_SYMBOLS = ("!=", "=", "+", "*", "^", ",", ":", "(", ")", "[", "]", "{", "}",
            "&", "/", "-")


@dataclass(frozen=True)
class _Tok:
    kind: str  # NAME, INT, or the symbol itself
    text: str
    line: int
    col: int


def _tokenize_line(text, lineno):
    out = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "#":
            break
        if ch.isspace():
            i += 1
            continue
        if text.startswith("!=", i):
            out.append(_Tok("!=", "!=", lineno, i + 1))
            i += 2
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            out.append(_Tok("INT", text[i:j], lineno, i + 1))
            i = j
            continue
        if ch.isalpha():
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            # hyphenated names: not-closable, entries-nonzero
            while (
                j < n - 1
                and text[j] == "-"
                and (text[j + 1].isalnum() or text[j + 1] == "_")
            ):
                j += 1
                while j < n and (text[j].isalnum() or text[j] == "_"):
                    j += 1
            out.append(_Tok("NAME", text[i:j], lineno, i + 1))
            i = j
            continue
        if ch in _SYMBOLS:
            out.append(_Tok(ch, ch, lineno, i + 1))
            i += 1
            continue
        raise SyntaxErr(f"unexpected character {ch!r}", lineno, i + 1)
    return out


# -- parser ---------------------------------------------------------------------


class _Parser:
    """One statement per line; names resolve against earlier statements."""

    def __init__(self):
        self.env = {}  # name -> expr
        self.names = {}  # id(expr) -> name, for claim labels
        self.toks = []
        self.pos = 0
        self.lineno = 0
        self.linelen = 0

    # token plumbing

    def _peek(self, k=0):
        if self.pos + k < len(self.toks):
            return self.toks[self.pos + k]
        return None

    def _next(self):
        t = self._peek()
        if t is None:
            raise SyntaxErr("unexpected end of line", self.lineno, self.linelen + 1)
        self.pos += 1
        return t

    def _expect(self, kind):
        t = self._peek()
        if t is None or t.kind != kind:
            got = t.text if t else "end of line"
            col = t.col if t else self.linelen + 1
            raise SyntaxErr(f"found {got!r}", self.lineno, col, expected=(kind,))
        return self._next()

    def _at(self, kind, text=None, k=0):
        t = self._peek(k)
        return t is not None and t.kind == kind and (text is None or t.text == text)

    def _done(self):
        t = self._peek()
        if t is not None:
            raise SyntaxErr(f"trailing input {t.text!r}", self.lineno, t.col)

    # entry point

    def parse(self, source: str) -> Script:
        stmts = []
        for lineno, raw in enumerate(source.splitlines(), start=1):
            self.toks = _tokenize_line(raw, lineno)
            self.pos = 0
            self.lineno = lineno
            self.linelen = len(raw)
            if not self.toks:
                continue
            head = self._next()
            if head.kind != "NAME" or head.text not in (
                "atom", "fact", "let", "check",
            ):
                raise SyntaxErr(
                    f"found {head.text!r}", lineno, head.col,
                    expected=("atom", "fact", "let", "check"),
                )
            stmt = getattr(self, f"_stmt_{head.text}")()
            self._done()
            stmts.append(stmt)
        return Script(tuple(stmts))

    def _bind(self, name, e, col):
        if name in self.env:
            raise SyntaxErr(f"name {name!r} already bound", self.lineno, col)
        if name in _KEYWORDS:
            raise SyntaxErr(f"{name!r} is a reserved word", self.lineno, col)
        self.env[name] = e
        self.names.setdefault(id(e), name)

    def _stmt_atom(self):
        t = self._expect("NAME")
        self._expect(":")
        flags = []
        while True:
            f = self._expect("NAME")
            if f.text not in ATOM_FLAGS:
                raise SyntaxErr(
                    f"unknown flag {f.text!r}", self.lineno, f.col,
                    expected=tuple(sorted(ATOM_FLAGS)),
                )
            flags.append(f.text)
            if self._at(","):
                self._next()
            else:
                break
        a = atom(t.text, H, flags=tuple(flags))
        self._bind(t.text, a, t.col)
        return AtomDecl(t.text, tuple(flags))

    def _stmt_let(self):
        t = self._expect("NAME")
        self._expect("=")
        e, _ = self._expr(None)
        self._bind(t.text, e, t.col)
        return LetBinding(t.text, e)

    def _stmt_fact(self):
        if self._at("NAME", "dense"):
            self._next()
            return FactDecl(dense(self._domain()))
        if self._at("NAME", "not"):
            self._next()
            if self._at("NAME", "dense"):
                self._next()
                return FactDecl(not_dense(self._domain()))
            p = self._expect("NAME")
            if p.text not in PROP_WORDS:
                raise SyntaxErr(
                    f"unknown property {p.text!r}", self.lineno, p.col
                )
            e, _ = self._expr(None)
            return FactDecl(LacksProp(e, p.text))
        if self._at("NAME", "commutes"):
            self._next()
            x = self._lookup(self._expect("NAME"))
            y = self._lookup(self._expect("NAME"))
            return FactDecl(Extends(product(x, y), product(y, x)))
        if self._at("NAME", "spectrum"):
            self._next()
            e, _ = self._expr(None)
            self._expect("=")
            return FactDecl(SpectrumIs(e, self._spectrum_set()))
        if self._domain_ahead():
            d1 = self._domain()
            self._expect("=")
            d2 = self._domain()
            return FactDecl(DomainEq(d1, d2))
        t = self._peek()
        if (
            t is not None
            and t.kind == "NAME"
            and t.text in PROP_WORDS
            and t.text not in self.env
        ):
            self._next()
            e, _ = self._expr(None)
            return FactDecl(HasProp(e, t.text))
        lhs, rhs, where = self._equation()
        on = None if where in ("natural", "everywhere") else where
        return FactDecl(IdentityOn(lhs, rhs, on))

    def _stmt_check(self):
        c = self._claim()
        via = self._via_tag()
        if via is not None:
            c = replace(c, via=via)
        c = replace(c, label=claim_text(c, self.names))
        return CheckDirective(c)

    def _via_tag(self):
        if not self._at("["):
            return None
        self._next()
        t = self._expect("NAME")
        if t.text not in ("symbolic", "numeric"):
            raise SyntaxErr(
                f"unknown backend tag {t.text!r}", self.lineno, t.col,
                expected=("symbolic", "numeric"),
            )
        self._expect("]")
        return "engine" if t.text == "symbolic" else "numeric"

    def _claim(self) -> Claim:
        if self._at("NAME", "not"):
            t = self._next()
            inner = self._claim()
            if inner.kind == "identity":
                return replace(inner, kind="not-identity")
            if inner.kind == "property":
                return replace(inner, expected=not inner.expected)
            if inner.kind == "domains-equal":
                return replace(inner, kind="domains-differ")
            raise SyntaxErr(
                f"cannot negate a {inner.kind} claim", self.lineno, t.col
            )
        if self._at("NAME", "spectrum"):
            self._next()
            e, _ = self._expr(None)
            op = self._next()
            if op.kind not in ("=", "!="):
                raise SyntaxErr(
                    f"found {op.text!r}", self.lineno, op.col, expected=("=", "!="),
                )
            return Claim("spectrum", "", lhs=e, op=op.kind, sset=self._spectrum_set())
        if self._at("NAME", "entries-nonzero"):
            self._next()
            e, _ = self._expr(None)
            return Claim("entrywise-nonzero", "", lhs=e)
        if self._at("NAME", "dom") and self._at("(", k=1):
            # dom(E) = dom(F): natural domains of two operator expressions
            self._next()
            self._next()
            e1, _ = self._expr(None)
            self._expect(")")
            self._expect("=")
            t = self._expect("NAME")
            if t.text != "dom":
                raise SyntaxErr(
                    f"found {t.text!r}", self.lineno, t.col, expected=("dom",)
                )
            self._expect("(")
            e2, _ = self._expr(None)
            self._expect(")")
            return Claim("domains-equal", "", lhs=e1, rhs=e2)
        t = self._peek()
        if (
            t is not None
            and t.kind == "NAME"
            and t.text in PROP_WORDS
            and t.text not in self.env
        ):
            self._next()
            e, _ = self._expr(None)
            return Claim("property", "", lhs=e, prop=t.text)
        lhs, rhs, where = self._equation()
        if isinstance(lhs, Adjoint) and where == "natural":
            return Claim("adjoint-is", "", lhs=lhs.child, rhs=rhs)
        return Claim("identity", "", lhs=lhs, rhs=rhs, where=where)

    def _equation(self):
        lhs, lc = self._expr(None)
        self._expect("=")
        hint = lhs.space if lc else None
        rhs, rc = self._expr(hint)
        if not lc and rc:
            # right side pinned the space; rebuild the left to match
            lhs = _retype(lhs, rhs.space)
        where = "natural"
        if self._at("NAME", "everywhere"):
            self._next()
            where = "everywhere"
        elif self._at("NAME", "on"):
            self._next()
            where = self._domain()
        return lhs, rhs, where

    def _lookup(self, tok):
        if tok.text not in self.env:
            raise SyntaxErr(f"undefined name {tok.text!r}", self.lineno, tok.col)
        return self.env[tok.text]

    # expressions: returns (expr, certain) where certain means the space
    # was forced by content rather than defaulted

    def _expr(self, hint):
        terms = [self._term(hint)]
        while self._at("+"):
            self._next()
            terms.append(self._term(hint))
        if len(terms) == 1:
            return terms[0]
        sp, certain = _pick_space(terms, hint)
        built = [e if c else _retype(e, sp) for e, c in terms]
        return op_sum(*built), certain

    def _term(self, hint):
        factors = [self._power(hint)]
        while self._at("*"):
            self._next()
            factors.append(self._power(hint))
        if len(factors) == 1:
            return factors[0]
        sp, certain = _pick_space(factors, hint)
        built = [e if c else _retype(e, sp) for e, c in factors]
        return product(*built), certain

    def _power(self, hint):
        e, c = self._base(hint)
        while self._at("^"):
            self._next()
            t = self._expect("INT")
            n = int(t.text)
            if n < 1:
                raise SyntaxErr("exponent must be at least 1", self.lineno, t.col)
            e = power(e, n)
        return e, c

    def _base(self, hint):
        t = self._peek()
        if t is None:
            raise SyntaxErr(
                "missing expression", self.lineno, self.linelen + 1
            )
        if t.kind == "-" or t.kind == "INT" or (t.kind == "NAME" and t.text == "i"):
            return self._scalar_or_zero(hint)
        if t.kind == "(":
            self._next()
            e = self._expr(hint)
            self._expect(")")
            return e
        if t.kind == "[":
            return self._block(hint)
        if t.kind == "NAME":
            if t.text == "I":
                self._next()
                return identity(hint or H), hint is not None
            if t.text in ("adj", "inv", "clo"):
                self._next()
                self._expect("(")
                e, c = self._expr(hint)
                self._expect(")")
                f = {"adj": adjoint, "inv": inverse, "clo": closure}[t.text]
                return f(e), c
            if t.text == "restr":
                self._next()
                self._expect("(")
                # the domain fixes the space of what is restricted
                save = self.pos
                self._skip_balanced_to_comma()
                d = self._domain()
                end = self.pos
                self.pos = save
                e, _ = self._expr(_dom_space(d))
                self._expect(",")
                self.pos = end
                self._expect(")")
                return restrict(e, d), True
            self._next()
            return self._lookup(t), True
        raise SyntaxErr(
            f"found {t.text!r}", self.lineno, t.col, expected=("expression",)
        )

    def _skip_balanced_to_comma(self):
        depth = 0
        while True:
            t = self._peek()
            if t is None:
                raise SyntaxErr(
                    "unterminated restr(...)", self.lineno, self.linelen + 1
                )
            if t.kind in ("(", "["):
                depth += 1
            elif t.kind in (")", "]"):
                depth -= 1
            elif t.kind == "," and depth == 0:
                self._next()
                return
            self._next()

    def _scalar_or_zero(self, hint):
        t = self._peek()
        c = self._try_scalar()
        if c is None:
            raise SyntaxErr(f"found {t.text!r}", self.lineno, t.col,
                            expected=("scalar",))
        if self._at("*"):
            self._next()
            e, certain = self._power(hint)
            return scalar_mul(c, e), certain
        if c.is_zero():
            return zero(hint or H), hint is not None
        raise SyntaxErr(
            "a scalar must multiply an expression", self.lineno, t.col,
            expected=("*",),
        )

    def _try_scalar(self):
        neg = False
        if self._at("-"):
            self._next()
            neg = True
        if self._at("NAME", "i"):
            self._next()
            v = Scalar(0, 1)
            return -v if neg else v
        if not self._at("INT"):
            return None
        num = int(self._next().text)
        den = 1
        if self._at("/"):
            self._next()
            den = int(self._expect("INT").text)
        from fractions import Fraction

        val = Fraction(num, den)
        if self._at("NAME", "i"):
            self._next()
            v = Scalar(0, val)
        else:
            v = Scalar(val)
        return -v if neg else v

    def _block(self, hint):
        self._expect("[")
        rows = []
        while True:
            self._expect("[")
            row = [self._expr(None)]
            while self._at(","):
                self._next()
                row.append(self._expr(None))
            self._expect("]")
            rows.append(row)
            if self._at(","):
                self._next()
            else:
                break
        self._expect("]")
        entries = [e for row in rows for e in row]
        sp, _ = _pick_space(entries, None)
        built = [[e if c else _retype(e, sp) for e, c in row] for row in rows]
        return block(built), True

    # domains

    def _domain_ahead(self):
        t = self._peek()
        if t is None:
            return False
        if t.kind == "{":
            return True
        return t.kind == "NAME" and t.text in ("full", "D", "dom", "ran")

    def _domain(self):
        parts = [self._dom_inter()]
        while self._at("NAME", "oplus"):
            self._next()
            parts.append(self._dom_inter())
        return dom_prod(*parts) if len(parts) > 1 else parts[0]

    def _dom_inter(self):
        parts = [self._dom_atom()]
        while self._at("&"):
            self._next()
            parts.append(self._dom_atom())
        return dom_inter(*parts) if len(parts) > 1 else parts[0]

    def _dom_atom(self):
        t = self._peek()
        if t is None:
            raise SyntaxErr("missing domain", self.lineno, self.linelen + 1)
        if t.kind == "(":
            self._next()
            d = self._domain()
            self._expect(")")
            return d
        if t.kind == "{":
            self._next()
            z = self._expect("INT")
            if z.text != "0":
                raise SyntaxErr("the only literal domain is {0}", self.lineno, z.col)
            self._expect("}")
            return dom_trivial(H)
        if t.kind == "NAME" and t.text == "full":
            self._next()
            return dom_full(H)
        if t.kind == "NAME" and t.text == "D":
            self._next()
            self._expect("(")
            x = self._lookup(self._expect("NAME"))
            stars = 0
            while self._at("*"):
                self._next()
                stars += 1
            self._expect(")")
            return dom_named(x, stars)
        if t.kind == "NAME" and t.text == "dom":
            self._next()
            self._expect("(")
            e, _ = self._expr(None)
            self._expect(")")
            stars = 0
            while isinstance(e, Adjoint):
                e = e.child
                stars += 1
            return dom_named(e, stars)
        if t.kind == "NAME" and t.text == "ran":
            self._next()
            self._expect("(")
            e, _ = self._expr(None)
            self._expect(")")
            return dom_range(e)
        raise SyntaxErr(
            f"found {t.text!r}", self.lineno, t.col,
            expected=("full", "{0}", "D(", "dom(", "ran("),
        )

    def _spectrum_set(self):
        t = self._next()
        if t.kind == "NAME" and t.text == "C":
            return ALL_C
        if t.kind == "NAME" and t.text == "R":
            return REALS
        if t.kind == "{":
            vals = []
            while True:
                c = self._try_scalar()
                if c is None:
                    bad = self._peek()
                    col = bad.col if bad else self.linelen + 1
                    raise SyntaxErr("expected a scalar", self.lineno, col)
                vals.append(c)
                if self._at(","):
                    self._next()
                else:
                    break
            self._expect("}")
            return point_set(*vals)
        raise SyntaxErr(
            f"found {t.text!r}", self.lineno, t.col, expected=("C", "R", "{"),
        )


def _pick_space(pairs, hint):
    for e, certain in pairs:
        if certain:
            return e.space, True
    return (hint or H), hint is not None


def _retype(e, sp):
    """Rebuild a space-defaulted placeholder on the given space."""
    if isinstance(e, Identity):
        return identity(sp)
    if isinstance(e, Zero):
        return zero(sp)
    if isinstance(e, ScalarMul):
        return scalar_mul(e.c, _retype(e.child, sp))
    return e


def _dom_space(d):
    if isinstance(d, (DFull, DTrivial)):
        return d.space
    if isinstance(d, DNamed):
        return d.subject.space
    if isinstance(d, DRange):
        return d.op.space
    if isinstance(d, DInter):
        return _dom_space(d.parts[0])
    if isinstance(d, DProd):
        from .exprs import space as mkspace

        parts = [_dom_space(p) for p in d.parts]
        base = parts[0]
        return mkspace(base.name, sum(p.arity for p in parts))
    return H


def parse(source: str) -> Script:
    return _Parser().parse(source)


# -- rendering ------------------------------------------------------------------


def expr_text(e: OperatorExpr, names=None) -> str:
    return _rend(e, 0, names or {})


def _rend(e, level, names):
    nm = names.get(id(e))
    if nm is not None:
        return nm
    if isinstance(e, Atom):
        return e.name
    if isinstance(e, Identity):
        return "I"
    if isinstance(e, Zero):
        return "0"
    if isinstance(e, ScalarMul):
        c = e.c
        if c.re != 0 and c.im != 0:
            raise EmitError(f"cannot render mixed scalar {c} as a literal")
        txt = f"{c}*{_rend(e.child, 2, names)}"
        return f"({txt})" if level >= 2 else txt
    if isinstance(e, Sum):
        txt = " + ".join(_rend(t, 1, names) for t in e.terms)
        return f"({txt})" if level >= 1 else txt
    if isinstance(e, Product):
        base = e.factors[0]
        if len(e.factors) > 1 and all(f is base for f in e.factors):
            return f"{_rend(base, 2, names)}^{len(e.factors)}"
        txt = "*".join(_rend(f, 2, names) for f in e.factors)
        return f"({txt})" if level >= 2 else txt
    if isinstance(e, Adjoint):
        return f"adj({_rend(e.child, 0, names)})"
    if isinstance(e, Closure):
        return f"clo({_rend(e.child, 0, names)})"
    if isinstance(e, Inverse):
        return f"inv({_rend(e.child, 0, names)})"
    if isinstance(e, Restrict):
        return f"restr({_rend(e.child, 0, names)}, {dom_text(e.dom, names)})"
    if isinstance(e, Block):
        rows = ",".join(
            "[" + ", ".join(_rend(x, 0, names) for x in row) + "]"
            for row in e.rows
        )
        return f"[{rows}]"
    raise EmitError(f"cannot render {type(e).__name__}")


def dom_text(d: DomainExpr, names=None) -> str:
    names = names or {}
    if isinstance(d, DFull):
        return "full"
    if isinstance(d, DTrivial):
        return "{0}"
    if isinstance(d, DNamed):
        if isinstance(d.subject, Atom):
            return f"D({d.subject.name}{'*' * d.stars})"
        e = d.subject
        for _ in range(d.stars):
            e = adjoint(e)
        return f"dom({_rend(e, 0, names)})"
    if isinstance(d, DInter):
        return " & ".join(_dom_paren(p, names) for p in d.parts)
    if isinstance(d, DProd):
        return " oplus ".join(_dom_paren(p, names) for p in d.parts)
    if isinstance(d, DRange):
        return f"ran({_rend(d.op, 0, names)})"
    raise EmitError(f"cannot render {type(d).__name__}")


def _dom_paren(d, names):
    if isinstance(d, (DInter, DProd)):
        return f"({dom_text(d, names)})"
    return dom_text(d, names)


def claim_text(c: Claim, names=None) -> str:
    names = names or {}
    if c.kind == "identity" or c.kind == "not-identity":
        head = "not " if c.kind == "not-identity" else ""
        tail = ""
        if c.where == "everywhere":
            tail = " everywhere"
        elif isinstance(c.where, DomainExpr):
            tail = f" on {dom_text(c.where, names)}"
        return (
            f"{head}{expr_text(c.lhs, names)} = {expr_text(c.rhs, names)}{tail}"
        )
    if c.kind == "property":
        head = "" if c.expected else "not "
        return f"{head}{c.prop} {expr_text(c.lhs, names)}"
    if c.kind == "spectrum":
        return f"spectrum {expr_text(c.lhs, names)} {c.op} {c.sset}"
    if c.kind == "entrywise-nonzero":
        return f"entries-nonzero {expr_text(c.lhs, names)}"
    if c.kind == "domains-equal":
        # lhs/rhs are operator expressions; the claim compares natural domains
        return f"dom({expr_text(c.lhs, names)}) = dom({expr_text(c.rhs, names)})"
    if c.kind == "domains-differ":
        return f"not dom({expr_text(c.lhs, names)}) = dom({expr_text(c.rhs, names)})"
    if c.kind == "adjoint-is":
        return f"adj({expr_text(c.lhs, names)}) = {expr_text(c.rhs, names)}"
    raise EmitError(f"claim kind {c.kind!r} has no script form")


def fact_text(f, names=None) -> str:
    names = names or {}
    if isinstance(f, IdentityOn):
        tail = " everywhere" if f.on is None else f" on {dom_text(f.on, names)}"
        return f"{expr_text(f.lhs, names)} = {expr_text(f.rhs, names)}{tail}"
    if isinstance(f, HasProp):
        if isinstance(f.subject, DomainExpr):
            if f.prop != "dense":
                raise EmitError(f"no script form for domain property {f.prop!r}")
            return f"dense {dom_text(f.subject, names)}"
        return f"{f.prop} {expr_text(f.subject, names)}"
    if isinstance(f, LacksProp):
        if isinstance(f.subject, DomainExpr):
            if f.prop != "dense":
                raise EmitError(f"no script form for domain property {f.prop!r}")
            return f"not dense {dom_text(f.subject, names)}"
        return f"not {f.prop} {expr_text(f.subject, names)}"
    if isinstance(f, DomainEq):
        return f"{dom_text(f.d1, names)} = {dom_text(f.d2, names)}"
    if isinstance(f, Extends):
        s, b = f.small, f.big
        if (
            isinstance(s, Product)
            and isinstance(b, Product)
            and len(s.factors) == 2
            and len(b.factors) == 2
            and s.factors[0] is b.factors[1]
            and s.factors[1] is b.factors[0]
            and isinstance(s.factors[0], Atom)
            and isinstance(s.factors[1], Atom)
        ):
            return f"commutes {s.factors[0].name} {s.factors[1].name}"
        raise EmitError("only commutation inclusions have a script form")
    if isinstance(f, SpectrumIs):
        return f"spectrum {expr_text(f.e, names)} = {f.sset}"
    raise EmitError(f"fact {type(f).__name__} has no script form")


def emit(script: Script) -> str:
    names = {}
    for s in script.statements:
        if isinstance(s, AtomDecl):
            pass
        elif isinstance(s, LetBinding):
            names.setdefault(id(s.expr), s.name)
    lines = []
    for s in script.statements:
        if isinstance(s, AtomDecl):
            lines.append(f"atom {s.name} : {', '.join(s.flags)}")
        elif isinstance(s, FactDecl):
            lines.append(f"fact {fact_text(s.fact, names)}")
        elif isinstance(s, LetBinding):
            local = {k: v for k, v in names.items() if v != s.name}
            lines.append(f"let {s.name} = {expr_text(s.expr, local)}")
        elif isinstance(s, CheckDirective):
            c = s.claim
            tag = ""
            if c.via == "engine":
                tag = " [symbolic]"
            elif c.via == "numeric":
                tag = " [numeric]"
            lines.append(f"check {claim_text(c, names)}{tag}")
    return "\n".join(lines) + "\n"


def construction_script(con: Construction) -> Script:
    """Script form of a catalog construction.

    Claims with no finite script form (the truncation family) are left
    out; everything else round-trips through parse(emit(...)).
    """
    stmts = []
    names = {}
    for a in con.atoms:
        stmts.append(AtomDecl(a.name, tuple(a.flags)))
        names[id(a)] = a.name
    for f in con.facts:
        stmts.append(FactDecl(f))
    for name, e in con.aux:
        if isinstance(e, Atom):
            continue
        stmts.append(LetBinding(name, e))
        names.setdefault(id(e), name)
    for c in con.claims:
        if c.kind in ("truncation-nilpotent", "truncation-norm"):
            continue
        c = replace(c, label=claim_text(c, names), note="")
        stmts.append(CheckDirective(c))
    return Script(tuple(stmts))


# -- execution ------------------------------------------------------------------


def script_construction(script: Script, name="script") -> Construction:
    """Ad-hoc construction wrapping a script, so both backends apply.
    Sampling strategies are inferred from the declared facts."""
    atoms = []
    for s in script.statements:
        if isinstance(s, AtomDecl):
            atoms.append(atom(s.name, H, flags=s.flags))
    facts = tuple(s.fact for s in script.statements if isinstance(s, FactDecl))
    lets = tuple(
        (s.name, s.expr) for s in script.statements if isinstance(s, LetBinding)
    )
    claims = tuple(
        s.claim for s in script.statements if isinstance(s, CheckDirective)
    )
    expr = lets[-1][1] if lets else (atoms[0] if atoms else identity(H))
    return Construction(
        name=name,
        summary="script-defined construction",
        params={},
        expr=expr,
        atoms=tuple(atoms),
        facts=facts,
        claims=claims,
        aux=lets,
        space=H,
        samplers=infer_samplers(tuple(atoms), facts),
    )


def resolve_verdict(sym, num):
    """Combine a symbolic ClaimReport with a numeric VerifyReport into
    (verdict, outcome), outcome one of "ok" | "fail" | "unknown".

    A claim fails if either backend rejects it as stated; it stands if
    either establishes it; abstentions (Unknown, Inapplicable, Deferred)
    are never silent successes on their own."""
    decided = sym is not None and sym.status in (PROVED, REFUTED)
    num_v = num.verdict if num is not None else None
    if decided and not sym.ok:
        return "Refuted", "fail"
    if num_v == FAILS:
        return "Fails", "fail"
    if decided and sym.ok:
        return "Proved", "ok"
    if num_v == HOLDS:
        return "Holds", "ok"
    if sym is not None and sym.status == UNKNOWN:
        return "Unknown", "unknown"
    return "Inapplicable", "unknown"


_EXIT_OK, _EXIT_FAIL, _EXIT_UNKNOWN, _EXIT_INCONSISTENT = 0, 1, 2, 3


def run(
    script: Script,
    numeric: bool = False,
    trials: int = 12,
    dim: int | None = None,
    seed: int = 0,
    tol: float = 1e-9,
):
    """Execute a script: symbolic checks always, numeric on request.

    Returns (exit_code, report).  Exit codes: 0 all claims settled as
    stated, 1 any refuted, 2 any unresolved, 3 contradictory facts.
    """
    return run_construction(
        script_construction(script),
        numeric=numeric,
        trials=trials,
        dim=dim,
        seed=seed,
        tol=tol,
    )


def run_construction(
    con: Construction,
    numeric: bool = False,
    trials: int = 12,
    dim: int | None = None,
    seed: int = 0,
    tol: float = 1e-9,
):
    """Claim-by-claim verdicts for a construction; same contract as run()."""
    try:
        rep = check_construction(con)
        num_reports = (
            verify_construction(con, trials=trials, dim=dim, seed=seed, tol=tol)
            if numeric
            else [None] * len(con.claims)
        )
    except InconsistentFacts as ex:
        return _EXIT_INCONSISTENT, {
            "checks": [],
            "inconsistent": str(ex),
            "exit": _EXIT_INCONSISTENT,
        }
    checks = []
    code = _EXIT_OK
    for sym, num in zip(rep.reports, num_reports):
        verdict, outcome = resolve_verdict(sym, num)
        entry = {"check": sym.claim.label, "verdict": verdict}
        entry["symbolic"] = sym.status
        entry["detail"] = sym.detail
        entry["anchors"] = _anchors_of(sym.derivation) if sym.derivation else []
        if sym.derivation is not None:
            entry["derivation"] = derivation_dict(sym.derivation)
        if num is not None:
            entry["numeric"] = num.verdict
            entry["residual"] = num.max_residual
            if num.witness is not None:
                pos, val, wseed = num.witness
                entry["witness"] = {
                    "entry": list(pos),
                    "value": val,
                    "seed": wseed,
                }
        checks.append(entry)
        if outcome == "fail":
            code = max(code, _EXIT_FAIL)
        elif outcome == "unknown":
            code = max(code, _EXIT_UNKNOWN)
    return code, {"checks": checks, "exit": code}


def _anchors_of(d):
    from .engine import ANCHORS

    out = set()
    for node in d.walk():
        a = ANCHORS.get(node.rule)
        if a:
            out.add(a)
    return sorted(out)
