"""Domain-preserving normalization of operator expressions.

normalize() rewrites an expression to a canonical form while preserving
it *as an operator*, domain included.  That constraint drives every rule:

* 0*T and Zero o T become the zero operator restricted to D(T), never the
  everywhere-defined Zero, unless D(T) provably is the full space;
* sums collect like terms, and a cancellation A + (-1)*A leaves behind a
  zero restricted to D(A);
* block-by-block products expand entrywise only under a license that
  guarantees the formal expansion has the true composition domain: for
  every contraction index k, either every entry in the left factor's
  column k is everywhere defined, or row k of the right factor has at
  most one entry that is not a (possibly restricted) zero;
* declared operator identities (IdentityOn with on=None, e.g. "A^2 = 0
  as operators") substitute into contiguous composition windows; they
  are equalities of operators, so splicing them is unconditionally sound.

The rewrite runs to a fixed point and is idempotent: normalizing a
normalized expression returns the same object.
"""

from __future__ import annotations

from . import domains as dm
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
    children,
    closure as mk_closure,
    dom_inter,
    identity,
    inverse as mk_inverse,
    natural_domain,
    op_sum,
    product,
    restrict,
    scalar_mul,
    zero,
)
from .facts import IdentityOn
from .scalars import ONE, Scalar


def expr_size(e) -> int:
    return 1 + sum(expr_size(c) for c in children(e))


def is_zeroish(e) -> bool:
    if isinstance(e, Zero):
        return True
    if isinstance(e, Restrict):
        return is_zeroish(e.child)
    if isinstance(e, ScalarMul):
        return e.c.is_zero() or is_zeroish(e.child)
    return False


def is_identityish(e) -> bool:
    if isinstance(e, Identity):
        return True
    if isinstance(e, Restrict):
        return is_identityish(e.child)
    return False


def _split_scalar(t):
    if isinstance(t, ScalarMul):
        return t.c, t.child
    return ONE, t


class Normalizer:
    def __init__(self, ctx: dm.Ctx):
        self.ctx = ctx
        self.memo = {}
        self._subst = None
        self._building = False

    # -- substitution table from declared operator identities --------------

    def _subst_table(self):
        if self._subst is None:
            if self._building:
                return []
            self._building = True
            table = []
            for f in self.ctx.facts.identities():
                if not isinstance(f, IdentityOn) or f.on is not None:
                    continue
                lc = self.canon(f.lhs)
                rc = self.canon(f.rhs)
                if lc is rc or expr_size(rc) > expr_size(lc):
                    continue
                pat = lc.factors if isinstance(lc, Product) else (lc,)
                table.append((pat, rc))
            self._building = False
            self._subst = table
        return self._subst

    # -- entry points -------------------------------------------------------

    def canon(self, e: OperatorExpr) -> OperatorExpr:
        hit = self.memo.get(id(e))
        if hit is not None:
            return hit
        cur = e
        for _ in range(40):
            new = self._step(cur)
            if new is cur:
                break
            cur = new
        # results computed while the substitution table is under
        # construction have substitution disabled; caching them would
        # freeze unsubstituted forms
        if not self._building:
            self.memo[id(e)] = cur
            self.memo[id(cur)] = cur
        return cur

    def canon_nosubst(self, e: OperatorExpr) -> OperatorExpr:
        """Canonical form with declared-identity substitution disabled.

        Needed when inspecting the shape of a declared identity itself:
        full canon would collapse its left side to its right side.
        """
        was_b, was_m = self._building, self.memo
        self._building = True
        self.memo = {}
        try:
            return self.canon(e)
        finally:
            self._building = was_b
            self.memo = was_m

    def nds(self, e):
        return dm.simplify_domain(natural_domain(e), self.ctx)

    def zero_on(self, d) -> OperatorExpr:
        d = dm.simplify_domain(d, self.ctx)
        if dm._struct_full(d):
            return zero(d.space)
        return restrict(zero(d.space), d)

    def identity_on(self, d) -> OperatorExpr:
        d = dm.simplify_domain(d, self.ctx)
        if dm._struct_full(d):
            return identity(d.space)
        return restrict(identity(d.space), d)

    def _contains(self, d_small, d_big) -> bool:
        rel = dm.domain_relation(d_small, d_big, self.ctx)
        return rel in (dm.RelTag.EQUAL, dm.RelTag.SUBSET_OF)

    # -- single rewriting pass ---------------------------------------------

    def _step(self, e):
        if isinstance(e, (Atom, Identity, Zero)):
            return self._apply_single_subst(e)
        if isinstance(e, ScalarMul):
            return self._scalar_step(e)
        if isinstance(e, Sum):
            return self._sum_step(e)
        if isinstance(e, Product):
            return self._product_step(e)
        if isinstance(e, Block):
            return self._block_step(e)
        if isinstance(e, Restrict):
            return self._restrict_step(e)
        if isinstance(e, Adjoint):
            return self._adjoint_step(e)
        if isinstance(e, Closure):
            return self._closure_step(e)
        if isinstance(e, Inverse):
            return self._inverse_step(e)
        return e

    def _apply_single_subst(self, e):
        for pat, rep in self._subst_table():
            if len(pat) == 1 and pat[0] is e:
                return rep
        return e

    def _scalar_step(self, e):
        c, x = e.c, self.canon(e.child)
        while isinstance(x, ScalarMul):
            c, x = c * x.c, x.child
        if isinstance(x, Zero) or is_zeroish(x):
            return x  # scaling a (possibly restricted) zero changes nothing
        if c.is_zero():
            return self.zero_on(self.nds(x))
        if c.is_one():
            return x
        if isinstance(x, Sum):
            return self.canon(op_sum(*[scalar_mul(c, t) for t in x.terms]))
        if isinstance(x, Block):
            return self.canon(
                block([[scalar_mul(c, x.rows[i][j]) for j in range(x.n)] for i in range(x.n)])
            )
        return self._apply_single_subst(scalar_mul(c, x))

    # -- sums ----------------------------------------------------------------

    def _as_block(self, t, n, comp):
        if isinstance(t, Block):
            return t if (t.n == n and t.comp_space is comp) else None
        c, core = _split_scalar(t)
        if isinstance(core, Identity):
            z = zero(comp)
            d = identity(comp) if c.is_one() else scalar_mul(c, identity(comp))
            return block([[d if i == j else z for j in range(n)] for i in range(n)])
        if isinstance(core, Zero):
            z = zero(comp)
            return block([[z] * n for _ in range(n)])
        return None

    def _sum_step(self, e):
        terms = [self.canon(t) for t in e.terms]
        # merge blockwise when every term can be seen as a block of one shape
        blocks = [t for t in terms if isinstance(t, Block)]
        if blocks:
            n, comp = blocks[0].n, blocks[0].comp_space
            lifted = [self._as_block(t, n, comp) for t in terms]
            if all(b is not None for b in lifted):
                rows = [
                    [op_sum(*[b.rows[i][j] for b in lifted]) for j in range(n)]
                    for i in range(n)
                ]
                return self.canon(block(rows))
        zero_doms = []
        groups = {}
        order = []
        for t in terms:
            if isinstance(t, Zero):
                continue
            if is_zeroish(t):
                zero_doms.append(self.nds(t))
                continue
            c, core = _split_scalar(t)
            g = groups.get(id(core))
            if g is None:
                groups[id(core)] = [c]
                order.append(core)
            else:
                g[0] = g[0] + c
        live = []
        for core in sorted(order, key=lambda x: x.skey):
            c = groups[id(core)][0]
            if c.is_zero():
                zero_doms.append(self.nds(core))
            elif c.is_one():
                live.append(core)
            else:
                live.append(scalar_mul(c, core))
        if not live:
            if not zero_doms:
                return zero(e.space)
            return self.zero_on(dom_inter(*zero_doms))
        out = live[0] if len(live) == 1 else op_sum(*live)
        if zero_doms:
            return self.canon(restrict(out, dom_inter(*zero_doms)))
        return out

    # -- products --------------------------------------------------------------

    def _product_step(self, e):
        sp = e.space
        scal = ONE
        fs = []
        for f in e.factors:
            f = self.canon(f)
            c, core = _split_scalar(f)
            scal = scal * c
            if isinstance(core, Product):
                fs.extend(core.factors)
            elif isinstance(core, Identity):
                continue
            else:
                fs.append(core)
        # a zero factor kills the action; the domain is the full composition's
        if any(is_zeroish(f) for f in fs):
            chain = fs[0] if len(fs) == 1 else product(*fs)
            return self.zero_on(natural_domain(chain))
        if not fs:
            base = identity(sp)
            return base if scal.is_one() else scalar_mul(scal, base)

        fs = self._cancel_inverses(fs)
        fs = self._apply_product_subst(fs)

        # distribute over a sum factor: X o (S+T) o Y = X o S o Y + X o T o Y,
        # sound whenever everything applied after the sum (to its left) is
        # everywhere defined; always sound when the sum is leftmost
        for k, f in enumerate(fs):
            if isinstance(f, Sum) and all(self._ewd(g) for g in fs[:k]):
                terms = []
                for t in f.terms:
                    seq = fs[:k] + [t] + fs[k + 1 :]
                    terms.append(seq[0] if len(seq) == 1 else product(*seq))
                out = op_sum(*terms)
                if not scal.is_one():
                    out = scalar_mul(scal, out)
                return self.canon(out)

        fs = self._expand_block_pairs(fs)

        out = fs[0] if len(fs) == 1 else product(*fs)
        if not scal.is_one():
            out = scalar_mul(scal, out)
        return out

    def _cancel_inverses(self, fs):
        i = 0
        while i + 1 < len(fs):
            a, b = fs[i], fs[i + 1]
            if isinstance(a, Inverse) and a.child is b and self.ctx.prop(b, "injective"):
                fs = fs[:i] + [self.identity_on(self.nds(b))] + fs[i + 2 :]
                continue
            if isinstance(b, Inverse) and b.child is a and self.ctx.prop(a, "injective"):
                ran = dm.simplify_domain(dm.dom_range(a), self.ctx)
                fs = fs[:i] + [self.identity_on(ran)] + fs[i + 2 :]
                continue
            i += 1
        # identity_on may have produced plain Identity factors; drop them
        return [f for f in fs if not isinstance(f, Identity)] or fs

    def _apply_product_subst(self, fs):
        table = self._subst_table()
        if not table:
            return fs
        changed = True
        guard = 0
        while changed and guard < 50:
            changed = False
            guard += 1
            for pat, rep in table:
                L = len(pat)
                if L > len(fs):
                    continue
                for i in range(len(fs) - L + 1):
                    if all(fs[i + k] is pat[k] for k in range(L)):
                        repl = list(rep.factors) if isinstance(rep, Product) else [rep]
                        fs = fs[:i] + repl + fs[i + L :]
                        changed = True
                        break
                if changed:
                    break
        return fs

    def _expand_block_pairs(self, fs):
        i = 0
        while i + 1 < len(fs):
            a, b = fs[i], fs[i + 1]
            if (
                isinstance(a, Block)
                and isinstance(b, Block)
                and a.n == b.n
                and a.comp_space is b.comp_space
                and self._block_product_licensed(a, b)
            ):
                n = a.n
                rows = [
                    [
                        op_sum(*[product(a.rows[r][k], b.rows[k][c]) for k in range(n)])
                        for c in range(n)
                    ]
                    for r in range(n)
                ]
                fs = fs[:i] + [self.canon(block(rows))] + fs[i + 2 :]
                continue
            i += 1
        return fs

    def _ewd(self, f) -> bool:
        return dm.is_full_dom(natural_domain(f), self.ctx)

    def _block_product_licensed(self, a, b) -> bool:
        for k in range(a.n):
            col_ok = all(self._ewd(a.rows[i][k]) for i in range(a.n))
            if col_ok:
                continue
            live = sum(1 for j in range(b.n) if not is_zeroish(b.rows[k][j]))
            if live > 1:
                return False
        return True

    # -- blocks ------------------------------------------------------------------

    def _block_step(self, e):
        rows = [[self.canon(x) for x in row] for row in e.rows]
        n = e.n
        flat = [x for row in rows for x in row]
        if all(is_zeroish(x) for x in flat):
            return self.zero_on(natural_domain(block(rows)))
        if all(
            (is_identityish(rows[i][j]) if i == j else is_zeroish(rows[i][j]))
            for i in range(n)
            for j in range(n)
        ):
            return self.identity_on(natural_domain(block(rows)))
        # drop entry-level restrictions already forced by the column domain
        for j in range(n):
            for i in range(n):
                x = rows[i][j]
                if not isinstance(x, Restrict):
                    continue
                others = [natural_domain(rows[k][j]) for k in range(n) if k != i]
                implied = dom_inter(*(others + [natural_domain(x.child)]))
                if self._contains(implied, x.dom):
                    rows[i][j] = x.child
        return block(rows)

    # -- restrictions ---------------------------------------------------------------

    def _restrict_step(self, e):
        x = self.canon(e.child)
        d = dm.simplify_domain(e.dom, self.ctx)
        if isinstance(x, Restrict):
            return self.canon(restrict(x.child, dom_inter(x.dom, d)))
        if isinstance(x, ScalarMul):
            return self.canon(scalar_mul(x.c, restrict(x.child, d)))
        if dm._struct_full(d):
            return x
        if self._contains(natural_domain(x), d):
            return x
        return restrict(x, d)

    # -- adjoints, closures, inverses ---------------------------------------------------

    def _adjoint_step(self, e):
        x = self.canon(e.child)
        if isinstance(x, Identity):
            return x
        if isinstance(x, Zero):
            return x
        if isinstance(x, Atom) and self.ctx.prop(x, "self-adjoint"):
            return x
        if isinstance(x, ScalarMul) and not x.c.is_zero():
            if self._densely_defined(x.child):
                return self.canon(scalar_mul(x.c.conjugate(), mk_adjoint(x.child)))
        if isinstance(x, Adjoint):
            y = x.child
            if self.ctx.prop(y, "closed") and self._densely_defined(y):
                return y  # T** = T for closed densely defined T
        if isinstance(x, Restrict):
            dense, _ = dm.dom_dense(x.dom, self.ctx)
            if dense and isinstance(x.child, (Identity, Zero)):
                return x.child  # (I_D)* = I and (0_D)* = 0 for dense D
        return mk_adjoint(x)

    def _closure_step(self, e):
        x = self.canon(e.child)
        if self.ctx.prop(x, "closed"):
            return x
        if isinstance(x, Restrict):
            dense, _ = dm.dom_dense(x.dom, self.ctx)
            if dense:
                y = x.child
                if isinstance(y, (Identity, Zero)):
                    return y
                if self.ctx.prop(y, "bounded") and self._ewd(y):
                    return y  # unique continuous extension of a bounded restriction
        return mk_closure(x)

    def _inverse_step(self, e):
        x = self.canon(e.child)
        if isinstance(x, Identity):
            return x
        if isinstance(x, ScalarMul) and not x.c.is_zero():
            return self.canon(scalar_mul(x.c.inverse(), mk_inverse(x.child)))
        if isinstance(x, Inverse) and self.ctx.prop(x.child, "injective"):
            return x.child
        return mk_inverse(x)

    def _densely_defined(self, x) -> bool:
        v, _ = dm.dom_dense(natural_domain(x), self.ctx)
        return bool(v)


def normalize(e: OperatorExpr, facts=None, ctx=None) -> OperatorExpr:
    """Rewrite e to canonical form without changing it as an operator."""
    if ctx is None:
        from .facts import EMPTY

        ctx = dm.base_ctx(facts if facts is not None else EMPTY)
    return Normalizer(ctx).canon(e)
