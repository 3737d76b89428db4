"""Finite-dimensional verification backend.

Operator expressions are instantiated as concrete matrices over exact
Gaussian-rational scalars and claims are replayed on them.  Sampling is
constraint-aware: algebraic side conditions (square zero, involution,
idempotent, self-adjoint, invertible) are built in exactly, usually by
conjugating a canonical witness with a unimodular integer matrix, so an
identity that the engine proved must come out with residual exactly zero.

Anything not finitely observable (closability, unboundedness, domain
comparisons, spectra of unbounded operators) is reported Inapplicable
rather than guessed at.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace
from fractions import Fraction
from math import lcm

import numpy as np
from scipy import sparse

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
    to_text,
)
from .facts import HasProp, IdentityOn
from .scalars import ONE, Scalar, format_scalar

HOLDS = "Holds"
FAILS = "Fails"
INAPPLICABLE = "Inapplicable"


class EvalError(Exception):
    pass


class NotEvaluable(Exception):
    """Expression contains a node with no finite-dimensional meaning."""


class SampleError(Exception):
    """No assignment satisfying the declared constraints could be built."""


# -- exact matrices ---------------------------------------------------------------
# numpy object arrays with Scalar entries; numpy is the container, the
# arithmetic is exact


def mat(rows) -> np.ndarray:
    out = np.empty((len(rows), len(rows[0])), dtype=object)
    for i, r in enumerate(rows):
        for j, v in enumerate(r):
            out[i, j] = v if isinstance(v, Scalar) else Scalar.of(v)
    return out


def eye_mat(n: int) -> np.ndarray:
    return mat([[1 if i == j else 0 for j in range(n)] for i in range(n)])


def zeros_mat(n: int, m: int | None = None) -> np.ndarray:
    return mat([[0] * (m or n) for _ in range(n)])


def _scaled_view(a: np.ndarray):
    """(re, im, den): integer numerator matrices over one denominator.

    Chained products over plain Python ints avoid the per-operation gcd
    cost of Fractions while staying exact at any magnitude; im is None
    for real matrices so real chains cost one matmul per step, not four.
    """
    den = 1
    for i in range(a.shape[0]):
        for j in range(a.shape[1]):
            s = a[i, j]
            den = lcm(den, s.re.denominator, s.im.denominator)
    re = np.empty(a.shape, dtype=object)
    im = np.empty(a.shape, dtype=object)
    has_im = False
    for i in range(a.shape[0]):
        for j in range(a.shape[1]):
            s = a[i, j]
            re[i, j] = s.re.numerator * (den // s.re.denominator)
            v = s.im.numerator * (den // s.im.denominator)
            im[i, j] = v
            has_im = has_im or v != 0
    return re, (im if has_im else None), den


def _from_scaled(re, im, den) -> np.ndarray:
    out = np.empty(re.shape, dtype=object)
    for i in range(re.shape[0]):
        for j in range(re.shape[1]):
            out[i, j] = Scalar(
                Fraction(int(re[i, j]), den),
                Fraction(int(im[i, j]) if im is not None else 0, den),
            )
    return out


def mat_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a.dot(b)


def mat_chain(mats) -> np.ndarray:
    """Product of a list of exact matrices via integer numerators."""
    if len(mats) == 1:
        return mats[0]
    ar, ai, ad = _scaled_view(mats[0])
    for m in mats[1:]:
        br, bi, bd = _scaled_view(m)
        rr = ar.dot(br)
        if ai is None and bi is None:
            ar, ai = rr, None
        else:
            ii = ai.dot(bi) if (ai is not None and bi is not None) else None
            ri = ar.dot(bi) if bi is not None else None
            ir = ai.dot(br) if ai is not None else None
            ar = rr - ii if ii is not None else rr
            if ri is None:
                ai = ir
            elif ir is None:
                ai = ri
            else:
                ai = ri + ir
        ad *= bd
    return _from_scaled(ar, ai, ad)


def mat_add(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a + b


def mat_scale(c: Scalar, a: np.ndarray) -> np.ndarray:
    out = np.empty_like(a)
    for i in range(a.shape[0]):
        for j in range(a.shape[1]):
            out[i, j] = c * a[i, j]
    return out


def conj_transpose(a: np.ndarray) -> np.ndarray:
    out = np.empty((a.shape[1], a.shape[0]), dtype=object)
    for i in range(a.shape[0]):
        for j in range(a.shape[1]):
            out[j, i] = a[i, j].conjugate()
    return out


def mat_eq(a: np.ndarray, b: np.ndarray) -> bool:
    if a.shape != b.shape:
        return False
    return all(
        a[i, j] == b[i, j] for i in range(a.shape[0]) for j in range(a.shape[1])
    )


def first_diff(a: np.ndarray, b: np.ndarray):
    """1-indexed position and value of the first differing entry."""
    for i in range(a.shape[0]):
        for j in range(a.shape[1]):
            if a[i, j] != b[i, j]:
                d = a[i, j] - b[i, j]
                return (i + 1, j + 1), d
    return None, None


def is_zero_mat(a: np.ndarray) -> bool:
    return all(a[i, j].is_zero() for i in range(a.shape[0]) for j in range(a.shape[1]))


def max_abs(a: np.ndarray) -> float:
    return max(
        (abs(a[i, j]) for i in range(a.shape[0]) for j in range(a.shape[1])),
        default=0.0,
    )


def to_complex(a: np.ndarray) -> np.ndarray:
    out = np.empty(a.shape, dtype=np.complex128)
    for i in range(a.shape[0]):
        for j in range(a.shape[1]):
            out[i, j] = complex(a[i, j])
    return out


def exact_inverse(a: np.ndarray) -> np.ndarray:
    """Gauss-Jordan over the exact scalars; raises EvalError if singular."""
    n = a.shape[0]
    if a.shape[1] != n:
        raise EvalError("inverse of a non-square matrix")
    work = a.copy()
    inv = eye_mat(n)
    for col in range(n):
        piv = next(
            (r for r in range(col, n) if not work[r, col].is_zero()), None
        )
        if piv is None:
            raise EvalError("singular matrix")
        if piv != col:
            work[[col, piv]] = work[[piv, col]]
            inv[[col, piv]] = inv[[piv, col]]
        p = work[col, col].inverse()
        for j in range(n):
            work[col, j] = p * work[col, j]
            inv[col, j] = p * inv[col, j]
        for r in range(n):
            if r == col or work[r, col].is_zero():
                continue
            f = work[r, col]
            for j in range(n):
                work[r, j] = work[r, j] - f * work[col, j]
                inv[r, j] = inv[r, j] - f * inv[col, j]
    return inv


def matrix_to_json(a: np.ndarray):
    """Exact JSON form: entries as [re, im] strings like '3/4'."""
    return [
        [
            [str(a[i, j].re), str(a[i, j].im)]
            for j in range(a.shape[1])
        ]
        for i in range(a.shape[0])
    ]


def matrix_from_json(rows) -> np.ndarray:
    return mat(
        [[Scalar(Fraction(re), Fraction(im)) for re, im in r] for r in rows]
    )


# -- assignments -------------------------------------------------------------------


@dataclass(frozen=True)
class MatrixAssignment:
    dim_map: dict  # unit space name -> dimension
    atom_map: dict  # atom name -> exact matrix
    seed: int
    constraint_log: tuple = ()


def space_dim(sp, a: MatrixAssignment) -> int:
    try:
        unit = a.dim_map[sp.name]
    except KeyError:
        raise EvalError(f"no dimension assigned to space {sp.name}")
    return unit * sp.arity


def evaluate(e: OperatorExpr, a: MatrixAssignment) -> np.ndarray:
    """Exact matrix semantics.  Closure is transparent (finite-dimensional
    operators are closed); Restrict has no finite meaning and raises."""
    if isinstance(e, Atom):
        try:
            return a.atom_map[e.name]
        except KeyError:
            raise EvalError(f"atom {e.name} has no assigned matrix")
    if isinstance(e, Identity):
        return eye_mat(space_dim(e.space, a))
    if isinstance(e, Zero):
        return zeros_mat(space_dim(e.space, a))
    if isinstance(e, ScalarMul):
        return mat_scale(e.c, evaluate(e.child, a))
    if isinstance(e, Sum):
        terms = [evaluate(t, a) for t in e.terms]
        out = terms[0]
        for t in terms[1:]:
            out = mat_add(out, t)
        return out
    if isinstance(e, Product):
        return mat_chain([evaluate(f, a) for f in e.factors])
    if isinstance(e, Adjoint):
        return conj_transpose(evaluate(e.child, a))
    if isinstance(e, Closure):
        return evaluate(e.child, a)
    if isinstance(e, Inverse):
        try:
            return exact_inverse(evaluate(e.child, a))
        except EvalError:
            raise EvalError(f"singular under inversion: {to_text(e.child)}")
    if isinstance(e, Block):
        rows = []
        for i in range(e.n):
            rows.append([evaluate(x, a) for x in e.rows[i]])
        return _assemble(rows)
    if isinstance(e, Restrict):
        raise NotEvaluable(
            f"restriction has no finite-dimensional meaning: {to_text(e)}"
        )
    raise EvalError(f"cannot evaluate {type(e).__name__}")


def _assemble(rows) -> np.ndarray:
    heights = [r[0].shape[0] for r in rows]
    widths = [x.shape[1] for x in rows[0]]
    out = zeros_mat(sum(heights), sum(widths))
    oi = 0
    for i, r in enumerate(rows):
        oj = 0
        for j, x in enumerate(r):
            out[oi : oi + x.shape[0], oj : oj + x.shape[1]] = x
            oj += x.shape[1]
        oi += heights[i]
    return out


# -- constrained sampling -----------------------------------------------------------


def _unimodular(rng: random.Random, n: int):
    """Integer matrix with determinant 1, returned with its exact inverse."""
    u = eye_mat(n)
    uinv = eye_mat(n)
    for _ in range(2 * n + 2):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if i == j:
            continue
        c = Scalar.of(rng.choice([-2, -1, 1, 2]))
        # row op on u, matching inverse column op on uinv
        for k in range(n):
            u[i, k] = u[i, k] + c * u[j, k]
        for k in range(n):
            uinv[k, j] = uinv[k, j] - c * uinv[k, i]
    return u, uinv


def _conjugate(rng, core) -> np.ndarray:
    n = core.shape[0]
    u, uinv = _unimodular(rng, n)
    return mat_mul(mat_mul(u, core), uinv)


def _rand_int_mat(rng, n, m=None, lo=-3, hi=3):
    m = m or n
    return mat([[rng.randint(lo, hi) for _ in range(m)] for _ in range(n)])


def sample_matrix(strategy: str, dim: int, rng: random.Random) -> np.ndarray:
    if strategy == "generic":
        return _rand_int_mat(rng, dim)
    if strategy == "square-zero":
        if dim < 2:
            raise SampleError("square-zero needs dimension at least 2")
        k = dim // 2
        core = zeros_mat(dim)
        block = _rand_int_mat(rng, k, dim - k)
        # nonzero corner keeps the sample away from the zero operator
        if is_zero_mat(block):
            block[0, 0] = ONE
        core[:k, k:] = block
        return _conjugate(rng, core)
    if strategy == "involution":
        core = zeros_mat(dim)
        for i in range(dim):
            core[i, i] = Scalar.of(rng.choice([-1, 1]))
        return _conjugate(rng, core)
    if strategy == "idempotent":
        core = zeros_mat(dim)
        for i in range(dim):
            core[i, i] = Scalar.of(rng.choice([0, 1]))
        return _conjugate(rng, core)
    if strategy == "self-adjoint":
        m = _rand_int_mat(rng, dim)
        return mat_add(m, conj_transpose(m))
    if strategy == "invertible":
        u, _ = _unimodular(rng, dim)
        return u
    if strategy == "l2-shift":
        if dim > 128:
            raise SampleError("dense truncation capped at 128; use l2_truncation")
        return mat(
            [
                [
                    (j + 2) // 2 if (i % 2 == 0 and j == i + 1) else 0
                    for j in range(dim)
                ]
                for i in range(dim)
            ]
        )
    if strategy.startswith("nilpotent-"):
        k = int(strategy.split("-", 1)[1])
        if k > dim:
            raise SampleError(f"nilpotency index {k} exceeds dimension {dim}")
        core = zeros_mat(dim)
        for i in range(k - 1):
            core[i, i + 1] = ONE
        return _conjugate(rng, core)
    raise SampleError(f"unknown sampling strategy: {strategy}")


def sample_pair(strategy: str, dim: int, rng: random.Random):
    if strategy == "inverse-pair":
        u, uinv = _unimodular(rng, dim)
        return u, uinv
    if strategy == "annihilating":
        # a*b = 0 with b*a != 0: strictly-upper against upper-left corner
        if dim < 2:
            raise SampleError("annihilating pair needs dimension at least 2")
        k = dim // 2
        u, uinv = _unimodular(rng, dim)
        a_core = zeros_mat(dim)
        top = _rand_int_mat(rng, k, dim - k)
        if is_zero_mat(top):
            top[0, 0] = ONE
        a_core[:k, k:] = top
        b_core = zeros_mat(dim)
        for i in range(k):
            b_core[i, i] = ONE
        a = mat_mul(mat_mul(u, a_core), uinv)
        b = mat_mul(mat_mul(u, b_core), uinv)
        return a, b
    if strategy == "commuting":
        m = _rand_int_mat(rng, dim, lo=-2, hi=2)
        def poly(coeffs):
            out = zeros_mat(dim)
            p = eye_mat(dim)
            for c in coeffs:
                out = mat_add(out, mat_scale(Scalar.of(c), p))
                p = mat_mul(p, m)
            return out
        a = poly([rng.randint(-2, 2) for _ in range(3)])
        b = poly([rng.randint(-2, 2) for _ in range(3)])
        return a, b
    raise SampleError(f"unknown pair strategy: {strategy}")


def infer_samplers(atoms, facts) -> tuple:
    """Derive sampling strategies from declared algebraic facts.

    Used for script-defined problems, which state facts but no explicit
    sampling plan.  Returns ((atom names, strategy), ...); anything not
    covered falls back to generic sampling, and a fact no strategy can
    honor surfaces later as a SampleError."""
    out = []
    taken = set()

    def claim_names(*names):
        if any(n in taken for n in names):
            return False
        taken.update(names)
        return True

    for f in facts:
        if not (isinstance(f, IdentityOn) and f.on is None):
            continue
        l, r = f.lhs, f.rhs
        if isinstance(l, Product) and all(isinstance(g, Atom) for g in l.factors):
            names = [g.name for g in l.factors]
            same = all(g is l.factors[0] for g in l.factors)
            k = len(l.factors)
            if same:
                nm = names[0]
                if isinstance(r, Zero):
                    strat = "square-zero" if k == 2 else f"nilpotent-{k}"
                    if claim_names(nm):
                        out.append(((nm,), strat))
                elif isinstance(r, Identity) and k == 2:
                    if claim_names(nm):
                        out.append(((nm,), "involution"))
                elif r is l.factors[0] and k == 2:
                    if claim_names(nm):
                        out.append(((nm,), "idempotent"))
            elif k == 2 and len(set(names)) == 2:
                if isinstance(r, Identity) and claim_names(*names):
                    out.append(((names[0], names[1]), "inverse-pair"))
                elif isinstance(r, Zero) and claim_names(*names):
                    out.append(((names[0], names[1]), "annihilating"))
    for a in atoms:
        if a.name in taken:
            continue
        if "self-adjoint" in a.flags or "symmetric" in a.flags:
            taken.add(a.name)
            out.append(((a.name,), "self-adjoint"))
    return tuple(out)


def sample_assignment(con, dim: int, seed: int) -> MatrixAssignment:
    """Build matrices for every atom of a construction, honoring its
    samplers and fixed assignment, then validate the declared facts."""
    rng = random.Random(seed)
    atom_map = {}
    log = []
    unit = dim
    if con.fixed_assignment:
        for name, rows in con.fixed_assignment.items():
            atom_map[name] = mat(rows)
            unit = atom_map[name].shape[0]
            log.append(f"{name}: fixed integer witness")
    strategies = {}
    for names, strat in con.samplers:
        if len(names) == 2 and strat in ("inverse-pair", "commuting", "annihilating"):
            a, b = sample_pair(strat, unit, rng)
            atom_map[names[0]], atom_map[names[1]] = a, b
            log.append(f"{names[0]},{names[1]}: {strat}")
            continue
        for nm in names:
            strategies[nm] = strat
    for at in con.atoms:
        if at.name in atom_map:
            continue
        strat = strategies.get(at.name, "generic")
        atom_map[at.name] = sample_matrix(strat, unit, rng)
        log.append(f"{at.name}: {strat}")
    a = MatrixAssignment(
        dim_map={con.space.name: unit},
        atom_map=atom_map,
        seed=seed,
        constraint_log=tuple(log),
    )
    checked = _validate_facts(con, a)
    return replace(a, constraint_log=a.constraint_log + checked)


def _validate_facts(con, a: MatrixAssignment) -> tuple:
    """Declared algebraic facts must hold exactly for the sample."""
    checked = []
    for f in con.facts:
        if isinstance(f, IdentityOn) and f.on is None:
            try:
                lm, rm = evaluate(f.lhs, a), evaluate(f.rhs, a)
            except NotEvaluable:
                continue
            if not mat_eq(lm, rm):
                raise SampleError(
                    f"sample violates declared fact "
                    f"{to_text(f.lhs)} = {to_text(f.rhs)}"
                )
            checked.append(f"{to_text(f.lhs)} = {to_text(f.rhs)}")
        elif isinstance(f, HasProp) and f.prop == "nonzero":
            try:
                m = evaluate(f.subject, a)
            except NotEvaluable:
                continue
            if is_zero_mat(m):
                raise SampleError(
                    f"sample violates declared fact {to_text(f.subject)} != 0"
                )
            checked.append(f"{to_text(f.subject)} != 0")
    for at in con.atoms:
        if "self-adjoint" in at.flags or "symmetric" in at.flags:
            m = a.atom_map[at.name]
            if not mat_eq(m, conj_transpose(m)):
                raise SampleError(f"sample for {at.name} is not self-adjoint")
            checked.append(f"{at.name} = adj({at.name})")
    return tuple(checked)


# -- claim verification --------------------------------------------------------------


@dataclass(frozen=True)
class VerifyReport:
    claim: object
    verdict: str
    mode: str = "exact"
    trials: int = 0
    max_residual: float = 0.0
    witness: object = None  # ((i, j), value text, seed) for refuting entries
    detail: str = ""


_NOT_FINITE = (
    "property",
    "spectrum",
    "domains-equal",
    "domains-differ",
)


def _eval_claim_sides(c, a):
    lm = evaluate(c.lhs, a)
    rm = evaluate(c.rhs, a) if c.rhs is not None else None
    return lm, rm


def verify_claim(c, assignments) -> VerifyReport:
    """Replay one claim over a list of assignments (exact mode)."""
    if c.kind in _NOT_FINITE:
        return VerifyReport(
            c,
            INAPPLICABLE,
            detail="not finitely observable; left to the symbolic engine",
        )
    if c.via == "engine":
        return VerifyReport(
            c,
            INAPPLICABLE,
            detail=c.note or "symbolic-only claim",
        )
    if c.kind == "identity":
        for a in assignments:
            try:
                lm, rm = _eval_claim_sides(c, a)
            except NotEvaluable as ex:
                return VerifyReport(c, INAPPLICABLE, detail=str(ex))
            pos, d = first_diff(lm, rm)
            if pos is not None:
                return VerifyReport(
                    c,
                    FAILS,
                    trials=len(assignments),
                    max_residual=abs(d),
                    witness=(pos, format_scalar(d), a.seed),
                    detail=f"entry {pos} differs by {format_scalar(d)}",
                )
        return VerifyReport(
            c, HOLDS, trials=len(assignments), detail="residual exactly 0"
        )
    if c.kind == "not-identity":
        for a in assignments:
            try:
                lm, rm = _eval_claim_sides(c, a)
            except NotEvaluable as ex:
                return VerifyReport(c, INAPPLICABLE, detail=str(ex))
            pos, d = first_diff(lm, rm)
            if pos is not None:
                return VerifyReport(
                    c,
                    HOLDS,
                    trials=len(assignments),
                    max_residual=abs(d),
                    witness=(pos, format_scalar(d), a.seed),
                    detail=f"witness entry {pos} differs by {format_scalar(d)}",
                )
        return VerifyReport(
            c,
            FAILS,
            trials=len(assignments),
            detail="no trial separated the two sides",
        )
    if c.kind == "entrywise-nonzero":
        # the entries in question are operator entries: unit-dim sub-blocks
        # of the evaluated matrix, one per slot of the claim's block space
        grid = c.lhs.space.arity
        for a in assignments:
            try:
                m = evaluate(c.lhs, a)
            except NotEvaluable as ex:
                return VerifyReport(c, INAPPLICABLE, detail=str(ex))
            unit = m.shape[0] // grid
            for i in range(grid):
                for j in range(grid):
                    sub = m[i * unit : (i + 1) * unit, j * unit : (j + 1) * unit]
                    if is_zero_mat(sub):
                        return VerifyReport(
                            c,
                            FAILS,
                            trials=len(assignments),
                            witness=((i + 1, j + 1), "0", a.seed),
                            detail=f"operator entry ({i + 1},{j + 1}) vanishes",
                        )
        return VerifyReport(
            c, HOLDS, trials=len(assignments), detail="no entry vanishes, exactly"
        )
    if c.kind == "adjoint-is":
        for a in assignments:
            try:
                lm, rm = _eval_claim_sides(c, a)
            except NotEvaluable as ex:
                return VerifyReport(c, INAPPLICABLE, detail=str(ex))
            pos, d = first_diff(conj_transpose(lm), rm)
            if pos is not None:
                return VerifyReport(
                    c,
                    FAILS,
                    trials=len(assignments),
                    witness=(pos, format_scalar(d), a.seed),
                    detail=f"conjugate transpose differs at {pos}",
                )
        return VerifyReport(
            c, HOLDS, trials=len(assignments), detail="conjugate transpose matches"
        )
    return VerifyReport(c, INAPPLICABLE, detail=f"no finite check for {c.kind}")


def verify_construction(
    con,
    trials: int = 12,
    dim: int | None = None,
    seed: int = 0,
    tol: float = 1e-9,
):
    """One VerifyReport per claim, deterministic in the seed."""
    out = []
    if not con.numeric_ok:
        return [
            VerifyReport(
                c,
                INAPPLICABLE,
                detail="declared facts admit no finite-dimensional model",
            )
            for c in con.claims
        ]
    plain = [
        c
        for c in con.claims
        if c.kind not in ("truncation-nilpotent", "truncation-norm")
    ]
    assignments = []
    if plain:
        d = dim or con.default_dim
        try:
            assignments = [
                sample_assignment(con, d, seed + t) for t in range(trials)
            ]
        except SampleError as ex:
            return [
                VerifyReport(c, INAPPLICABLE, detail=str(ex)) for c in con.claims
            ]
    for c in con.claims:
        if c.kind == "truncation-nilpotent":
            out.append(_verify_truncation_square(c, con.default_dims))
        elif c.kind == "truncation-norm":
            out.append(_verify_truncation_norm(c, con.default_dims, tol=tol))
        else:
            out.append(verify_claim(c, assignments))
    return out


# -- spectra ---------------------------------------------------------------------


def charpoly_exact(m: np.ndarray):
    """Characteristic polynomial coefficients, leading first, exact.

    Faddeev-LeVerrier over the exact scalars.  Degenerate spectra come
    out with exactly degenerate coefficients, which is what makes root
    finding on them well conditioned (float eigensolvers lose eps**(1/k)
    digits on a k-fold defective eigenvalue)."""
    n = m.shape[0]
    coeffs = [Scalar.of(1)]
    work = m.copy()
    for k in range(1, n + 1):
        tr = Scalar.of(0)
        for i in range(n):
            tr = tr + work[i, i]
        c = tr * Scalar(Fraction(-1, k))
        coeffs.append(c)
        if k < n:
            shifted = work.copy()
            for i in range(n):
                shifted[i, i] = shifted[i, i] + c
            work = mat_mul(m, shifted)
    return coeffs


# polynomial helpers over exact scalars, coefficients leading first


def _poly_trim(p):
    k = 0
    while k < len(p) - 1 and p[k].is_zero():
        k += 1
    return p[k:]


def _poly_monic(p):
    inv = p[0].inverse()
    return [inv * c for c in p]


def _poly_deriv(p):
    n = len(p) - 1
    return _poly_trim([Scalar.of(n - i) * p[i] for i in range(n)]) if n else [Scalar.of(0)]


def _poly_divmod(a, b):
    a, b = list(_poly_trim(a)), _poly_trim(b)
    if len(b) == 1 and b[0].is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    if len(a) < len(b) or (len(a) == 1 and a[0].is_zero()):
        return [Scalar.of(0)], a
    binv = b[0].inverse()
    q = []
    for _ in range(len(a) - len(b) + 1):
        f = a[0] * binv
        q.append(f)
        for i in range(len(b)):
            a[i] = a[i] - f * b[i]
        a.pop(0)
    return q, _poly_trim(a or [Scalar.of(0)])


def _poly_gcd(a, b):
    a, b = _poly_trim(a), _poly_trim(b)
    while not (len(b) == 1 and b[0].is_zero()):
        _, r = _poly_divmod(a, b)
        a, b = b, r
    return _poly_monic(a) if not a[0].is_zero() else a


def _squarefree_factors(p):
    """Yun's decomposition [(factor, multiplicity), ...], factors monic
    and square-free.  Root finding on square-free exact factors is well
    conditioned; on the raw polynomial a k-fold root costs eps**(1/k)."""
    p = _poly_monic(_poly_trim(list(p)))
    if len(p) <= 1:
        return []
    dp = _poly_deriv(p)
    g = _poly_gcd(p, dp)
    if len(g) == 1:
        return [(p, 1)]
    c, _ = _poly_divmod(p, g)
    d, _ = _poly_divmod(dp, g)
    d = _poly_trim([x - y for x, y in _pad_pair(d, _poly_deriv(c))])
    out = []
    i = 1
    while len(c) > 1:
        g2 = _poly_gcd(c, d)
        if len(g2) > 1:
            out.append((g2, i))
        c, _ = _poly_divmod(c, g2)
        d2, _ = _poly_divmod(d, g2)
        d = _poly_trim([x - y for x, y in _pad_pair(d2, _poly_deriv(c))])
        i += 1
    return out


def _pad_pair(a, b):
    n = max(len(a), len(b))
    pa = [Scalar.of(0)] * (n - len(a)) + list(a)
    pb = [Scalar.of(0)] * (n - len(b)) + list(b)
    return zip(pa, pb)


def eigen_spectrum(m: np.ndarray):
    """Eigenvalue multiset.  Exact matrices go through the exact
    characteristic polynomial with square-free factoring, so repeated
    eigenvalues come out clean; float input uses the plain eigensolver."""
    if getattr(m, "dtype", None) == object:
        vals = []
        for f, mult in _squarefree_factors(charpoly_exact(m)):
            roots = np.roots(np.array([complex(c) for c in f]))
            vals.extend(list(roots) * mult)
        vals += [0j] * (m.shape[0] - len(vals))
        return sorted(vals, key=lambda z: (z.real, z.imag))
    c = np.asarray(m, dtype=np.complex128)
    return sorted(np.linalg.eigvals(c), key=lambda z: (z.real, z.imag))


def _greedy_match(xs, ys, tol):
    ys = list(ys)
    worst = 0.0
    for x in xs:
        best_i, best_d = None, None
        for i, y in enumerate(ys):
            d = abs(x - y)
            if best_d is None or d < best_d:
                best_i, best_d = i, d
        if best_d is None or best_d > tol:
            return False, best_d if best_d is not None else float("inf")
        worst = max(worst, best_d)
        ys.pop(best_i)
    return True, worst


def spectral_map_check(m: np.ndarray, n: int, tol: float = 1e-6) -> VerifyReport:
    """eig(m^n) must match {z^n : z in eig(m)} as multisets."""
    if getattr(m, "dtype", None) == object:
        base = eigen_spectrum(m)
        direct = eigen_spectrum(mat_chain([m] * n))
    else:
        c = np.asarray(m, dtype=np.complex128)
        base = eigen_spectrum(c)
        direct = eigen_spectrum(np.linalg.matrix_power(c, n))
    mapped = [z**n for z in base]
    scale = max(1.0, max(abs(z) for z in base) ** n) if base else 1.0
    ok, worst = _greedy_match(direct, mapped, tol * scale)
    return VerifyReport(
        claim=f"eig(m^{n}) = eig(m)^{n}",
        verdict=HOLDS if ok else FAILS,
        mode="float",
        trials=1,
        max_residual=worst,
        detail=f"multiset match within {tol * scale:g}"
        if ok
        else f"mismatch {worst:g} exceeds {tol * scale:g}",
    )


def cartesian_parts(m: np.ndarray):
    """Hermitian pair (Re, Im) with m = Re + i Im, exactly."""
    star = conj_transpose(m)
    half = Scalar(Fraction(1, 2))
    minus_i_half = Scalar(0, Fraction(-1, 2))
    re = mat_scale(half, mat_add(m, star))
    im = mat_scale(minus_i_half, mat_add(m, mat_scale(Scalar.of(-1), star)))
    return re, im


def rootless_check_2x2(target=None, samples: int = 4000, seed: int = 0) -> VerifyReport:
    """Decide whether some 2x2 complex X satisfies X^2 = target.

    For the canonical nilpotent target the closed argument applies: X^4 = 0
    forces X nilpotent, so X^2 = 0 and never the target.  A random search
    cross-checks by reporting the smallest residual it saw.
    """
    t = mat([[0, 1], [0, 0]]) if target is None else target
    if is_zero_mat(t):
        return VerifyReport(
            claim="X^2 = target has no solution",
            verdict=FAILS,
            trials=1,
            witness=((1, 1), "0", seed),
            detail="X = 0 is a square root of the zero matrix",
        )
    t2 = mat_mul(t, t)
    if not is_zero_mat(t2):
        return VerifyReport(
            claim="X^2 = target has no solution",
            verdict=INAPPLICABLE,
            detail="the nilpotency argument needs target^2 = 0",
        )
    # any root X would have X^4 = target^2 = 0, so X is nilpotent and
    # X^2 = 0 != target: rootless
    rng = random.Random(seed)
    tc = to_complex(t)
    best = float("inf")
    for _ in range(samples):
        x = np.array(
            [
                [complex(rng.uniform(-2, 2), rng.uniform(-2, 2)) for _ in range(2)]
                for _ in range(2)
            ]
        )
        best = min(best, float(np.max(np.abs(x @ x - tc))))
    return VerifyReport(
        claim="X^2 = target has no solution",
        verdict=HOLDS,
        mode="float",
        trials=samples,
        max_residual=best,
        detail=f"nilpotency argument; random search floor {best:.3g}",
    )


# -- the weighted pair shift and its truncations --------------------------------------


def l2_truncation(n: int):
    """N x N integer truncation: entry (2k-1, 2k) = k, 1-indexed."""
    if n < 2:
        raise ValueError("truncation size must be at least 2")
    rows, cols, vals = [], [], []
    k = 1
    while 2 * k <= n:
        rows.append(2 * k - 2)
        cols.append(2 * k - 1)
        vals.append(k)
        k += 1
    return sparse.csr_matrix(
        (np.array(vals, dtype=np.int64), (rows, cols)), shape=(n, n)
    )


def l2_square_zero(n: int) -> bool:
    a = l2_truncation(n)
    return (a @ a).count_nonzero() == 0


def l2_norm_exact(n: int) -> int:
    """The truncation has disjoint row and column supports, so its
    singular values are exactly its entries: the norm is the top weight."""
    return n // 2


def _verify_truncation_square(c, sizes) -> VerifyReport:
    for n in sizes:
        a = l2_truncation(n)
        nnz = (a @ a).count_nonzero()
        if nnz:
            return VerifyReport(
                c,
                FAILS,
                trials=len(sizes),
                detail=f"square of the size-{n} truncation has {nnz} nonzeros",
            )
    return VerifyReport(
        c,
        HOLDS,
        trials=len(sizes),
        detail=f"exact zero square at sizes {tuple(sizes)}",
    )


def _verify_truncation_norm(
    c, sizes, float_cap: int = 64, tol: float = 1e-9
) -> VerifyReport:
    worst = 0.0
    for n in sizes:
        expect = l2_norm_exact(n)
        if n <= float_cap:
            a = l2_truncation(n).toarray().astype(np.float64)
            top = float(np.linalg.svd(a, compute_uv=False)[0])
            worst = max(worst, abs(top - expect))
            if abs(top - expect) > tol * max(1, expect):
                return VerifyReport(
                    c,
                    FAILS,
                    mode="float",
                    trials=len(sizes),
                    max_residual=abs(top - expect),
                    detail=f"size {n}: svd top {top} != {expect}",
                )
    return VerifyReport(
        c,
        HOLDS,
        trials=len(sizes),
        max_residual=worst,
        detail=f"norm floor(N/2) at sizes {tuple(sizes)}; "
        f"svd cross-check within {worst:.2g}",
    )
