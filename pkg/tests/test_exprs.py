"""Expression layer: interning, constructors, rendering, natural domains."""

import pytest

from opdom.exprs import (
    Atom,
    Block,
    ExprError,
    Product,
    adjoint,
    adjoint_times,
    atom,
    atoms_of,
    block,
    block_diag,
    closure,
    dom_full,
    dom_inter,
    dom_named,
    dom_prod,
    dom_text,
    dom_trivial,
    identity,
    inverse,
    natural_domain,
    op_sum,
    power,
    product,
    restrict,
    scalar_mul,
    space,
    to_text,
    zero,
)


def test_interning_gives_identity_equality():
    assert atom("A") is atom("A")
    assert atom("A") is not atom("B")
    a = atom("A")
    assert product(a, a) is product(a, a)
    assert op_sum(a, identity()) is op_sum(a, identity())
    assert power(a, 3) is product(a, a, a)


def test_atom_flags_distinguish():
    assert atom("A") is not atom("A", flags=("bounded",))
    assert atom("A", flags=("bounded",)).flags == frozenset({"bounded"})
    # flag order does not matter for interning
    assert atom("A", flags=("bounded", "closed")) is atom("A", flags=("closed", "bounded"))


def test_unknown_flag_rejected():
    with pytest.raises(ExprError):
        atom("A", flags=("smooth",))


def test_power_requires_positive_exponent():
    a = atom("A")
    with pytest.raises(ExprError):
        power(a, 0)
    with pytest.raises(ExprError):
        power(a, -2)


def test_spaces_and_blocks():
    a, b = atom("A"), atom("B")
    t = block([[a, identity()], [zero(), b]])
    assert isinstance(t, Block)
    assert t.n == 2
    assert t.space.arity == 2
    assert t.space.name == "H"


def test_block_shape_validated():
    a = atom("A")
    with pytest.raises(ExprError):
        block([[a, a], [a]])


def test_block_diag():
    a, b = atom("A"), atom("B")
    d = block_diag(a, b)
    assert isinstance(d, Block)
    assert d.rows[0][0] is a
    assert d.rows[1][1] is b
    assert to_text(d) == "[[A, 0],[0, B]]"


def test_mixed_space_sum_rejected():
    a = atom("A")
    t = block([[a, a], [a, a]])
    with pytest.raises(ExprError):
        op_sum(a, t)


def test_text_rendering():
    a, b = atom("A"), atom("B")
    assert to_text(power(a, 3)) == "A^3"
    assert to_text(product(a, b, a)) == "A*B*A"
    assert to_text(op_sum(a, scalar_mul(-1, b))) == "A + -1*B"
    assert to_text(scalar_mul(-1, power(a, 2))) == "-1*A^2"
    assert to_text(adjoint(a)) == "adj(A)"
    assert to_text(closure(a)) == "clo(A)"
    assert to_text(inverse(a)) == "inv(A)"
    assert to_text(block([[a, identity()], [identity(), scalar_mul(-1, a)]])) == (
        "[[A, I],[I, -1*A]]"
    )


def test_product_needs_one_factor():
    with pytest.raises(ExprError):
        product()


def test_atoms_of_walks_everything():
    a, b, c = atom("A"), atom("B"), atom("C")
    e = block([[product(a, b), identity()], [zero(), adjoint(c)]])
    assert set(atoms_of(e)) == {a, b, c}
    # encounter order, no duplicates
    assert atoms_of(product(b, a, b)) == [b, a]


def test_adjoint_times():
    a = atom("A")
    assert adjoint_times(a, 0) is a
    assert adjoint_times(a, 2) is adjoint(adjoint(a))


def test_domain_text_forms():
    a, b = atom("A"), atom("B")
    assert dom_text(dom_full(space("H"))) == "full"
    assert dom_text(dom_trivial(space("H"))) == "{0}"
    assert dom_text(dom_named(a, 0)) == "D(A)"
    assert dom_text(dom_named(a, 1)) == "D(A*)"
    assert dom_text(dom_named(a, 2)) == "D(A**)"
    assert dom_text(dom_inter(dom_named(a, 0), dom_named(b, 0))) == "D(A) & D(B)"
    assert dom_text(dom_prod(dom_full(space("H")), dom_named(a, 0))) == "full oplus D(A)"


def test_natural_domains():
    a, b = atom("A"), atom("B")
    assert dom_text(natural_domain(a)) == "D(A)"
    assert dom_text(natural_domain(identity())) == "full"
    assert dom_text(natural_domain(op_sum(a, b))) == "D(A) & D(B)"
    # product applies the right factor first
    assert dom_text(natural_domain(product(a, b))) == "pull(B; D(A); D(B))"
    t = block([[a, identity()], [zero(), b]])
    assert dom_text(natural_domain(t)) == "D(A) oplus D(B)"


def test_restrict_narrows_domain():
    a = atom("A")
    r = restrict(a, dom_trivial(space("H")))
    assert dom_text(natural_domain(r)) == "{0}"
    assert to_text(r) == "restr(A, {0})"


def test_identical_factors_render_as_power_inside_products():
    a, b = atom("A"), atom("B")
    assert to_text(product(a, a, b)) == "A*A*B"  # only a pure power collapses
    assert to_text(product(a, a)) == "A^2"
