"""opdom: symbolic domain tracking and exact numeric checks for
block constructions over unbounded Hilbert-space operators.

The package keeps the distinction between an operator identity that
holds on a natural (possibly proper) domain and one that holds
everywhere, tracks domains through sums, products, blocks, adjoints,
closures and inverses, and backs the symbolic verdicts with exact
finite-dimensional sampling where that is meaningful.

Three-valued throughout: Proved / Refuted / Unknown symbolically,
Holds / Fails / Inapplicable numerically.  Unknown is never success.
"""

from .constructions import (
    CATALOG,
    Claim,
    Construction,
    build,
    catalog_names,
    check_construction,
    suggest,
)
from .dsl import Script, SyntaxErr, construction_script, emit, parse, run, run_construction
from .engine import Engine, RULES, derivation_lines
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
    adjoint,
    atom,
    block,
    block_diag,
    closure,
    dom_full,
    dom_inter,
    dom_named,
    dom_prod,
    dom_range,
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
from .facts import (
    DomainEq,
    DomainSubset,
    Extends,
    FactBase,
    HasProp,
    IdentityOn,
    InconsistentFacts,
    LacksProp,
    SpectrumIs,
    SpectrumNot,
    dense,
    not_dense,
)
from .numeric import (
    MatrixAssignment,
    VerifyReport,
    evaluate,
    sample_assignment,
    spectral_map_check,
    verify_claim,
    verify_construction,
)
from .scalars import Scalar, parse_scalar

__version__ = "0.1.0"

__all__ = [
    "Adjoint",
    "Atom",
    "Block",
    "CATALOG",
    "Claim",
    "Closure",
    "Construction",
    "DomainEq",
    "DomainSubset",
    "Engine",
    "Extends",
    "FactBase",
    "HasProp",
    "Identity",
    "IdentityOn",
    "InconsistentFacts",
    "Inverse",
    "LacksProp",
    "MatrixAssignment",
    "OperatorExpr",
    "Product",
    "RULES",
    "Restrict",
    "Scalar",
    "ScalarMul",
    "Script",
    "SpectrumIs",
    "SpectrumNot",
    "Sum",
    "SyntaxErr",
    "VerifyReport",
    "Zero",
    "adjoint",
    "atom",
    "block",
    "block_diag",
    "build",
    "catalog_names",
    "check_construction",
    "closure",
    "construction_script",
    "dense",
    "derivation_lines",
    "dom_full",
    "dom_inter",
    "dom_named",
    "dom_prod",
    "dom_range",
    "dom_text",
    "dom_trivial",
    "emit",
    "evaluate",
    "identity",
    "inverse",
    "natural_domain",
    "not_dense",
    "op_sum",
    "parse",
    "parse_scalar",
    "power",
    "product",
    "restrict",
    "run",
    "run_construction",
    "sample_assignment",
    "scalar_mul",
    "space",
    "spectral_map_check",
    "suggest",
    "to_text",
    "verify_claim",
    "verify_construction",
    "zero",
]
