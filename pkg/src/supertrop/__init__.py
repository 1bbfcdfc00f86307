"""Exact computer algebra for supertropical (ghost-augmented max-plus)
commutative algebra: element arithmetic, polynomial canonical forms and
factorization, ghost-locus geometry in the plane, and a finite-semiring
congruence engine with nu-prime spectra, radicals, quotients, localizations
and structure-sheaf sections."""

from supertrop.core import (
    Layer,
    NuElement,
    NuOrder,
    RATIONAL,
    TRIVIAL,
    ValueMonoid,
    add,
    chain_monoid,
    format_element,
    ghost,
    gs_ge,
    hyper_contains,
    mul,
    nu,
    nu_compare,
    one_of,
    parse_element,
    power,
    rat_g,
    rat_t,
    tangible,
    zero_of,
)
from supertrop.poly import (
    CanonicalForm,
    Factorization,
    TropPoly,
    canonicalize,
    factor_univariate,
    format_poly,
    frobenius_pow,
    func_equal,
    make_poly,
    p_eval,
    parse_poly,
    tangible_root,
)
from supertrop.locus import (
    Cell,
    LocusComplex,
    locate,
    locus2d,
    render_svg,
    z_member,
)
from supertrop.congr import (
    Congruence,
    FiniteNuSemiring,
    builtin_semiring,
    bundled_suite,
    cong_closure,
    crad,
    enumerate_congruences,
    find_isomorphism,
    localize_finite,
    nu_primes,
    quotient,
    srad,
    superboolean,
    validate,
)
from supertrop.spectra import (
    Spectrum,
    d_set,
    i_of,
    irreducible,
    krull_check,
    krull_dim,
    nullstellensatz_check,
    sections,
    spec,
    stalk,
    v_set,
)

__all__ = [
    "CanonicalForm",
    "Cell",
    "Congruence",
    "Factorization",
    "FiniteNuSemiring",
    "Layer",
    "LocusComplex",
    "NuElement",
    "NuOrder",
    "RATIONAL",
    "Spectrum",
    "TRIVIAL",
    "TropPoly",
    "ValueMonoid",
    "add",
    "builtin_semiring",
    "bundled_suite",
    "canonicalize",
    "chain_monoid",
    "cong_closure",
    "crad",
    "d_set",
    "enumerate_congruences",
    "factor_univariate",
    "find_isomorphism",
    "format_element",
    "format_poly",
    "frobenius_pow",
    "func_equal",
    "ghost",
    "gs_ge",
    "hyper_contains",
    "i_of",
    "irreducible",
    "krull_check",
    "krull_dim",
    "locate",
    "localize_finite",
    "locus2d",
    "make_poly",
    "mul",
    "nu",
    "nu_compare",
    "nu_primes",
    "nullstellensatz_check",
    "one_of",
    "p_eval",
    "parse_element",
    "parse_poly",
    "power",
    "quotient",
    "rat_g",
    "rat_t",
    "render_svg",
    "sections",
    "spec",
    "srad",
    "stalk",
    "superboolean",
    "tangible",
    "tangible_root",
    "v_set",
    "validate",
    "z_member",
    "zero_of",
]
