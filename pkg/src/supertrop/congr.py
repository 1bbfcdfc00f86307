"""Finite ghost-augmented semirings given by tables, and their congruences.

A carrier is a finite commutative semiring with a ghost map nu, a
distinguished tangible subset and a prudent subset of it.  Everything
is indexed: elements are 0..n-1, tables are nested tuples, so carriers
hash and compare structurally and serialize to stable JSON.

Congruences replace ideals here: the ghost cluster iG (elements
identified with their own ghost) plays the role of the vanishing set,
and the tangible cluster iT collects elements whose whole class stays
tangible.  The classifier below recognizes the useful kinds: the
q-congruences keep every unit's class tangible, the l-congruences have
a multiplicatively closed iT, and the nu-primes additionally forbid
ghost products of non-ghost factors.

Enumeration is exhaustive over set partitions, so every operation that
needs the full congruence lattice (radicals, maximality flags, spectra)
is exact but gated by a size bound.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Mapping, Optional, Sequence

from .core import (
    Layer,
    NuElement,
    TRIVIAL,
    ValueMonoid,
    add as kernel_add,
    chain_monoid,
    ghost,
    mul as kernel_mul,
    nu as kernel_nu,
    one_of,
    tangible as kernel_tangible,
    zero_of,
)
from .errors import BoundError, ParseError, PreconditionError

DEFAULT_BOUND = 7

FLAG_Q = "QCong"
FLAG_L = "LCong"
FLAG_PRIME = "NuPrime"
FLAG_RADICAL = "Radical"
FLAG_DETERMINED = "Determined"
FLAG_GHOST = "GhostCong"
FLAG_TANGLY_MINIMAL = "TanglyMinimal"
FLAG_MAXIMAL_L = "MaximalL"


@dataclass(frozen=True)
class FiniteNuSemiring:
    """Commutative nu-semiring on indices 0..n-1 with explicit tables."""

    names: tuple[str, ...]
    zero: int
    one: int
    add_table: tuple[tuple[int, ...], ...]
    mul_table: tuple[tuple[int, ...], ...]
    nu_table: tuple[int, ...]
    tangible: frozenset[int]
    prudent: frozenset[int]

    def __post_init__(self) -> None:
        n = len(self.names)
        if len(set(self.names)) != n:
            raise ValueError("element names must be distinct")
        if not (0 <= self.zero < n and 0 <= self.one < n):
            raise ValueError("zero/one out of range")
        for table in (self.add_table, self.mul_table):
            if len(table) != n or any(len(row) != n for row in table):
                raise ValueError("tables must be n x n")
            if any(not 0 <= v < n for row in table for v in row):
                raise ValueError("table entry out of range")
        if len(self.nu_table) != n or any(
            not 0 <= v < n for v in self.nu_table
        ):
            raise ValueError("nu table malformed")
        for s in (self.tangible, self.prudent):
            if any(not 0 <= v < n for v in s):
                raise ValueError("subset entry out of range")

    @property
    def size(self) -> int:
        return len(self.names)

    def add(self, a: int, b: int) -> int:
        return self.add_table[a][b]

    def mul(self, a: int, b: int) -> int:
        return self.mul_table[a][b]

    def nu(self, a: int) -> int:
        return self.nu_table[a]

    @property
    def e(self) -> int:
        return self.add_table[self.one][self.one]

    def power(self, a: int, n: int) -> int:
        if n < 1:
            raise ValueError("power exponent must be positive")
        out = a
        for _ in range(n - 1):
            out = self.mul(out, a)
        return out

    def powers_of(self, a: int) -> frozenset[int]:
        """All distinct positive powers of a (the sequence cycles)."""
        seen = {a}
        cur = a
        while True:
            cur = self.mul(cur, a)
            if cur in seen:
                return frozenset(seen)
            seen.add(cur)

    @cached_property
    def ghost0(self) -> frozenset[int]:
        """Fixed points of nu: the ghost ideal together with zero."""
        return frozenset(a for a in range(self.size) if self.nu(a) == a)

    @cached_property
    def units(self) -> frozenset[int]:
        return frozenset(
            a
            for a in range(self.size)
            if any(self.mul(a, b) == self.one for b in range(self.size))
        )

    def ghost_divisors(self) -> frozenset[int]:
        """Non-ghost elements with a non-ghost cofactor ghosting the product."""
        out = set()
        for a in range(self.size):
            if a in self.ghost0:
                continue
            for b in range(self.size):
                if b in self.ghost0:
                    continue
                if self.mul(a, b) in self.ghost0:
                    out.add(a)
                    break
        return frozenset(out)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise ParseError(f"unknown element {name!r}") from None


def computed_prudent(
    size: int,
    mul_table: Sequence[Sequence[int]],
    tangible: frozenset[int],
) -> frozenset[int]:
    """Tangible elements all of whose powers stay tangible."""
    out = set()
    for a in tangible:
        cur = a
        seen = set()
        good = True
        while cur not in seen:
            seen.add(cur)
            if cur not in tangible:
                good = False
                break
            cur = mul_table[cur][a]
        if good:
            out.add(a)
    return frozenset(out)


def make_semiring(
    names: Sequence[str],
    zero: int,
    one: int,
    add_table: Sequence[Sequence[int]],
    mul_table: Sequence[Sequence[int]],
    nu_table: Optional[Sequence[int]] = None,
    tangible: Optional[Iterable[int]] = None,
    prudent: Optional[Iterable[int]] = None,
) -> FiniteNuSemiring:
    """Assemble a carrier, deriving the optional structure.

    nu defaults to multiplication by e = 1 + 1, tangible to the
    non-fixed points of nu except zero, and prudent to the maximal
    admissible set (all powers tangible).
    """
    add_t = tuple(tuple(row) for row in add_table)
    mul_t = tuple(tuple(row) for row in mul_table)
    if nu_table is None:
        e = add_t[one][one]
        nu_table = tuple(mul_t[e][a] for a in range(len(names)))
    nu_t = tuple(nu_table)
    if tangible is None:
        tangible = frozenset(
            a for a in range(len(names)) if a != zero and nu_t[a] != a
        )
    tan = frozenset(tangible)
    if prudent is None:
        prudent = computed_prudent(len(names), mul_t, tan)
    return FiniteNuSemiring(
        tuple(names), zero, one, add_t, mul_t, nu_t, tan, frozenset(prudent)
    )


# -- validation ---------------------------------------------------------


@dataclass(frozen=True)
class ValidationReport:
    passed: bool
    failures: tuple[tuple[str, str], ...]
    checked: tuple[str, ...]

    def failed_checks(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.failures)


def validate(R: FiniteNuSemiring) -> ValidationReport:
    """Run the axiom battery; report the first counterexample per check."""
    n = R.size
    rng = range(n)
    nm = R.names
    failures: list[tuple[str, str]] = []
    checked: list[str] = []

    def check(name: str, witness: Optional[str]) -> None:
        checked.append(name)
        if witness is not None:
            failures.append((name, witness))

    def first(pred_pairs) -> Optional[str]:
        for witness, ok in pred_pairs:
            if not ok:
                return witness
        return None

    check("add-commutative", first(
        (f"{nm[a]} + {nm[b]}", R.add(a, b) == R.add(b, a))
        for a in rng for b in rng
    ))
    check("add-associative", first(
        (f"({nm[a]} + {nm[b]}) + {nm[c]}",
         R.add(R.add(a, b), c) == R.add(a, R.add(b, c)))
        for a in rng for b in rng for c in rng
    ))
    check("add-identity", first(
        (f"{nm[a]} + 0", R.add(a, R.zero) == a) for a in rng
    ))
    check("mul-commutative", first(
        (f"{nm[a]} * {nm[b]}", R.mul(a, b) == R.mul(b, a))
        for a in rng for b in rng
    ))
    check("mul-associative", first(
        (f"({nm[a]} * {nm[b]}) * {nm[c]}",
         R.mul(R.mul(a, b), c) == R.mul(a, R.mul(b, c)))
        for a in rng for b in rng for c in rng
    ))
    check("mul-identity", first(
        (f"{nm[a]} * 1", R.mul(a, R.one) == a) for a in rng
    ))
    check("mul-zero", first(
        (f"{nm[a]} * 0", R.mul(a, R.zero) == R.zero) for a in rng
    ))
    check("distributive", first(
        (f"{nm[a]} * ({nm[b]} + {nm[c]})",
         R.mul(a, R.add(b, c)) == R.add(R.mul(a, b), R.mul(a, c)))
        for a in rng for b in rng for c in rng
    ))
    check("nu-is-e-multiple", first(
        (f"nu({nm[a]})", R.nu(a) == R.mul(R.e, a)) for a in rng
    ))
    check("nu-idempotent", first(
        (f"nu(nu({nm[a]}))", R.nu(R.nu(a)) == R.nu(a)) for a in rng
    ))
    check("nu-kernel-trivial", first(
        (f"nu({nm[a]}) = 0", a == R.zero)
        for a in rng if R.nu(a) == R.zero
    ))
    check("tangible-partition", first(
        [
            ("zero tangible", R.zero not in R.tangible),
            ("one not tangible", R.one in R.tangible),
            (
                "tangible meets ghost",
                not (R.tangible & R.ghost0),
            ),
        ]
    ))
    check("ghost-ideal", first(
        (f"{nm[a]} * {nm[g]}", R.mul(a, g) in R.ghost0)
        for a in rng for g in R.ghost0
    ))
    check("nu-order-total", first(
        (f"nu({nm[a]}) + nu({nm[b]})",
         R.add(R.nu(a), R.nu(b)) in (R.nu(a), R.nu(b)))
        for a in rng for b in rng
    ))
    check("nm-dominance", first(
        (f"{nm[a]} + {nm[b]}", R.add(a, b) == a)
        for a in rng for b in rng
        if R.nu(a) != R.nu(b) and R.add(R.nu(a), R.nu(b)) == R.nu(a)
    ))
    check("nm-tie", first(
        (f"{nm[a]} + {nm[b]}", R.add(a, b) == R.nu(a))
        for a in rng for b in rng
        if R.nu(a) == R.nu(b)
    ))
    check("nm-zero", first(
        (f"{nm[a]} + {nm[b]}", R.add(a, b) == b)
        for a in rng for b in rng
        if R.nu(a) == R.zero
    ))
    check("prudent-powers", first(
        (f"{nm[a]}^k", R.powers_of(a) <= R.prudent)
        for a in R.prudent
    ))
    check("prudent-maximal", first(
        [(
            "prudent differs from the maximal admissible set",
            R.prudent == computed_prudent(n, R.mul_table, R.tangible),
        )]
    ))
    check("units-prudent", first(
        (f"unit {nm[u]}", u in R.prudent) for u in R.units
    ))
    check("tangible-sum-stability", first(
        (f"{nm[a]} + nu({nm[b]})", R.add(a, R.nu(b)) not in R.ghost0)
        for a in rng for b in rng
        if R.add(a, b) in R.tangible and R.add(a, b) not in (a, b)
    ))
    mixed = [
        m for m in rng if m not in R.tangible and m not in R.ghost0
    ]
    check("tame", first(
        (
            f"{nm[m]} has no tangible c + nu(d) decomposition",
            any(
                R.add(c, R.nu(d)) == m
                for c in R.tangible for d in R.tangible
            ),
        )
        for m in mixed
    ))
    return ValidationReport(
        not failures, tuple(failures), tuple(checked)
    )


def require_valid(R: FiniteNuSemiring) -> None:
    report = _validate_cached(R)
    if not report.passed:
        raise PreconditionError(
            "carrier fails validation: "
            + ", ".join(report.failed_checks())
        )


@lru_cache(maxsize=None)
def _validate_cached(R: FiniteNuSemiring) -> ValidationReport:
    return validate(R)


# -- congruences --------------------------------------------------------


@dataclass(frozen=True)
class Congruence:
    """Partition of a carrier compatible with both operations.

    reps[a] is the least member of a's class, so equal partitions have
    equal reps and the tuple is a canonical key.
    """

    semiring: FiniteNuSemiring
    reps: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.reps) != self.semiring.size:
            raise ValueError("reps length mismatch")
        for i, r in enumerate(self.reps):
            if not (0 <= r <= i and self.reps[r] == r):
                raise ValueError("reps not canonical")

    def contains(self, a: int, b: int) -> bool:
        return self.reps[a] == self.reps[b]

    def classes(self) -> tuple[tuple[int, ...], ...]:
        by_rep: dict[int, list[int]] = {}
        for i, r in enumerate(self.reps):
            by_rep.setdefault(r, []).append(i)
        return tuple(tuple(v) for _, v in sorted(by_rep.items()))

    def class_of(self, a: int) -> tuple[int, ...]:
        r = self.reps[a]
        return tuple(i for i in range(len(self.reps)) if self.reps[i] == r)

    @cached_property
    def iT(self) -> frozenset[int]:
        """Tangible cluster: elements whose whole class is tangible."""
        R = self.semiring
        good_reps = {
            r
            for r in set(self.reps)
            if all(
                i in R.tangible
                for i in range(R.size)
                if self.reps[i] == r
            )
        }
        return frozenset(
            a for a in range(R.size) if self.reps[a] in good_reps
        )

    @cached_property
    def iG(self) -> frozenset[int]:
        """Ghost cluster: elements congruent to their own ghost."""
        R = self.semiring
        return frozenset(
            a for a in range(R.size) if self.contains(a, R.nu(a))
        )

    @property
    def is_improper(self) -> bool:
        return all(r == 0 for r in self.reps)

    def refines(self, other: "Congruence") -> bool:
        """Whether every class of self sits inside a class of other."""
        return all(
            other.reps[a] == other.reps[self.reps[a]]
            for a in range(len(self.reps))
        )


def _canonical_reps(parent: list[int]) -> tuple[int, ...]:
    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    n = len(parent)
    least: dict[int, int] = {}
    for i in range(n):
        r = find(i)
        least.setdefault(r, i)
    return tuple(least[find(i)] for i in range(n))


def diagonal(R: FiniteNuSemiring) -> Congruence:
    return Congruence(R, tuple(range(R.size)))


def all_pairs(R: FiniteNuSemiring) -> Congruence:
    return Congruence(R, (0,) * R.size)


def cong_closure(
    R: FiniteNuSemiring, pairs: Iterable[tuple[int, int]]
) -> Congruence:
    """Least congruence identifying the given pairs.

    Union-find plus a fixpoint pass that re-closes under both table
    operations until nothing merges.
    """
    parent = list(range(R.size))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(a: int, b: int) -> bool:
        ra, rb = find(a), find(b)
        if ra == rb:
            return False
        parent[max(ra, rb)] = min(ra, rb)
        return True

    for a, b in pairs:
        union(a, b)
    changed = True
    while changed:
        changed = False
        groups: dict[int, list[int]] = {}
        for i in range(R.size):
            groups.setdefault(find(i), []).append(i)
        for members in groups.values():
            base = members[0]
            for b in members[1:]:
                for c in range(R.size):
                    if union(R.add(base, c), R.add(b, c)):
                        changed = True
                    if union(R.mul(base, c), R.mul(b, c)):
                        changed = True
    return Congruence(R, _canonical_reps(parent))


def ghostify(R: FiniteNuSemiring, elements: Iterable[int]) -> Congruence:
    """Least congruence making every given element a ghost."""
    return cong_closure(R, [(b, R.nu(b)) for b in elements])


def clusters(
    R: FiniteNuSemiring, theta: Congruence
) -> tuple[frozenset[int], frozenset[int]]:
    return theta.iT, theta.iG


def cong_intersect(*congs: Congruence) -> Congruence:
    if not congs:
        raise ValueError("need at least one congruence")
    R = congs[0].semiring
    key = {
        i: tuple(c.reps[i] for c in congs) for i in range(R.size)
    }
    least: dict[tuple[int, ...], int] = {}
    for i in range(R.size):
        least.setdefault(key[i], i)
    return Congruence(R, tuple(least[key[i]] for i in range(R.size)))


def is_congruence(R: FiniteNuSemiring, reps: Sequence[int]) -> bool:
    n = R.size
    for a in range(n):
        ra = reps[a]
        if ra == a:
            continue
        for c in range(n):
            if reps[R.add(a, c)] != reps[R.add(ra, c)]:
                return False
            if reps[R.mul(a, c)] != reps[R.mul(ra, c)]:
                return False
    return True


def _set_partitions(n: int):
    """Restricted growth strings; yields block assignment per element."""
    assignment = [0] * n

    def rec(i: int, maxblock: int):
        if i == n:
            yield tuple(assignment)
            return
        for b in range(maxblock + 2):
            assignment[i] = b
            yield from rec(i + 1, max(maxblock, b))

    yield from rec(0, -1)


@lru_cache(maxsize=None)
def _all_congruences(R: FiniteNuSemiring) -> tuple[Congruence, ...]:
    n = R.size
    out = []
    for assignment in _set_partitions(n):
        least: dict[int, int] = {}
        for i, b in enumerate(assignment):
            least.setdefault(b, i)
        reps = tuple(least[b] for b in assignment)
        if is_congruence(R, reps):
            out.append(Congruence(R, reps))
    return tuple(sorted(out, key=lambda c: c.reps))


def _basic_flags(R: FiniteNuSemiring, theta: Congruence) -> set[str]:
    iT, iG = theta.iT, theta.iG
    flags: set[str] = set()
    if theta.contains(R.one, R.nu(R.one)):
        flags.add(FLAG_GHOST)
    q = R.units <= iT
    if q:
        flags.add(FLAG_Q)
    l_cong = q and all(R.mul(a, b) in iT for a in iT for b in iT)
    if l_cong:
        flags.add(FLAG_L)
    if l_cong and all(
        a in iG or b in iG
        for a in range(R.size)
        for b in range(R.size)
        if R.mul(a, b) in iG
    ):
        flags.add(FLAG_PRIME)
    if q and all(
        a in iG
        for a in range(R.size)
        if R.powers_of(a) & iG
    ):
        flags.add(FLAG_RADICAL)
    if all(
        set(theta.class_of(r)) <= R.tangible
        or set(theta.class_of(r)) <= R.ghost0
        for r in set(theta.reps)
    ):
        flags.add(FLAG_DETERMINED)
    return flags


def classify(
    R: FiniteNuSemiring,
    theta: Congruence,
    bound: int = DEFAULT_BOUND,
) -> frozenset[str]:
    """Flag set for a congruence.

    The two flags relative to the whole l-congruence family
    (TanglyMinimal, MaximalL) need the lattice enumerated and are only
    emitted when the carrier is within the bound.
    """
    flags = _basic_flags(R, theta)
    if FLAG_L in flags and R.size <= bound:
        l_congs = [
            c
            for c in _all_congruences(R)
            if FLAG_L in _basic_flags(R, c)
        ]
        if not any(
            c.iT < theta.iT for c in l_congs
        ):
            flags.add(FLAG_TANGLY_MINIMAL)
        if not any(
            theta.refines(c) and c.reps != theta.reps for c in l_congs
        ):
            flags.add(FLAG_MAXIMAL_L)
    return frozenset(flags)


def enumerate_congruences(
    R: FiniteNuSemiring,
    bound: int = DEFAULT_BOUND,
    kind: Optional[str] = None,
) -> tuple[Congruence, ...]:
    """All congruences, optionally filtered by a classifier flag."""
    if R.size > bound:
        raise BoundError(
            f"carrier has {R.size} elements, enumeration bound is {bound}"
        )
    congs = _all_congruences(R)
    if kind is None:
        return congs
    if kind in (FLAG_TANGLY_MINIMAL, FLAG_MAXIMAL_L):
        return tuple(
            c for c in congs if kind in classify(R, c, bound)
        )
    return tuple(c for c in congs if kind in _basic_flags(R, c))


# -- quotients and localizations ----------------------------------------


def quotient(
    R: FiniteNuSemiring, theta: Congruence
) -> tuple[FiniteNuSemiring, tuple[int, ...]]:
    """Carrier of classes plus the projection map.

    Requires a q-congruence; otherwise some unit's class leaks out of
    the tangible part and the quotient has no consistent layering.
    """
    for u in sorted(R.units):
        if u not in theta.iT:
            cls = "{" + ", ".join(R.names[i] for i in theta.class_of(u)) + "}"
            raise PreconditionError(
                f"not a q-congruence: class {cls} of unit "
                f"{R.names[u]} is not tangible"
            )
    classes = theta.classes()
    class_idx = {members[0]: k for k, members in enumerate(classes)}
    proj = tuple(class_idx[theta.reps[a]] for a in range(R.size))
    names = tuple(
        "|".join(R.names[i] for i in members) for members in classes
    )
    n = len(classes)
    add_t = tuple(
        tuple(proj[R.add(classes[i][0], classes[j][0])] for j in range(n))
        for i in range(n)
    )
    mul_t = tuple(
        tuple(proj[R.mul(classes[i][0], classes[j][0])] for j in range(n))
        for i in range(n)
    )
    nu_t = tuple(proj[R.nu(classes[i][0])] for i in range(n))
    tangible = frozenset(
        k for k, members in enumerate(classes) if set(members) <= R.tangible
    )
    out = FiniteNuSemiring(
        names,
        proj[R.zero],
        proj[R.one],
        add_t,
        mul_t,
        nu_t,
        tangible,
        computed_prudent(n, mul_t, tangible),
    )
    report = validate(out)
    if not report.passed:
        raise PreconditionError(
            "quotient fails validation: " + ", ".join(report.failed_checks())
        )
    return out, proj


def localize_finite(
    R: FiniteNuSemiring, C: Iterable[int]
) -> tuple[FiniteNuSemiring, tuple[int, ...]]:
    """Fractions a/c over a prudent tangible monoid C, plus a -> a/1.

    Two fractions are identified when some c'' in C equalizes them.  A
    fraction class is tangible only when every numerator appearing in it
    is tangible.  When a tangible numerator collides with a ghost one
    (a*c'' = b*c'' with b ghost), the whole class is ghost: the ghost
    kernel of a -> a/1 is exactly {a : a*c in ghost0 for some c in C}.
    Denominators that are not units therefore make a -> a/1 lossy on
    finite carriers.
    """
    C = sorted(set(C))
    if R.one not in C:
        raise PreconditionError("localization set must contain one")
    stray = [c for c in C if c not in R.prudent]
    if stray:
        raise PreconditionError(
            "localization only by prudent elements; offending: "
            + ", ".join(R.names[c] for c in stray)
        )
    for c in C:
        for d in C:
            if R.mul(c, d) not in C:
                raise PreconditionError(
                    "localization set is not multiplicatively closed: "
                    f"{R.names[c]} * {R.names[d]} escapes"
                )

    pairs = [(a, c) for a in range(R.size) for c in C]
    idx = {p: i for i, p in enumerate(pairs)}
    parent = list(range(len(pairs)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def related(p: tuple[int, int], q: tuple[int, int]) -> bool:
        (a, c), (a2, c2) = p, q
        return any(
            R.mul(R.mul(a, c2), c3) == R.mul(R.mul(a2, c), c3) for c3 in C
        )

    for i, p in enumerate(pairs):
        for j in range(i + 1, len(pairs)):
            if find(i) != find(j) and related(p, pairs[j]):
                parent[max(find(i), find(j))] = min(find(i), find(j))

    roots = sorted({find(i) for i in range(len(pairs))})
    class_no = {r: k for k, r in enumerate(roots)}
    of_pair = [class_no[find(i)] for i in range(len(pairs))]
    members: list[list[tuple[int, int]]] = [[] for _ in roots]
    for i, p in enumerate(pairs):
        members[of_pair[i]].append(p)

    tangible_cls = set()
    for k, mem in enumerate(members):
        if all(a in R.tangible for a, _ in mem):
            tangible_cls.add(k)

    def cls(a: int, c: int) -> int:
        return of_pair[idx[(a, c)]]

    def name_of(k: int) -> str:
        mem = members[k]
        if k not in tangible_cls:
            ghostly = [p for p in mem if p[0] not in R.tangible]
            if ghostly:
                mem = ghostly
        a, c = min(mem)
        if c == R.one:
            return R.names[a]
        return f"{R.names[a]}/{R.names[c]}"

    n = len(roots)
    add_t = []
    mul_t = []
    for i in range(n):
        a, c = members[i][0]
        row_a = []
        row_m = []
        for j in range(n):
            a2, c2 = members[j][0]
            row_a.append(
                cls(R.add(R.mul(a, c2), R.mul(a2, c)), R.mul(c, c2))
            )
            row_m.append(cls(R.mul(a, a2), R.mul(c, c2)))
        add_t.append(tuple(row_a))
        mul_t.append(tuple(row_m))
    nu_t = tuple(cls(R.nu(members[i][0][0]), members[i][0][1]) for i in range(n))

    out = FiniteNuSemiring(
        tuple(name_of(k) for k in range(n)),
        cls(R.zero, R.one),
        cls(R.one, R.one),
        tuple(add_t),
        tuple(mul_t),
        nu_t,
        frozenset(tangible_cls),
        computed_prudent(n, tuple(mul_t), frozenset(tangible_cls)),
    )
    report = validate(out)
    if not report.passed:
        raise PreconditionError(
            "localization fails validation: "
            + ", ".join(report.failed_checks())
        )
    tau = tuple(cls(a, R.one) for a in range(R.size))
    return out, tau


# -- radicals -----------------------------------------------------------


class EmptyRadical:
    """Marker for a radical over an empty family of congruences."""

    _instance: Optional["EmptyRadical"] = None

    def __new__(cls) -> "EmptyRadical":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "EMPTY_RADICAL"


EMPTY_RADICAL = EmptyRadical()


def nu_primes(
    R: FiniteNuSemiring, bound: int = DEFAULT_BOUND
) -> tuple[Congruence, ...]:
    return enumerate_congruences(R, bound, FLAG_PRIME)


def crad(
    R: FiniteNuSemiring,
    theta: Congruence,
    bound: int = DEFAULT_BOUND,
):
    """Intersection of the nu-primes containing theta; EMPTY_RADICAL if none."""
    containing = [
        p for p in nu_primes(R, bound) if theta.refines(p)
    ]
    if not containing:
        return EMPTY_RADICAL
    return cong_intersect(*containing)


def srad(
    R: FiniteNuSemiring,
    elements: Iterable[int],
    bound: int = DEFAULT_BOUND,
):
    """Radical of a ghostified element set."""
    return crad(R, ghostify(R, elements), bound)


def gprad(R: FiniteNuSemiring) -> frozenset[int]:
    """Ghostpotent elements: some power falls into the ghost ideal."""
    return frozenset(
        a for a in range(R.size) if R.powers_of(a) & R.ghost0
    )


def maximal_l_congruences(
    R: FiniteNuSemiring, bound: int = DEFAULT_BOUND
) -> tuple[Congruence, ...]:
    l_congs = enumerate_congruences(R, bound, FLAG_L)
    return tuple(
        m
        for m in l_congs
        if not any(
            m.refines(c) and c.reps != m.reps for c in l_congs
        )
    )


def jac(
    R: FiniteNuSemiring,
    theta: Congruence,
    bound: int = DEFAULT_BOUND,
):
    """Intersection of the maximal l-congruences containing theta."""
    containing = [
        m for m in maximal_l_congruences(R, bound) if theta.refines(m)
    ]
    if not containing:
        return EMPTY_RADICAL
    return cong_intersect(*containing)


# -- homomorphisms ------------------------------------------------------


@dataclass(frozen=True)
class QHom:
    """Map of carriers that respects both operations, nu, and layering."""

    src: FiniteNuSemiring
    dst: FiniteNuSemiring
    mapping: tuple[int, ...]

    def __call__(self, a: int) -> int:
        return self.mapping[a]


def check_q_homomorphism(phi: QHom) -> Optional[str]:
    """None when phi is a q-homomorphism, else a counterexample."""
    R, S, f = phi.src, phi.dst, phi.mapping
    if len(f) != R.size:
        return "mapping length mismatch"
    if f[R.zero] != S.zero:
        return "zero not preserved"
    if f[R.one] != S.one:
        return "one not preserved"
    for a in range(R.size):
        if f[R.nu(a)] != S.nu(f[a]):
            return f"nu broken at {R.names[a]}"
        for b in range(R.size):
            if f[R.add(a, b)] != S.add(f[a], f[b]):
                return f"addition broken at {R.names[a]}, {R.names[b]}"
            if f[R.mul(a, b)] != S.mul(f[a], f[b]):
                return f"multiplication broken at {R.names[a]}, {R.names[b]}"
    for a in range(R.size):
        if f[a] in S.tangible and a not in R.tangible:
            return f"tangible pullback broken at {R.names[a]}"
    return None


def pullback(phi: QHom, theta: Congruence) -> Congruence:
    """Congruence on the source identifying a, b when phi(a) = phi(b) mod theta."""
    if theta.semiring is not phi.dst and theta.semiring != phi.dst:
        raise PreconditionError("congruence lives on the wrong carrier")
    witness = check_q_homomorphism(phi)
    if witness is not None:
        raise PreconditionError(f"not a q-homomorphism: {witness}")
    R = phi.src
    key = {a: theta.reps[phi(a)] for a in range(R.size)}
    least: dict[int, int] = {}
    for a in range(R.size):
        least.setdefault(key[a], a)
    return Congruence(R, tuple(least[key[a]] for a in range(R.size)))


def find_isomorphism(
    A: FiniteNuSemiring, B: FiniteNuSemiring
) -> Optional[tuple[int, ...]]:
    """A structure-preserving bijection as a tuple, or None.

    Brute force over permutations, pruned by matching each element
    profile (tangible, prudent, ghost, zero, one) across the two
    carriers.
    """
    if A.size != B.size:
        return None

    def profile(R: FiniteNuSemiring, a: int) -> tuple:
        return (
            a == R.zero,
            a == R.one,
            a in R.tangible,
            a in R.prudent,
            a in R.ghost0,
            len(R.powers_of(a)),
        )

    groups_a: dict[tuple, list[int]] = {}
    groups_b: dict[tuple, list[int]] = {}
    for a in range(A.size):
        groups_a.setdefault(profile(A, a), []).append(a)
    for b in range(B.size):
        groups_b.setdefault(profile(B, b), []).append(b)
    if set(groups_a) != set(groups_b):
        return None
    if any(len(groups_a[k]) != len(groups_b[k]) for k in groups_a):
        return None

    keys = sorted(groups_a)
    pools = [
        itertools.permutations(groups_b[k]) for k in keys
    ]
    for choice in itertools.product(*pools):
        f = [0] * A.size
        for k, perm in zip(keys, choice):
            for src, dst in zip(groups_a[k], perm):
                f[src] = dst
        ok = True
        for a in range(A.size):
            if f[A.nu(a)] != B.nu(f[a]):
                ok = False
                break
            for b in range(A.size):
                if f[A.add(a, b)] != B.add(f[a], f[b]):
                    ok = False
                    break
                if f[A.mul(a, b)] != B.mul(f[a], f[b]):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return tuple(f)
    return None


# -- JSON ---------------------------------------------------------------


def to_json(R: FiniteNuSemiring) -> str:
    obj = {
        "elements": list(R.names),
        "zero": R.names[R.zero],
        "one": R.names[R.one],
        "tangible": [R.names[a] for a in sorted(R.tangible)],
        "prudent": [R.names[a] for a in sorted(R.prudent)],
        "add": [
            [R.names[v] for v in row] for row in R.add_table
        ],
        "mul": [
            [R.names[v] for v in row] for row in R.mul_table
        ],
        "nu": {R.names[a]: R.names[R.nu(a)] for a in range(R.size)},
    }
    return json.dumps(obj, sort_keys=True, indent=2)


def semiring_from_json(text: str) -> FiniteNuSemiring:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"bad JSON: {exc}") from None
    try:
        names = tuple(str(x) for x in obj["elements"])
        pos = {name: i for i, name in enumerate(names)}
        if len(pos) != len(names):
            raise ParseError("duplicate element names")

        def look(name) -> int:
            if name not in pos:
                raise ParseError(f"unknown element {name!r}")
            return pos[name]

        add_t = tuple(
            tuple(look(v) for v in row) for row in obj["add"]
        )
        mul_t = tuple(
            tuple(look(v) for v in row) for row in obj["mul"]
        )
        nu_map = obj["nu"]
        nu_t = tuple(look(nu_map[name]) for name in names)
        R = FiniteNuSemiring(
            names,
            look(obj["zero"]),
            look(obj["one"]),
            add_t,
            mul_t,
            nu_t,
            frozenset(look(v) for v in obj["tangible"]),
            frozenset(look(v) for v in obj["prudent"]),
        )
    except ParseError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed carrier description: {exc}") from None
    return R


def cong_to_json(theta: Congruence) -> str:
    R = theta.semiring
    obj = {
        "classes": [
            [R.names[i] for i in members] for members in theta.classes()
        ]
    }
    return json.dumps(obj, sort_keys=True, indent=2)


def cong_from_json(R: FiniteNuSemiring, text: str) -> Congruence:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"bad JSON: {exc}") from None
    try:
        classes = obj["classes"]
        seen: dict[int, int] = {}
        for members in classes:
            block = sorted(R.index(name) for name in members)
            for i in block:
                if i in seen:
                    raise ParseError("element repeated across classes")
                seen[i] = block[0]
        if len(seen) != R.size:
            raise ParseError("classes do not cover the carrier")
        reps = tuple(seen[i] for i in range(R.size))
    except ParseError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed congruence description: {exc}") from None
    if not is_congruence(R, reps):
        raise PreconditionError("partition is not a congruence")
    return Congruence(R, reps)


# -- builders -----------------------------------------------------------


def _from_kernel(
    elems: Sequence[NuElement], names: Sequence[str]
) -> FiniteNuSemiring:
    index = {el: i for i, el in enumerate(elems)}
    n = len(elems)
    add_t = [
        [index[kernel_add(elems[i], elems[j])] for j in range(n)]
        for i in range(n)
    ]
    mul_t = [
        [index[kernel_mul(elems[i], elems[j])] for j in range(n)]
        for i in range(n)
    ]
    nu_t = [index[kernel_nu(elems[i])] for i in range(n)]
    zero = next(i for i, el in enumerate(elems) if el.layer is Layer.ZERO)
    one = index[one_of(elems[zero].monoid)]
    tangible = frozenset(
        i for i, el in enumerate(elems) if el.layer is Layer.TANGIBLE
    )
    return make_semiring(
        names, zero, one, add_t, mul_t, nu_t, tangible
    )


def superboolean() -> FiniteNuSemiring:
    elems = [zero_of(TRIVIAL), one_of(TRIVIAL), kernel_nu(one_of(TRIVIAL))]
    return _from_kernel(elems, ["b0", "b1", "b1v"])


def _chain_names(n: int) -> list[str]:
    names = ["0", "1", "1v"]
    for k in range(1, n):
        base = "a" if k == 1 else f"a{k}"
        names += [base, base + "v"]
    return names


def _str_of_chain(monoid: ValueMonoid, n: int) -> FiniteNuSemiring:
    elems: list[NuElement] = [zero_of(monoid)]
    for v in range(n):
        elems.append(kernel_tangible(monoid, v))
        elems.append(ghost(monoid, v))
    return _from_kernel(elems, _chain_names(n))


def str_chain(n: int) -> FiniteNuSemiring:
    """Semiring of the n-element join chain, collision-ghosted."""
    if n < 1:
        raise PreconditionError("chain length must be positive")
    return _str_of_chain(chain_monoid(n, "max"), n)


def str_trunc(n: int) -> FiniteNuSemiring:
    """Semiring of the n-step truncated addition chain, collision-ghosted."""
    if n < 1:
        raise PreconditionError("chain length must be positive")
    return _str_of_chain(chain_monoid(n, "trunc"), n)


def _assemble_blocks(
    level_tangibles: Sequence[Sequence[str]],
    ghost_names: Sequence[str],
    tan_mul: Mapping[tuple[str, str], str],
) -> FiniteNuSemiring:
    """Carrier from a chain of nu-levels with named tangible fibers.

    Addition is determined by the level chain; multiplication of two
    tangibles is looked up symmetrically in tan_mul and may land on a
    ghost (a collision), anything else ghosts at the joined level.
    """
    names = ["0"]
    level: dict[str, int] = {}
    tangibles: set[str] = set()
    for k, fiber in enumerate(level_tangibles):
        for t in fiber:
            names.append(t)
            level[t] = k
            tangibles.add(t)
        names.append(ghost_names[k])
        level[ghost_names[k]] = k
    pos = {name: i for i, name in enumerate(names)}
    n = len(names)

    def mul_name(x: str, y: str) -> str:
        lev = max(level[x], level[y])
        if x in tangibles and y in tangibles:
            out = tan_mul.get((x, y)) or tan_mul[(y, x)]
            assert level[out] == lev, "product level mismatch"
            return out
        return ghost_names[lev]

    def add_name(x: str, y: str) -> str:
        if level[x] > level[y]:
            return x
        if level[y] > level[x]:
            return y
        return ghost_names[level[x]]

    add_t = [[0] * n for _ in range(n)]
    mul_t = [[0] * n for _ in range(n)]
    for i, x in enumerate(names):
        for j, y in enumerate(names):
            if i == 0 or j == 0:
                add_t[i][j] = i if j == 0 else j
                mul_t[i][j] = 0
            else:
                add_t[i][j] = pos[add_name(x, y)]
                mul_t[i][j] = pos[mul_name(x, y)]
    nu_t = [0] + [pos[ghost_names[level[x]]] for x in names[1:]]
    return make_semiring(
        names, 0, pos["1"], add_t, mul_t, nu_t, frozenset(pos[t] for t in tangibles)
    )


def flat_idempotent() -> FiniteNuSemiring:
    """{0, 1, t, 1v} with an idempotent non-unit sharing 1's nu-value."""
    return _assemble_blocks(
        [("1", "t")],
        ("1v",),
        {("1", "1"): "1", ("1", "t"): "t", ("t", "t"): "t"},
    )


def unit_pair() -> FiniteNuSemiring:
    """{0, 1, u, 1v} with an order-two unit."""
    return _assemble_blocks(
        [("1", "u")],
        ("1v",),
        {("1", "1"): "1", ("1", "u"): "u", ("u", "u"): "1"},
    )


def ghost_tower() -> FiniteNuSemiring:
    """flat_idempotent extended by a strictly higher pure ghost gv."""
    return _assemble_blocks(
        [("1", "t"), ()],
        ("1v", "gv"),
        {("1", "1"): "1", ("1", "t"): "t", ("t", "t"): "t"},
    )


def mixed_units() -> FiniteNuSemiring:
    """{0, 1, u, t, 1v}: an order-two unit and an idempotent absorbing it."""
    return _assemble_blocks(
        [("1", "u", "t")],
        ("1v",),
        {
            ("1", "1"): "1",
            ("1", "u"): "u",
            ("1", "t"): "t",
            ("u", "u"): "1",
            ("u", "t"): "t",
            ("t", "t"): "t",
        },
    )


def two_level(tangible_product: bool) -> FiniteNuSemiring:
    """Six elements over two nu-levels; t*a may stay tangible or collide."""
    return _assemble_blocks(
        [("1", "t"), ("a",)],
        ("1v", "av"),
        {
            ("1", "1"): "1",
            ("1", "t"): "t",
            ("1", "a"): "a",
            ("t", "t"): "t",
            ("t", "a"): "a" if tangible_product else "av",
            ("a", "a"): "av",
        },
    )


def bundled_suite() -> tuple[tuple[str, FiniteNuSemiring], ...]:
    """Named carriers exercised by the cross-module test batteries."""
    return (
        ("superboolean", superboolean()),
        ("str-chain:2", str_chain(2)),
        ("str-trunc:3", str_trunc(3)),
        ("flat-idempotent", flat_idempotent()),
        ("unit-pair", unit_pair()),
        ("ghost-tower", ghost_tower()),
        ("mixed-units", mixed_units()),
        ("two-level-t", two_level(True)),
        ("two-level-g", two_level(False)),
    )


def permute_semiring(
    R: FiniteNuSemiring, perm: Sequence[int]
) -> FiniteNuSemiring:
    """Isomorphic copy with element i renumbered to perm[i]."""
    inv = [0] * R.size
    for i, p in enumerate(perm):
        inv[p] = i
    names = tuple(R.names[inv[i]] for i in range(R.size))
    add_t = tuple(
        tuple(perm[R.add(inv[i], inv[j])] for j in range(R.size))
        for i in range(R.size)
    )
    mul_t = tuple(
        tuple(perm[R.mul(inv[i], inv[j])] for j in range(R.size))
        for i in range(R.size)
    )
    nu_t = tuple(perm[R.nu(inv[i])] for i in range(R.size))
    return FiniteNuSemiring(
        names,
        perm[R.zero],
        perm[R.one],
        add_t,
        mul_t,
        nu_t,
        frozenset(perm[a] for a in R.tangible),
        frozenset(perm[a] for a in R.prudent),
    )


def random_semiring(seed: int) -> FiniteNuSemiring:
    """Seeded 4-6 element carrier from the verified structured family."""
    rng = random.Random(seed)
    template = rng.choice(
        [
            flat_idempotent(),
            unit_pair(),
            ghost_tower(),
            mixed_units(),
            str_chain(2),
            two_level(True),
            two_level(False),
        ]
    )
    perm = list(range(template.size))
    rng.shuffle(perm)
    return permute_semiring(template, perm)


def builtin_semiring(spec: str) -> FiniteNuSemiring:
    """Carrier named on the command line: builtin, sized, or seeded."""
    if spec == "superboolean":
        return superboolean()
    for prefix, builder in (("str-chain:", str_chain), ("str-trunc:", str_trunc)):
        if spec.startswith(prefix):
            try:
                return builder(int(spec[len(prefix):]))
            except ValueError:
                raise ParseError(f"bad chain length in {spec!r}") from None
    if spec.startswith("random:"):
        try:
            return random_semiring(int(spec[len("random:"):]))
        except ValueError:
            raise ParseError(f"bad seed in {spec!r}") from None
    for name, carrier in bundled_suite():
        if spec == name:
            return carrier
    raise ParseError(f"unknown carrier {spec!r}")
