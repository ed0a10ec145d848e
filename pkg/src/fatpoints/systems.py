"""Linear systems of plane curves with fat base points.

A system L(d; m1,...,mr) collects curves of degree d passing through r
general points with assigned multiplicities.  Degrees and multiplicities
may be negative; the intersection-theoretic dictionary on the blow-up
makes sense of both.  This module provides the basic arithmetic
(virtual/expected dimension), the Cremona transformation and standard
form, the negative-multiplicity rules, the axiom knowledge base used for
final classification, and the glueing/splitting bookkeeping.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from math import comb

# Verdict kinds
NON_SPECIAL = "NonSpecial"
EMPTY = "Empty"
MINUS_ONE_SPECIAL = "MinusOneSpecial"
INCONCLUSIVE = "Inconclusive"

# Axiom identifiers
POINTS_LE_9 = "POINTS_LE_9"
MULT_LE_11 = "MULT_LE_11"
SIMPLE_POINTS = "SIMPLE_POINTS"


@dataclass(frozen=True)
class LinearSystem:
    """A degree together with an ordered, signed multiplicity list."""

    degree: int
    mults: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "mults", tuple(int(m) for m in self.mults))

    # -- canonicalization (always explicit, never implicit) ------------

    def sorted_desc(self) -> "LinearSystem":
        """Multiplicities stably sorted non-increasing; zeros kept."""
        order = sorted(range(len(self.mults)), key=lambda i: (-self.mults[i], i))
        return LinearSystem(self.degree, tuple(self.mults[i] for i in order))

    def canonical(self) -> "LinearSystem":
        """Sorted non-increasing with all zero multiplicities removed."""
        ms = sorted((m for m in self.mults if m != 0), reverse=True)
        return LinearSystem(self.degree, tuple(ms))

    def same_as(self, other: "LinearSystem") -> bool:
        """Equality up to reordering and zero multiplicities."""
        a, b = self.canonical(), other.canonical()
        return a.degree == b.degree and a.mults == b.mults

    # -- convenience ---------------------------------------------------

    @property
    def npoints(self) -> int:
        """Number of strictly positive multiplicities."""
        return sum(1 for m in self.mults if m > 0)

    def count(self, m: int) -> int:
        return sum(1 for x in self.mults if x == m)

    def __str__(self) -> str:
        return format_system(self)


def format_system(L: LinearSystem) -> str:
    """Render as ``L(d;m1^c1,...)`` grouping equal consecutive entries."""
    parts: list[str] = []
    i, ms = 0, L.mults
    while i < len(ms):
        j = i
        while j < len(ms) and ms[j] == ms[i]:
            j += 1
        n = j - i
        parts.append(f"{ms[i]}^{n}" if n > 1 else f"{ms[i]}")
        i = j
    return f"L({L.degree};{','.join(parts)})"


@dataclass(frozen=True)
class Step:
    """One replayable derivation step: an operation with its parameters."""

    op: str
    params: dict = field(default_factory=dict)
    before: str | None = None
    after: str | None = None


@dataclass(frozen=True)
class Verdict:
    """Classification result with a replayable derivation trace."""

    kind: str
    dim: int | None = None
    certificate: tuple[Step, ...] = ()
    axioms_used: tuple[str, ...] = ()
    reason: str | None = None

    @property
    def conclusive(self) -> bool:
        return self.kind in (NON_SPECIAL, EMPTY, MINUS_ONE_SPECIAL)

    @property
    def certifies_nonspecial(self) -> bool:
        """Empty systems are non-special with expected dimension -1."""
        return self.kind in (NON_SPECIAL, EMPTY)

    def prepend(self, steps: tuple[Step, ...]) -> "Verdict":
        return replace(self, certificate=steps + self.certificate)


# ---------------------------------------------------------------------
# dimensions


def vdim(L: LinearSystem) -> int:
    """Virtual dimension C(d+2,2) - sum C(mj+1,2) - 1.

    Negative multiplicities contribute through the same binomial
    m(m+1)/2, so -1 contributes 0 and -2 contributes +1.
    """
    d = L.degree
    total = (d + 2) * (d + 1) // 2
    for m in L.mults:
        total -= m * (m + 1) // 2
    return total - 1


def edim(L: LinearSystem) -> int:
    """Expected dimension max(vdim, -1)."""
    return max(vdim(L), -1)


# ---------------------------------------------------------------------
# Cremona transformation and standard form


def _padded3(mults: tuple[int, ...]) -> tuple[int, int, int]:
    ms = mults + (0, 0, 0)
    return ms[0], ms[1], ms[2]


def cremona(L: LinearSystem) -> LinearSystem:
    """Quadratic transformation based on the first three points.

    With k = d - (m1+m2+m3) returns L(d+k; m1+k, m2+k, m3+k, rest).
    Systems with fewer than three multiplicities are padded with zeros
    (a zero multiplicity is a vacuous condition).  Does not sort.
    """
    ms = L.mults if len(L.mults) >= 3 else L.mults + (0,) * (3 - len(L.mults))
    m1, m2, m3 = ms[0], ms[1], ms[2]
    k = L.degree - (m1 + m2 + m3)
    return LinearSystem(L.degree + k, (m1 + k, m2 + k, m3 + k) + ms[3:])


def is_standard_form(L: LinearSystem) -> bool:
    """True iff d < 0, or mults are non-increasing with d >= m1+m2+m3."""
    if L.degree < 0:
        return True
    if any(L.mults[i] < L.mults[i + 1] for i in range(len(L.mults) - 1)):
        return False
    m1, m2, m3 = _padded3(L.mults)
    return L.degree - (m1 + m2 + m3) >= 0


def standard_form(L: LinearSystem) -> tuple[LinearSystem, tuple[LinearSystem, ...]]:
    """Repeatedly sort and apply Cremona until standard form is reached.

    Returns the standard form together with the full chain of systems
    visited (starting at the input, ending at the result).  Terminates
    because each applied Cremona strictly decreases the degree.
    """
    chain = [L]
    cur = L
    while True:
        srt = cur.sorted_desc()
        if srt.mults != cur.mults:
            cur = srt
            chain.append(cur)
        if cur.degree < 0:
            break
        m1, m2, m3 = _padded3(cur.mults)
        if cur.degree - (m1 + m2 + m3) >= 0:
            break
        cur = cremona(cur)
        chain.append(cur)
    return cur, tuple(chain)


# ---------------------------------------------------------------------
# negative multiplicity rules


@dataclass(frozen=True)
class FixedPart:
    """Record of multiple fixed components split off by the rules below.

    Each entry k >= 2 comes from a multiplicity -k; the exceptional
    divisor appears k times in the fixed part of the system.
    """

    components: tuple[int, ...] = ()

    @property
    def vdim_shift(self) -> int:
        """Sum of (k - k^2)/2 over recorded components."""
        return sum((k - k * k) // 2 for k in self.components)


def strip_negative_mults(L: LinearSystem) -> tuple[LinearSystem, FixedPart]:
    """Zero out negative multiplicities of a sorted system with d >= 0.

    Entries equal to -1 are fixed components that change nothing
    numerically; entries <= -2 are multiple fixed components and are
    recorded with k = -m.  The identity
    ``vdim L = vdim L' + sum (k - k^2)/2`` holds for the result L'.
    """
    if L.degree < 0:
        raise ValueError("strip_negative_mults needs degree >= 0")
    if any(L.mults[i] < L.mults[i + 1] for i in range(len(L.mults) - 1)):
        raise ValueError("strip_negative_mults needs non-increasing multiplicities")
    comps = tuple(-m for m in L.mults if m <= -2)
    new = tuple(0 if m < 0 else m for m in L.mults)
    return LinearSystem(L.degree, new), FixedPart(comps)


# ---------------------------------------------------------------------
# axiom knowledge base


def _check_axiom_pre(L: LinearSystem) -> None:
    if L.degree < 0 or not is_standard_form(L) or any(m < 0 for m in L.mults):
        raise ValueError(
            f"axioms apply only to standard-form systems with d >= 0 and "
            f"non-negative multiplicities, got {L}"
        )


def _axiom_verdict(L: LinearSystem, axioms: tuple[str, ...]) -> Verdict:
    e = edim(L)
    kind = EMPTY if e == -1 else NON_SPECIAL
    step = Step("axiom", {"axioms": list(axioms), "edim": e}, before=str(L))
    return Verdict(kind, dim=e, certificate=(step,), axioms_used=axioms)


def classify_by_axioms(L: LinearSystem) -> Verdict | None:
    """Classify a standard-form, non-negative system by known results.

    Applies when the system is based on at most 9 points or when all
    multiplicities are bounded by 11; such a standard-form system is
    non-special, hence empty precisely when its expected dimension
    is -1.
    """
    _check_axiom_pre(L)
    positive = [m for m in L.mults if m > 0]
    if len(positive) <= 9:
        return _axiom_verdict(L, (POINTS_LE_9,))
    if not positive or max(positive) <= 11:
        return _axiom_verdict(L, (MULT_LE_11,))
    return None


def classify_by_simple_points(L: LinearSystem) -> Verdict | None:
    """Classify when at most 9 multiplicities are >= 2.

    Dropping the simple points leaves a standard-form system on at most
    9 points, which is non-special; general simple points then impose
    independent conditions, so the full system is non-special as well.
    """
    _check_axiom_pre(L)
    if sum(1 for m in L.mults if m >= 2) <= 9:
        return _axiom_verdict(L, (SIMPLE_POINTS, POINTS_LE_9))
    return None


# ---------------------------------------------------------------------
# glueing and splitting


class GlueError(ValueError):
    """Raised when a glue step violates one of its preconditions."""

    def __init__(self, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.code = code


def glue(
    L: LinearSystem,
    s: int,
    m: int,
    k: int,
    cert_small: Verdict,
) -> LinearSystem:
    """Replace s multiplicity-m points of L by one point of multiplicity k+1.

    Requires a non-specialty certificate for the small system L(k;m^s)
    and the virtual-dimension sandwich: with L2 the glued system, either
    -1 <= vdim L2 <= vdim L or vdim L <= vdim L2 <= -1.  The accepted
    step satisfies vdim L2 - vdim L = -(vdim L(k;m^s) + 1).
    """
    if not cert_small.certifies_nonspecial:
        raise GlueError("UNCERTIFIED", f"small system verdict is {cert_small.kind}")
    if L.count(m) < s:
        raise GlueError("MISSING_POINTS", f"{L} lacks {s} entries equal to {m}")
    removed = 0
    new: list[int] = []
    for x in reversed(L.mults):
        if x == m and removed < s:
            removed += 1
            continue
        new.append(x)
    new.reverse()
    L2 = LinearSystem(L.degree, tuple(new) + (k + 1,))
    v1, v2 = vdim(L), vdim(L2)
    if not (-1 <= v2 <= v1 or v1 <= v2 <= -1):
        raise GlueError(
            "SANDWICH_VIOLATED", f"vdim {v1} -> {v2} fits neither ordering"
        )
    small = LinearSystem(k, (m,) * s)
    assert v2 - v1 == -(vdim(small) + 1)
    return L2


def verify_split(
    L: LinearSystem,
    L1: LinearSystem,
    L2: LinearSystem,
    cert1: Verdict,
    cert2: Verdict,
) -> Verdict:
    """Combine non-specialty of L1 and L2 into non-specialty of L.

    L1 carries a sub-multiset of L's conditions; L2 carries the rest
    plus one condition of multiplicity deg(L1)+1.  The combination is
    valid when (vdim L1 + 1)(vdim L2 + 1) >= 0.
    """
    if L2.degree != L.degree:
        raise ValueError("L2 must have the same degree as L")
    from collections import Counter

    k = L1.degree
    c2 = Counter(m for m in L2.mults if m != 0)
    if c2[k + 1] < 1:
        raise ValueError(f"L2 must contain one multiplicity {k + 1}")
    c2[k + 1] -= 1
    total = Counter(m for m in L1.mults if m != 0) + c2
    if total != Counter(m for m in L.mults if m != 0):
        raise ValueError("multiplicities of L1 and L2 do not recombine to L")
    if not (cert1.certifies_nonspecial and cert2.certifies_nonspecial):
        return Verdict(INCONCLUSIVE, reason="missing non-specialty certificate")
    v1, v2 = vdim(L1), vdim(L2)
    if (v1 + 1) * (v2 + 1) < 0:
        return Verdict(INCONCLUSIVE, reason=f"({v1}+1)({v2}+1) < 0")
    e = edim(L)
    step = Step(
        "split",
        {"L1": str(L1), "L2": str(L2), "vdim1": v1, "vdim2": v2},
        before=str(L),
    )
    kind = EMPTY if e == -1 else NON_SPECIAL
    return Verdict(
        kind,
        dim=e,
        certificate=(step,) + cert1.certificate + cert2.certificate,
        axioms_used=tuple(dict.fromkeys(cert1.axioms_used + cert2.axioms_used)),
    )
