"""Staircase diagrams of monomials and the m-reduction algorithm.

A diagram is a list of layer sizes (c1,...,cn) with cj <= j; the j-th
layer is the set of monomials of total degree j-1 with y-exponent below
cj.  Reduction removes exactly C(m+1,2) cells from the last m layers and
is sound for non-specialty: if the reduced space is non-special, so is
the original one.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import comb


class InvalidLayerError(ValueError):
    """A layer size exceeds its index (code INVALID_LAYER)."""

    code = "INVALID_LAYER"


class TooShortError(ValueError):
    """A diagram has fewer layers than the reduction needs (code TOO_SHORT)."""

    code = "TOO_SHORT"


@dataclass(frozen=True)
class Diagram:
    """Ordered layer sizes; canonical form trims trailing zero layers."""

    layers: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        layers = tuple(int(c) for c in self.layers)
        object.__setattr__(self, "layers", layers)
        for j, c in enumerate(layers, start=1):
            if c < 0 or c > j:
                raise InvalidLayerError(f"layer {j} has size {c}, allowed 0..{j}")

    @property
    def cells(self) -> int:
        return sum(self.layers)

    @property
    def nlayers(self) -> int:
        return len(self.layers)

    def canonical(self) -> "Diagram":
        layers = list(self.layers)
        while layers and layers[-1] == 0:
            layers.pop()
        return Diagram(tuple(layers))

    def same_as(self, other: "Diagram") -> bool:
        return self.canonical().layers == other.canonical().layers

    def monomials(self) -> list[tuple[int, int]]:
        """Cells as exponent pairs (a, b), layer by layer."""
        out = []
        for j, c in enumerate(self.layers, start=1):
            for b in range(c):
                out.append((j - 1 - b, b))
        return out

    def __str__(self) -> str:
        return format_diagram(self)


def diagram(*layers: int) -> Diagram:
    """Build a diagram from explicit layer sizes, trimming trailing zeros."""
    return Diagram(tuple(layers)).canonical()


def triangle(a: int) -> Diagram:
    """The full triangle (1, 2, ..., a): all monomials of degree < a."""
    return Diagram(tuple(range(1, a + 1)))


def bar(a: int, *rest: int) -> Diagram:
    """The diagram (1, 2, ..., a, rest...)."""
    return Diagram(tuple(range(1, a + 1)) + tuple(rest)).canonical()


def format_diagram(D: Diagram) -> str:
    """Render using the ``~a`` shorthand for a leading staircase."""
    layers = D.canonical().layers
    a = 0
    while a < len(layers) and layers[a] == a + 1:
        a += 1
    rest = layers[a:]
    parts: list[str] = []
    if a > 0:
        parts.append(f"~{a}")
    i = 0
    while i < len(rest):
        j = i
        while j < len(rest) and rest[j] == rest[i]:
            j += 1
        n = j - i
        parts.append(f"{rest[i]}^{n}" if n > 1 else f"{rest[i]}")
        i = j
    return f"({','.join(parts)})"


def vdim_space(D: Diagram, mults) -> int:
    """Virtual dimension of V(D; mults): cell count minus conditions."""
    if any(m < 0 for m in mults):
        raise ValueError("vdim_space needs non-negative multiplicities")
    return D.cells - sum(comb(m + 1, 2) for m in mults)


def p_of(D: Diagram, m: int) -> int:
    """Number of multiplicity-m points the diagram can virtually absorb."""
    if m < 1:
        raise ValueError("p_of needs m >= 1")
    return D.cells // comb(m + 1, 2)


def reduce_m(D: Diagram, m: int) -> tuple[Diagram, tuple[int, ...]] | None:
    """One m-reduction of the last m layers, or None if irreducible.

    Going down from j = m to 1 over the last m layers (a1,...,am):
    vj = aj when aj < m and max Vj >= aj, else vj = max Vj, with
    Vm = {1,...,m} and V(j-1) = Vj minus {vj}.  The reduction exists iff
    every vj can actually be removed from its Vj, and then removes
    exactly C(m+1,2) cells.
    """
    D = D.canonical()
    if m < 1:
        raise ValueError("reduce_m needs m >= 1")
    if D.nlayers < m:
        raise TooShortError(f"{D} has {D.nlayers} layers, needs {m}")
    tail = list(D.layers[-m:])
    avail = set(range(1, m + 1))
    v = [0] * m
    for j in range(m, 0, -1):
        aj = tail[j - 1]
        top = max(avail)
        vj = aj if (aj < m and top >= aj) else top
        if vj not in avail:
            return None
        v[j - 1] = vj
        avail.discard(vj)
    new_tail = [tail[i] - v[i] for i in range(m)]
    assert all(x >= 0 for x in new_tail)
    reduced = Diagram(D.layers[:-m] + tuple(new_tail)).canonical()
    assert reduced.cells == D.cells - comb(m + 1, 2)
    return reduced, tuple(v)


@dataclass(frozen=True)
class ReductionStep:
    m: int
    v: tuple[int, ...]
    result: Diagram


@dataclass(frozen=True)
class ReductionTrace:
    """A maximal run of reductions with the unconsumed multiplicities."""

    initial: Diagram
    steps: tuple[ReductionStep, ...] = ()
    residual_mults: tuple[int, ...] = ()

    @property
    def final(self) -> Diagram:
        return self.steps[-1].result if self.steps else self.initial.canonical()

    @property
    def consumed_all(self) -> bool:
        return not self.residual_mults

    @property
    def certified_dim(self) -> int | None:
        """Space dimension certified when every condition was consumed."""
        return self.final.cells if self.consumed_all else None


def reduce_chain(D: Diagram, mults, order=None) -> ReductionTrace:
    """Apply reduce_m for each multiplicity in order, stopping when stuck.

    The default order is the given one (callers put the distinguished
    multiplicity first).  Zero multiplicities impose no condition and
    are consumed for free.  Irreducibility is a normal outcome: the
    remaining multiplicities are reported as residual.
    """
    seq = list(mults) if order is None else list(order)
    if any(m < 0 for m in seq):
        raise ValueError("reduce_chain needs non-negative multiplicities")
    cur = D.canonical()
    steps: list[ReductionStep] = []
    for i, m in enumerate(seq):
        if m == 0:
            continue
        try:
            res = reduce_m(cur, m)
        except TooShortError:
            res = None
        if res is None:
            return ReductionTrace(D, tuple(steps), tuple(seq[i:]))
        cur, v = res
        steps.append(ReductionStep(m, v, cur))
    return ReductionTrace(D, tuple(steps), ())


def subset(D: Diagram, D2: Diagram) -> bool:
    """Layerwise comparison D <= D2 (missing layers count as zero)."""
    a, b = D.canonical().layers, D2.canonical().layers
    if len(a) > len(b):
        return all(c == 0 for c in a[len(b):]) and all(
            x <= y for x, y in zip(a, b)
        )
    return all(x <= y for x, y in zip(a, b))


@dataclass(frozen=True)
class EnlargeCertificate:
    """Emptiness by monotonicity: D fits inside a triangle whose space
    with the same conditions reduces to the empty diagram."""

    original: Diagram
    enlarged: Diagram
    trace: ReductionTrace


def try_empty_by_enlarge(D: Diagram, mults) -> EnlargeCertificate | None:
    """Search minimal containing triangles certifying V(D; mults) = 0.

    If D fits in a triangle (~t) whose reduction chain with the given
    multiplicities consumes every condition and empties the diagram,
    then dim V((~t); mults) = 0 and by subset monotonicity V(D; mults)
    is the zero space.
    """
    mults = [m for m in mults if m > 0]
    conditions = sum(comb(m + 1, 2) for m in mults)
    D = D.canonical()
    if D.cells > conditions:
        return None
    # The final diagram is empty with all conditions consumed only when
    # the triangle has exactly `conditions` cells.
    t = D.nlayers
    while comb(t + 1, 2) < conditions:
        t += 1
    if comb(t + 1, 2) != conditions:
        return None
    tri = triangle(t)
    if not subset(D, tri):
        return None
    trace = reduce_chain(tri, mults)
    if trace.consumed_all and trace.final.cells == 0:
        return EnlargeCertificate(D, tri, trace)
    return None
