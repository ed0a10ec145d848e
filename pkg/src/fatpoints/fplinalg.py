"""Interpolation matrices over a large prime field and the one-sided
randomized non-specialty certificate.

The matrix of V(D; m1,...,mr) at points p1,...,pr has one column per
monomial of D and one row per point and derivative order (alpha, beta)
with alpha+beta < mj.  Full rank at specialized points over F_p implies
full rank over the rationals at general points, so a full-rank outcome
certifies non-specialty; a deficient rank never certifies anything.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass
from math import comb

import numpy as np

from ._gauss import rank_mod_p_inplace
from .diagrams import Diagram
from .systems import INCONCLUSIVE, NON_SPECIAL, Step, Verdict

DEFAULT_PRIME = 2**31 - 1


class DegeneratePointsError(ValueError):
    """Raised when sampled points repeat (code DEGENERATE)."""

    code = "DEGENERATE"


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class PrimeFieldConfig:
    """Prime modulus, RNG seed and retry count for rank certificates."""

    p: int = DEFAULT_PRIME
    seed: int = 0
    attempts: int = 3

    def __post_init__(self) -> None:
        if self.p <= 10**6:
            raise ValueError("p must exceed 10^6 so derivative coefficients "
                             "never vanish spuriously")
        if not _is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.attempts < 1:
            raise ValueError("attempts must be >= 1")


def task_rng(cfg: PrimeFieldConfig, key: str) -> np.random.Generator:
    """Deterministic per-task stream derived from (seed, task key).

    Parallel and serial runs see identical streams because the stream
    depends only on the task content, never on scheduling order.
    """
    digest = hashlib.sha256(f"{cfg.seed}:{key}".encode()).digest()
    return np.random.default_rng(int.from_bytes(digest[:8], "big"))


def sample_points(n: int, p: int, rng: np.random.Generator) -> list[tuple[int, int]]:
    """n points in F_p^2 with pairwise distinct x and y coordinates."""
    xs: set[int] = set()
    ys: set[int] = set()
    pts: list[tuple[int, int]] = []
    while len(pts) < n:
        x = int(rng.integers(1, p))
        y = int(rng.integers(1, p))
        if x in xs or y in ys:
            continue
        xs.add(x)
        ys.add(y)
        pts.append((x, y))
    return pts


def build_matrix(D: Diagram, mults, points, p: int = DEFAULT_PRIME) -> np.ndarray:
    """Dense interpolation matrix of V(D; mults) at the given points.

    Row (point j, derivative (alpha, beta)) and column (monomial x^a y^b)
    hold the falling-factorial coefficient a!/(a-alpha)! * b!/(b-beta)!
    times x^(a-alpha) y^(b-beta), taken as zero when alpha > a or
    beta > b; all arithmetic is mod p.
    """
    mults = list(mults)
    points = list(points)
    if len(points) != len(mults):
        raise ValueError("need exactly one point per multiplicity")
    if any(m < 1 for m in mults):
        raise ValueError("build_matrix needs multiplicities >= 1")
    if len(set(points)) != len(points):
        raise DegeneratePointsError("repeated interpolation points")
    mons = D.canonical().monomials()
    n = len(mons)
    rows = sum(comb(m + 1, 2) for m in mults)
    A = np.zeros((rows, n), dtype=np.int64)
    if n == 0:
        return A
    exps = np.array(mons, dtype=np.int64)
    ea, eb = exps[:, 0], exps[:, 1]
    # derivative orders reach max(mults) - 1 even on low-degree diagrams
    maxd = max(int(max(ea.max(), eb.max())), max(mults) - 1)
    # falling factorials FF[a, alpha] = a (a-1) ... (a-alpha+1) mod p
    FF = np.zeros((maxd + 1, maxd + 1), dtype=np.int64)
    for a in range(maxd + 1):
        f = 1
        FF[a, 0] = 1
        for al in range(1, a + 1):
            f = (f * (a - al + 1)) % p
            FF[a, al] = f
    r = 0
    for (x, y), m in zip(points, mults):
        xp = np.ones(maxd + 1, dtype=np.int64)
        yp = np.ones(maxd + 1, dtype=np.int64)
        for i in range(1, maxd + 1):
            xp[i] = (xp[i - 1] * x) % p
            yp[i] = (yp[i - 1] * y) % p
        for al in range(m):
            for be in range(m - al):
                ok = (ea >= al) & (eb >= be)
                row = np.zeros(n, dtype=np.int64)
                aa, bb = ea[ok], eb[ok]
                vals = (FF[aa, al] * FF[bb, be]) % p
                vals = (vals * xp[aa - al]) % p
                vals = (vals * yp[bb - be]) % p
                row[ok] = vals
                A[r] = row
                r += 1
    return A


def rank(A: np.ndarray, p: int = DEFAULT_PRIME) -> int:
    """Exact rank of an integer matrix over F_p."""
    return int(rank_mod_p_inplace(np.array(A, dtype=np.int64, copy=True), p))


def certify_nonspecial_rank(
    D: Diagram,
    mults,
    cfg: PrimeFieldConfig | None = None,
    key: str | None = None,
) -> Verdict:
    """One-sided randomized certificate for V(D; mults).

    Samples points from the task-keyed RNG and checks for full rank.
    Success returns NonSpecial with the vector-space dimension
    cols - rank; after cfg.attempts failures returns Inconclusive
    (rank deficiency at special points proves nothing).
    """
    cfg = cfg or PrimeFieldConfig()
    D = D.canonical()
    mults = [m for m in mults]
    if any(m < 1 for m in mults):
        raise ValueError("certify_nonspecial_rank needs multiplicities >= 1")
    cols = D.cells
    rows = sum(comb(m + 1, 2) for m in mults)
    if key is None:
        key = f"{D}|{','.join(map(str, mults))}"
    rng = task_rng(cfg, key)
    if not mults:
        step = Step("rank", {"rows": 0, "cols": cols, "rank": 0}, before=str(D))
        return Verdict(NON_SPECIAL, dim=cols, certificate=(step,))
    for attempt in range(1, cfg.attempts + 1):
        while True:
            try:
                pts = sample_points(len(mults), cfg.p, rng)
                A = build_matrix(D, mults, pts, cfg.p)
                break
            except DegeneratePointsError:
                continue
        rk = rank(A, cfg.p)
        if rk == min(rows, cols):
            step = Step(
                "rank",
                {
                    "rows": rows,
                    "cols": cols,
                    "rank": rk,
                    "p": cfg.p,
                    "seed": cfg.seed,
                    "attempt": attempt,
                },
                before=str(D),
            )
            return Verdict(NON_SPECIAL, dim=cols - rk, certificate=(step,))
    return Verdict(
        INCONCLUSIVE,
        reason=f"rank below min({rows},{cols}) after {cfg.attempts} attempts",
    )
