"""Independent verification routes for the frame decision.

Two oracles live here.  The finite-grid oracle works entirely in integer
arithmetic: for a rational density a/b = p/q and c on the b/q-grid, both
dynamics and the derived sets are determined by the p residues
{0, b/q, ..., (p-1)b/q} mod a, so forward-orbit avoidance of the two absorbing
intervals decides membership pointwise.  The numeric oracle estimates extreme
singular values of a truncated 0/1 translation matrix and is a trend-only
diagnostic.

The grid route shares nothing with the closed-form classification beyond the
map definitions themselves, which is what makes the cross-check meaningful.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import FrozenSet, Optional, Tuple

from .errors import BadTruncation, OracleInconsistency, RegionUnsupported
from .exactnum import ExactReal
from .lattice import NormalizedTriple, RegionTag, region_tag

# regions where the piecewise maps are defined (a < b < c, b-a < c0 < a)
# and the triple can be on-grid (XIV is off-grid by definition, XII irrational)
_DYNAMICS_TAGS = {
    RegionTag.VIII,
    RegionTag.IX,
    RegionTag.X,
    RegionTag.XI,
    RegionTag.XIII,
}


@dataclass(frozen=True)
class GridModel:
    """Integer shadow of an on-grid rational triple.

    Indices j = 0..p-1 stand for the residues j*(b/q) mod a.  The forward map
    adds f*q or (f+1)*q mod p depending on the branch; the absorbing interval
    of the forward map is [j0-(q-p), j0) and that of the backward map is the
    cyclic [j1, j1+(q-p)).
    """

    nt: NormalizedTriple
    p: int
    q: int
    f: int  # floor(c/b)
    j0: int  # index of c0
    j1: int  # index of c1
    e: int  # index of c mod a

    @property
    def hole_len(self) -> int:
        return self.q - self.p

    def point(self, j: int) -> ExactReal:
        """Real residue represented by index j, i.e. j*(b/q) for j in [0, p)."""
        return self.nt.b * Fraction(j % self.p, self.q)

    def bh_forward(self) -> FrozenSet[int]:
        return frozenset(range(self.j0 - self.hole_len, self.j0))

    def bh_backward(self) -> FrozenSet[int]:
        return frozenset((self.j1 + i) % self.p for i in range(self.hole_len))

    def step_forward(self, j: int) -> int:
        j %= self.p
        if j < self.j0 - self.hole_len:
            return (j + (self.f + 1) * self.q) % self.p
        if j < self.j0:
            return j
        return (j + self.f * self.q) % self.p

    def step_backward(self, j: int) -> int:
        j %= self.p
        rel = (j - self.e) % self.p
        if rel < self.p - self.j0:
            return (j - self.f * self.q) % self.p
        if rel < self.p - self.j0 + self.hole_len:
            return j
        return (j - (self.f + 1) * self.q) % self.p


def build_grid_model(nt: NormalizedTriple) -> GridModel:
    if not nt.is_rational or not nt.c_on_grid:
        raise RegionUnsupported("grid oracle needs a/b = p/q and c on the b/q grid")
    tag = region_tag(nt)
    if tag not in _DYNAMICS_TAGS:
        raise RegionUnsupported(f"maps are not defined on region {tag}")
    p, q = nt.rational
    cb = nt.c.ratio(nt.b)
    k_c = cb * q
    assert k_c.denominator == 1
    f = nt.floor_cb
    j0 = k_c.numerator - f * q
    assert 0 < j0 < p, "c0 index must sit strictly inside (0, p)"
    j1 = (f * q) % p
    e = k_c.numerator % p
    assert e == (j0 + j1) % p
    return GridModel(nt, p, q, f, j0, j1, e)


def _orbit_avoids(gm: GridModel, start: int, step, forbidden: FrozenSet[int]) -> bool:
    seen = set()
    j = start % gm.p
    while j not in seen:
        if j in forbidden:
            return False
        seen.add(j)
        j = step(j)
    return True


def grid_S(gm: GridModel) -> FrozenSet[int]:
    """Indices whose forward orbits under both maps avoid the absorbers."""
    bh_f = gm.bh_forward()
    bh_b = gm.bh_backward()
    out = set()
    for j in range(gm.p):
        if _orbit_avoids(gm, j, gm.step_forward, bh_f) and _orbit_avoids(
            gm, j, gm.step_backward, bh_b
        ):
            out.add(j)
    return frozenset(out)


def grid_D(gm: GridModel, S: Optional[FrozenSet[int]] = None) -> FrozenSet[int]:
    """The solvability-two set, from S by shifts and intersections."""
    if S is None:
        S = grid_S(gm)
    p, q, f = gm.p, gm.q, gm.f
    low_window = set(range(0, gm.j0 - gm.hole_len))  # [0, c0+a-b)
    shifted = {j for j in range(p) if (j + f * q) % p in S}  # S - f*b
    out = S & low_window & shifted
    for k in range(1, f):
        shift_k = {j for j in range(p) if (j + k * q) % p in S}  # S - k*b
        out |= S & shift_k
    return frozenset(out)


def grid_frame_decision(nt: NormalizedTriple) -> str:
    """'Frame' or 'NotFrame' by an independent route.

    On-grid triples inside the maps' region go through the orbit pipeline
    (S, then D, then the finite-test-set reduction as a consistency check);
    other regions fall back to the simple closed forms.
    """
    tag = region_tag(nt)
    if tag in _DYNAMICS_TAGS and nt.is_rational and nt.c_on_grid:
        gm = build_grid_model(nt)
        D = grid_D(gm)
        # reduction to the finite test set {0, b/q, ...} union (c - same):
        # on the grid both families exhaust all residues, so the reduced and
        # full emptiness tests must agree identically.
        test_set = set(range(gm.p)) | {(gm.e - z) % gm.p for z in range(gm.p)}
        reduced_empty = not (D & test_set)
        if reduced_empty != (not D):
            raise OracleInconsistency(
                f"finite-test-set reduction disagrees with D emptiness on {nt}"
            )
        return "Frame" if not D else "NotFrame"
    if tag in (RegionTag.I, RegionTag.II, RegionTag.III, RegionTag.IV,
               RegionTag.V, RegionTag.VI, RegionTag.VII):
        from .classifier import classify  # local import keeps modules acyclic

        return classify(nt.a, nt.b, nt.c).verdict
    raise RegionUnsupported(f"no oracle route for region {tag} with this lattice")


# Extreme singular values below this are machine noise from an exactly
# singular matrix; snap them to zero so trend comparisons are deterministic.
_SINGULAR_FLOOR = 1e-10


def numeric_frame_bounds(
    nt: NormalizedTriple, t_samples: int = 16, half_width: int = 8
) -> Tuple[float, float]:
    """Singular-value diagnostic on the 0/1 translation matrix of the triple.

    Returns (A_est, B_est): min/max extreme singular values over a grid of
    window offsets t (midpoints of an equispaced partition of [0, a), which
    keeps float samples away from the matrix's discontinuity set).  The
    bi-infinite matrix has rows indexed by mu = m*a and columns by
    lambda = n*b, entries chi_[0,c)(t - mu + lambda), and the system is a
    frame exactly when its singular values stay in a band [A, B] with A > 0
    uniformly in t.

    When a/b = p/q is rational the matrix commutes with the joint shift
    (m, n) -> (m + q, n + p), so its spectrum decomposes over a phase
    variable; A_est/B_est then sample max(1, round((2*half_width+1)/q))
    equispaced phases of the exact q x p symbol.  This converges to the true
    bounds from the correct side and, for non-frames, detects the singular
    phase.  For irrational a/b we fall back to a plain window truncation
    (rows |m| <= half_width, columns kept only when their full support lies
    inside the row window); that variant over-estimates A and only decays
    toward the truth at rate ~1/half_width, so it is trend-only.
    """
    import numpy as np

    if half_width < 4:
        raise BadTruncation("half_width must be at least 4")
    a, b, c = float(nt.a), float(nt.b), float(nt.c)
    if max(a, b) >= c:
        raise BadTruncation("diagnostic needs max(a, b) < c")
    if t_samples < 1:
        raise BadTruncation("need at least one t sample")

    A_est = float("inf")
    B_est = 0.0
    for i in range(t_samples):
        t = (i + 0.5) * a / t_samples
        if nt.rational is not None:
            sig_lo, sig_hi = _phase_sampled_extremes(np, nt, t, half_width)
        else:
            sig_lo, sig_hi = _windowed_extremes(np, a, b, c, t, half_width)
        A_est = min(A_est, sig_lo)
        B_est = max(B_est, sig_hi)
    if A_est < _SINGULAR_FLOOR:
        A_est = 0.0
    return A_est, B_est


def _phase_sampled_extremes(np, nt: NormalizedTriple, t: float, half_width: int):
    """Extreme singular values via the q x p shift symbol at sampled phases."""
    p, q = nt.rational
    a, b, c = float(nt.a), float(nt.b), float(nt.c)
    n_phases = max(1, round((2 * half_width + 1) / q))
    lo = float("inf")
    hi = 0.0
    for k in range(n_phases):
        theta = 2.0 * np.pi * k / n_phases
        sym = np.zeros((q, p), dtype=complex)
        for m in range(q):
            # entries chi(t - m*a + (r + p*j)*b): solve for the j-window
            base = t - m * a
            j_lo = int(np.floor((-base - (p - 1) * b) / (p * b))) - 1
            j_hi = int(np.floor((c - base) / (p * b))) + 1
            for j in range(j_lo, j_hi + 1):
                for r in range(p):
                    x = base + (r + p * j) * b
                    if 0.0 <= x < c:
                        sym[m, r] += np.exp(1j * theta * j)
        s = np.linalg.svd(sym, compute_uv=False)
        lo = min(lo, float(s[-1]) if q >= p else 0.0)
        hi = max(hi, float(s[0]))
    return lo, hi


def _windowed_extremes(np, a: float, b: float, c: float, t: float, half_width: int):
    """Extreme singular values of the truncated matrix, boundary columns pruned."""
    n_max = int(half_width + c / b) + 1
    rows = np.arange(-half_width, half_width + 1) * a
    # keep a column only if its support over ALL rows, the lattice points in
    # (t+l-c, t+l], sits inside the row window
    keep = []
    for n in range(-n_max, n_max + 1):
        l = n * b
        m_lo = int(np.floor((t + l - c) / a)) + 1
        m_hi = int(np.floor((t + l) / a))
        if m_lo >= -half_width and m_hi <= half_width:
            keep.append(l)
    if not keep:
        raise BadTruncation("window too small: no fully supported columns")
    kept = np.array(keep)
    x = t - rows[:, None] + kept[None, :]
    M = ((x >= 0) & (x < c)).astype(float)
    s = np.linalg.svd(M, compute_uv=False)
    lo = float(s[-1]) if M.shape[1] <= M.shape[0] else 0.0
    return lo, float(s[0])

# ---------------------------------------------------------------------------
# cross-pipeline agreement
# ---------------------------------------------------------------------------


def triple_pipeline_check(nt: NormalizedTriple) -> Optional[str]:
    """Run every applicable verdict route on one triple.

    Returns None when all routes agree, else a one-line description of the
    clash.  Usable on any region the invariant-set construction supports;
    the grid-orbit route joins in whenever the triple sits on its grid.
    """
    from .classifier import characterize_S_nonempty, classify_triple
    from .dynsys import compute_D, compute_S, measure_identity

    tag = region_tag(nt)
    verdicts = {"closed-form": classify_triple(nt).verdict}
    try:
        report = compute_S(nt)
    except RegionUnsupported:
        report = None
    if report is not None:
        if report.S.is_empty:
            verdicts["measure-identity"] = "Frame"
            verdicts["two-solvability"] = "Frame"
        else:
            verdicts["measure-identity"] = (
                "Frame" if measure_identity(nt, report.S) else "NotFrame"
            )
            verdicts["two-solvability"] = (
                "Frame" if compute_D(nt, report.S).is_empty else "NotFrame"
            )
        try:
            if characterize_S_nonempty(nt) != (not report.S.is_empty):
                return (
                    f"S-existence clash on {_brief(nt)}: construction says "
                    f"{'nonempty' if not report.S.is_empty else 'empty'}"
                )
        except RegionUnsupported:
            pass
    if tag in _DYNAMICS_TAGS and nt.is_rational and nt.c_on_grid:
        verdicts["grid-orbits"] = grid_frame_decision(nt)
    if len(set(verdicts.values())) > 1:
        detail = ", ".join(f"{k}={v}" for k, v in sorted(verdicts.items()))
        return f"verdict clash on {_brief(nt)}: {detail}"
    return None


def _brief(nt: NormalizedTriple) -> str:
    return f"(a={nt.a.render()}, b={nt.b.render()}, c={nt.c.render()})"


def on_grid_survey(qmax: int, c_lo: int = 1, c_hi: int = 8, regions=None):
    """Yield every normalized triple with b = 1, a = p/q < 1 (q <= qmax),
    c in the open interval (c_lo, c_hi) on the grid Z/q, filtered to the
    requested regions (default: the generic dynamical ones)."""
    from math import gcd as _gcd

    from .exactnum import rat
    from .lattice import normalize

    if regions is None:
        regions = (RegionTag.XII, RegionTag.XIII)
    one = rat(1)
    for q in range(1, qmax + 1):
        for p in range(1, q):
            if _gcd(p, q) != 1:
                continue
            a = rat(Fraction(p, q))
            for k in range(c_lo * q + 1, c_hi * q):
                nt = normalize(a, one, rat(Fraction(k, q)))
                if region_tag(nt) in regions:
                    yield nt
