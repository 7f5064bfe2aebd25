"""Two nearby sqrt(3) window lengths whose verdicts are easy to conflate.

With (a, b) = (sqrt(3)/2, 1), the window length 15*sqrt(3)/2 reduces to
c0 = 15*sqrt(3)/2 - 12 > a: the large-offset regime where an irrational
a/b is unconditionally Frame.  The windowed numeric diagnostic decays like
1/half_width there (it is trend-only off the rational grid), which a naive
reading could take for a vanishing lower bound.  The nearby length
15 - 13*sqrt(3)/2 is a genuine NotFrame neighbour: generic regime, f = 3,
and its hole propagation produces the three-interval invariant set frozen
below, with D = S and a failing covering-measure identity.

These fixtures pin down which verdict belongs to which length, and check
that the frozen set cannot be attributed to either of the two plausible
look-alike lengths (15*sqrt(3)/2 and 5*sqrt(3)/2).
"""

from fractions import Fraction as F

import pytest

from gaborbox import classify, normalize, rat
from gaborbox.classifier import IrrationalParams
from gaborbox.dynsys import (
    compute_D,
    compute_S,
    measure_identity,
    measure_identity_lhs,
)
from gaborbox.errors import RegionUnsupported
from gaborbox.exactnum import surd_context
from gaborbox.lattice import PeriodicSet, RegionTag, black_hole_Rt, region_tag
from gaborbox.oracle import numeric_frame_bounds

SQ3 = surd_context(3)

A = SQ3.num(0, F(1, 2))
B = rat(1)

C_FRAME = SQ3.num(0, F(15, 2))        # 15*sqrt(3)/2,   c0 > a
C_NOTFRAME = SQ3.num(15, F(-13, 2))   # 15 - 13*sqrt(3)/2, generic regime
C_LOOKALIKE = SQ3.num(0, F(5, 2))     # 5*sqrt(3)/2, also generic, but Frame

# Hole propagation on C_NOTFRAME: BH_Rt = [3 - 3/2*sqrt(3), 4 - 2*sqrt(3))
# marches forward by 4b twice before freezing against BH_R.  The resulting
# complement has three holes of length b - a; the set itself is:
FROZEN_S = PeriodicSet.from_wrapped(
    A,
    [
        (SQ3.num(12, -7), SQ3.num(7, -4)),
        (SQ3.num(8, F(-9, 2)), SQ3.num(3, F(-3, 2))),
        (SQ3.num(4, -2), SQ3.num(11, -6)),
    ],
)


def test_large_offset_irrational_is_frame():
    nt = normalize(A, B, C_FRAME)
    assert region_tag(nt) is RegionTag.VI
    d = classify(A, B, C_FRAME)
    assert d.verdict == "Frame"
    assert d.witness is None


def test_windowed_trend_on_the_frame_side_is_trend_only():
    # Plain truncation over-estimates the lower extreme and decays ~1/hw
    # even on Frame triples; freeze the decay so nobody mistakes it for
    # evidence.  (Compare: the phase-sampled rational estimator is exact
    # and constant in hw -- see test_oracle.)
    nt = normalize(A, B, C_FRAME)
    lo8, hi8 = numeric_frame_bounds(nt, half_width=8)
    lo32, hi32 = numeric_frame_bounds(nt, half_width=32)
    assert lo8 == pytest.approx(0.8132244559931122, abs=1e-9)
    assert lo32 == pytest.approx(0.31865862131706735, abs=1e-9)
    assert hi8 == pytest.approx(6.50681688571107, abs=1e-9)
    assert hi32 == pytest.approx(13.602598018091731, abs=1e-9)
    assert 0.0 < lo32 < lo8  # decaying, not converging to a positive A


def test_nearby_window_is_not_frame():
    nt = normalize(A, B, C_NOTFRAME)
    assert region_tag(nt) is RegionTag.XII
    assert nt.floor_cb == 3
    assert nt.c0 == SQ3.num(12, F(-13, 2))
    assert nt.c1 == SQ3.num(3, F(-3, 2))

    d = classify(A, B, C_NOTFRAME)
    assert d.verdict == "NotFrame"
    assert isinstance(d.witness, IrrationalParams)
    assert (d.witness.d1, d.witness.d2) == (2, 0)
    assert d.witness.m == 1
    assert d.witness.e_count == 2


def test_frozen_invariant_set_and_surgery_data():
    nt = normalize(A, B, C_NOTFRAME)
    rep = compute_S(nt)
    assert rep.S == FROZEN_S
    # Every point is doubly solvable: D = S, so the obstruction is not a
    # thin exceptional subset.
    assert compute_D(nt, rep.S) == rep.S
    # Collapsing the holes leaves a circle of circumference 2*sqrt(3) - 3.
    assert rep.Ya == SQ3.num(-3, 2)
    # The covering identity holds as a set identity but not with
    # multiplicity: total mass sqrt(3) = 2a instead of a.
    assert not measure_identity(nt, rep.S)
    assert measure_identity_lhs(nt, rep.S) == SQ3.num(0, 1)


def test_frozen_set_belongs_to_exactly_one_length():
    # The Frame-side triple is out of the propagation pipeline's domain
    # entirely (c0 > a), so FROZEN_S cannot be its output.
    with pytest.raises(RegionUnsupported):
        compute_S(normalize(A, B, C_FRAME))

    # The 5*sqrt(3)/2 look-alike is in the generic regime, but its own
    # invariant set is empty (Frame), and FROZEN_S meets its backward
    # absorber, so FROZEN_S is not invariant for it either.
    nt_alt = normalize(A, B, C_LOOKALIKE)
    assert region_tag(nt_alt) is RegionTag.XII
    assert classify(A, B, C_LOOKALIKE).verdict == "Frame"
    assert compute_S(nt_alt).S.is_empty
    lo, hi = black_hole_Rt(nt_alt)
    bh_alt = PeriodicSet.from_wrapped(nt_alt.a, [(lo, hi)])
    assert not FROZEN_S.intersect(bh_alt).is_empty

    # Whereas for the NotFrame length both absorbers are avoided.
    nt = normalize(A, B, C_NOTFRAME)
    lo, hi = black_hole_Rt(nt)
    assert FROZEN_S.intersect(PeriodicSet.from_wrapped(nt.a, [(lo, hi)])).is_empty
