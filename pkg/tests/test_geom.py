from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from shrink_mwisr.errors import InputError, ParameterError
from shrink_mwisr.geom import (Point, Rect, ShrunkRect, center, contains, first_overlap,
                               is_independent, linf_dist, overlaps, shrink, shrink_all,
                               to_fraction, total_weight, translate)


def R(x1, y1, x2, y2, w=1, rid=0):
    return Rect(rid, x1, y1, x2, y2, w)


@st.composite
def rects(draw, lo=-50, hi=50):
    x1 = draw(st.integers(lo, hi))
    y1 = draw(st.integers(lo, hi))
    return Rect(draw(st.integers(0, 10**6)), x1, y1,
                x1 + draw(st.integers(1, 40)), y1 + draw(st.integers(1, 40)),
                draw(st.integers(0, 9)))


deltas = st.fractions(min_value=F(1, 1000), max_value=F(999, 1000)).filter(lambda d: 0 < d < 1)


class TestShrink:
    def test_square_half(self):
        s = shrink(R(0, 0, 4, 4), F(1, 2))
        assert s.corners == (1, 1, 3, 3)

    def test_third(self):
        s = shrink(R(1, 2, 7, 5), F(1, 3))
        assert s.corners == (2, F(5, 2), 6, F(9, 2))

    @pytest.mark.parametrize("bad", [0, 1, F(-1, 2), F(3, 2)])
    def test_delta_range(self, bad):
        with pytest.raises(ParameterError):
            shrink(R(0, 0, 2, 2), bad)

    def test_keeps_id_and_weight(self):
        s = shrink(Rect("a", 0, 0, 2, 6, F(5, 3)), F(1, 4))
        assert (s.id, s.weight) == ("a", F(5, 3))
        assert isinstance(s, ShrunkRect)

    @given(rects(), deltas)
    def test_inside_and_concentric(self, r, d):
        s = shrink(r, d)
        assert contains(r, s)
        assert center(s) == center(r)
        assert s.width == (1 - d) * r.width and s.height == (1 - d) * r.height

    @given(rects(), deltas, deltas)
    def test_monotone_in_delta(self, r, d1, d2):
        lo, hi = sorted((d1, d2))
        assert contains(shrink(r, lo), shrink(r, hi))


class TestPredicates:
    def test_boundary_touch(self):
        assert not overlaps(R(0, 0, 2, 2), R(2, 0, 4, 2))

    def test_nested(self):
        assert overlaps(R(0, 0, 3, 3), R(1, 1, 2, 2))

    def test_apart(self):
        assert not overlaps(R(0, 0, 2, 2), R(3, 3, 4, 4))

    def test_contains(self):
        assert contains(R(0, 0, 4, 4), R(1, 1, 3, 3))
        assert contains(R(0, 0, 4, 4), R(0, 0, 4, 4))
        assert not contains(R(0, 0, 4, 4), R(1, 1, 5, 3))

    @given(rects(), rects())
    def test_overlap_symmetric(self, a, b):
        assert overlaps(a, b) == overlaps(b, a)

    @given(rects(), rects())
    def test_overlap_matches_midpoint_probe(self, a, b):
        # integer boxes overlap iff some unit cell centre lies in both
        xs = range(max(a.x1, b.x1), min(a.x2, b.x2))
        ys = range(max(a.y1, b.y1), min(a.y2, b.y2))
        probe = any(True for _ in xs for _ in ys)
        assert overlaps(a, b) == probe


class TestMetric:
    @pytest.mark.parametrize("box,c", [((0, 0, 4, 2), (2, 1)),
                                       ((1, 1, 2, 2), (F(3, 2), F(3, 2))),
                                       ((0, 0, 3, 5), (F(3, 2), F(5, 2)))])
    def test_center(self, box, c):
        assert center(R(*box)) == Point(*c)

    @pytest.mark.parametrize("p,q,d", [((0, 0), (3, 1), 3),
                                       ((F(1, 2), F(1, 2)), (F(1, 2), F(1, 2)), 0),
                                       ((0, 0), (-2, 5), 5)])
    def test_linf(self, p, q, d):
        assert linf_dist(Point(*p), Point(*q)) == d


class TestFamilies:
    def test_independence(self):
        assert is_independent([])
        assert is_independent([R(0, 0, 2, 2), R(2, 0, 4, 2, rid=1)])
        assert not is_independent([R(0, 0, 3, 3), R(1, 1, 2, 2, rid=1)])

    def test_first_overlap_pair(self):
        a, b, c = R(0, 0, 2, 2), R(5, 5, 6, 6, rid=1), R(1, 1, 3, 3, rid=2)
        assert first_overlap([a, b, c]) == (a, c)
        assert first_overlap([a, b]) is None

    def test_total_weight(self):
        assert total_weight([]) == 0
        assert total_weight([R(0, 0, 1, 1, 3)]) == 3
        assert total_weight([R(0, 0, 1, 1, F(1, 2)), R(0, 0, 1, 1, F(1, 3), 1)]) == F(5, 6)

    @given(st.lists(rects(), max_size=6), deltas)
    def test_shrinking_never_creates_overlap(self, fam, d):
        if is_independent(fam):
            assert is_independent(shrink_all(fam, d))

    def test_translate(self):
        assert translate(R(0, 1, 2, 3, 5), 4, -1).corners == (4, 0, 6, 2)


class TestValidation:
    @pytest.mark.parametrize("box", [(0, 0, 0, 1), (2, 0, 1, 1), (0, 3, 1, 3)])
    def test_empty_rejected(self, box):
        with pytest.raises(InputError):
            R(*box)

    def test_noninteger_rejected(self):
        with pytest.raises(InputError):
            Rect(0, F(1, 2), 0, 1, 1)

    def test_negative_weight(self):
        with pytest.raises(InputError):
            R(0, 0, 1, 1, -1)

    @pytest.mark.parametrize("raw,want", [(0.3, F(3, 10)), ("5/3", F(5, 3)), (" 2 ", 2),
                                          ("1.25", F(5, 4)), (7, 7)])
    def test_to_fraction(self, raw, want):
        assert to_fraction(raw) == want

    @pytest.mark.parametrize("raw", ["x", "1/0", True, None])
    def test_to_fraction_rejects(self, raw):
        with pytest.raises(InputError):
            to_fraction(raw)
