"""Parameter-region predicates for every concavity/convexity statement tested.

Each predicate implements its quoted condition set verbatim, boundaries
included exactly as stated.
"""

from __future__ import annotations

from .families import ParameterPoint

THEOREM_IDS = (
    "T1.1-1", "T1.1-2", "T2.2",
    "T3.1-1", "T3.1-2-concave-recip", "T3.1-2-convex", "T3.2",
    "P4.1-1", "P4.1-2", "P4.4-1", "P4.4-2",
    "T5.1-1", "T5.1-2", "T5.2-1", "T5.2-2",
    "L5.4",
)

#: direction of the claim made on each region ("concave" or "convex")
THEOREM_DIRECTION = {
    "T1.1-1": "concave",
    "T1.1-2": "convex",
    "T2.2": "concave",
    "T3.1-1": "concave",
    "T3.1-2-concave-recip": "concave",
    "T3.1-2-convex": "convex",
    "T3.2": "convex",
    "P4.1-1": "concave",
    "P4.1-2": "concave",
    "P4.4-1": "convex",
    "P4.4-2": "convex",
    "T5.1-1": "concave",
    "T5.1-2": "convex",
    "T5.2-1": "concave",
    "T5.2-2": "convex",
    "L5.4": "dominance",
}


def _t11_1(p, q, s):
    if 0 <= p <= 1 and 0 <= q <= 1 and (p, q) != (0, 0):
        return 0.5 <= s <= 1 / (p + q)
    if -1 <= p <= 0 and -1 <= q <= 0 and (p, q) != (0, 0):
        return 1 / (p + q) <= s <= -0.5
    return False


def _t11_2(p, q, s):
    if 0 <= p <= 1 and 0 <= q <= 1 and (p, q) != (0, 0):
        return -1 / (p + q) <= s <= -0.5
    if -1 <= p <= 0 and -1 <= q <= 0 and (p, q) != (0, 0):
        return 0.5 <= s <= -1 / (p + q)
    return False


def _t22(p, q, s):
    if 0 <= p <= 1 and 0 <= q <= 1 and (p, q) != (0, 0):
        return 0 < s <= 1 / max(p, q)
    if -1 <= p <= 0 and -1 <= q <= 0 and (p, q) != (0, 0):
        return 1 / min(p, q) <= s < 0
    return False


def _t31_1(p, q, s):
    if 0 < p <= 1:
        return 0 < s <= 1 / p
    if -1 <= p < 0:
        return 1 / p <= s < 0
    return False


def _t31_2_convex(p, q, s):
    if -1 <= p < 0 and s > 0:
        return True
    if 0 < p <= 1 and s < 0:
        return True
    return 1 <= p <= 2 and s >= 1


def _t32(p, q, s):
    return 1 <= p <= 2 and s >= 1 / p


def _p41_2(p, q, s):
    if 0 < p <= 1 and 0 < q <= 1:
        return 0 < s <= 1 / (p + q)
    if -1 <= p < 0 and -1 <= q < 0:
        return 1 / (p + q) <= s < 0
    return False


def _p44_1(p, q, s):
    if (-1 <= p < 0 and s > 0) or (1 <= p <= 2 and s >= 1 / p):
        return True
    # counterparts under (p, s) -> (-p, -s)
    return (0 < p <= 1 and s < 0) or (-2 <= p <= -1 and s <= 1 / p)


def _p44_2_half(p, q, s):
    if -1 <= p < 0 and -1 <= q < 0 and s > 0:
        return True
    if -1 <= p < 0 and 1 <= q <= 2 and p + q > 0 and s >= 1 / (p + q):
        return True
    return 1 <= p <= 2 and -1 <= q < 0 and p + q > 0 and s >= 1 / (p + q)


def _p44_2(p, q, s):
    return _p44_2_half(p, q, s) or _p44_2_half(-p, -q, -s)


def _t51_1(p, q, s):
    if 0 <= p <= 1 and 0 <= q <= 1 and (p, q) != (0, 0):
        return 0 < s <= 1 / (p + q)
    if -1 <= p <= 0 and -1 <= q <= 0 and (p, q) != (0, 0):
        return 1 / (p + q) <= s < 0
    return False


def _t51_2_half(p, q, s):
    if -1 <= p <= 0 and -1 <= q <= 0 and (p, q) != (0, 0) and s > 0:
        return True
    if -1 <= p <= 0 and 1 <= q <= 2 and p + q > 0 and s >= 1 / (p + q):
        return True
    return 1 <= p <= 2 and -1 <= q <= 0 and p + q > 0 and s >= 1 / (p + q)


def _t51_2(p, q, s):
    return _t51_2_half(p, q, s) or _t51_2_half(-p, -q, -s)


def _t52_1(p, q, s):
    return p != 0 and q != 0 and _t51_1(p, q, s)


def _t52_2(p, q, s):
    return p != 0 and q != 0 and _t51_2(p, q, s)


def power_mean_dominates(p: float, q: float) -> bool:
    """Whether ((A^p+B^p)/2)^{1/p} <= ((A^q+B^q)/2)^{1/q} for all PD pairs."""
    if p == q:
        return True
    if 1 <= p < q:
        return True
    if p < q <= -1:
        return True
    if p <= -1 and q >= 1:
        return True
    if 0.5 <= p < 1 <= q:
        return True
    return p <= -1 < q <= -0.5


_PREDICATES = {
    "T1.1-1": lambda p, q, s: s != 0 and _t11_1(p, q, s),
    "T1.1-2": lambda p, q, s: s != 0 and _t11_2(p, q, s),
    "T2.2": lambda p, q, s: s != 0 and _t22(p, q, s),
    "T3.1-1": lambda p, q, s: p != 0 and s != 0 and _t31_1(p, q, s),
    "T3.1-2-concave-recip": lambda p, q, s: p != 0 and s != 0 and _t31_1(p, q, s),
    "T3.1-2-convex": lambda p, q, s: p != 0 and s != 0 and _t31_2_convex(p, q, s),
    "T3.2": lambda p, q, s: p != 0 and s != 0 and _t32(p, q, s),
    "P4.1-1": lambda p, q, s: p != 0 and s != 0 and _t31_1(p, q, s),
    "P4.1-2": lambda p, q, s: p != 0 and q != 0 and s != 0 and _p41_2(p, q, s),
    "P4.4-1": lambda p, q, s: p != 0 and s != 0 and _p44_1(p, q, s),
    "P4.4-2": lambda p, q, s: p != 0 and q != 0 and s != 0 and _p44_2(p, q, s),
    "T5.1-1": lambda p, q, s: s != 0 and _t51_1(p, q, s),
    "T5.1-2": lambda p, q, s: s != 0 and _t51_2(p, q, s),
    "T5.2-1": lambda p, q, s: s != 0 and _t52_1(p, q, s),
    "T5.2-2": lambda p, q, s: s != 0 and _t52_2(p, q, s),
    "L5.4": lambda p, q, s: power_mean_dominates(p, q),
}

_DESCRIPTIONS = {
    "T1.1-1": "0<=p,q<=1 and 1/2<=s<=1/(p+q), or -1<=p,q<=0 and 1/(p+q)<=s<=-1/2",
    "T1.1-2": "0<=p,q<=1 and -1/(p+q)<=s<=-1/2, or -1<=p,q<=0 and 1/2<=s<=-1/(p+q)",
    "T2.2": "0<=p,q<=1 and 0<s<=1/max(p,q), or -1<=p,q<=0 and 1/min(p,q)<=s<0",
    "T3.1-1": "0<p<=1 and 0<s<=1/p, or -1<=p<0 and 1/p<=s<0",
    "T3.1-2-concave-recip": "0<p<=1 and 0<s<=1/p, or -1<=p<0 and 1/p<=s<0",
    "T3.1-2-convex": "-1<=p<0 and s>0, or 0<p<=1 and s<0, or 1<=p<=2 and s>=1",
    "T3.2": "1<=p<=2 and s>=1/p (CP map required)",
    "P4.1-1": "0<p<=1 and 0<s<=1/p, or -1<=p<0 and 1/p<=s<0",
    "P4.1-2": "0<p,q<=1 and 0<s<=1/(p+q), or -1<=p,q<0 and 1/(p+q)<=s<0",
    "P4.4-1": "-1<=p<0 and s>0, or 1<=p<=2 and s>=1/p, or the (-p,-s) counterparts",
    "P4.4-2": "six-case necessary condition list with (-p,-q,-s) counterparts",
    "T5.1-1": "0<=p,q<=1 and 0<s<=1/(p+q), or -1<=p,q<=0 and 1/(p+q)<=s<0",
    "T5.1-2": "six-case condition list with (-p,-q,-s) counterparts",
    "T5.2-1": "as T5.1-1, with p,q,s all non-zero",
    "T5.2-2": "as T5.1-2, with p,q,s all non-zero",
    "L5.4": "p=q, 1<=p<q, p<q<=-1, (p<=-1, q>=1), 1/2<=p<1<=q, or p<=-1<q<=-1/2",
}


def region_member(theorem_id: str, point: ParameterPoint) -> bool:
    if theorem_id not in _PREDICATES:
        raise KeyError(f"unknown theorem id {theorem_id!r}")
    return bool(_PREDICATES[theorem_id](point.p, point.q, point.s))


def region_description(theorem_id: str) -> str:
    if theorem_id not in _DESCRIPTIONS:
        raise KeyError(f"unknown theorem id {theorem_id!r}")
    return _DESCRIPTIONS[theorem_id]


def region_violation(theorem_id: str, point: ParameterPoint) -> str | None:
    """None on membership, otherwise a message naming the failed condition."""
    if region_member(theorem_id, point):
        return None
    return (
        f"({point.p:g}, {point.q:g}, {point.s:g}) is outside the {theorem_id} "
        f"region: requires {region_description(theorem_id)}"
    )
