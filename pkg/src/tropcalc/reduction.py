"""Weighted small-step reduction, best-case path search and MLE analysis.

Every reduction step carries a weight: a beta/arithmetic step is free (the
tropical unit 0), a scalar ``w . M`` charges w, and a sum resolves to either
branch for free.  Binary choices desugar into weighted sums first, so the
engine sees a single rule set.  The total weight of a path is the tropical
product (= sum) of its step weights, a monomial in the weight parameters;
minimizing over paths is then a shortest-path computation in min-plus.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Tuple, Union

from . import terms as T
from .model import Caps, DEFAULT_CAPS, interpret, weight_series
from .series import MultiDegree, TropSeries
from .values import INF, Trop, is_inf

ZERO_W = TropSeries.constant(Fraction(0))


class BadAddress(ValueError):
    pass


@dataclass(frozen=True)
class WeightedStep:
    address: Tuple[str, ...]
    rule: str
    weight: TropSeries


def _num(outcome) -> int:
    """Observable outcomes: a numeral index, with booleans coded 0/1."""
    if outcome is True:
        return 0
    if outcome is False:
        return 1
    if isinstance(outcome, T.Numeral):
        return outcome.n
    return int(outcome)


# ----------------------------------------------------------------- one step


def step(t: T.Term) -> List[Tuple[T.Term, WeightedStep]]:
    """All one-step reducts with their weighted step records.

    The strategy is leftmost-outermost: a root redex fires alone; otherwise
    the single active position (function side of an application, argument
    of succ/pred, scrutinee of ifz) is reduced.  Normal forms return [].
    """
    return _step_at(t, ())


def _step_at(t: T.Term, addr: Tuple[str, ...]) -> List[Tuple[T.Term, WeightedStep]]:
    if isinstance(t, T.Choice):
        # (M (+p) N) -> p.M + p'.N, for free; the weights are charged when
        # the scalars fire
        out = T.make_sum(
            T.Scalar(t.w_left, t.left), T.Scalar(t.w_right, t.right)
        )
        return [(out, WeightedStep(addr, "choice", ZERO_W))]
    if isinstance(t, T.Sum):
        return [
            (s, WeightedStep(addr, f"sum[{i}]", ZERO_W))
            for i, s in enumerate(t.terms)
        ]
    if isinstance(t, T.Scalar):
        return [(t.body, WeightedStep(addr, "scalar", weight_series(t.weight)))]
    if isinstance(t, T.Fix):
        return [(T.App(t.body, t), WeightedStep(addr, "fix", ZERO_W))]
    if isinstance(t, T.App):
        if isinstance(t.fn, T.Lam):
            out = T.subst(t.fn.body, t.fn.var, t.arg)
            return [(out, WeightedStep(addr, "beta", ZERO_W))]
        return [
            (T.App(fn, t.arg), ws)
            for fn, ws in _step_at(t.fn, addr + ("fn",))
        ]
    if isinstance(t, T.Succ):
        if isinstance(t.arg, T.Numeral):
            return [(T.Numeral(t.arg.n + 1), WeightedStep(addr, "succ", ZERO_W))]
        return [(T.Succ(a), ws) for a, ws in _step_at(t.arg, addr + ("arg",))]
    if isinstance(t, T.Pred):
        if isinstance(t.arg, T.Numeral):
            return [
                (T.Numeral(max(t.arg.n - 1, 0)), WeightedStep(addr, "pred", ZERO_W))
            ]
        return [(T.Pred(a), ws) for a, ws in _step_at(t.arg, addr + ("arg",))]
    if isinstance(t, T.Ifz):
        if isinstance(t.cond, T.Numeral):
            branch = t.then if t.cond.n == 0 else t.other
            return [(branch, WeightedStep(addr, "ifz", ZERO_W))]
        return [
            (T.Ifz(c, t.then, t.other), ws)
            for c, ws in _step_at(t.cond, addr + ("cond",))
        ]
    return []  # Var, Lam, Numeral, ZeroTerm: no head redex


# ------------------------------------------------------------- path search


def best_case(term: T.Term, target, depth_cap: int) -> TropSeries:
    """Tropical min of path weights over all reduction paths of length
    <= depth_cap from term to the target numeral.

    States reached along different paths are merged with their weights
    min-combined, so this is a layered shortest-path sweep rather than a
    per-path enumeration.  The result is an upper bound of the true
    infimum, non-increasing in depth_cap; an unreachable target gives the
    empty (constantly infinite) series.
    """
    goal = T.Numeral(_num(target))
    frontier: Dict[T.Term, TropSeries] = {T.translate_prob(term): ZERO_W}
    best = TropSeries.empty()
    for _ in range(depth_cap + 1):
        nxt: Dict[T.Term, TropSeries] = {}
        for t, w in frontier.items():
            if t == goal:
                best = best.tmin(w)
                continue
            for t2, ws in step(t):
                acc = w.tmul(ws.weight)
                nxt[t2] = acc.tmin(nxt[t2]) if t2 in nxt else acc
        if not nxt:
            break
        frontier = nxt
    return best


def _choice_leaves(t: T.Term, omega: str = "") -> Iterator[Tuple[str, T.Term]]:
    if isinstance(t, T.Choice):
        yield from _choice_leaves(t.left, omega + "l")
        yield from _choice_leaves(t.right, omega + "r")
    else:
        yield omega, t


def path_likelihood(term: T.Term, omega: str) -> TropSeries:
    """Weight monomial of one resolution of the choice tree: each ``l``
    charges the choice's own label, each ``r`` its primed partner."""
    degrees: Dict[str, int] = {}
    t = term
    for i, d in enumerate(omega):
        if not isinstance(t, T.Choice):
            raise BadAddress(f"address {omega!r} overruns the tree at {omega[:i]!r}")
        w = t.w_left if d == "l" else t.w_right if d == "r" else None
        if w is None:
            raise BadAddress(f"bad direction {d!r} in {omega!r}")
        degrees[w] = degrees.get(w, 0) + 1
        t = t.left if d == "l" else t.right
    if isinstance(t, T.Choice):
        raise BadAddress(f"address {omega!r} stops short of a leaf")
    return TropSeries.monomial(degrees, Fraction(0))


def outcome_series(term: T.Term, outcome, depth_cap: int = 24) -> TropSeries:
    """Min of path_likelihood over all choice resolutions reaching the
    outcome.  Exhaustive on finite choice trees; recursive terms fall back
    to the depth-capped path search (an upper bound of the infimum)."""
    n = _num(outcome)
    if _has_fix(term):
        return best_case(term, n, depth_cap)
    best = TropSeries.empty()
    for omega, leaf in _choice_leaves(term):
        mono = path_likelihood(term, omega)
        if leaf == T.Numeral(n):
            best = best.tmin(mono)
        else:
            tail = best_case(leaf, n, depth_cap)
            if not tail.is_empty:
                best = best.tmin(mono.tmul(tail))
    return best


def _has_fix(t: T.Term) -> bool:
    if isinstance(t, T.Fix):
        return True
    kids: Tuple[T.Term, ...] = ()
    if isinstance(t, (T.App, T.DApp)):
        kids = (t.fn, t.arg)
    elif isinstance(t, T.Lam):
        kids = (t.body,)
    elif isinstance(t, T.Sum):
        kids = t.terms
    elif isinstance(t, T.Scalar):
        kids = (t.body,)
    elif isinstance(t, T.Choice):
        kids = (t.left, t.right)
    elif isinstance(t, (T.Succ, T.Pred)):
        kids = (t.arg,)
    elif isinstance(t, T.Ifz):
        kids = (t.cond, t.then, t.other)
    return any(_has_fix(k) for k in kids)


# ---------------------------------------------------------------- adequacy


def adequacy_check(
    term: T.Term,
    target,
    caps: Caps = DEFAULT_CAPS,
    depth_cap: int = 24,
    eps: Trop = Fraction(1, 100),
) -> Tuple[TropSeries, TropSeries, bool]:
    """Denotational matrix entry vs. operational best case at a numeral.

    Both sides are eps-truncated before comparison: with recursion each cap
    (fixpoint iterations / path depth) leaves its own tail of dominated
    monomials, and the truncation is what both tails collapse under.
    """
    n = _num(target)
    den = interpret(term, [], "pcfl", caps).entry((), n)
    oper = best_case(term, n, depth_cap)
    return den, oper, den.truncate(eps) == oper.truncate(eps)


# --------------------------------------------------------------------- MLE


def mle(
    series: TropSeries, grid: int = 1000
) -> Tuple[float, Optional[MultiDegree]]:
    """Most likely bias: minimize the series along the one-parameter curve
    alpha = -log p, beta = -log(1-p) over p in (0,1).

    The first variable (sorted order) reads as -log p, the second as
    -log(1-p).  A uniform grid pass locates the best cell, golden-section
    refines it to 1e-6.  Returns the argmin and the monomial attaining the
    min there (None for the empty series).
    """
    if series.is_empty:
        return float("nan"), None
    vars_ = sorted(series.vars)
    if len(vars_) > 2:
        raise ValueError(f"need at most two variables, got {vars_}")

    def point(p: float) -> Dict[str, float]:
        out = {}
        if len(vars_) >= 1:
            out[vars_[0]] = -math.log(p)
        if len(vars_) == 2:
            out[vars_[1]] = -math.log(1.0 - p)
        return out

    def obj(p: float) -> float:
        v = series.eval(point(p))
        return float(v) if not is_inf(v) else math.inf

    lo, hi = 1.0 / (grid + 1), grid / (grid + 1.0)
    ps = [lo + (hi - lo) * i / (grid - 1) for i in range(grid)]
    i_best = min(range(grid), key=lambda i: obj(ps[i]))
    a = ps[max(i_best - 1, 0)]
    b = ps[min(i_best + 1, grid - 1)]
    # golden-section on [a, b]
    invphi = (math.sqrt(5) - 1) / 2
    c, d = b - invphi * (b - a), a + invphi * (b - a)
    while b - a > 1e-6:
        if obj(c) <= obj(d):
            b, d = d, c
            c = b - invphi * (b - a)
        else:
            a, c = c, d
            d = a + invphi * (b - a)
    p_star = (a + b) / 2
    x = point(p_star)
    active = min(
        series.coeffs.items(),
        key=lambda kv: (float(kv[1] + kv[0].dot(x)), kv[0].items()),
    )[0]
    return p_star, active
