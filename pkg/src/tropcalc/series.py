"""Tropical polynomials and (truncated) power series.

A series is a finite-support map from multi-degrees to coefficients,
read as  f(x) = min over monomials of  (coeff + sum_v deg_v * x_v).
The empty support is the constant-INF series (min over nothing).
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple

from .values import INF, Trop, as_trop, fmt_trop, is_inf, trop_add, trop_mul


class MissingAssignment(KeyError):
    pass


class BadEpsilon(ValueError):
    pass


class EmptySeries(ValueError):
    pass


class MultiDegree:
    """Finite-support map variable -> positive exponent.

    Zero exponents are never stored; the empty map is total degree 0.
    Immutable and hashable.
    """

    __slots__ = ("_items",)

    def __init__(self, degrees: Mapping[str, int] | Iterable[Tuple[str, int]] = ()):
        if isinstance(degrees, Mapping):
            it = degrees.items()
        else:
            it = degrees
        acc: Dict[str, int] = {}
        for v, n in it:
            n = int(n)
            if n < 0:
                raise ValueError("negative exponent")
            if n:
                acc[v] = acc.get(v, 0) + n
        self._items: Tuple[Tuple[str, int], ...] = tuple(sorted(acc.items()))

    def items(self) -> Tuple[Tuple[str, int], ...]:
        return self._items

    def get(self, var: str) -> int:
        for v, n in self._items:
            if v == var:
                return n
        return 0

    def vars(self) -> Tuple[str, ...]:
        return tuple(v for v, _ in self._items)

    @property
    def total(self) -> int:
        return sum(n for _, n in self._items)

    def __add__(self, other: "MultiDegree") -> "MultiDegree":
        d = dict(self._items)
        for v, n in other._items:
            d[v] = d.get(v, 0) + n
        return MultiDegree(d)

    def remove_one(self, var: str) -> "MultiDegree":
        d = dict(self._items)
        if d.get(var, 0) < 1:
            raise ValueError(f"{var} does not occur")
        d[var] -= 1
        return MultiDegree(d)

    def preceq(self, other: "MultiDegree") -> bool:
        """Product order: every exponent <=."""
        o = dict(other._items)
        return all(n <= o.get(v, 0) for v, n in self._items)

    def prec(self, other: "MultiDegree") -> bool:
        return self.preceq(other) and self._items != other._items

    def dot(self, point: Mapping[str, Trop]) -> Trop:
        """Scalar product sum deg * x_v, with 0*INF = 0 (empty product)."""
        out: Trop = Fraction(0)
        for v, n in self._items:
            try:
                x = point[v]
            except KeyError:
                raise MissingAssignment(v)
            if is_inf(x):
                return INF
            out = out + n * x
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, MultiDegree) and self._items == other._items

    def __hash__(self) -> int:
        return hash(self._items)

    def __repr__(self) -> str:
        if not self._items:
            return "MultiDegree()"
        return "MultiDegree({%s})" % ", ".join(f"{v!r}: {n}" for v, n in self._items)


class Valuation:
    """Coefficient map from classical semirings into the tropical one."""

    NEG_LOG = "neg_log"
    TRIVIAL = "trivial"

    def __init__(self, kind: str):
        if kind not in (self.NEG_LOG, self.TRIVIAL):
            raise ValueError(f"unknown valuation {kind!r}")
        self.kind = kind

    def __call__(self, a) -> Trop:
        a = Fraction(a)
        if a < 0:
            raise ValueError("valuations defined on nonnegative coefficients")
        if a == 0:
            return INF
        if self.kind == self.TRIVIAL:
            return Fraction(0)
        return -math.log(a)


NEG_LOG = Valuation(Valuation.NEG_LOG)
TRIVIAL = Valuation(Valuation.TRIVIAL)


class TropSeries:
    """Finite min of affine monomials over a named variable set."""

    __slots__ = ("vars", "coeffs")

    def __init__(
        self,
        vars: Sequence[str] = (),
        coeffs: Mapping[MultiDegree, Trop] | Iterable[Tuple[MultiDegree, Trop]] = (),
    ):
        self.vars: Tuple[str, ...] = tuple(vars)
        vset = set(self.vars)
        acc: Dict[MultiDegree, Trop] = {}
        it = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        for deg, c in it:
            c = as_trop(c) if not isinstance(c, (Fraction, float)) else c
            if is_inf(c):
                continue
            for v in deg.vars():
                if v not in vset:
                    raise ValueError(f"monomial mentions unknown variable {v!r}")
            prev = acc.get(deg)
            if prev is None or c < prev:
                acc[deg] = c
        self.coeffs: Dict[MultiDegree, Trop] = acc

    # -- constructors -------------------------------------------------

    @classmethod
    def empty(cls, vars: Sequence[str] = ()) -> "TropSeries":
        return cls(vars, {})

    @classmethod
    def constant(cls, c: Trop, vars: Sequence[str] = ()) -> "TropSeries":
        return cls(vars, {MultiDegree(): c})

    @classmethod
    def monomial(cls, degrees: Mapping[str, int], c: Trop, vars: Sequence[str] = ()) -> "TropSeries":
        deg = MultiDegree(degrees)
        vs = tuple(vars) if vars else deg.vars()
        return cls(vs, {deg: c})

    @classmethod
    def parameter(cls, name: str) -> "TropSeries":
        return cls.monomial({name: 1}, Fraction(0))

    # -- basic structure ----------------------------------------------

    @property
    def is_empty(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        return max((d.total for d in self.coeffs), default=0)

    def support(self) -> Tuple[MultiDegree, ...]:
        return tuple(sorted(self.coeffs, key=lambda d: (d.total, d.items())))

    def constant_value(self) -> Trop:
        """Value of a variable-free series (INF if empty)."""
        if not self.coeffs:
            return INF
        if len(self.coeffs) == 1:
            (deg, c), = self.coeffs.items()
            if deg.total == 0:
                return c
        raise ValueError("series is not constant")

    @property
    def is_constant(self) -> bool:
        return not self.coeffs or (len(self.coeffs) == 1 and next(iter(self.coeffs)).total == 0)

    def _merge_vars(self, other: "TropSeries") -> Tuple[str, ...]:
        out = list(self.vars)
        for v in other.vars:
            if v not in out:
                out.append(v)
        return tuple(out)

    # -- semiring operations ------------------------------------------

    def tmin(self, other: "TropSeries") -> "TropSeries":
        items = list(self.coeffs.items()) + list(other.coeffs.items())
        return TropSeries(self._merge_vars(other), items)

    def tmul(self, other: "TropSeries") -> "TropSeries":
        items = []
        for d1, c1 in self.coeffs.items():
            for d2, c2 in other.coeffs.items():
                items.append((d1 + d2, trop_mul(c1, c2)))
        return TropSeries(self._merge_vars(other), items)

    def shift(self, c: Trop) -> "TropSeries":
        if is_inf(c):
            return TropSeries.empty(self.vars)
        return TropSeries(self.vars, [(d, trop_mul(cc, c)) for d, cc in self.coeffs.items()])

    __or__ = tmin

    # -- evaluation -----------------------------------------------------

    def eval(self, point: Mapping[str, Trop]) -> Trop:
        for v in self.vars:
            if v not in point:
                raise MissingAssignment(v)
        out: Trop = INF
        for deg, c in self.coeffs.items():
            out = trop_add(out, trop_mul(c, deg.dot(point)))
        return out

    def substitute(self, point: Mapping[str, Trop]) -> "TropSeries":
        """Plug values in for a subset of the variables."""
        rest = tuple(v for v in self.vars if v not in point)
        items = []
        for deg, c in self.coeffs.items():
            val = c
            newdeg = {}
            dead = False
            for v, n in deg.items():
                if v in point:
                    x = point[v]
                    if is_inf(x):
                        dead = True
                        break
                    val = trop_mul(val, n * x)
                else:
                    newdeg[v] = n
            if not dead:
                items.append((MultiDegree(newdeg), val))
        return TropSeries(rest, items)

    # -- epsilon truncation (finite collapse away from 0) ----------------

    def epsilon_support(self, eps: Trop) -> set:
        eps = as_trop(eps)
        if is_inf(eps) or eps <= 0:
            raise BadEpsilon(f"epsilon must be in (0, inf), got {eps}")
        keep = set()
        for n, cn in self.coeffs.items():
            if all(not m.prec(n) or cm > cn + eps for m, cm in self.coeffs.items()):
                keep.add(n)
        return keep

    def truncate(self, eps: Trop) -> "TropSeries":
        keep = self.epsilon_support(eps)
        return TropSeries(self.vars, {d: c for d, c in self.coeffs.items() if d in keep})

    # -- equality / repr -------------------------------------------------

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, TropSeries)
            and self.coeffs == other.coeffs
        )

    def __hash__(self) -> int:
        return hash(frozenset(self.coeffs.items()))

    def __repr__(self) -> str:
        if not self.coeffs:
            return "TropSeries<inf>"
        parts = []
        for deg in self.support():
            c = self.coeffs[deg]
            terms = [f"{n}{v}" if n > 1 else v for v, n in deg.items()]
            if not terms or c != 0:
                terms = [fmt_trop(c)] + terms if (c != 0 or not terms) else terms
            parts.append("+".join(terms))
        return "TropSeries<min{%s}>" % ", ".join(parts)

    # -- serialization ----------------------------------------------------

    def to_json_dict(self) -> dict:
        mons = []
        for deg in self.support():
            c = self.coeffs[deg]
            if isinstance(c, Fraction):
                cenc = str(c)
            elif is_inf(c):
                cenc = "inf"
            else:
                cenc = float(c)
            mons.append({"deg": {v: n for v, n in deg.items()}, "coeff": cenc})
        return {"vars": list(self.vars), "monomials": mons}

    @classmethod
    def from_json_dict(cls, d: dict) -> "TropSeries":
        items = []
        for m in d["monomials"]:
            c = m["coeff"]
            val = as_trop(c) if isinstance(c, str) else (INF if is_inf(c) else float(c))
            items.append((MultiDegree(m["deg"]), val))
        return cls(tuple(d["vars"]), items)

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)


# ----------------------------------------------------------------------
# free functions mirroring the scalar API


def series_min(f: TropSeries, g: TropSeries) -> TropSeries:
    return f.tmin(g)


def series_mul(f: TropSeries, g: TropSeries) -> TropSeries:
    return f.tmul(g)


def series_shift(f: TropSeries, c: Trop) -> TropSeries:
    return f.shift(c)


def series_eval(f: TropSeries, point: Mapping[str, Trop]) -> Trop:
    return f.eval(point)


def epsilon_support(f: TropSeries, eps: Trop) -> set:
    return f.epsilon_support(eps)


def truncate(f: TropSeries, eps: Trop) -> TropSeries:
    return f.truncate(eps)


def tropicalize(
    classical_coeffs: Mapping[MultiDegree, Fraction],
    val: Valuation,
    vars: Sequence[str] = (),
) -> TropSeries:
    """Coefficient-wise valuation of a classical polynomial."""
    items = [(deg, val(a)) for deg, a in classical_coeffs.items()]
    if not vars:
        seen = []
        for deg, _ in items:
            for v in deg.vars():
                if v not in seen:
                    seen.append(v)
        vars = seen
    return TropSeries(tuple(vars), items)


def univariate_roots(f: TropSeries) -> list:
    """Tropical roots of a univariate polynomial via the lower convex hull.

    Consecutive hull vertices (i, c_i), (j, c_j) give a slope break at
    x = (c_i - c_j)/(j - i) with multiplicity j - i.  Roots are returned
    sorted descending.
    """
    if f.is_empty:
        raise EmptySeries("no monomials")
    if len(f.vars) > 1 or any(len(d.vars()) > 1 for d in f.coeffs):
        raise ValueError("univariate_roots requires a univariate series")
    pts = sorted((d.total, c) for d, c in f.coeffs.items())
    if any(is_inf(c) for _, c in pts):
        raise ValueError("coefficients must be finite")

    # lower convex hull, monotone chain on x = degree
    hull: list = []
    for p in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # keep strictly convex corners; drop points on/above the chord
            if (y2 - y1) * (p[0] - x1) >= (p[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(p)
    roots = []
    for (i, ci), (j, cj) in zip(hull, hull[1:]):
        root = (ci - cj) / (j - i) if isinstance(ci - cj, Fraction) else (ci - cj) / (j - i)
        roots.append((root, j - i))
    roots.sort(key=lambda rc: rc[0], reverse=True)
    return roots


def deriv_eval(f: TropSeries, x: Mapping[str, Trop], y: Mapping[str, Trop]) -> Trop:
    """Tropical derivative at a point pair: one occurrence is fed x, the
    rest of the monomial is fed y."""
    for v in f.vars:
        if v not in x or v not in y:
            raise MissingAssignment(v)
    best: Trop = INF
    for deg, c in f.coeffs.items():
        if deg.total < 1:
            continue
        for a, _ in deg.items():
            rest = deg.remove_one(a)
            val = trop_mul(c, trop_mul(x[a], rest.dot(y)))
            best = trop_add(best, val)
    return best


def plot_rows(
    f: TropSeries,
    var: Optional[str] = None,
    lo: Trop = Fraction(0),
    hi: Trop = Fraction(1),
    steps: int = 100,
) -> list:
    """(x, f(x)) samples of a univariate series, for TSV plot data."""
    if var is None:
        if len(f.vars) != 1:
            raise ValueError("plot_rows needs a univariate series or an explicit var")
        var = f.vars[0]
    lo, hi = as_trop(lo), as_trop(hi)
    rows = []
    for k in range(steps + 1):
        x = lo + (hi - lo) * Fraction(k, steps)
        rows.append((x, f.eval({var: x})))
    return rows


def plot_tsv(f: TropSeries, var: Optional[str] = None, lo=0, hi=1, steps: int = 100) -> str:
    return "\n".join(
        f"{fmt_trop(x)}\t{fmt_trop(v)}" for x, v in plot_rows(f, var, lo, hi, steps)
    )
