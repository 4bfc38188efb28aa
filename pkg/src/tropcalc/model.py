"""The min-plus weighted relational model.

Objects are enumerable sets of points; a morphism from X to Y lives in the
coKleisli category of the finite-multiset comonad: a sparse matrix indexed
by (multiset over X, point of Y) whose entries are tropical series in the
symbolic weight parameters.  Absent entries are the constant-INF series.

Point representation (plain hashable tuples):
  ground point           "*"
  natural number         int
  arrow point            ("=>", bag, b)     bag a sorted tuple over the domain
  tagged sum / context   ("@", i, p)
Multisets ("bags") are sorted tuples of points.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Tuple

from .series import TropSeries
from .values import INF, Trop, is_inf, trop_add, trop_mul
from . import terms as T


class ShapeMismatch(ValueError):
    pass


class CapTooSmall(UserWarning):
    pass


@dataclass(frozen=True)
class Caps:
    k_max: int = 4
    n_max: int = 8
    f_max: int = 16

    def __post_init__(self):
        if min(self.k_max, self.n_max, self.f_max) < 1:
            raise ValueError("all caps must be >= 1")


DEFAULT_CAPS = Caps()

ZERO_SERIES = TropSeries.constant(Fraction(0))
EMPTY_SERIES = TropSeries.empty()


# ------------------------------------------------------------------- bags


def bag_add(a: tuple, b: tuple) -> tuple:
    return tuple(sorted(a + b))


def bags_upto(points: Iterable, k: int) -> List[tuple]:
    """All multisets over `points` of size <= k, as sorted tuples."""
    pts = sorted(set(points))
    out = [()]
    for size in range(1, k + 1):
        out.extend(itertools.combinations_with_replacement(pts, size))
    return out


def sub_bags(bag: tuple) -> List[Tuple[tuple, tuple]]:
    """All (sub, rest) decompositions of a bag."""
    seen = set()
    out = []
    n = len(bag)
    for r in range(n + 1):
        for idx in itertools.combinations(range(n), r):
            sub = tuple(bag[i] for i in idx)
            if sub in seen:
                continue
            seen.add(sub)
            restset = set(range(n)) - set(idx)
            rest = tuple(bag[i] for i in sorted(restset))
            out.append((sub, rest))
    return out


def bag_splits(bag: tuple, k: int) -> List[Tuple[tuple, ...]]:
    """All ways to write bag = part_1 + ... + part_k (ordered parts)."""
    if k == 0:
        return [()] if not bag else []
    seen = set()
    out = []
    for assign in itertools.product(range(k), repeat=len(bag)):
        parts = tuple(
            tuple(bag[i] for i in range(len(bag)) if assign[i] == j)
            for j in range(k)
        )
        if parts not in seen:
            seen.add(parts)
            out.append(parts)
    return out


# --------------------------------------------------------------- semantic sets


class SemSet:
    def points(self) -> tuple:
        raise NotImplementedError

    def bags(self, k: int) -> List[tuple]:
        return bags_upto(self.points(), k)


class UnitSet(SemSet):
    def points(self):
        return ("*",)

    def __repr__(self):
        return "UnitSet"

    def __eq__(self, other):
        return isinstance(other, UnitSet)

    def __hash__(self):
        return hash("UnitSet")


class NatSet(SemSet):
    def __init__(self, n_max: int):
        self.n_max = n_max

    def points(self):
        return tuple(range(self.n_max + 1))

    def __repr__(self):
        return f"NatSet({self.n_max})"

    def __eq__(self, other):
        return isinstance(other, NatSet) and other.n_max == self.n_max

    def __hash__(self):
        return hash(("NatSet", self.n_max))


class ArrowSet(SemSet):
    """Points (bag over dom of size <= k, codomain point)."""

    def __init__(self, dom: SemSet, cod: SemSet, k: int):
        self.dom, self.cod, self.k = dom, cod, k
        self._pts: Optional[tuple] = None

    def points(self):
        if self._pts is None:
            self._pts = tuple(
                ("=>", bag, b)
                for bag in self.dom.bags(self.k)
                for b in self.cod.points()
            )
        return self._pts

    def __repr__(self):
        return f"ArrowSet({self.dom!r}, {self.cod!r}, k={self.k})"

    def __eq__(self, other):
        return (
            isinstance(other, ArrowSet)
            and other.dom == self.dom
            and other.cod == self.cod
            and other.k == self.k
        )

    def __hash__(self):
        return hash(("ArrowSet", self.dom, self.cod, self.k))


class SumSet(SemSet):
    """Tagged disjoint union; interprets contexts and products of objects."""

    def __init__(self, components: Iterable[SemSet]):
        self.components = tuple(components)

    def points(self):
        return tuple(
            ("@", i, p)
            for i, c in enumerate(self.components)
            for p in c.points()
        )

    def __repr__(self):
        return f"SumSet{self.components!r}"

    def __eq__(self, other):
        return isinstance(other, SumSet) and other.components == self.components

    def __hash__(self):
        return hash(("SumSet", self.components))


def tag_bag(i: int, bag: tuple) -> tuple:
    return tuple(("@", i, p) for p in bag)


def untag_bag(bag: tuple) -> Dict[int, tuple]:
    """Split a bag over a SumSet into per-component bags."""
    out: Dict[int, list] = {}
    for tag, i, p in bag:
        out.setdefault(i, []).append(p)
    return {i: tuple(sorted(v)) for i, v in out.items()}


def sem_of_type(ty: T.Type, caps: Caps = DEFAULT_CAPS) -> SemSet:
    if isinstance(ty, T.Ground):
        return UnitSet()
    if isinstance(ty, T.NatType):
        return NatSet(caps.n_max)
    if isinstance(ty, T.Arrow):
        return ArrowSet(sem_of_type(ty.src, caps), sem_of_type(ty.tgt, caps), caps.k_max)
    if isinstance(ty, T.GradedArrow):
        return ArrowSet(sem_of_type(ty.src, caps), sem_of_type(ty.tgt, caps), ty.grade)
    raise TypeError(f"no denotation for {ty!r}")


# -------------------------------------------------------------------- matrices


class TropMatrix:
    """Morphism !dom -> cod with demand-driven, memoized entries."""

    def __init__(self, dom: SemSet, cod: SemSet, entry_fn: Callable[[tuple, object], TropSeries], name: str = ""):
        self.dom = dom
        self.cod = cod
        self._fn = entry_fn
        self._cache: Dict[tuple, TropSeries] = {}
        self._support: Dict[tuple, list] = {}
        self.name = name

    def entry(self, bag: tuple, b) -> TropSeries:
        key = (bag, b)
        got = self._cache.get(key)
        if got is None:
            got = self._fn(bag, b)
            self._cache[key] = got
        return got

    def finite_points(self, bag: tuple) -> list:
        """Codomain points with a non-INF entry at this bag."""
        if bag not in self._support:
            self._support[bag] = [
                (b, s)
                for b in self.cod.points()
                if not (s := self.entry(bag, b)).is_empty
            ]
        return self._support[bag]

    def stored_entries(self):
        return [
            (bag, b, s) for (bag, b), s in self._cache.items() if not s.is_empty
        ]

    @classmethod
    def from_entries(cls, dom: SemSet, cod: SemSet, entries: Mapping, name: str = "") -> "TropMatrix":
        table = {}
        for (bag, b), v in entries.items():
            table[(tuple(sorted(bag)), b)] = (
                v if isinstance(v, TropSeries) else TropSeries.constant(v)
            )
        m = cls(dom, cod, lambda bag, b: table.get((bag, b), EMPTY_SERIES), name)
        return m

    @classmethod
    def empty(cls, dom: SemSet, cod: SemSet, name: str = "empty") -> "TropMatrix":
        return cls(dom, cod, lambda bag, b: EMPTY_SERIES, name)


def identity(x: SemSet) -> TropMatrix:
    """Dereliction: the coKleisli identity, 0 exactly at ([b], b)."""

    def fn(bag, b):
        return ZERO_SERIES if bag == (b,) else EMPTY_SERIES

    return TropMatrix(x, x, fn, "id")


def weight_series(w: T.Weight) -> TropSeries:
    if isinstance(w, str):
        return TropSeries.parameter(w)
    return TropSeries.constant(w)


def kleisli_compose(s: TropMatrix, t: TropMatrix, caps: Caps = DEFAULT_CAPS) -> TropMatrix:
    """(s o_! t)_{mu,c} = inf over bags [b_1..b_k] and splits mu = sum mu_i
    of s_{[b_1..b_k],c} + sum_i t_{mu_i,b_i}."""
    if t.cod != s.dom:
        raise ShapeMismatch(f"cannot compose {s.dom!r} after {t.cod!r}")

    def fn(mu, c):
        best = EMPTY_SERIES
        for k in range(caps.k_max + 1):
            for parts in bag_splits(mu, k):
                for picks in itertools.product(
                    *(t.finite_points(p) for p in parts)
                ):
                    rho = tuple(sorted(b for b, _ in picks))
                    head = s.entry(rho, c)
                    if head.is_empty:
                        continue
                    acc = head
                    for _, series in picks:
                        acc = acc.tmul(series)
                    best = best.tmin(acc)
        return best

    return TropMatrix(t.dom, s.cod, fn, f"({s.name} . {t.name})")


# ------------------------------------------------------------ CCC combinators


def proj(x: SumSet, i: int) -> TropMatrix:
    """coKleisli projection: dereliction on the i-th component."""

    def fn(bag, b):
        return ZERO_SERIES if bag == (("@", i, b),) else EMPTY_SERIES

    return TropMatrix(x, x.components[i], fn, f"proj{i}")


def pairing(f: TropMatrix, g: TropMatrix) -> TropMatrix:
    """<f,g> : !X -> Y+Z from f : !X -> Y and g : !X -> Z."""
    if f.dom != g.dom:
        raise ShapeMismatch("pairing needs a shared domain")
    cod = SumSet((f.cod, g.cod))

    def fn(bag, b):
        tag, i, p = b
        return f.entry(bag, p) if i == 0 else g.entry(bag, p)

    return TropMatrix(f.dom, cod, fn, f"<{f.name},{g.name}>")


def ev(a: SemSet, b: SemSet, k: int) -> TropMatrix:
    """Evaluation: 0 exactly at ([<rho,y>] + rho-tagged-arguments, y)."""
    arrow = ArrowSet(a, b, k)
    dom = SumSet((arrow, a))

    def fn(bag, y):
        funs = [p for p in bag if p[1] == 0]
        args = tuple(sorted(p[2] for p in bag if p[1] == 1))
        if len(funs) != 1:
            return EMPTY_SERIES
        pt = funs[0][2]
        if pt == ("=>", args, y):
            return ZERO_SERIES
        return EMPTY_SERIES

    return TropMatrix(dom, b, fn, "ev")


def curry(f: TropMatrix, k: Optional[int] = None) -> TropMatrix:
    """Rebracket !(X+A) -> B into !X -> (A => B)."""
    if not isinstance(f.dom, SumSet) or len(f.dom.components) != 2:
        raise ShapeMismatch("curry needs a two-component domain")
    x, a = f.dom.components
    cod = ArrowSet(a, f.cod, DEFAULT_CAPS.k_max if k is None else k)

    def fn(bag, pt):
        tag, abag, b = pt
        inner = bag_add(tag_bag(0, bag), tag_bag(1, abag))
        return f.entry(inner, b)

    return TropMatrix(x, cod, fn, f"curry({f.name})")


def uncurry(f: TropMatrix) -> TropMatrix:
    """Inverse rebracketing: !X -> (A => B) into !(X+A) -> B."""
    if not isinstance(f.cod, ArrowSet):
        raise ShapeMismatch("uncurry needs an arrow codomain")
    a = f.cod.dom
    dom = SumSet((f.dom, a))

    def fn(bag, b):
        split = untag_bag(bag)
        xs = split.get(0, ())
        abag = split.get(1, ())
        return f.entry(xs, ("=>", abag, b))

    return TropMatrix(dom, f.cod.cod, fn, f"uncurry({f.name})")


def diff_op(t: TropMatrix) -> TropMatrix:
    """(Dt)_{mu + rho, b} = t_{rho + mu, b} when the second (linear)
    component holds exactly one element, INF otherwise."""
    dom = SumSet((t.dom, t.dom))

    def fn(bag, b):
        split = untag_bag(bag)
        rho = split.get(0, ())
        mu = split.get(1, ())
        if len(mu) != 1:
            return EMPTY_SERIES
        return t.entry(bag_add(rho, mu), b)

    return TropMatrix(dom, t.cod, fn, f"D({t.name})")


# ------------------------------------------------------------- interpretation


def _apply(fm: TropMatrix, fa: TropMatrix, arrow_cap: int, name="app") -> TropMatrix:
    """Context-sharing application: fm : !G -> (A => B), fa : !G -> A."""
    if not isinstance(fm.cod, ArrowSet):
        raise ShapeMismatch(f"applying a non-arrow matrix {fm.cod!r}")

    def fn(mu, b):
        best = EMPTY_SERIES
        for mu0, rest in sub_bags(mu):
            for k in range(arrow_cap + 1):
                if k == 0 and rest:
                    continue
                for parts in bag_splits(rest, k):
                    for picks in itertools.product(
                        *(fa.finite_points(p) for p in parts)
                    ):
                        abag = tuple(sorted(a for a, _ in picks))
                        head = fm.entry(mu0, ("=>", abag, b))
                        if head.is_empty:
                            continue
                        acc = head
                        for _, series in picks:
                            acc = acc.tmul(series)
                        best = best.tmin(acc)
        return best

    return TropMatrix(fm.dom, fm.cod.cod, fn, name)


def _scale(m: TropMatrix, w: T.Weight, name="") -> TropMatrix:
    ws = weight_series(w)
    return TropMatrix(
        m.dom, m.cod, lambda bag, b: m.entry(bag, b).tmul(ws), name or f"{w}.{m.name}"
    )


def _mmin(a: TropMatrix, b: TropMatrix, name="") -> TropMatrix:
    return TropMatrix(
        a.dom,
        a.cod,
        lambda bag, pt: a.entry(bag, pt).tmin(b.entry(bag, pt)),
        name or f"min({a.name},{b.name})",
    )


def _ctx_types(ctx: list, dialect: str) -> list:
    if dialect == "bstlc":
        return [(x, ty) for x, g, ty in ctx]
    return list(ctx)


def interpret(term: T.Term, ctx=None, dialect: str = "stlc", caps: Caps = DEFAULT_CAPS) -> TropMatrix:
    """Denotation of a typed term as a matrix !(sem of context) -> sem of type.

    ``ctx`` is a list of (var, type) pairs ((var, grade, type) for the
    graded dialect).  The term must typecheck first.
    """
    ctx = ctx or []
    T_ctx = _ctx_types(ctx, dialect)
    if dialect == "stlc":
        T.typecheck_stlc(dict(T_ctx), term)
    elif dialect == "bstlc":
        T.typecheck_bstlc(ctx, term)
    elif dialect == "stdlc":
        T.typecheck_stdlc(dict(T_ctx), term)
    elif dialect == "pcfl":
        T.typecheck_pcfl(dict(T_ctx), term)
    else:
        raise ValueError(f"unknown dialect {dialect!r}")
    return _interp(term, T_ctx, dialect, caps)


def _type_of(term: T.Term, ctx: list, dialect: str) -> T.Type:
    env = dict(ctx)
    if dialect == "bstlc":
        ty, _ = T._infer_graded(env, term)
        return ty
    if dialect == "stdlc":
        return T.typecheck_stdlc(env, term)
    if dialect == "pcfl":
        return T.typecheck_pcfl(env, term)
    return T.typecheck_stlc(env, term)


def _ctx_set(ctx: list, caps: Caps) -> SumSet:
    return SumSet(sem_of_type(ty, caps) for _, ty in ctx)


def _interp(term: T.Term, ctx: list, dialect: str, caps: Caps) -> TropMatrix:
    dom = _ctx_set(ctx, caps)

    if isinstance(term, T.Var):
        i = [x for x, _ in ctx].index(term.name)
        cod = sem_of_type(ctx[i][1], caps)

        def var_fn(bag, b):
            return ZERO_SERIES if bag == (("@", i, b),) else EMPTY_SERIES

        return TropMatrix(dom, cod, var_fn, term.name)

    if isinstance(term, T.Lam):
        inner_ctx = ctx + [(term.var, term.ann)]
        body = _interp(term.body, inner_ctx, dialect, caps)
        aset = sem_of_type(term.ann, caps)
        if dialect == "bstlc":
            ty = _type_of(term, ctx, dialect)
            cap = ty.grade
        else:
            cap = caps.k_max
        cod = ArrowSet(aset, body.cod, cap)
        n = len(ctx)

        def lam_fn(bag, pt):
            tag, abag, b = pt
            if len(abag) > cap:
                return EMPTY_SERIES
            inner = bag_add(bag, tag_bag(n, abag))
            return body.entry(inner, b)

        return TropMatrix(dom, cod, lam_fn, f"lam {term.var}")

    if isinstance(term, T.App):
        fm = _interp(term.fn, ctx, dialect, caps)
        fa = _interp(term.arg, ctx, dialect, caps)
        cap = fm.cod.k
        return _apply(fm, fa, cap)

    if isinstance(term, T.DApp):
        fm = _interp(term.fn, ctx, dialect, caps)
        fa = _interp(term.arg, ctx, dialect, caps)
        if not isinstance(fm.cod, ArrowSet):
            raise ShapeMismatch("differentiating a non-arrow matrix")
        cap = fm.cod.k

        def dapp_fn(mu, pt):
            tag, rho, b = pt
            if len(rho) + 1 > cap:
                return EMPTY_SERIES
            best = EMPTY_SERIES
            for mu0, mu1 in sub_bags(mu):
                for a, series in fa.finite_points(mu1):
                    head = fm.entry(mu0, ("=>", bag_add(rho, (a,)), b))
                    if head.is_empty:
                        continue
                    best = best.tmin(head.tmul(series))
            return best

        return TropMatrix(dom, fm.cod, dapp_fn, "Dapp")

    if isinstance(term, T.ZeroTerm):
        # the zero term: all-INF at every type; give it a throwaway shape
        return TropMatrix.empty(dom, UnitSet(), "0")

    if isinstance(term, T.Sum):
        live = [s for s in term.terms if not isinstance(s, T.ZeroTerm)]
        if not live:
            return TropMatrix.empty(dom, UnitSet(), "0")
        parts = [_interp(s, ctx, dialect, caps) for s in live]
        out = parts[0]
        for p in parts[1:]:
            out = _mmin(out, p)
        return out

    if isinstance(term, T.Scalar):
        return _scale(_interp(term.body, ctx, dialect, caps), term.weight)

    if isinstance(term, T.Choice):
        l = _scale(_interp(term.left, ctx, dialect, caps), term.w_left)
        r = _scale(_interp(term.right, ctx, dialect, caps), term.w_right)
        return _mmin(l, r)

    if isinstance(term, T.Numeral):
        if term.n > caps.n_max:
            raise ValueError(f"numeral {term.n} exceeds the Nat cap {caps.n_max}")
        cod = NatSet(caps.n_max)

        def num_fn(bag, m):
            return ZERO_SERIES if (bag == () and m == term.n) else EMPTY_SERIES

        return TropMatrix(dom, cod, num_fn, str(term.n))

    if isinstance(term, T.Succ):
        sub = _interp(term.arg, ctx, dialect, caps)

        def succ_fn(bag, m):
            if m == 0:
                return EMPTY_SERIES
            return sub.entry(bag, m - 1)

        return TropMatrix(dom, sub.cod, succ_fn, "succ")

    if isinstance(term, T.Pred):
        sub = _interp(term.arg, ctx, dialect, caps)
        nmax = caps.n_max

        def pred_fn(bag, m):
            out = EMPTY_SERIES
            if m + 1 <= nmax:
                out = out.tmin(sub.entry(bag, m + 1))
            if m == 0:
                out = out.tmin(sub.entry(bag, 0))
            return out

        return TropMatrix(dom, sub.cod, pred_fn, "pred")

    if isinstance(term, T.Ifz):
        cm = _interp(term.cond, ctx, dialect, caps)
        tm = _interp(term.then, ctx, dialect, caps)
        em = _interp(term.other, ctx, dialect, caps)
        nmax = caps.n_max

        def ifz_fn(mu, b):
            best = EMPTY_SERIES
            for mu0, mu1 in sub_bags(mu):
                z = cm.entry(mu0, 0)
                if not z.is_empty:
                    best = best.tmin(z.tmul(tm.entry(mu1, b)))
                for n in range(1, nmax + 1):
                    nz = cm.entry(mu0, n)
                    if not nz.is_empty:
                        best = best.tmin(nz.tmul(em.entry(mu1, b)))
            return best

        cod = em.cod if isinstance(term.then, T.ZeroTerm) else tm.cod
        return TropMatrix(dom, cod, ifz_fn, "ifz")

    if isinstance(term, T.Fix):
        fm = _interp(term.body, ctx, dialect, caps)
        if not isinstance(fm.cod, ArrowSet):
            raise ShapeMismatch("Y needs an arrow-typed body")
        cap = fm.cod.k
        cod = fm.cod.cod
        current = TropMatrix.empty(dom, cod, "fix0")
        for i in range(caps.f_max):
            current = _apply(fm, current, cap, name=f"fix{i + 1}")
        return current

    raise TypeError(f"no interpretation for {type(term).__name__}")


# ----------------------------------------------------------------- analyses


def check_boolean(m: TropMatrix) -> bool:
    """True iff every materialized entry is the constant-0 series."""
    return all(s == ZERO_SERIES for _, _, s in m.stored_entries())


def matrix_apply(
    m: TropMatrix,
    x: Mapping,
    params: Optional[Mapping[str, Trop]] = None,
    max_bag: Optional[int] = None,
) -> Dict[object, Trop]:
    """t^!(x)_b = inf over bags of (entry + bag . x), with parameters
    substituted numerically.

    ``x`` maps base points of the domain to tropical values; absent points
    count as INF (and are never put in a bag).
    """
    params = dict(params or {})
    if max_bag is None:
        max_bag = DEFAULT_CAPS.k_max + 1
    support = [p for p, v in x.items() if not is_inf(v)]
    out: Dict[object, Trop] = {}
    for b in m.cod.points():
        best: Trop = INF
        for bag in bags_upto(support, max_bag):
            s = m.entry(bag, b)
            if s.is_empty:
                continue
            val = s.eval(params) if s.vars else s.constant_value()
            for p in bag:
                val = trop_mul(val, x[p])
            best = trop_add(best, val)
        out[b] = best
    return out


# ------------------------------------------------------------- serialization


def _point_json(p):
    if isinstance(p, tuple) and p and p[0] == "=>":
        return {"bag": [_point_json(q) for q in p[1]], "pt": _point_json(p[2])}
    if isinstance(p, tuple) and p and p[0] == "@":
        return {"tag": p[1], "pt": _point_json(p[2])}
    return p


def matrix_to_json_dict(m: TropMatrix) -> dict:
    entries = [
        {
            "mset": [_point_json(p) for p in bag],
            "point": _point_json(b),
            "series": s.to_json_dict(),
        }
        for bag, b, s in sorted(m.stored_entries(), key=lambda e: (repr(e[0]), repr(e[1])))
    ]
    return {"domain": repr(m.dom), "codomain": repr(m.cod), "entries": entries}


def matrix_to_json(m: TropMatrix) -> str:
    return json.dumps(matrix_to_json_dict(m), sort_keys=True)
