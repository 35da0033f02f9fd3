"""Lattice points, extended values, tabulated functions and integer boxes.

Points are plain tuples of Python ints. Finite function values are exact
rationals (``int`` or :class:`fractions.Fraction`); the single value
:data:`INF` stands for plus infinity.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from types import MappingProxyType
from typing import Callable, Iterable, Mapping, Sequence, Tuple, Union

Point = Tuple[int, ...]


class DimensionError(ValueError):
    """Raised when points of different dimensions are mixed."""


class EmptyDomainError(ValueError):
    """Raised when an algorithm receives a function with empty domain."""


class FunctionFormatError(ValueError):
    """Raised when a function file cannot be parsed."""


class _Infinity:
    """Plus infinity. Greater than every finite value, equal only to itself."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __reduce__(self):
        return (_Infinity, ())

    def __repr__(self):
        return "INF"

    def __str__(self):
        return "inf"

    def __hash__(self):
        return hash("quasimnat.INF")

    def __eq__(self, other):
        return other is self

    def __ne__(self, other):
        return other is not self

    def __lt__(self, other):
        if other is self or isinstance(other, Rational):
            return False
        return NotImplemented

    def __le__(self, other):
        if other is self:
            return True
        if isinstance(other, Rational):
            return False
        return NotImplemented

    def __gt__(self, other):
        if other is self:
            return False
        if isinstance(other, Rational):
            return True
        return NotImplemented

    def __ge__(self, other):
        if other is self or isinstance(other, Rational):
            return True
        return NotImplemented

    def __add__(self, other):
        if other is self or isinstance(other, Rational):
            return self
        return NotImplemented

    __radd__ = __add__


INF = _Infinity()

Value = Union[int, Fraction, _Infinity]


def is_finite(v) -> bool:
    return v is not INF


def as_value(v) -> Value:
    """Normalize a number to an exact value: integral rationals become ``int``.

    Accepts ints, Fractions, ``"p/q"`` strings and the strings ``"inf"``/
    ``"+inf"``. Floats are rejected because axiom checks need exact ties.
    """
    if v is INF:
        return INF
    if isinstance(v, bool):
        raise TypeError("booleans are not function values")
    if isinstance(v, str):
        s = v.strip()
        if s.lower() in ("inf", "+inf", "infinity", "+infinity"):
            return INF
        try:
            v = Fraction(s)
        except ValueError:
            raise ValueError(f"not a rational value: {v!r}") from None
    if isinstance(v, float):
        raise TypeError(f"float value {v!r}: use an integer or a 'p/q' string")
    if not isinstance(v, Rational):
        raise TypeError(f"unsupported value type {type(v).__name__}")
    q = Fraction(v)
    return int(q) if q.denominator == 1 else q


def value_to_json(v: Value):
    if v is INF:
        return "inf"
    if isinstance(v, int):
        return v
    return f"{v.numerator}/{v.denominator}"


# -- points -----------------------------------------------------------------

def as_point(x: Iterable[int], dim: int | None = None) -> Point:
    pt = tuple(x)
    for c in pt:
        if isinstance(c, bool) or not isinstance(c, int):
            # numpy integers and the like
            try:
                if int(c) != c:
                    raise ValueError
            except (TypeError, ValueError):
                raise TypeError(f"non-integer coordinate {c!r}") from None
    pt = tuple(int(c) for c in pt)
    if len(pt) == 0:
        raise DimensionError("points need at least one coordinate")
    if dim is not None and len(pt) != dim:
        raise DimensionError(f"point {pt} has dimension {len(pt)}, expected {dim}")
    return pt


def coord_sum(x: Point) -> int:
    """x(N), the sum of all coordinates."""
    return sum(x)


def exchange_step(x: Point, i: int, j: int) -> Point:
    """Return ``x - chi_i + chi_j``; index 0 is the zero vector.

    Indices are 1-based so that ``0`` can play the null element.
    """
    n = len(x)
    if not (0 <= i <= n and 0 <= j <= n):
        raise IndexError(f"exchange indices ({i}, {j}) out of range for n={n}")
    if i == j:
        return x
    y = list(x)
    if i:
        y[i - 1] -= 1
    if j:
        y[j - 1] += 1
    return tuple(y)


def supp_pos(d: Sequence[int]) -> list[int]:
    """1-based indices of strictly positive coordinates."""
    return [k + 1 for k, c in enumerate(d) if c > 0]


def supp_neg(d: Sequence[int]) -> list[int]:
    return [k + 1 for k, c in enumerate(d) if c < 0]


def diff(x: Point, y: Point) -> Point:
    if len(x) != len(y):
        raise DimensionError("dimension mismatch")
    return tuple(a - b for a, b in zip(x, y))


def l1_norm(d: Sequence[int]) -> int:
    return sum(abs(c) for c in d)


def linf_norm(d: Sequence[int]) -> int:
    return max((abs(c) for c in d), default=0)


# -- boxes ------------------------------------------------------------------

@dataclass(frozen=True)
class IntBox:
    """Integer interval ``[lower, upper]`` in Z^n."""

    lower: Point
    upper: Point

    def __post_init__(self):
        lo = as_point(self.lower)
        hi = as_point(self.upper, len(lo))
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @property
    def dim(self) -> int:
        return len(self.lower)

    @property
    def empty(self) -> bool:
        return any(l > u for l, u in zip(self.lower, self.upper))

    def __contains__(self, x) -> bool:
        return all(l <= c <= u for l, c, u in zip(self.lower, x, self.upper))

    def size(self) -> int:
        if self.empty:
            return 0
        out = 1
        for l, u in zip(self.lower, self.upper):
            out *= u - l + 1
        return out

    def points(self):
        """Yield the points of the box in lexicographic order."""
        from itertools import product

        if self.empty:
            return
        yield from product(*(range(l, u + 1) for l, u in zip(self.lower, self.upper)))

    def with_upper(self, k: int, value: int) -> "IntBox":
        hi = list(self.upper)
        hi[k - 1] = value
        return IntBox(self.lower, tuple(hi))

    def with_lower(self, k: int, value: int) -> "IntBox":
        lo = list(self.lower)
        lo[k - 1] = value
        return IntBox(tuple(lo), self.upper)

    def intersect(self, other: "IntBox") -> "IntBox":
        return IntBox(
            tuple(max(a, b) for a, b in zip(self.lower, other.lower)),
            tuple(min(a, b) for a, b in zip(self.upper, other.upper)),
        )

    def to_json(self) -> dict:
        return {"lower": list(self.lower), "upper": list(self.upper)}

    @classmethod
    def cube(cls, lo: int, hi: int, dim: int) -> "IntBox":
        return cls((lo,) * dim, (hi,) * dim)


def linf_diameter(points: Iterable[Point]) -> int:
    """Largest max-norm distance between two points of a finite set.

    Computed as the largest coordinate range, which is the same number.
    """
    box = coordinate_bounds(points)
    return max(u - l for l, u in zip(box.lower, box.upper))


def coordinate_bounds(points: Iterable[Point]) -> IntBox:
    pts = list(points)
    if not pts:
        raise EmptyDomainError("coordinate bounds of an empty set")
    n = len(pts[0])
    if any(len(p) != n for p in pts):
        raise DimensionError("points of mixed dimension")
    lo = tuple(min(p[k] for p in pts) for k in range(n))
    hi = tuple(max(p[k] for p in pts) for k in range(n))
    return IntBox(lo, hi)


# -- functions --------------------------------------------------------------

class TabulatedFunction:
    """A function on Z^n given by a finite table; absent points are +inf.

    Instances are immutable. Calling the object evaluates it::

        >>> f = TabulatedFunction(2, {(0, 0): 0, (1, 0): 1})
        >>> f((1, 0)), f((5, 5))
        (1, INF)
    """

    __slots__ = ("_dim", "_table", "_domain")

    def __init__(self, dim: int, table: Mapping[Iterable[int], object]):
        if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
            raise DimensionError(f"dimension must be a positive integer, got {dim!r}")
        data = {}
        for key, val in table.items():
            pt = as_point(key, dim)
            v = as_value(val)
            if v is INF:
                continue
            if pt in data:
                raise ValueError(f"point {pt} listed twice")
            data[pt] = v
        self._dim = dim
        self._table = MappingProxyType(data)
        self._domain = tuple(sorted(data))

    @property
    def dim(self) -> int:
        return self._dim

    @property
    def table(self) -> Mapping[Point, Value]:
        return self._table

    @property
    def domain(self) -> tuple[Point, ...]:
        """Effective domain in lexicographic (canonical) order."""
        return self._domain

    def __len__(self):
        return len(self._table)

    def __call__(self, x) -> Value:
        if len(x) != self._dim:
            raise DimensionError(f"point of dimension {len(x)} passed to a {self._dim}-dimensional function")
        return self._table.get(tuple(x), INF)

    eval = __call__

    def __contains__(self, x) -> bool:
        return tuple(x) in self._table

    def __eq__(self, other):
        if not isinstance(other, TabulatedFunction):
            return NotImplemented
        return self._dim == other._dim and dict(self._table) == dict(other._table)

    def __hash__(self):
        return hash((self._dim, frozenset(self._table.items())))

    def __repr__(self):
        return f"TabulatedFunction(dim={self._dim}, |dom|={len(self)})"

    def __getstate__(self):
        return (self._dim, dict(self._table))

    def __setstate__(self, state):
        dim, table = state
        self._dim = dim
        self._table = MappingProxyType(table)
        self._domain = tuple(sorted(table))

    def min_value(self) -> Value:
        if not self._table:
            raise EmptyDomainError("function has empty effective domain")
        return min(self._table.values())

    def map_values(self, fn: Callable[[Value], object]) -> "TabulatedFunction":
        return TabulatedFunction(self._dim, {x: fn(v) for x, v in self._table.items()})

    def restrict(self, keep: Callable[[Point], bool]) -> "TabulatedFunction":
        return TabulatedFunction(self._dim, {x: v for x, v in self._table.items() if keep(x)})

    # -- construction helpers --

    @classmethod
    def from_callable(cls, box: IntBox, fn: Callable[[Point], object]) -> "TabulatedFunction":
        """Tabulate ``fn`` over ``box``; points where it returns None or INF are dropped."""
        table = {}
        for x in box.points():
            v = fn(x)
            if v is None:
                continue
            table[x] = v
        return cls(box.dim, table)

    @classmethod
    def indicator(cls, points: Iterable[Iterable[int]], dim: int | None = None) -> "TabulatedFunction":
        pts = [tuple(p) for p in points]
        if dim is None:
            if not pts:
                raise EmptyDomainError("cannot infer the dimension of an empty set")
            dim = len(pts[0])
        return cls(dim, {p: 0 for p in pts})

    # -- file format --

    def to_json(self) -> dict:
        return {
            "dim": self._dim,
            "points": [{"x": list(x), "f": value_to_json(self._table[x])} for x in self._domain],
        }

    @classmethod
    def from_json(cls, doc) -> "TabulatedFunction":
        if not isinstance(doc, dict):
            raise FunctionFormatError("top level must be an object")
        if "dim" not in doc or "points" not in doc:
            raise FunctionFormatError("missing 'dim' or 'points'")
        dim = doc["dim"]
        if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
            raise FunctionFormatError(f"'dim' must be a positive integer, got {dim!r}")
        if not isinstance(doc["points"], list):
            raise FunctionFormatError("'points' must be a list")
        table = {}
        for k, entry in enumerate(doc["points"]):
            where = f"points[{k}]"
            if not isinstance(entry, dict) or "x" not in entry or "f" not in entry:
                raise FunctionFormatError(f"{where}: expected an object with 'x' and 'f'")
            try:
                x = as_point(entry["x"], dim)
                v = as_value(entry["f"])
            except (TypeError, ValueError) as exc:
                raise FunctionFormatError(f"{where}: {exc}") from None
            if v is INF:
                raise FunctionFormatError(f"{where}: listed points must have finite values")
            if x in table:
                raise FunctionFormatError(f"{where}: point {list(x)} listed twice")
            table[x] = v
        return cls(dim, table)

    def dumps(self, **kwargs) -> str:
        return json.dumps(self.to_json(), **kwargs)

    @classmethod
    def loads(cls, text: str) -> "TabulatedFunction":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise FunctionFormatError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
        return cls.from_json(doc)

    def save(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json(), fh, indent=1)
            fh.write("\n")

    @classmethod
    def load(cls, path) -> "TabulatedFunction":
        with open(path) as fh:
            return cls.loads(fh.read())


class OracleFunction:
    """Evaluation-only wrapper around a Python callable.

    ``fn`` may return None or :data:`INF` outside the effective domain.
    Descent algorithms accept these wherever they only need to evaluate.
    """

    def __init__(self, dim: int, fn: Callable[[Point], object]):
        self.dim = dim
        self._fn = fn

    def __call__(self, x) -> Value:
        if len(x) != self.dim:
            raise DimensionError(f"point of dimension {len(x)} passed to a {self.dim}-dimensional function")
        v = self._fn(tuple(x))
        return INF if v is None else as_value(v)

    eval = __call__


def evaluate(f, x) -> Value:
    """Evaluate ``f`` at ``x``; spelled out for symmetry with the other ops."""
    return f(x)
