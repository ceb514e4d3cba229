"""Fuzzy numbers stored as alpha-level profiles.

A fuzzy number is kept as two endpoint arrays ``lower[k]``, ``upper[k]``
sampled on an increasing grid of levels ``0 = a_0 < a_1 < ... < a_m = 1``.
All arithmetic is level-wise interval arithmetic on those arrays.

    >>> a = make_triangular(3, 4, 5)
    >>> b = make_triangular(-3, -2, -1)
    >>> cert = gh_diff(a, b)
    >>> cert.exists, str(cert.witness)
    (True, 'crisp(6)')
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import NamedTuple, Sequence

import numpy as np

EPS_VALID = 1e-9
DEFAULT_GRID_SIZE = 101

H_DIFF = "H_DIFF"
GH_DIFF = "GH_DIFF"
EXISTS = "exists"
NOT_EXISTS = "not_exists"


class FuzzyError(ValueError):
    """Base class for invalid fuzzy-number input."""


class InvalidShapeError(FuzzyError):
    pass


class InvalidProfileError(FuzzyError):
    pass


class AlphaDomainError(FuzzyError):
    pass


@dataclass(frozen=True)
class Interval:
    """Closed real interval ``[lower, upper]``."""

    lower: float
    upper: float

    def __post_init__(self):
        lo, up = float(self.lower), float(self.upper)
        if not (math.isfinite(lo) and math.isfinite(up)):
            raise InvalidProfileError(f"non-finite interval [{lo}, {up}]")
        if lo - up > EPS_VALID:
            raise InvalidProfileError(f"interval lower {lo} exceeds upper {up}")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", up)

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def contains(self, r: float) -> bool:
        return self.lower <= r <= self.upper

    def __iter__(self):
        yield self.lower
        yield self.upper


def hausdorff(p: Interval, q: Interval) -> float:
    """Hausdorff distance between two compact intervals."""
    return max(abs(p.lower - q.lower), abs(p.upper - q.upper))


@dataclass(frozen=True, eq=False)
class AlphaGrid:
    """Strictly increasing list of alpha levels containing 0 and 1."""

    levels: np.ndarray

    def __post_init__(self):
        lv = np.array(self.levels, dtype=float)
        if lv.ndim != 1 or lv.size < 2:
            raise FuzzyError("an alpha grid needs at least the levels 0 and 1")
        if lv[0] != 0.0 or lv[-1] != 1.0:
            raise FuzzyError("an alpha grid must start at 0 and end at 1")
        if np.any(np.diff(lv) <= 0):
            raise FuzzyError("alpha levels must be strictly increasing")
        lv.setflags(write=False)
        object.__setattr__(self, "levels", lv)

    @classmethod
    def uniform(cls, size: int = DEFAULT_GRID_SIZE) -> "AlphaGrid":
        return _uniform_grid(int(size))

    def __len__(self):
        return self.levels.size

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, AlphaGrid):
            return NotImplemented
        return np.array_equal(self.levels, other.levels)

    def __hash__(self):
        return hash(self.levels.tobytes())

    def union(self, other: "AlphaGrid") -> "AlphaGrid":
        if self == other:
            return self
        return AlphaGrid(np.union1d(self.levels, other.levels))

    def __repr__(self):
        return f"AlphaGrid(size={len(self)})"


@lru_cache(maxsize=32)
def _uniform_grid(size: int) -> AlphaGrid:
    if size < 2:
        raise FuzzyError("grid size must be at least 2")
    return AlphaGrid(np.linspace(0.0, 1.0, size))


def default_grid() -> AlphaGrid:
    return _uniform_grid(DEFAULT_GRID_SIZE)


class ShapeTag(NamedTuple):
    kind: str  # triangular | trapezoidal | crisp | general
    params: tuple


class Violation(NamedTuple):
    level: float
    condition: str
    magnitude: float

    def to_dict(self) -> dict:
        return {"level": float(self.level), "condition": self.condition,
                "magnitude": float(self.magnitude)}


def profile_violation(levels: np.ndarray, lower: np.ndarray, upper: np.ndarray,
                      eps: float = EPS_VALID) -> Violation | None:
    """Return the first (lowest-level) broken fuzzy-number condition, or None.

    Checked per level, in this order: ``lower <= upper``, lower endpoint
    nondecreasing and upper endpoint nonincreasing in alpha. Monotonicity
    breaks between levels ``k-1`` and ``k`` are reported at level ``k``.
    """
    gap = lower - upper
    dl = lower[:-1] - lower[1:]
    du = upper[1:] - upper[:-1]
    if gap.max() <= eps and (dl.size == 0 or (dl.max() <= eps and du.max() <= eps)):
        return None
    drop = np.concatenate(([0.0], dl))
    rise = np.concatenate(([0.0], du))
    checks = (("lower_le_upper", gap), ("lower_monotone", drop), ("upper_monotone", rise))
    first = None
    for name, amount in checks:
        bad = np.flatnonzero(amount > eps)
        if bad.size and (first is None or bad[0] < first[0]):
            first = (bad[0], name, amount[bad[0]])
    if first is None:
        return None
    k, name, mag = first
    return Violation(float(levels[k]), name, float(mag))


def _as_profile_array(values, size: int, what: str) -> np.ndarray:
    arr = np.array(values, dtype=float)
    if arr.shape != (size,):
        raise InvalidProfileError(f"{what} has shape {arr.shape}, expected ({size},)")
    if not np.isfinite(arr).all():
        raise InvalidProfileError(f"{what} contains non-finite values")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class FuzzyNumber:
    """Fuzzy number given by its alpha-cuts on a grid.

    The constructor rejects profiles that are not valid fuzzy numbers: every
    cut must satisfy ``lower <= upper`` and the cuts must be nested. Both are
    checked up to ``EPS_VALID``.
    """

    grid: AlphaGrid
    lower: np.ndarray
    upper: np.ndarray
    tag: ShapeTag | None = field(default=None)

    def __post_init__(self):
        m = len(self.grid)
        lo = _as_profile_array(self.lower, m, "lower")
        up = _as_profile_array(self.upper, m, "upper")
        bad = profile_violation(self.grid.levels, lo, up)
        if bad is not None:
            raise InvalidProfileError(
                f"not a fuzzy number: {bad.condition} fails at alpha={bad.level:g} "
                f"(by {bad.magnitude:.3g})")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", up)

    @classmethod
    def _trusted(cls, grid: AlphaGrid, lower: np.ndarray, upper: np.ndarray) -> "FuzzyNumber":
        # Sums and scalings of valid profiles stay valid: IEEE rounding is monotone.
        if not (np.isfinite(lower).all() and np.isfinite(upper).all()):
            raise InvalidProfileError("arithmetic overflow: profile is not finite")
        obj = object.__new__(cls)
        lower.setflags(write=False)
        upper.setflags(write=False)
        for name, value in (("grid", grid), ("lower", lower), ("upper", upper), ("tag", None)):
            object.__setattr__(obj, name, value)
        return obj

    @property
    def levels(self) -> np.ndarray:
        return self.grid.levels

    @property
    def cuts(self) -> list[Interval]:
        return [Interval(lo, up) for lo, up in zip(self.lower, self.upper)]

    @cached_property
    def shape_tag(self) -> ShapeTag:
        return self.tag if self.tag is not None else _infer_tag(self)

    @property
    def is_crisp(self) -> bool:
        return bool(np.all(self.upper - self.lower <= EPS_VALID))

    def alpha_cut(self, alpha: float) -> Interval:
        return alpha_cut(self, alpha)

    def __eq__(self, other):
        if not isinstance(other, FuzzyNumber):
            return NotImplemented
        return (self.grid == other.grid and np.array_equal(self.lower, other.lower)
                and np.array_equal(self.upper, other.upper))

    __hash__ = None

    def __add__(self, other):
        if isinstance(other, FuzzyNumber):
            return add(self, other)
        return NotImplemented

    def __rmul__(self, lam):
        if isinstance(lam, (int, float, np.floating, np.integer)):
            return scalar_mul(float(lam), self)
        return NotImplemented

    __mul__ = __rmul__

    def __str__(self):
        kind, params = self.shape_tag
        args = ", ".join(_fmt(p) for p in params)
        if kind == "triangular":
            return f"tfn({args})"
        if kind == "trapezoidal":
            return f"tpfn({args})"
        if kind == "crisp":
            return f"crisp({args})"
        return (f"general(alpha0=[{_fmt(self.lower[0])}, {_fmt(self.upper[0])}], "
                f"alpha1=[{_fmt(self.lower[-1])}, {_fmt(self.upper[-1])}])")

    def __repr__(self):
        return f"FuzzyNumber({self}, grid={len(self.grid)})"

    def to_dict(self, include_cuts: bool = True) -> dict:
        kind, params = self.shape_tag
        out = {"shape": kind, "params": [float(p) for p in params],
               "grid": [float(a) for a in self.levels]}
        if include_cuts or kind == "general":
            out["cuts"] = [[float(lo), float(up)] for lo, up in zip(self.lower, self.upper)]
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "FuzzyNumber":
        grid = AlphaGrid(data["grid"]) if data.get("grid") is not None else default_grid()
        cuts = data.get("cuts")
        if cuts is not None:
            arr = np.asarray(cuts, dtype=float).reshape(-1, 2)
            shape = data.get("shape", "general")
            tag = None
            if shape != "general":
                tag = ShapeTag(shape, tuple(float(p) for p in data["params"]))
            return cls(grid, arr[:, 0], arr[:, 1], tag)
        return make_shape(data["shape"], data.get("params", ()), grid)


def _fmt(v: float) -> str:
    v = float(v)
    if v == 0.0:
        return "0"
    return f"{v:.12g}"


def _infer_tag(f: FuzzyNumber) -> ShapeTag:
    a = f.levels
    lo0, lo1, up1, up0 = f.lower[0], f.lower[-1], f.upper[-1], f.upper[0]
    scale = max(1.0, float(np.max(np.abs(f.upper))), float(np.max(np.abs(f.lower))))
    tol = EPS_VALID * scale
    affine = (np.all(np.abs(f.lower - (lo0 + a * (lo1 - lo0))) <= tol)
              and np.all(np.abs(f.upper - (up0 + a * (up1 - up0))) <= tol))
    if not affine:
        return ShapeTag("general", ())
    if up0 - lo0 <= tol:
        return ShapeTag("crisp", (float(lo0),))
    if up1 - lo1 <= tol:
        return ShapeTag("triangular", (float(lo0), float(lo1), float(up0)))
    return ShapeTag("trapezoidal", (float(lo0), float(lo1), float(up1), float(up0)))


# constructors ---------------------------------------------------------------

def make_trapezoidal(a1: float, a2: float, a3: float, a4: float,
                     grid: AlphaGrid | None = None) -> FuzzyNumber:
    """Trapezoidal number ``(a1, a2, a3, a4)``; cut ``[a1 + a(a2-a1), a4 - a(a4-a3)]``."""
    a1, a2, a3, a4 = map(float, (a1, a2, a3, a4))
    if not (a1 <= a2 <= a3 <= a4):
        raise InvalidShapeError(f"trapezoidal parameters must satisfy a1<=a2<=a3<=a4, got {(a1, a2, a3, a4)}")
    grid = grid or default_grid()
    a = grid.levels
    return FuzzyNumber(grid, a1 + a * (a2 - a1), a4 - a * (a4 - a3),
                       ShapeTag("trapezoidal", (a1, a2, a3, a4)))


def make_triangular(a1: float, a: float, a2: float, grid: AlphaGrid | None = None) -> FuzzyNumber:
    """Triangular number ``(a1, a, a2)``; cut ``[(1-al)a1 + al*a, (1-al)a2 + al*a]``."""
    a1, a, a2 = float(a1), float(a), float(a2)
    if not (a1 <= a <= a2):
        raise InvalidShapeError(f"triangular parameters must satisfy a1<=a<=a2, got {(a1, a, a2)}")
    grid = grid or default_grid()
    al = grid.levels
    return FuzzyNumber(grid, (1 - al) * a1 + al * a, (1 - al) * a2 + al * a,
                       ShapeTag("triangular", (a1, a, a2)))


def make_crisp(v: float, grid: AlphaGrid | None = None) -> FuzzyNumber:
    grid = grid or default_grid()
    arr = np.full(len(grid), float(v))
    return FuzzyNumber(grid, arr, arr, ShapeTag("crisp", (float(v),)))


def zero(grid: AlphaGrid | None = None) -> FuzzyNumber:
    return make_crisp(0.0, grid)


def make_shape(kind: str, params: Sequence[float], grid: AlphaGrid | None = None) -> FuzzyNumber:
    makers = {"triangular": (make_triangular, 3), "trapezoidal": (make_trapezoidal, 4),
              "crisp": (make_crisp, 1)}
    if kind not in makers:
        raise InvalidShapeError(f"unknown parametric shape {kind!r}")
    maker, n = makers[kind]
    if len(params) != n:
        raise InvalidShapeError(f"{kind} takes {n} parameters, got {len(params)}")
    return maker(*params, grid=grid)


# evaluation -----------------------------------------------------------------

def alpha_cut(f: FuzzyNumber, alpha: float) -> Interval:
    """Cut at ``alpha``; off-grid levels interpolate linearly between neighbours."""
    alpha = float(alpha)
    if not 0.0 <= alpha <= 1.0:
        raise AlphaDomainError(f"alpha must lie in [0, 1], got {alpha}")
    a = f.levels
    return Interval(float(np.interp(alpha, a, f.lower)), float(np.interp(alpha, a, f.upper)))


def _sup_alpha(levels: np.ndarray, values: np.ndarray, r: float) -> float:
    # largest alpha with values(alpha) <= r, for nondecreasing piecewise-linear values
    if values[-1] <= r:
        return 1.0
    k = int(np.argmax(values > r))
    if k == 0:
        return 0.0
    v0, v1 = values[k - 1], values[k]
    t = (r - v0) / (v1 - v0)
    return float(levels[k - 1] + t * (levels[k] - levels[k - 1]))


def membership(f: FuzzyNumber, r: float) -> float:
    """Membership degree of ``r``.

    Parametric shapes use their closed-form membership functions; general
    profiles use ``sup{alpha : r in cut(alpha)}`` with linear interpolation.
    """
    r = float(r)
    kind, p = f.shape_tag
    if kind == "crisp":
        return 1.0 if r == p[0] else 0.0
    if kind in ("triangular", "trapezoidal"):
        a1, a2, a3, a4 = (p[0], p[1], p[1], p[2]) if kind == "triangular" else p
        if a2 <= r <= a3:
            return 1.0
        if a1 <= r < a2:
            return (r - a1) / (a2 - a1)
        if a3 < r <= a4:
            return (a4 - r) / (a4 - a3)
        return 0.0
    if not (f.lower[0] <= r <= f.upper[0]):
        return 0.0
    return min(_sup_alpha(f.levels, f.lower, r), _sup_alpha(f.levels, -f.upper, -r))


# arithmetic -----------------------------------------------------------------

def _resample(f: FuzzyNumber, grid: AlphaGrid) -> tuple[np.ndarray, np.ndarray]:
    if f.grid == grid:
        return f.lower, f.upper
    return np.interp(grid.levels, f.levels, f.lower), np.interp(grid.levels, f.levels, f.upper)


def _align(a: FuzzyNumber, b: FuzzyNumber):
    grid = a.grid.union(b.grid)
    return grid, _resample(a, grid), _resample(b, grid)


def add(a: FuzzyNumber, b: FuzzyNumber) -> FuzzyNumber:
    grid, (al, au), (bl, bu) = _align(a, b)
    return FuzzyNumber._trusted(grid, al + bl, au + bu)


def scalar_mul(lam: float, a: FuzzyNumber) -> FuzzyNumber:
    lam = float(lam)
    if lam == 0.0:
        return zero(a.grid)
    if not math.isfinite(lam):
        raise FuzzyError(f"scalar must be finite, got {lam}")
    if lam > 0:
        return FuzzyNumber._trusted(a.grid, lam * a.lower, lam * a.upper)
    return FuzzyNumber._trusted(a.grid, lam * a.upper, lam * a.lower)


def standard_diff(a: FuzzyNumber, b: FuzzyNumber) -> FuzzyNumber:
    """Interval difference ``[aL - bU, aU - bL]``; always exists."""
    grid, (al, au), (bl, bu) = _align(a, b)
    return FuzzyNumber(grid, al - bu, au - bl)


def dF(a: FuzzyNumber, b: FuzzyNumber) -> float:
    """Supremum over levels of the Hausdorff distance between cuts."""
    _, (al, au), (bl, bu) = _align(a, b)
    return float(max(np.max(np.abs(al - bl)), np.max(np.abs(au - bu))))


# differences with existence certificates ------------------------------------

@dataclass(frozen=True)
class ExistenceCertificate:
    operator: str
    verdict: str
    witness: FuzzyNumber | None = None
    violation: Violation | None = None
    case: str | None = None  # gH only: "i", "ii" or "both"
    candidates: dict = field(default_factory=dict, repr=False)
    case_violations: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if (self.verdict == EXISTS) != (self.witness is not None and self.violation is None):
            raise ValueError("verdict 'exists' requires a witness and no violation")

    @property
    def exists(self) -> bool:
        return self.verdict == EXISTS

    def to_dict(self) -> dict:
        out = {"operator": self.operator, "verdict": self.verdict,
               "witness": self.witness.to_dict() if self.witness is not None else None,
               "violation": self.violation.to_dict() if self.violation is not None else None}
        if self.operator == GH_DIFF:
            out["case"] = self.case
            out["case_violations"] = {k: (v.to_dict() if v else None)
                                      for k, v in self.case_violations.items()}
        out["candidates"] = {k: {"lower": [float(x) for x in lo], "upper": [float(x) for x in up]}
                             for k, (lo, up) in self.candidates.items()}
        return out


def h_diff(a: FuzzyNumber, b: FuzzyNumber) -> ExistenceCertificate:
    """Hukuhara difference: the ``c`` with ``c + b = a``, when it exists.

    The candidate ``[aL - bL, aU - bU]`` is never repaired; if it is not a
    valid profile the first violated condition is reported.
    """
    grid, (al, au), (bl, bu) = _align(a, b)
    cl, cu = al - bl, au - bu
    cands = {"h": (cl, cu)}
    bad = profile_violation(grid.levels, cl, cu)
    if bad is not None:
        return ExistenceCertificate(H_DIFF, NOT_EXISTS, violation=bad, candidates=cands)
    resid = np.maximum(np.abs(cl + bl - al), np.abs(cu + bu - au))
    if resid.max() > EPS_VALID:
        k = int(np.argmax(resid))
        return ExistenceCertificate(H_DIFF, NOT_EXISTS, candidates=cands,
                                    violation=Violation(float(grid.levels[k]), "reconstruction", float(resid[k])))
    return ExistenceCertificate(H_DIFF, EXISTS, witness=FuzzyNumber(grid, cl, cu), candidates=cands)


def gh_diff(a: FuzzyNumber, b: FuzzyNumber) -> ExistenceCertificate:
    """Generalized Hukuhara difference with per-case existence analysis.

    Case (i) takes ``[aL - bL, aU - bU]`` as the cut, case (ii) the swapped
    pair ``[aU - bU, aL - bL]``. The difference exists when one of the two
    is a valid profile at every level; the witness is then the level-wise
    ``[min, max]`` of the two endpoint differences.
    """
    grid, (al, au), (bl, bu) = _align(a, b)
    dl, du = al - bl, au - bu
    cands = {"case_i": (dl, du), "case_ii": (du, dl)}
    vi = profile_violation(grid.levels, dl, du)
    vii = profile_violation(grid.levels, du, dl)
    viols = {"case_i": vi, "case_ii": vii}
    if vi is None or vii is None:
        case = "both" if vi is None and vii is None else ("i" if vi is None else "ii")
        witness = FuzzyNumber(grid, np.minimum(dl, du), np.maximum(dl, du))
        return ExistenceCertificate(GH_DIFF, EXISTS, witness=witness, case=case,
                                    candidates=cands, case_violations=viols)
    # report the case that held longest: neither can hold beyond its level
    name, v = max(viols.items(), key=lambda kv: kv[1].level)
    summary = Violation(v.level, name, v.magnitude)
    return ExistenceCertificate(GH_DIFF, NOT_EXISTS, violation=summary,
                                candidates=cands, case_violations=viols)
