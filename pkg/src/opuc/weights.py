"""Weight families on the circle, singular quadrature, and BMO profiling.

Families (spec grammar, products allowed with ``*``, optional ``@norm``):

* ``const``            constant weight
* ``trig:beta=b``      1 + b*cos(theta), |b| < 1
* ``bs:a=a``           Poisson-type kernel (1-a^2) / (2pi |1 - a e^{i theta}|^2)
* ``logsing:c=c``      1 + c*log(pi/|theta|)   (unbounded, bounded inverse)
* ``invlog:c=c``       1 / (1 + c*log(pi/|theta|))   (bounded by 1)

Integrals of singular families use composite Gauss-Legendre panels graded
dyadically toward each declared singularity; panel widths are additionally
capped so that oscillatory moments e^{-ik theta} stay resolved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import roots_legendre

from .grid import CircleGrid, GridFunction

__all__ = [
    "WeightParseError",
    "SingularEvaluationError",
    "Weight",
    "WeightProfile",
    "P0Suggestion",
    "build_weight",
    "graded_rule",
    "integrate",
    "fourier_moments",
    "profile",
    "arc_oscillation_sup",
    "suggest_p0",
]

PI = math.pi
TWO_PI = 2.0 * math.pi

_FAMILIES = {"const": None, "trig": "beta", "bs": "a", "logsing": "c", "invlog": "c"}


class WeightParseError(ValueError):
    """The weight spec string does not conform to the grammar."""


class SingularEvaluationError(ValueError):
    """A weight was evaluated at one of its declared singularities."""


@dataclass(frozen=True)
class _Factor:
    kind: str
    param: float = 0.0

    def evaluate(self, theta: np.ndarray) -> np.ndarray:
        if self.kind == "const":
            return np.ones_like(theta)
        if self.kind == "trig":
            return 1.0 + self.param * np.cos(theta)
        if self.kind == "bs":
            a = self.param
            return (1.0 - a * a) / (TWO_PI * (1.0 - 2.0 * a * np.cos(theta) + a * a))
        if self.kind == "logsing":
            return 1.0 + self.param * np.log(PI / np.abs(theta))
        if self.kind == "invlog":
            return 1.0 / (1.0 + self.param * np.log(PI / np.abs(theta)))
        raise ValueError(f"unknown factor kind {self.kind!r}")

    @property
    def singularities(self) -> tuple[float, ...]:
        return (0.0,) if self.kind in ("logsing", "invlog") else ()


@dataclass(frozen=True)
class Weight:
    """An evaluable weight: product of family factors times a positive scale."""

    text: str
    factors: tuple[_Factor, ...]
    scale: float = 1.0
    normalized: bool = False

    @property
    def singularities(self) -> tuple[float, ...]:
        out: set[float] = set()
        for f in self.factors:
            out.update(f.singularities)
        return tuple(sorted(out))

    @property
    def is_singular(self) -> bool:
        return bool(self.singularities)

    def __call__(self, theta) -> np.ndarray:
        th = np.asarray(theta, dtype=float)
        for s in self.singularities:
            if np.any(th == s):
                raise SingularEvaluationError(
                    f"evaluation at declared singularity theta = {s}"
                )
        out = np.full_like(th, self.scale, dtype=float)
        for f in self.factors:
            out = out * f.evaluate(th)
        return out

    def sample(self, grid: CircleGrid) -> GridFunction:
        return GridFunction(grid, self(grid.nodes).astype(complex))

    def with_scale(self, multiplier: float) -> "Weight":
        if multiplier <= 0:
            raise ValueError("scale multiplier must be positive")
        return Weight(
            text=self.text,
            factors=self.factors,
            scale=self.scale * multiplier,
            normalized=False,
        )


def _parse_factor(token: str) -> _Factor:
    token = token.strip()
    if token == "const":
        return _Factor("const")
    if ":" not in token:
        raise WeightParseError(f"bad factor {token!r}: expected name:param=value")
    name, _, rest = token.partition(":")
    name = name.strip()
    if name not in _FAMILIES or name == "const":
        raise WeightParseError(f"unknown family {name!r}")
    key, _, val = rest.partition("=")
    if key.strip() != _FAMILIES[name]:
        raise WeightParseError(
            f"family {name!r} takes parameter {_FAMILIES[name]!r}, got {key.strip()!r}"
        )
    try:
        param = float(val)
    except ValueError as exc:
        raise WeightParseError(f"bad parameter value {val!r}") from exc
    if name == "trig" and not abs(param) < 1:
        raise WeightParseError(f"trig requires |beta| < 1, got {param}")
    if name == "bs" and not abs(param) < 1:
        raise WeightParseError(f"bs requires |a| < 1, got {param}")
    if name in ("logsing", "invlog") and not param > 0:
        raise WeightParseError(f"{name} requires c > 0, got {param}")
    return _Factor(name, param)


def build_weight(spec_text: str, normalize: bool | None = None) -> Weight:
    """Parse a weight spec string, optionally normalizing to unit L^1 mass.

    Normalization is requested by the ``@norm`` suffix or the ``normalize``
    flag; either one wins. The normalizing scale is found by the graded
    quadrature to relative accuracy 1e-10 and checked by re-integration.
    """
    text = spec_text.strip()
    if not text:
        raise WeightParseError("empty weight spec")
    want_norm = False
    if text.endswith("@norm"):
        want_norm = True
        text = text[: -len("@norm")].strip()
    if normalize is not None:
        want_norm = want_norm or normalize
    if "@" in text:
        raise WeightParseError(f"unexpected '@' in {spec_text!r}")
    factors = tuple(_parse_factor(tok) for tok in text.split("*"))
    w = Weight(text=spec_text.strip(), factors=factors, scale=1.0)
    if not want_norm:
        return w
    total = integrate(w, w.singularities)
    if not (np.isfinite(total) and total > 0):
        raise WeightParseError(f"weight {spec_text!r} is not normalizable")
    wn = Weight(text=spec_text.strip(), factors=factors, scale=1.0 / total, normalized=True)
    check = integrate(wn, wn.singularities)
    if abs(check - 1.0) > 1e-10:
        raise WeightParseError(
            f"normalization failed for {spec_text!r}: |w|_1 = {check!r}"
        )
    return wn


# ---------------------------------------------------------------------------
# graded Gauss-Legendre quadrature
# ---------------------------------------------------------------------------


@lru_cache(maxsize=8)
def _gl_nodes(order: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = roots_legendre(order)
    return x, w


def _grade_interval(a: float, b: float, sing_left: bool, sing_right: bool, depth: int):
    """Panel edges on [a, b], dyadically refined toward singular endpoints."""
    if sing_left and sing_right:
        mid = 0.5 * (a + b)
        return _grade_interval(a, mid, True, False, depth) + _grade_interval(
            mid, b, False, True, depth
        )
    if sing_right:
        rev = _grade_interval(-b, -a, True, False, depth)
        return [(-y, -x) for (x, y) in reversed(rev)]
    if sing_left:
        length = b - a
        edges = [a + length * 2.0 ** (-i) for i in range(depth, -1, -1)]
        panels = [(a, edges[0])]
        panels += [(edges[i], edges[i + 1]) for i in range(len(edges) - 1)]
        return panels
    return [(a, b)]


def graded_rule(
    singularities: tuple[float, ...] = (),
    max_freq: int = 0,
    depth: int = 48,
    order: int = 24,
) -> tuple[np.ndarray, np.ndarray]:
    """Quadrature nodes/weights on (-pi, pi) resolving the given features.

    Dyadic grading (``depth`` levels) toward each singularity keeps log-type
    integrands accurate to ~1e-12 relative; the panel-width cap keeps
    ``e^{-ik theta}`` with ``|k| <= max_freq`` resolved by ``order``-point
    Gauss-Legendre panels.
    """
    breakpoints = sorted({-PI, PI, *singularities})
    cap = min(PI / 4.0, 10.0 / max(1, max_freq))
    panels: list[tuple[float, float]] = []
    sing = set(singularities)
    for a, b in zip(breakpoints[:-1], breakpoints[1:]):
        panels.extend(_grade_interval(a, b, a in sing, b in sing, depth))
    x, w = _gl_nodes(order)
    nodes, weights = [], []
    for a, b in panels:
        width = b - a
        parts = max(1, int(math.ceil(width / cap)))
        sub = np.linspace(a, b, parts + 1)
        for lo, hi in zip(sub[:-1], sub[1:]):
            half = 0.5 * (hi - lo)
            nodes.append(0.5 * (lo + hi) + half * x)
            weights.append(half * w)
    return np.concatenate(nodes), np.concatenate(weights)


def integrate(
    func,
    singularities: tuple[float, ...] = (),
    max_freq: int = 0,
    depth: int = 48,
    order: int = 24,
) -> float:
    """Graded quadrature of a scalar function over (-pi, pi)."""
    nodes, wts = graded_rule(tuple(singularities), max_freq, depth, order)
    vals = np.asarray(func(nodes))
    return float(np.dot(wts, vals.real)) if np.isrealobj(vals) else complex(np.dot(wts, vals))


def fourier_moments(weight: Weight, kmax: int, depth: int = 48, order: int = 24) -> np.ndarray:
    """Moments ``c_k = int e^{-ik theta} w(theta) dtheta`` for k = 0..kmax."""
    if kmax < 0:
        raise ValueError("kmax must be >= 0")
    nodes, wts = graded_rule(weight.singularities, max_freq=kmax, depth=depth, order=order)
    fw = weight(nodes) * wts
    out = np.zeros(kmax + 1, dtype=complex)
    ks = np.arange(kmax + 1)
    chunk = max(64, 2_000_000 // (kmax + 1))
    for lo in range(0, len(nodes), chunk):
        th = nodes[lo : lo + chunk]
        out += np.exp(-1j * np.outer(ks, th)) @ fw[lo : lo + chunk]
    return out


# ---------------------------------------------------------------------------
# BMO / A2 profiling
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WeightProfile:
    """Measured characteristics of a weight at a given dyadic resolution."""

    t: float
    s: float
    l1_w: float
    l1_winv: float
    szego_integral: float
    a2_char: float
    balance_ok: bool
    resolution: int


def _cell_means(weight_values, edges: np.ndarray, glx, glw) -> np.ndarray:
    # 4-point Gauss-Legendre per cell; interior nodes keep log-singular
    # integrands finite even when a singularity sits on a cell edge.
    lo, hi = edges[:-1], edges[1:]
    half = 0.5 * (hi - lo)
    nodes = 0.5 * (lo + hi)[:, None] + half[:, None] * glx[None, :]
    vals = weight_values(nodes)
    return vals @ glw / 2.0  # mean over the cell


def arc_oscillation_sup(cell_means: np.ndarray, max_depth: int) -> float:
    """Sup of L^1 mean oscillation over dyadic + half-shifted dyadic arcs.

    ``cell_means`` is a length-2^m vector of per-cell averages; arcs at
    depth j are unions of consecutive cells (2^{m-j} each). The arc
    integral of |w - mean| is approximated at cell granularity.
    """
    m = len(cell_means)
    if m & (m - 1):
        raise ValueError("cell count must be a power of two")
    best = 0.0
    for j in range(0, max_depth + 1):
        arcs = 1 << j
        per = m // arcs
        if per < 1:
            break
        for shifted in (False, True):
            data = np.roll(cell_means, per // 2) if shifted else cell_means
            view = data.reshape(arcs, per)
            means = view.mean(axis=1)
            osc = np.abs(view - means[:, None]).mean(axis=1)
            best = max(best, float(osc.max()))
    return best


def profile(
    weight: Weight,
    resolution: int = 10,
    oversample: int = 4,
    balance_factor: float = 50.0,
) -> WeightProfile:
    """Estimate t = |w|_BMO, s = |w^-1|_BMO, norms, Szego integral, A2.

    The BMO norm uses L^1 mean oscillation over dyadic and half-shifted
    dyadic arcs of length >= 2pi*2^-resolution, evaluated from per-cell
    averages at 2^(resolution+oversample) cells.
    """
    if resolution < 3:
        raise ValueError("resolution must be >= 3")
    m = 1 << (resolution + oversample)
    edges = np.linspace(-PI, PI, m + 1)
    glx, glw = _gl_nodes(4)
    w_cells = _cell_means(weight, edges, glx, glw)
    winv_cells = _cell_means(lambda th: 1.0 / weight(th), edges, glx, glw)
    if not (np.all(np.isfinite(w_cells)) and np.all(np.isfinite(winv_cells))):
        raise ArithmeticError("quadrature failure near singularities")

    t = arc_oscillation_sup(w_cells, resolution)
    s = arc_oscillation_sup(winv_cells, resolution)

    a2 = 0.0
    for j in range(0, resolution + 1):
        arcs = 1 << j
        per = m // arcs
        for shifted in (False, True):
            wv = np.roll(w_cells, per // 2) if shifted else w_cells
            iv = np.roll(winv_cells, per // 2) if shifted else winv_cells
            prod = wv.reshape(arcs, per).mean(axis=1) * iv.reshape(arcs, per).mean(axis=1)
            a2 = max(a2, float(prod.max()))

    sing = weight.singularities
    l1_w = integrate(weight, sing)
    l1_winv = integrate(lambda th: 1.0 / weight(th), sing)
    szego = integrate(lambda th: np.log(weight(th)), sing)
    balance_ok = l1_winv <= balance_factor * (1.0 + (1.0 + t) * s)
    return WeightProfile(
        t=t,
        s=s,
        l1_w=l1_w,
        l1_winv=l1_winv,
        szego_integral=szego,
        a2_char=a2,
        balance_ok=balance_ok,
        resolution=resolution,
    )


# ---------------------------------------------------------------------------
# exponent heuristic
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class P0Suggestion:
    """Heuristic Lebesgue exponent; unknown absolute constants set to 1."""

    value: float
    regime: str
    branch: str
    heuristic: bool = True


def suggest_p0(t: float, s: float, regime: str = "general") -> P0Suggestion:
    """Exponent heuristic from the convergence theory, constants set to 1.

    Branches split at ``x = e`` for the regime's size parameter
    (x = s*t, t, or s). Degenerate outputs are clamped into [2.05, 64];
    values from the large-parameter branch (always > 2) are returned as-is.
    """
    if regime == "general":
        if t <= 0 or s <= 0:
            raise ValueError("general regime needs t, s > 0")
        x = s * t
    elif regime == "w_ge_1":
        if t <= 0:
            raise ValueError("w_ge_1 regime needs t > 0")
        x = t
    elif regime == "w_le_1":
        if s <= 0:
            raise ValueError("w_le_1 regime needs s > 0")
        x = s
    else:
        raise ValueError(f"unknown regime {regime!r}")

    if x > math.e:
        if regime == "general":
            raw = 2.0 + 1.0 / (x * math.log(x) ** 2)
        else:
            raw = 2.0 + 1.0 / (x * math.log(x))
        branch = "large"
    else:
        raw = x ** (-0.25) if regime == "general" else x ** (-0.5)
        branch = "small"
    value = min(raw, 64.0)
    if value < 2.0:
        value = 2.05
    return P0Suggestion(value=value, regime=regime, branch=branch)
