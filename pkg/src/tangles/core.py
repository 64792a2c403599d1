"""Curves assembled from rigid quarter-circle arcs.

A chain of unit tangent vectors ``V_0..V_n`` with consecutive pairs
orthogonal determines an n-link space curve in closed form: link ``i``
covers the parameter interval ``[i*pi/2, (i+1)*pi/2]`` and evaluates as
``V_i*sin(t - t_i) - V_{i+1}*cos(t - t_i) + T_i`` with translations
accumulated by the recurrence ``T_{i+1} = V_i + V_{i+2} + T_i``.  The
resulting curve is unit speed, has curvature magnitude 1 and zero torsion
away from the knots, and is C1 across them.

All 3-vectors are plain float ndarrays of shape ``(3,)``; vector
sequences are ``(m, 3)`` arrays.
"""

from __future__ import annotations

import math
from dataclasses import InitVar, dataclass, field

import numpy as np

from .errors import ChainError, ParameterDomainError

HALF_PI = math.pi / 2.0

#: Seed tangents of the canonical first link (the arc from (1,0,0) to (0,1,0)).
CANONICAL_V0 = np.array([0.0, 1.0, 0.0])
CANONICAL_V1 = np.array([-1.0, 0.0, 0.0])

#: Construction-time tolerance for chain invariants.  Looser tolerances for
#: numerically drifted chains (e.g. ODE output) are explicit parameters.
DEFAULT_CHAIN_TOL = 1e-9

_DOMAIN_SLACK = 1e-9
_KNOT_EPS = 1e-12


def wrap_angle(theta):
    """Normalize angles to the interval (-pi, pi]."""
    theta = np.asarray(theta, dtype=float)
    wrapped = np.mod(theta + np.pi, 2.0 * np.pi) - np.pi
    wrapped = np.where(wrapped == -np.pi, np.pi, wrapped)
    if wrapped.ndim == 0:
        return float(wrapped)
    return wrapped


def knot_grid(n: int) -> np.ndarray:
    """Return the knot parameters ``t_i = i*pi/2`` for ``i = 0..n``."""
    if n < 1:
        raise ValueError(f"link count must be >= 1, got {n}")
    return np.arange(n + 1) * HALF_PI


def _as_vec3(v, name: str) -> np.ndarray:
    arr = np.asarray(v, dtype=float)
    if arr.shape != (3,):
        raise ValueError(f"{name} must be a 3-vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} has non-finite components")
    return arr


def canonical_arc(t: float) -> np.ndarray:
    """Evaluate the canonical quarter circle ``(cos t, sin t, 0)``.

    The parameter must lie in ``[0, pi/2]``; every link of every tangle
    is a rotated and translated copy of this arc.
    """
    if not (-_DOMAIN_SLACK <= t <= HALF_PI + _DOMAIN_SLACK):
        raise ParameterDomainError(f"arc parameter {t} outside [0, pi/2]")
    return np.array([math.cos(t), math.sin(t), 0.0])


@dataclass
class TangentChain:
    """Ordered unit tangents ``V_0..V_n`` with consecutive pairs orthogonal.

    ``tol`` bounds both ``| ||V_i|| - 1 |`` and ``|<V_i, V_{i+1}>|`` at
    construction time; pass ``tol=None`` to skip validation (used when
    wrapping numerically drifted data for inspection).
    """

    vectors: np.ndarray
    tol: InitVar[float | None] = DEFAULT_CHAIN_TOL

    def __post_init__(self, tol):
        V = np.asarray(self.vectors, dtype=float)
        if V.ndim != 2 or V.shape[1] != 3:
            raise ChainError(f"expected (n+1, 3) tangent array, got shape {V.shape}")
        if V.shape[0] < 2:
            raise ChainError("a chain needs at least two tangent vectors")
        if not np.all(np.isfinite(V)):
            raise ChainError("chain contains non-finite components")
        if tol is not None:
            norm_dev = float(np.max(np.abs(np.linalg.norm(V, axis=1) - 1.0)))
            orth_dev = float(np.max(np.abs(np.einsum("ij,ij->i", V[:-1], V[1:]))))
            if norm_dev > tol or orth_dev > tol:
                raise ChainError(
                    f"chain invariants violated: norm deviation {norm_dev:.3e}, "
                    f"orthogonality deviation {orth_dev:.3e} (tol {tol:.1e})"
                )
        self.vectors = V

    @property
    def n(self) -> int:
        """Number of links (one fewer than the number of tangents)."""
        return self.vectors.shape[0] - 1


def compute_translations(chain: TangentChain, base_translation=None) -> np.ndarray:
    """Accumulate the per-link translations ``T_0..T_{n-1}``.

    Uses the joint-continuity recurrence ``T_{i+1} = V_i + V_{i+2} + T_i``
    starting from ``T_0 = base_translation`` (origin by default).
    """
    V = chain.vectors
    n = chain.n
    T = np.empty((n, 3))
    T[0] = np.zeros(3) if base_translation is None else _as_vec3(base_translation, "base_translation")
    for i in range(n - 1):
        T[i + 1] = V[i] + V[i + 2] + T[i]
    return T


@dataclass
class TangleCurve:
    """A tangent chain together with its evaluable space-curve realization.

    ``translations`` is derived from the chain when omitted; passing it
    explicitly allows representing (and detecting) broken joints.
    """

    chain: TangentChain
    base_translation: np.ndarray = field(default_factory=lambda: np.zeros(3))
    translations: np.ndarray | None = None

    def __post_init__(self):
        self.base_translation = _as_vec3(self.base_translation, "base_translation")
        if self.translations is None:
            self.translations = compute_translations(self.chain, self.base_translation)
        else:
            T = np.asarray(self.translations, dtype=float)
            if T.shape != (self.chain.n, 3):
                raise ValueError(
                    f"translations must have shape ({self.chain.n}, 3), got {T.shape}"
                )
            self.translations = T

    @property
    def n(self) -> int:
        return self.chain.n

    @property
    def t_max(self) -> float:
        """Upper end of the global parameter interval ``[0, n*pi/2]``."""
        return self.chain.n * HALF_PI


def link_eval(V_i, V_next, T_i, t_local: float) -> np.ndarray:
    """Evaluate one link at local parameter ``t_local`` in ``[0, pi/2]``.

    Closed form ``V_i*sin(t_local) - V_next*cos(t_local) + T_i``.
    """
    if not (-_DOMAIN_SLACK <= t_local <= HALF_PI + _DOMAIN_SLACK):
        raise ParameterDomainError(f"link parameter {t_local} outside [0, pi/2]")
    V_i = np.asarray(V_i, dtype=float)
    V_next = np.asarray(V_next, dtype=float)
    T_i = np.asarray(T_i, dtype=float)
    return V_i * math.sin(t_local) - V_next * math.cos(t_local) + T_i


def _locate(curve: TangleCurve, t: float) -> tuple[int, float]:
    """Map a global parameter to (link index, local parameter)."""
    t_max = curve.t_max
    if not (-_DOMAIN_SLACK <= t <= t_max + _DOMAIN_SLACK):
        raise ParameterDomainError(f"parameter {t} outside [0, {t_max}]")
    i = min(curve.n - 1, max(0, int(t // HALF_PI)))
    t_local = t - i * HALF_PI
    return i, min(max(t_local, 0.0), HALF_PI)


def tangle_eval(curve: TangleCurve, t: float) -> np.ndarray:
    """Evaluate the curve at global parameter ``t`` in ``[0, n*pi/2]``.

    Interior knots belong to the right-hand link; C0 continuity makes the
    choice immaterial.
    """
    i, t_local = _locate(curve, t)
    V = curve.chain.vectors
    return link_eval(V[i], V[i + 1], curve.translations[i], t_local)


def tangle_tangent(curve: TangleCurve, t: float) -> np.ndarray:
    """First derivative ``V_i*cos(t-t_i) + V_{i+1}*sin(t-t_i)``; unit norm.

    At the knot ``t_i`` this returns ``V_i`` exactly.
    """
    i, t_local = _locate(curve, t)
    V = curve.chain.vectors
    return V[i] * math.cos(t_local) + V[i + 1] * math.sin(t_local)


def _accel(curve: TangleCurve, t: float) -> tuple[int, float, np.ndarray]:
    """Second derivative at a strictly interior parameter."""
    i, t_local = _locate(curve, t)
    nearest_knot = round(t / HALF_PI) * HALF_PI
    if abs(t - nearest_knot) < _KNOT_EPS:
        raise ParameterDomainError(
            f"parameter {t} lies on a knot; second derivatives may not exist there"
        )
    V = curve.chain.vectors
    return i, t_local, -V[i] * math.sin(t_local) + V[i + 1] * math.cos(t_local)


def curvature(curve: TangleCurve, t: float) -> float:
    """Curvature magnitude at a non-knot parameter (always 1 for valid chains).

    Computed as the norm of the analytic second derivative of the
    unit-speed curve, not returned as a constant.
    """
    _, _, acc = _accel(curve, t)
    return float(np.linalg.norm(acc))


def binormal(curve: TangleCurve, t: float) -> np.ndarray:
    """Unit binormal at a non-knot parameter; constant ``V_i x V_{i+1}`` per link."""
    i, t_local, acc = _accel(curve, t)
    V = curve.chain.vectors
    vel = V[i] * math.cos(t_local) + V[i + 1] * math.sin(t_local)
    b = np.cross(vel, acc)
    return b / np.linalg.norm(b)


def torsion(curve: TangleCurve, t: float) -> float:
    """Torsion at a non-knot parameter (zero: each link is planar).

    Computed from the Frenet formula ``<s' x s'', s'''> / ||s' x s''||^2``.
    """
    i, t_local, acc = _accel(curve, t)
    V = curve.chain.vectors
    vel = V[i] * math.cos(t_local) + V[i + 1] * math.sin(t_local)
    jerk = -V[i] * math.cos(t_local) - V[i + 1] * math.sin(t_local)
    cross = np.cross(vel, acc)
    return float(np.dot(cross, jerk) / np.dot(cross, cross))


def sample_polyline(curve: TangleCurve, samples_per_link: int) -> tuple[np.ndarray, np.ndarray]:
    """Uniformly sample every link, sharing joint samples between links.

    ``samples_per_link`` counts samples per link including both endpoints
    (so it must be >= 2); the total point count is
    ``n*(samples_per_link - 1) + 1``.  Returns ``(parameters, points)``.
    """
    if samples_per_link < 2:
        raise ValueError(f"samples_per_link must be >= 2, got {samples_per_link}")
    n = curve.n
    m = samples_per_link
    V = curve.chain.vectors
    local = np.linspace(0.0, HALF_PI, m)
    ts = np.empty(n * (m - 1) + 1)
    points = np.empty((n * (m - 1) + 1, 3))
    for i in range(n):
        sl = slice(i * (m - 1), i * (m - 1) + m)
        ts[sl] = i * HALF_PI + local
        points[sl] = (
            np.outer(np.sin(local), V[i])
            - np.outer(np.cos(local), V[i + 1])
            + curve.translations[i]
        )
    return ts, points


def rotation_from_tangents(V_i, V_next) -> np.ndarray:
    """Rotation carrying the canonical arc onto the link with the given tangents.

    The matrix has columns ``(-V_next, V_i, V_i x V_next)``, so it maps the
    canonical end tangents (0,1,0) and (-1,0,0) onto ``V_i`` and ``V_next``.
    """
    V_i = _as_vec3(V_i, "V_i")
    V_next = _as_vec3(V_next, "V_next")
    if (
        abs(np.linalg.norm(V_i) - 1.0) > DEFAULT_CHAIN_TOL * 10
        or abs(np.linalg.norm(V_next) - 1.0) > DEFAULT_CHAIN_TOL * 10
        or abs(np.dot(V_i, V_next)) > DEFAULT_CHAIN_TOL * 10
    ):
        raise ChainError("tangent pair must be unit length and orthogonal")
    return np.column_stack([-V_next, V_i, np.cross(V_i, V_next)])


def angles_to_chain(angles, V_0=CANONICAL_V0, V_1=CANONICAL_V1) -> TangentChain:
    """Build a chain from joint angles by successive axis-angle rotations.

    ``V_{i+2}`` is ``V_i`` rotated by ``angles[i]`` about the axis
    ``V_{i+1}`` (right-handed); with the axis orthogonal to ``V_i`` the
    Rodrigues formula reduces to
    ``V_{i+2} = cos(angle)*V_i + sin(angle)*(V_{i+1} x V_i)``.
    The zero angle reproduces ``V_i``.
    """
    angles = np.atleast_1d(np.asarray(angles, dtype=float))
    if angles.ndim != 1:
        raise ValueError(f"angles must be one-dimensional, got shape {angles.shape}")
    V_0 = _as_vec3(V_0, "V_0")
    V_1 = _as_vec3(V_1, "V_1")
    if (
        abs(np.linalg.norm(V_0) - 1.0) > DEFAULT_CHAIN_TOL
        or abs(np.linalg.norm(V_1) - 1.0) > DEFAULT_CHAIN_TOL
        or abs(np.dot(V_0, V_1)) > DEFAULT_CHAIN_TOL
    ):
        raise ChainError("seed pair must be unit length and orthogonal")
    m = angles.shape[0]
    V = np.empty((m + 2, 3))
    V[0], V[1] = V_0, V_1
    for i, theta in enumerate(angles):
        V[i + 2] = math.cos(theta) * V[i] + math.sin(theta) * np.cross(V[i + 1], V[i])
    return TangentChain(V)


def chain_to_angles(chain: TangentChain) -> np.ndarray:
    """Recover the joint angles of a chain; inverse of :func:`angles_to_chain`.

    ``angles[i]`` is the signed rotation angle about ``V_{i+1}`` carrying
    ``V_i`` to ``V_{i+2}``, in ``(-pi, pi]``.
    """
    V = chain.vectors
    if chain.n < 2:
        raise ChainError("need at least two links to define joint angles")
    axes_cross = np.cross(V[1:-1], V[:-2])
    sin_part = np.einsum("ij,ij->i", V[2:], axes_cross)
    cos_part = np.einsum("ij,ij->i", V[2:], V[:-2])
    return wrap_angle(np.arctan2(sin_part, cos_part))


@dataclass
class ValidationReport:
    """Deviations of a chain (and its curve) from the exact tangle model."""

    max_norm_deviation: float
    max_orthogonality_deviation_degrees: float
    c0_residual: float
    c1_residual: float
    closure_residual: float = 0.0


def validate_chain(chain: TangentChain, closed: bool = False) -> ValidationReport:
    """Measure all model residuals of a chain; never raises.

    For closed chains the orthogonality sweep includes the wrap-around
    pair ``(V_{n-1}, V_0)`` and ``closure_residual`` is the norm of
    ``sum(V_0..V_{n-1})``.
    """
    V = chain.vectors
    n = chain.n
    norm_dev = float(np.max(np.abs(np.linalg.norm(V, axis=1) - 1.0)))

    pairs = [(V[i], V[i + 1]) for i in range(n)]
    if closed:
        pairs.append((V[n - 1], V[0]))
    orth_dev = 0.0
    for a, b in pairs:
        denom = np.linalg.norm(a) * np.linalg.norm(b)
        cosang = 0.0 if denom == 0 else np.clip(np.dot(a, b) / denom, -1.0, 1.0)
        orth_dev = max(orth_dev, abs(90.0 - math.degrees(math.acos(cosang))))

    T = compute_translations(chain)
    c0 = c1 = 0.0
    for i in range(1, n):
        left = link_eval(V[i - 1], V[i], T[i - 1], HALF_PI)
        right = link_eval(V[i], V[i + 1], T[i], 0.0)
        c0 = max(c0, float(np.linalg.norm(left - right)))
        dleft = V[i - 1] * math.cos(HALF_PI) + V[i] * math.sin(HALF_PI)
        c1 = max(c1, float(np.linalg.norm(dleft - V[i])))

    closure = float(np.linalg.norm(V[:n].sum(axis=0))) if closed else 0.0
    return ValidationReport(norm_dev, orth_dev, c0, c1, closure)


@dataclass
class SplineMembershipReport:
    """Continuity residuals and extracted piecewise trigonometric coefficients."""

    is_member: bool
    c0_residual: float
    c1_residual: float
    coefficient_residual: float
    constant_coeffs: np.ndarray
    cosine_coeffs: np.ndarray
    sine_coeffs: np.ndarray


def trig_spline_membership(curve: TangleCurve, tol: float = 1e-9) -> SplineMembershipReport:
    """Check that a curve is a C1 piecewise span{1, cos, sin} space curve.

    Per link, coefficients of ``a + b*cos(t-t_i) + c*sin(t-t_i)`` are
    extracted by solving a 3x3 collocation system from evaluated points,
    then checked against the tangle form ``a = T_i``, ``b = -V_{i+1}``,
    ``c = V_i``; C0/C1 residuals are measured at all interior knots from
    the extracted pieces.
    """
    n = curve.n
    V = curve.chain.vectors
    T = curve.translations

    taus = np.array([0.0, math.pi / 4.0, HALF_PI])
    basis = np.column_stack([np.ones(3), np.cos(taus), np.sin(taus)])
    a = np.empty((n, 3))
    b = np.empty((n, 3))
    c = np.empty((n, 3))
    for i in range(n):
        samples = np.array([link_eval(V[i], V[i + 1], T[i], tau) for tau in taus])
        coeffs = np.linalg.solve(basis, samples)
        a[i], b[i], c[i] = coeffs

    c0 = c1 = 0.0
    for i in range(1, n):
        # link i-1 at local pi/2 versus link i at local 0
        left = a[i - 1] + c[i - 1]
        right = a[i] + b[i]
        c0 = max(c0, float(np.linalg.norm(left - right)))
        c1 = max(c1, float(np.linalg.norm(-b[i - 1] - c[i])))

    coeff = 0.0
    for i in range(n):
        coeff = max(
            coeff,
            float(np.linalg.norm(a[i] - T[i])),
            float(np.linalg.norm(b[i] + V[i + 1])),
            float(np.linalg.norm(c[i] - V[i])),
        )

    is_member = c0 <= tol and c1 <= tol and coeff <= tol
    return SplineMembershipReport(is_member, c0, c1, coeff, a, b, c)
