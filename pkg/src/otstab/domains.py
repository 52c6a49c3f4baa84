"""Bounded domain descriptors with closed-form boundary geometry.

Euclidean domains (balls, boxes, annulus sectors) live in R^d; the cap
domain lives on the embedded unit sphere; ``FullManifold`` marks the whole
sphere or torus (no boundary).  Every descriptor exposes a signed distance
(negative inside, exact magnitude on both sides), which drives rejection
sampling, John-curve certification and geodesic crossing detection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, DomainError


def _as_points(x: np.ndarray) -> tuple[np.ndarray, bool]:
    pts = np.asarray(x, dtype=float)
    single = pts.ndim == 1
    return np.atleast_2d(pts), single


def _maybe_scalar(values: np.ndarray, single: bool):
    return float(values[0]) if single else values


def unit_ball_volume(d: int) -> float:
    """Lebesgue volume of the d-dimensional unit ball."""
    return math.pi ** (d / 2.0) / math.gamma(d / 2.0 + 1.0)


def unit_sphere_area(d: int) -> float:
    """Surface area of S^{d-1} in R^d (length 2*pi for d=2)."""
    return 2.0 * math.pi ** (d / 2.0) / math.gamma(d / 2.0)


@dataclass(frozen=True, eq=False)
class Ball:
    """Closed Euclidean ball ``{|x - center| <= radius}``."""

    center: np.ndarray
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", np.asarray(self.center, dtype=float))
        if self.radius <= 0:
            raise DomainError(f"ball radius must be positive, got {self.radius}")

    @property
    def dim(self) -> int:
        return self.center.shape[0]

    def signed_dist(self, x):
        pts, single = _as_points(x)
        sd = np.linalg.norm(pts - self.center, axis=1) - self.radius
        return _maybe_scalar(sd, single)

    def contains(self, x):
        sd = self.signed_dist(x)
        return sd <= 0

    def boundary_dist(self, x):
        sd = self.signed_dist(x)
        return np.maximum(-sd, 0.0)

    def bounding_box(self, margin: float = 0.0):
        r = self.radius + margin
        return self.center - r, self.center + r

    def volume(self) -> float:
        return unit_ball_volume(self.dim) * self.radius ** self.dim

    def slab_measure(self, t: float) -> float:
        # Minkowski inflation of a ball is a ball.
        return unit_ball_volume(self.dim) * (self.radius + t) ** self.dim

    def sample_slab(self, rng: np.random.Generator, n: int, t: float) -> np.ndarray:
        d = self.dim
        dirs = rng.standard_normal((n, d))
        dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
        radii = (self.radius + t) * rng.random(n) ** (1.0 / d)
        return self.center + radii[:, None] * dirs

    def spec_string(self) -> str:
        return f"ball:{self.dim}:{_fmt(self.radius)}"


@dataclass(frozen=True, eq=False)
class Box:
    """Axis-aligned box ``{lo <= x <= hi}`` componentwise."""

    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "lo", np.asarray(self.lo, dtype=float))
        object.__setattr__(self, "hi", np.asarray(self.hi, dtype=float))
        if self.lo.shape != self.hi.shape or np.any(self.hi <= self.lo):
            raise DomainError("box needs lo < hi componentwise")

    @property
    def dim(self) -> int:
        return self.lo.shape[0]

    def signed_dist(self, x):
        pts, single = _as_points(x)
        below = self.lo - pts
        above = pts - self.hi
        outside = np.maximum(np.maximum(below, above), 0.0)
        out_d = np.linalg.norm(outside, axis=1)
        inside_margin = np.minimum(pts - self.lo, self.hi - pts).min(axis=1)
        sd = np.where(out_d > 0, out_d, -inside_margin)
        return _maybe_scalar(sd, single)

    def contains(self, x):
        sd = self.signed_dist(x)
        return sd <= 0

    def boundary_dist(self, x):
        sd = self.signed_dist(x)
        return np.maximum(-sd, 0.0)

    def bounding_box(self, margin: float = 0.0):
        return self.lo - margin, self.hi + margin

    def volume(self) -> float:
        return float(np.prod(self.hi - self.lo))

    def slab_measure(self, t: float) -> float:
        if self.dim == 2:
            w, h = self.hi - self.lo
            return w * h + 2.0 * (w + h) * t + math.pi * t * t
        if t == 0.0:
            return self.volume()
        return None  # caller falls back to Monte-Carlo estimation

    def sample_slab(self, rng: np.random.Generator, n: int, t: float) -> np.ndarray:
        lo, hi = self.bounding_box(t)
        out = np.empty((n, self.dim))
        filled = 0
        while filled < n:
            cand = lo + (hi - lo) * rng.random((max(n, 1024), self.dim))
            keep = cand[self.signed_dist(cand) <= t]
            take = min(n - filled, len(keep))
            out[filled : filled + take] = keep[:take]
            filled += take
        return out

    def spec_string(self) -> str:
        lo = ",".join(_fmt(v) for v in self.lo)
        hi = ",".join(_fmt(v) for v in self.hi)
        return f"box:{self.dim}:{lo}:{hi}"


@dataclass(frozen=True, eq=False)
class AnnulusSector:
    """Planar annulus sector: radii in [r_inner, r_outer], angle in [0, angle_deg].

    A non-convex John domain once the angle exceeds 180 degrees; used to
    exercise chain covers away from the convex case.
    """

    r_inner: float
    r_outer: float
    angle_deg: float

    def __post_init__(self):
        if not (0 < self.r_inner < self.r_outer):
            raise DomainError("annulus sector needs 0 < r_inner < r_outer")
        if not (0 < self.angle_deg <= 360):
            raise DomainError("annulus sector angle must lie in (0, 360] degrees")

    @property
    def dim(self) -> int:
        return 2

    @property
    def angle(self) -> float:
        return math.radians(self.angle_deg)

    def _polar(self, pts):
        r = np.linalg.norm(pts, axis=1)
        theta = np.mod(np.arctan2(pts[:, 1], pts[:, 0]), 2.0 * math.pi)
        return r, theta

    def _boundary_piece_dist(self, pts):
        """Distance from each point to the union of the four boundary pieces."""
        r, theta = self._polar(pts)
        full = self.angle_deg >= 360.0
        in_angle = full | (theta <= self.angle)

        dists = []
        for rad in (self.r_inner, self.r_outer):
            radial = np.abs(r - rad)
            if full:
                dists.append(radial)
                continue
            ends = np.stack(
                [rad * np.array([1.0, 0.0]), rad * np.array([math.cos(self.angle), math.sin(self.angle)])]
            )
            end_d = np.linalg.norm(pts[:, None, :] - ends[None, :, :], axis=2).min(axis=1)
            dists.append(np.where(in_angle, radial, end_d))
        if not full:
            for a in (0.0, self.angle):
                u = np.array([math.cos(a), math.sin(a)])
                proj = np.clip(pts @ u, self.r_inner, self.r_outer)
                foot = proj[:, None] * u[None, :]
                dists.append(np.linalg.norm(pts - foot, axis=1))
        return np.minimum.reduce(dists)

    def contains(self, x):
        pts, single = _as_points(x)
        r, theta = self._polar(pts)
        ok = (r >= self.r_inner) & (r <= self.r_outer)
        if self.angle_deg < 360.0:
            ok &= theta <= self.angle
        return _maybe_scalar(ok.astype(bool), single) if False else (bool(ok[0]) if single else ok)

    def signed_dist(self, x):
        pts, single = _as_points(x)
        d = self._boundary_piece_dist(pts)
        inside = np.atleast_1d(self.contains(pts))
        sd = np.where(inside, -d, d)
        return _maybe_scalar(sd, single)

    def boundary_dist(self, x):
        sd = self.signed_dist(x)
        return np.maximum(-sd, 0.0)

    def bounding_box(self, margin: float = 0.0):
        r = self.r_outer + margin
        return np.array([-r, -r]), np.array([r, r])

    def volume(self) -> float:
        return 0.5 * self.angle * (self.r_outer**2 - self.r_inner**2)

    def slab_measure(self, t: float) -> float:
        return None if t > 0 else self.volume()

    def sample_slab(self, rng: np.random.Generator, n: int, t: float) -> np.ndarray:
        lo, hi = self.bounding_box(t)
        out = np.empty((n, 2))
        filled = 0
        while filled < n:
            cand = lo + (hi - lo) * rng.random((max(n, 1024), 2))
            keep = cand[self.signed_dist(cand) <= t]
            take = min(n - filled, len(keep))
            out[filled : filled + take] = keep[:take]
            filled += take
        return out

    def spec_string(self) -> str:
        return f"annulus:2:{_fmt(self.r_inner)}:{_fmt(self.r_outer)}:{_fmt(self.angle_deg)}"


@dataclass(frozen=True, eq=False)
class SphereCap:
    """Geodesic cap on the embedded unit sphere: angle to ``center`` <= ``angular_radius``."""

    center: np.ndarray
    angular_radius: float

    def __post_init__(self):
        c = np.asarray(self.center, dtype=float)
        norm = np.linalg.norm(c)
        if norm == 0:
            raise DomainError("cap center must be a nonzero direction")
        object.__setattr__(self, "center", c / norm)
        if not (0 < self.angular_radius < math.pi):
            raise DomainError("cap angular radius must lie in (0, pi)")

    @property
    def dim(self) -> int:
        return self.center.shape[0] - 1

    def _angle(self, pts):
        dots = np.clip(pts @ self.center, -1.0, 1.0)
        return np.arccos(dots)

    def signed_dist(self, x):
        # Geodesic distance to the boundary circle is |angle - radius|.
        pts, single = _as_points(x)
        sd = self._angle(pts) - self.angular_radius
        return _maybe_scalar(sd, single)

    def contains(self, x):
        sd = self.signed_dist(x)
        return sd <= 0

    def boundary_dist(self, x):
        sd = self.signed_dist(x)
        return np.maximum(-sd, 0.0)

    def volume(self) -> float:
        if self.dim != 2:
            raise DomainError("cap area implemented for the 2-sphere only")
        return 2.0 * math.pi * (1.0 - math.cos(self.angular_radius))

    def slab_measure(self, t: float) -> float:
        ang = min(self.angular_radius + t, math.pi)
        if self.dim != 2:
            raise DomainError("cap slab measure implemented for the 2-sphere only")
        return 2.0 * math.pi * (1.0 - math.cos(ang))

    def sample_slab(self, rng: np.random.Generator, n: int, t: float) -> np.ndarray:
        if self.dim != 2:
            raise DomainError("cap slab sampling implemented for the 2-sphere only")
        ang = min(self.angular_radius + t, math.pi)
        z = 1.0 - (1.0 - math.cos(ang)) * rng.random(n)
        phi = 2.0 * math.pi * rng.random(n)
        s = np.sqrt(np.maximum(1.0 - z * z, 0.0))
        local = np.stack([s * np.cos(phi), s * np.sin(phi), z], axis=1)
        return local @ _frame_to(self.center).T

    def spec_string(self) -> str:
        return f"cap:{self.dim}:{_fmt(math.degrees(self.angular_radius))}"


@dataclass(frozen=True, eq=False)
class FullManifold:
    """Whole sphere or torus: no boundary, every point is interior."""

    dim: int

    def signed_dist(self, x):
        pts, single = _as_points(x)
        sd = np.full(pts.shape[0], -np.inf)
        return _maybe_scalar(sd, single)

    def contains(self, x):
        pts, single = _as_points(x)
        ok = np.ones(pts.shape[0], dtype=bool)
        return bool(ok[0]) if single else ok

    def boundary_dist(self, x):
        pts, single = _as_points(x)
        bd = np.full(pts.shape[0], np.inf)
        return _maybe_scalar(bd, single)


def _frame_to(north: np.ndarray) -> np.ndarray:
    """Orthonormal frame whose third column is ``north`` (3-vectors)."""
    n = north / np.linalg.norm(north)
    helper = np.array([1.0, 0.0, 0.0])
    if abs(n @ helper) > 0.9:
        helper = np.array([0.0, 1.0, 0.0])
    e1 = helper - (helper @ n) * n
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(n, e1)
    return np.stack([e1, e2, n], axis=1)


def _fmt(v: float) -> str:
    return f"{v:g}"


# ---------------------------------------------------------------------------
# John-domain structure: analytic center, eta and curve oracles per shape.
# ---------------------------------------------------------------------------


@dataclass(eq=False)
class JohnCurve:
    """Rectifiable curve from a point to the John center, arclength parametrized."""

    length: float
    point_at_fn: "callable"

    def point_at(self, t):
        return self.point_at_fn(np.clip(t, 0.0, self.length))


@dataclass(eq=False)
class JohnDomain:
    """A domain together with a John center, rate eta and curve oracle.

    ``curve(x)`` returns a :class:`JohnCurve` gamma with gamma(0) = x and
    gamma(length) = center, along which dist(gamma(t), complement) >= eta * t
    (certified by the probe suite, not assumed).
    """

    domain: object
    center: np.ndarray
    eta: float
    _curve_builder: "callable" = field(repr=False)

    def curve(self, x: np.ndarray) -> JohnCurve:
        return self._curve_builder(np.asarray(x, dtype=float))

    def boundary_dist(self, x):
        return self.domain.boundary_dist(x)

    def contains(self, x):
        return self.domain.contains(x)


def _segment_curve(x: np.ndarray, target: np.ndarray) -> JohnCurve:
    delta = target - x
    length = float(np.linalg.norm(delta))
    if length == 0.0:
        return JohnCurve(0.0, lambda t: np.broadcast_to(x, np.shape(t) + x.shape).copy())
    u = delta / length

    def at(t):
        t = np.asarray(t, dtype=float)
        return x + np.multiply.outer(t, u)

    return JohnCurve(length, at)


def _annulus_curve(domain: AnnulusSector, x: np.ndarray) -> JohnCurve:
    r_mid = 0.5 * (domain.r_inner + domain.r_outer)
    ang_mid = 0.5 * domain.angle
    r = float(np.linalg.norm(x))
    theta = float(np.mod(math.atan2(x[1], x[0]), 2.0 * math.pi))
    if domain.angle_deg >= 360.0:
        theta = min(theta, domain.angle)
    l_radial = abs(r - r_mid)
    l_arc = r_mid * abs(theta - ang_mid)
    sign_r = 1.0 if r_mid >= r else -1.0
    sign_a = 1.0 if ang_mid >= theta else -1.0

    def at(t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        rr = np.where(t <= l_radial, r + sign_r * t, r_mid)
        aa = np.where(t <= l_radial, theta, theta + sign_a * (t - l_radial) / r_mid)
        pts = np.stack([rr * np.cos(aa), rr * np.sin(aa)], axis=-1)
        return pts[0] if pts.shape[0] == 1 and np.isscalar(t) else pts

    return JohnCurve(l_radial + l_arc, at)


def _certify_eta(domain, curve_builder, probes: np.ndarray, floor: float = 1e-3) -> float:
    """Empirical John rate along the supplied curves, with a safety factor."""
    best = np.inf
    for x in probes:
        curve = curve_builder(x)
        if curve.length == 0.0:
            continue
        ts = np.linspace(1e-6, curve.length, 64)
        pts = np.atleast_2d(curve.point_at(ts))
        ratio = domain.boundary_dist(pts) / ts
        best = min(best, float(np.min(ratio)))
    if not np.isfinite(best) or best <= 0:
        raise ConfigurationError("could not certify a positive John rate")
    return max(0.8 * best, floor)


def make_john_domain(domain) -> JohnDomain:
    """Attach the analytic John center/curve oracle for a supported shape."""
    if isinstance(domain, Ball):
        center = domain.center.copy()
        return JohnDomain(domain, center, 1.0, lambda x: _segment_curve(x, center))
    if isinstance(domain, Box):
        center = 0.5 * (domain.lo + domain.hi)
        r_in = 0.5 * float(np.min(domain.hi - domain.lo))
        diam = float(np.linalg.norm(domain.hi - domain.lo))
        eta = r_in / diam
        return JohnDomain(domain, center, eta, lambda x: _segment_curve(x, center))
    if isinstance(domain, AnnulusSector):
        r_mid = 0.5 * (domain.r_inner + domain.r_outer)
        ang_mid = 0.5 * domain.angle
        center = np.array([r_mid * math.cos(ang_mid), r_mid * math.sin(ang_mid)])
        builder = lambda x: _annulus_curve(domain, x)
        rs = np.linspace(domain.r_inner + 1e-3, domain.r_outer - 1e-3, 12)
        angs = np.linspace(1e-3, domain.angle - 1e-3, 24)
        probes = np.array([[rr * math.cos(a), rr * math.sin(a)] for rr in rs for a in angs])
        eta = _certify_eta(domain, builder, probes)
        return JohnDomain(domain, center, eta, builder)
    raise DomainError(f"no John curve oracle for domain {type(domain).__name__}")
