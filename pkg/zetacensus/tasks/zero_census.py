"""Argument-principle machinery for zeta and zeta''.

Winding numbers come from sampling the target along a rectangle's boundary,
bisecting each edge until consecutive samples differ in argument by less
than pi/2. Zeros are isolated by quadrisection guided by those windings and
polished with Newton's method.
"""

import logging
import math
from dataclasses import dataclass

from zetacensus.tasks import utils, zeta_deriv
from zetacensus.tasks.functional_eq import g2_z
from zetacensus.tasks.mpc_eval import ComplexValue
from zetacensus.tasks.utils import BoundaryZero, DomainError, NewtonStall, NonConvergence


TARGETS = ("zeta", "zeta2")
ARG_TARGETS = ("zeta", "G2", "G2_over_zeta")

# split points for quadrisection; sqrt(2) - 1 first, so no cut of a box
# that starts on an integer or half-integer lands on sigma = 1/2
SPLIT_FRACTIONS = (0.41421356237309515, 0.3819660112501051, 0.4472135954999579, 0.36602540378443865)

PERTURBATION_STEPS = (1, -1, 2, -2, 3, -3, 4, -4)


@dataclass(frozen=True)
class Rect:
    sigma_min: object
    sigma_max: object
    t_min: object
    t_max: object

    @classmethod
    def from_string(cls, value):
        return cls(*utils.parse_floats(value, 4))

    def validate(self, degenerate=False):
        if degenerate:
            ok = self.sigma_min <= self.sigma_max and self.t_min <= self.t_max
        else:
            ok = self.sigma_min < self.sigma_max and self.t_min < self.t_max
        if not ok:
            raise DomainError("malformed rectangle %s" % (self,))
        return self

    @property
    def width(self):
        return self.sigma_max - self.sigma_min

    @property
    def height(self):
        return self.t_max - self.t_min

    @property
    def diameter(self):
        return math.hypot(float(self.width), float(self.height))

    def contains(self, z):
        return (self.sigma_min <= z.real <= self.sigma_max) and (self.t_min <= z.imag <= self.t_max)

    def center(self, mp):
        return mp.mpc((mp.mpf(self.sigma_min) + self.sigma_max) / 2, (mp.mpf(self.t_min) + self.t_max) / 2)

    def expanded(self, delta):
        return Rect(self.sigma_min - delta, self.sigma_max + delta, self.t_min - delta, self.t_max + delta)

    def conjugate(self):
        return Rect(self.sigma_min, self.sigma_max, -self.t_max, -self.t_min)

    def corners(self, mp):
        return (
            mp.mpc(self.sigma_min, self.t_min),
            mp.mpc(self.sigma_max, self.t_min),
            mp.mpc(self.sigma_max, self.t_max),
            mp.mpc(self.sigma_min, self.t_max),
        )

    def quarters(self, mp, fraction):
        sc = mp.mpf(self.sigma_min) + fraction * (mp.mpf(self.sigma_max) - self.sigma_min)
        tc = mp.mpf(self.t_min) + fraction * (mp.mpf(self.t_max) - self.t_min)
        return [
            Rect(self.sigma_min, sc, self.t_min, tc),
            Rect(sc, self.sigma_max, self.t_min, tc),
            Rect(self.sigma_min, sc, tc, self.t_max),
            Rect(sc, self.sigma_max, tc, self.t_max),
        ]


@dataclass(frozen=True)
class Zero:
    position: ComplexValue
    multiplicity: int
    residual: object
    target: str

    @property
    def beta(self):
        return self.position.re

    @property
    def gamma(self):
        return self.position.im

    @property
    def left_of_origin(self):
        # the zeta'' zeros in sigma < 0 get reported, never assumed away
        return self.target == "zeta2" and self.position.re < 0

    def sort_key(self):
        return (self.position.im, self.position.re)

    def to_row(self):
        return {
            'target': self.target,
            're': self.position.re,
            'im': self.position.im,
            'multiplicity': self.multiplicity,
            'residual': self.residual,
        }


@dataclass(frozen=True)
class ArgTrace:
    samples: tuple
    total_variation: object
    branch_consistent: bool
    target: str = "zeta"
    T: object = None

    def at(self, sigma):
        for s, arg in self.samples:
            if s == sigma:
                return arg
        raise KeyError("sigma %s was not sampled" % sigma)

    @property
    def final(self):
        return self.samples[-1][1]


@dataclass(frozen=True)
class NkCount:
    k: int
    T: object
    count: int
    height: object
    perturbation: object = 0


def _check_target(target, allowed=TARGETS):
    if target not in allowed:
        raise DomainError("unknown target %r (expected one of %s)" % (target, ", ".join(allowed)))


def target_z(ctx, target, z):
    if target == "zeta":
        return zeta_deriv.jet_z(ctx, z, 0)[0]
    return zeta_deriv.jet_z(ctx, z, 2)[2]


def _arg_value(ctx, target, z):
    if target == "zeta":
        return zeta_deriv.jet_z(ctx, z, 0)[0]
    jet = zeta_deriv.jet_z(ctx, z, 2)
    g2 = g2_z(ctx, z, jet[2])
    if target == "G2":
        return g2
    return g2 / jet[0]


def boundary_floor(ctx):
    return ctx.mp.ldexp(1, -(ctx.mantissa_bits // 2))


def perturbation_size(ctx):
    return ctx.mp.ldexp(1, -(ctx.mantissa_bits // 4))


def diameter_floor(ctx):
    return ctx.mp.ldexp(1, -(ctx.mantissa_bits // 8))


# Boundary sampling

def edge_change(ctx, target, a, b):
    """Change of arg f along the segment a -> b, by adaptive bisection."""
    mp = ctx.mp
    floor = boundary_floor(ctx)
    budget = int(utils.setting("census", "sample_budget", 20000))
    step = float(utils.setting("census", "initial_step", 0.25))
    length = abs(b - a)
    min_piece = perturbation_size(ctx) / max(1, length)
    half_pi = mp.pi / 2

    def sample(lam):
        z = a + lam * (b - a)
        value = target_z(ctx, target, z)
        if abs(value) < floor:
            raise BoundaryZero("%s vanishes on the contour near %s" % (target, mp.nstr(z, 15)))
        return value

    count = max(2, int(math.ceil(float(length) / step)))
    nodes = [mp.mpf(i) / count for i in range(count + 1)]
    values = [sample(lam) for lam in nodes]
    samples = len(values)

    total = mp.mpf(0)
    for i in range(count):
        stack = [(nodes[i], values[i], nodes[i + 1], values[i + 1])]
        while stack:
            la, fa, lb, fb = stack.pop()
            delta = mp.arg(fb / fa)
            if abs(delta) < half_pi:
                total += delta
                continue
            if lb - la < min_piece:
                raise BoundaryZero("%s has a zero within %s of the contour near %s" % (
                    target, mp.nstr(min_piece * length, 5), mp.nstr(a + la * (b - a), 15)))
            samples += 1
            if samples > budget:
                raise NonConvergence("edge %s -> %s needs more than %d samples" % (
                    mp.nstr(a, 10), mp.nstr(b, 10), budget))
            lm = (la + lb) / 2
            fm = sample(lm)
            # right half first so the left half is summed first
            stack.append((lm, fm, lb, fb))
            stack.append((la, fa, lm, fm))
    return total


def _segments(mp, rect, piece=None):
    corners = rect.corners(mp)
    segments = []
    for i in range(4):
        a, b = corners[i], corners[(i + 1) % 4]
        n = 1
        if piece:
            n = max(1, int(math.ceil(float(abs(b - a)) / piece)))
        for j in range(n):
            segments.append((a + (b - a) * j / n, a + (b - a) * (j + 1) / n))
    return segments


def _segment_change(segment, ctx, target):
    return edge_change(ctx, target, segment[0], segment[1])


def _winding_from_total(ctx, total, rect):
    mp = ctx.mp
    turns = total / (2 * mp.pi)
    winding = int(mp.nint(turns))
    if abs(turns - winding) > 0.25:
        raise NonConvergence("argument change %s around %s is not a whole number of turns" % (mp.nstr(total, 10), rect))
    return winding


def contour_winding(ctx, target, rect):
    """Winding of the target around rect, with no perturbation. Long edges
    are cut into pieces evaluated on the worker pool."""
    mp = ctx.mp
    piece = float(utils.setting("census", "slab_height", 4.0))
    changes = utils.parallel_map(_segment_change, _segments(mp, rect, piece), ctx, target)
    total = mp.mpf(0)
    for change in changes:
        total += change
    return _winding_from_total(ctx, total, rect)


def winding_count(ctx, target, rect):
    _check_target(target)
    rect.validate()
    eps = perturbation_size(ctx)
    attempts = [0] + [step * eps for step in PERTURBATION_STEPS]
    for delta in attempts:
        try:
            return contour_winding(ctx, target, rect.expanded(delta) if delta else rect)
        except BoundaryZero as exception:
            logging.warning("[winding] %s on %s, perturbing the contour: %s" % (target, rect, exception))
    raise BoundaryZero("%s keeps vanishing on the boundary of %s after %d perturbations" % (
        target, rect, len(PERTURBATION_STEPS)))


# Zero localisation

class _BoxWindings(object):
    """Edge changes shared between neighbouring boxes of one search."""

    def __init__(self, ctx, target):
        self.ctx = ctx
        self.target = target
        self.edges = {}

    def edge(self, a, b):
        key = (a.real, a.imag, b.real, b.imag)
        if key in self.edges:
            return self.edges[key]
        reverse = (b.real, b.imag, a.real, a.imag)
        if reverse in self.edges:
            return -self.edges[reverse]
        change = edge_change(self.ctx, self.target, a, b)
        self.edges[key] = change
        return change

    def winding(self, rect):
        mp = self.ctx.mp
        corners = rect.corners(mp)
        total = mp.mpf(0)
        for i in range(4):
            total += self.edge(corners[i], corners[(i + 1) % 4])
        return _winding_from_total(self.ctx, total, rect)


def derivative_z(ctx, target, z):
    if target == "zeta":
        return zeta_deriv.jet_z(ctx, z, 1)[1]
    # zeta''' by a five-point stencil on zeta''
    mp = ctx.mp
    h = mp.ldexp(1, -(ctx.mantissa_bits // 3))
    f = lambda w: zeta_deriv.jet_z(ctx, w, 2)[2]
    return (f(z - 2 * h) - 8 * f(z - h) + 8 * f(z + h) - f(z + 2 * h)) / (12 * h)


def polish_zero(ctx, target, start, box=None, max_steps=60):
    """Newton's method from start; raises NewtonStall when the iteration
    leaves the box or does not settle."""
    _check_target(target)
    mp = ctx.mp
    z = mp.mpc(start.z if isinstance(start, ComplexValue) else start)
    limit = box.expanded(box.diameter / 2) if box is not None else None
    for _ in range(max_steps):
        value = target_z(ctx, target, z)
        slope = derivative_z(ctx, target, z)
        if slope == 0:
            raise NewtonStall("flat %s at %s" % (target, mp.nstr(z, 15)))
        step = value / slope
        z = z - step
        if limit is not None and not limit.contains(z):
            raise NewtonStall("Newton left %s" % (box,))
        if abs(step) <= ctx.newton_tol * max(1, abs(z)):
            residual = abs(target_z(ctx, target, z))
            if residual > ctx.newton_tol * max(1, abs(slope)):
                raise NewtonStall("residual %s at %s" % (mp.nstr(residual, 5), mp.nstr(z, 15)))
            if box is not None and not box.contains(z):
                raise NewtonStall("Newton converged outside %s" % (box,))
            return z, residual
    raise NewtonStall("Newton did not settle in %d steps near %s" % (max_steps, mp.nstr(z, 15)))


def _locate_box(ctx, target, rect, winding, windings, found):
    mp = ctx.mp
    if winding == 0:
        return
    if winding < 0:
        raise DomainError("%s has a pole inside %s" % (target, rect))

    if winding == 1:
        try:
            z, residual = polish_zero(ctx, target, rect.center(mp), rect)
            found.append(Zero(ComplexValue.of(ctx, z), 1, residual, target))
            return
        except NewtonStall as exception:
            logging.debug("[locate] %s, subdividing" % exception)

    if rect.diameter < diameter_floor(ctx):
        z = rect.center(mp)
        residual = abs(target_z(ctx, target, z))
        logging.warning("[locate] winding %d persists in %s, recording multiplicity %d" % (winding, rect, winding))
        found.append(Zero(ComplexValue.of(ctx, z), winding, residual, target))
        return

    for fraction in SPLIT_FRACTIONS:
        try:
            quarters = rect.quarters(mp, fraction)
            counts = [windings.winding(q) for q in quarters]
        except BoundaryZero as exception:
            logging.debug("[locate] split %s of %s hit a zero: %s" % (fraction, rect, exception))
            continue
        if sum(counts) != winding:
            logging.debug("[locate] split %s of %s gave %s for winding %d" % (fraction, rect, counts, winding))
            continue
        for quarter, count in zip(quarters, counts):
            _locate_box(ctx, target, quarter, count, windings, found)
        return
    raise BoundaryZero("no clean quadrisection of %s" % (rect,))


def _locate_slab(rect, ctx, target):
    windings = _BoxWindings(ctx, target)
    found = []
    _locate_box(ctx, target, rect, windings.winding(rect), windings, found)
    return found


def _clean_cut(ctx, target, sigma_min, sigma_max, t):
    # nudge a horizontal line off any zero lying on it
    mp = ctx.mp
    eps = perturbation_size(ctx)
    for step in (0,) + PERTURBATION_STEPS:
        height = mp.mpf(t) + step * eps
        try:
            edge_change(ctx, target, mp.mpc(sigma_min, height), mp.mpc(sigma_max, height))
            return height
        except BoundaryZero:
            logging.warning("[locate] %s vanishes on t = %s, nudging" % (target, mp.nstr(height, 20)))
    raise BoundaryZero("%s keeps vanishing near t = %s" % (target, mp.nstr(t, 20)))


def _slabs(ctx, target, rect):
    height = float(utils.setting("census", "slab_height", 4.0))
    n = max(1, int(math.ceil(float(rect.height) / height)))
    cuts = [rect.t_min + rect.height * j / n for j in range(1, n)]
    cuts = utils.parallel_map(_clean_cut_task, cuts, ctx, target, rect.sigma_min, rect.sigma_max)
    edges = [rect.t_min] + cuts + [rect.t_max]
    return [Rect(rect.sigma_min, rect.sigma_max, edges[i], edges[i + 1]) for i in range(n)]


def _clean_cut_task(t, ctx, target, sigma_min, sigma_max):
    return _clean_cut(ctx, target, sigma_min, sigma_max, t)


def _locate_all(ctx, target, rect):
    slabs = _slabs(ctx, target, rect)
    logging.info("[locate] %s in %s as %d slabs" % (target, rect, len(slabs)))
    zeros = []
    for found in utils.parallel_map(_locate_slab, slabs, ctx, target):
        zeros.extend(found)
    zeros.sort(key=Zero.sort_key)
    return zeros


def locate_zeros(ctx, target, rect):
    _check_target(target)
    rect.validate()
    if target == "zeta" and rect.contains(ctx.mp.mpc(1)):
        raise DomainError("rectangle %s contains the pole of zeta" % (rect,))

    # same perturbation schedule as winding_count, so both see the same contour
    eps = perturbation_size(ctx)
    for delta in [0] + [step * eps for step in PERTURBATION_STEPS]:
        contour = rect.expanded(delta) if delta else rect
        try:
            zeros = _locate_all(ctx, target, contour)
            break
        except BoundaryZero as exception:
            logging.warning("[locate] %s on %s, perturbing the contour: %s" % (target, rect, exception))
    else:
        raise BoundaryZero("%s keeps vanishing on the boundary of %s after %d perturbations" % (
            target, rect, len(PERTURBATION_STEPS)))
    for zero in zeros:
        if zero.left_of_origin:
            logging.warning("[locate] zeta'' zero left of the imaginary axis at %s" % (zero.position,))
    return zeros


# Census rectangles

def census_target(k):
    if k == 0:
        return "zeta"
    if k == 2:
        return "zeta2"
    raise DomainError("census counts exist for k in {0, 2}, got %r" % (k,))


def _census_sigma(k):
    if k == 0:
        return utils.setting("census", "zeta_sigma", [-1, 2])
    return utils.setting("census", "zeta2_sigma", [-2, 6])


def census_rects(k, height):
    """Rectangles whose zeros make up the count with 0 < Im s <= height.
    For zeta'' a low strip below t = 2 is added, since its pair of zeros
    in the left half-plane lies close to the real axis."""
    census_target(k)
    sigma_min, sigma_max = _census_sigma(k)
    rects = []
    if k == 2:
        t_floor = utils.setting("census", "t_floor", 0.05)
        rects.append(Rect(sigma_min, sigma_max, t_floor, min(2, height)))
    if height > 2:
        rects.append(Rect(sigma_min, sigma_max, 2, height))
    return rects


def census_height(ctx, k, T):
    """T itself, or T nudged by a few multiples of 2^-(bits/4) when a zero
    sits on the top edge."""
    target = census_target(k)
    if T < 2:
        raise DomainError("census height must be at least 2, got %s" % T)
    sigma_min, sigma_max = _census_sigma(k)
    height = _clean_cut(ctx, target, sigma_min, sigma_max, T)
    if height != T:
        logging.warning("[census] %s: T = %s moved to %s" % (target, T, ctx.mp.nstr(height, 25)))
    return height


def census_count(ctx, k, T):
    height = census_height(ctx, k, T)
    target = census_target(k)
    count = 0
    for rect in census_rects(k, height):
        count += contour_winding(ctx, target, rect)
    return NkCount(k, T, count, height, height - ctx.mp.mpf(T))


def count_Nk(ctx, k, T):
    return census_count(ctx, k, T).count


def census_zeros(ctx, k, T):
    """All zeros counted by N_k(T), sorted by (Im, Re)."""
    height = census_height(ctx, k, T)
    target = census_target(k)
    zeros = []
    for rect in census_rects(k, height):
        zeros.extend(locate_zeros(ctx, target, rect))
    zeros.sort(key=Zero.sort_key)
    return zeros


def count_from_zeros(zeros, T):
    return sum(zero.multiplicity for zero in zeros if zero.gamma <= T)


def s2_from_zeros(ctx, zeros, T, T_from=0):
    mp = ctx.mp
    total = mp.mpf(0)
    for zero in zeros:
        if T_from < zero.gamma <= T:
            total += zero.multiplicity * (zero.beta - mp.mpf(0.5))
    return total


def sum_S2(ctx, T):
    if not T > 2 * math.pi:
        raise DomainError("S2(T) needs T > 2 pi, got %s" % T)
    return s2_from_zeros(ctx, census_zeros(ctx, 2, T), ctx.mp.inf)


# Continuous argument along horizontal lines

def arg_continuous(ctx, target, T, sigma_stop, marks=()):
    _check_target(target, ARG_TARGETS)
    mp = ctx.mp
    if T < 2:
        raise DomainError("argument tracking needs T >= 2, got %s" % T)
    sigma_stop = mp.mpf(sigma_stop)
    marks = [mp.mpf(m) for m in marks]
    if any(m < sigma_stop for m in marks):
        raise DomainError("argument marks must lie at or right of sigma = %s" % mp.nstr(sigma_stop, 15))
    # start well right of every mark, where the target is close to 1
    sigma_start = max(mp.mpf(40), max(marks + [sigma_stop]) + 10)
    max_step = mp.mpf(utils.setting("census", "initial_step", 0.25))
    floor = boundary_floor(ctx)
    min_step = perturbation_size(ctx)
    half_pi = mp.pi / 2

    stops = sorted(set(m for m in marks if sigma_stop < m), reverse=True)
    stops.append(sigma_stop)

    def value(sigma):
        f = _arg_value(ctx, target, mp.mpc(sigma, T))
        if abs(f) < floor:
            raise BoundaryZero("%s vanishes at %s + %si" % (target, mp.nstr(sigma, 15), T))
        return f

    sigma = sigma_start
    current = value(sigma)
    arg = mp.arg(current)
    samples = [(sigma, arg)]
    variation = mp.mpf(0)
    step = max_step
    for stop in stops:
        while sigma > stop:
            nxt = max(sigma - step, stop)
            candidate = value(nxt)
            delta = mp.arg(candidate / current)
            if abs(delta) >= half_pi:
                step /= 2
                if step < min_step:
                    raise BoundaryZero("%s has a zero next to %s + %si" % (target, mp.nstr(sigma, 15), T))
                continue
            sigma, current = nxt, candidate
            arg += delta
            variation += abs(delta)
            samples.append((sigma, arg))
            step = min(step * 2, max_step)

    seed = samples[0][1]
    return ArgTrace(tuple(samples), variation, abs(seed) < 0.01, target, T)
