"""Synthetic data-generating processes with latent truth, and their oracles.

Generators return a :class:`TypedSample`: observable rows (running variable,
outcome, treatment) plus latent columns (the non-manipulated running
variable, a manipulation flag, and the behavioural type of each unit).
Matching population oracles deliver the exact boundary quantities by
quadrature so estimators and bounds can be verified end to end.

The mixture DGP ("appendix-d" in the CLI) draws a standard normal latent
score; units below the cutoff attempt manipulation with probability p and
land at an exponential draw whose density at zero-plus is lam. Outcomes are
binary with success curves Phi(x - 1) untreated and Phi(x - 0.5) treated.

The smooth-density counterexample shifts two latent segments upward by
different amounts so that the observed density stays smooth at the cutoff
while the conditional mean jumps: the middle segment deliberately lands
below the cutoff, breaking the one-sided landing restriction that the
detectable-manipulation taxonomy relies on.
"""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass

import numpy as np
from scipy import integrate, stats

from .boundary import Dataset
from .bounds import binary_sharp_gfuncs
from .errors import (
    InsufficientData,
    InvalidConfig,
    InvalidDistribution,
    InvalidParams,
    InvalidWeights,
    MissingLatents,
)

CUTOFF = 0.0
#: Enforced minimum manipulation distance |x - x_star| for typed generators.
MIN_JUMP = 0.1

TYPED_CSV_COLUMNS = ("x", "y", "d", "x_star", "manipulated", "t_type")


def _mu_d(x, d):
    """Success probability of the binary outcome given the latent score."""
    return stats.norm.cdf(np.asarray(x) - (0.5 if d == 1 else 1.0))


@dataclass(frozen=True)
class AppendixDSpec:
    """Parameters of the mixture DGP: attempt probability p, landing density
    at zero-plus lam, sample size and seed."""

    p: float
    lam: float
    n: int
    seed: int

    def __post_init__(self):
        if not (0.0 <= self.p <= 1.0):
            raise InvalidParams(f"p must lie in [0, 1], got {self.p}")
        if not (self.lam > 0):
            raise InvalidParams(f"lam must be positive, got {self.lam}")
        if self.n < 1:
            raise InvalidParams(f"n must be at least 1, got {self.n}")
        if self.seed < 0:
            raise InvalidParams("seed must be nonnegative")


@dataclass(frozen=True)
class TypedSample:
    """Observable rows plus the latent truth used by oracle checks."""

    data: Dataset
    x_star: np.ndarray | None = None
    manipulated: np.ndarray | None = None
    t_type: np.ndarray | None = None

    def has_latents(self) -> bool:
        return self.x_star is not None and self.manipulated is not None and self.t_type is not None

    def manipulation_fraction(self) -> float:
        self._require_latents()
        return float(np.mean(self.manipulated))

    def type_shares(self) -> dict[int, float]:
        self._require_latents()
        values, counts = np.unique(self.t_type, return_counts=True)
        return {int(v): float(c) / self.t_type.size for v, c in zip(values, counts)}

    def _require_latents(self):
        if not self.has_latents():
            raise MissingLatents("this sample carries no latent columns")


@dataclass(frozen=True)
class OracleRow:
    """Population boundary quantities and bounds for one (p, lam) point."""

    p: float
    lam: float
    mu_plus: float
    mu_minus: float
    r: float
    theta_true: float
    crude_lower: float
    crude_upper: float
    sharp_lower: float
    sharp_upper: float


def gen_appendix_d(spec: AppendixDSpec) -> TypedSample:
    """Draw a sample from the mixture DGP.

    Latent score X* ~ N(0, 1); a unit manipulates iff X* < 0 and an
    independent uniform falls below p, in which case the observed score is
    an independent Exponential(rate=lam) draw (so its density at 0+ equals
    lam and every manipulator lands at or above the cutoff). Binary
    potential outcomes are 1{mu_d(X*) >= eps} with eps uniform.
    """
    rng = np.random.default_rng(spec.seed)
    n = spec.n
    x_star = rng.standard_normal(n)
    eps = rng.uniform(size=n)
    u = rng.uniform(size=n)
    v = rng.exponential(scale=1.0 / spec.lam, size=n)
    keep = (x_star >= CUTOFF) | (u >= spec.p)
    x = np.where(keep, x_star, v)
    d = (x >= CUTOFF).astype(float)
    y1 = (_mu_d(x_star, 1) >= eps).astype(float)
    y0 = (_mu_d(x_star, 0) >= eps).astype(float)
    y = np.where(d == 1.0, y1, y0)
    manipulated = ~keep
    t_type = np.where(manipulated, 2, 0).astype(np.int8)
    data = Dataset(xs=x, ys=y, cutoff=CUTOFF, y_low=0.0, y_high=1.0, d=d)
    return TypedSample(data=data, x_star=x_star, manipulated=manipulated, t_type=t_type)


def _tail_integral(d: int) -> float:
    """2 * integral of mu_d(x) phi(x) over (-inf, 0), by adaptive quadrature."""
    val, _ = integrate.quad(
        lambda x: _mu_d(x, d) * stats.norm.pdf(x), -8.0, 0.0, epsabs=1e-8
    )
    return 2.0 * val


def oracle_appendix_d(p: float, lam: float, grid_size: int = 801) -> OracleRow:
    """Exact boundary quantities and bounds for the mixture DGP.

    The one-sided mean above the cutoff mixes the non-manipulated value
    mu_1(0) (weight phi(0)) with the manipulators' average outcome, a
    normal tail integral (weight 0.5 * lam * p). Crude bounds use the
    two-branch formulas; sharp bounds scan the binary closed forms over the
    counterfactual density interval.
    """
    if not (0.0 <= p <= 1.0):
        raise InvalidParams(f"p must lie in [0, 1], got {p}")
    if not (lam > 0):
        raise InvalidParams(f"lam must be positive, got {lam}")
    phi0 = float(stats.norm.pdf(0.0))
    f_minus = (1.0 - p) * phi0
    f_plus = phi0 + 0.5 * lam * p
    r = f_minus / f_plus
    mu_plus = (phi0 * float(_mu_d(0.0, 1)) + 0.5 * lam * p * _tail_integral(1)) / f_plus
    mu_minus = float(_mu_d(0.0, 0))
    theta_true = float(_mu_d(0.0, 1) - _mu_d(0.0, 0))
    y_low, y_high = 0.0, 1.0
    l1 = (mu_plus - y_high) - r * (mu_minus - y_high)
    l2 = (mu_plus - y_high) / r - (mu_minus - y_high)
    u1 = (mu_plus - y_low) - r * (mu_minus - y_low)
    u2 = (mu_plus - y_low) / r - (mu_minus - y_low)
    z = np.linspace(f_minus, f_plus, grid_size)
    tau = 1.0 - z / f_plus
    tau[-1] = 0.0
    g = np.array([binary_sharp_gfuncs(mu_plus, float(t)) for t in tau])
    g_low, g_high = g[:, 0], g[:, 1]
    theta_low = (f_plus / z) * (mu_plus - g_high) - (f_minus / z) * (mu_minus - y_high) + (g_high - y_high)
    theta_high = (f_plus / z) * (mu_plus - g_low) - (f_minus / z) * (mu_minus - y_low) + (g_low - y_low)
    return OracleRow(
        p=p,
        lam=lam,
        mu_plus=mu_plus,
        mu_minus=mu_minus,
        r=r,
        theta_true=theta_true,
        crude_lower=float(min(l1, l2)),
        crude_upper=float(max(u1, u2)),
        sharp_lower=float(theta_low.min()),
        sharp_upper=float(theta_high.max()),
    )


def gen_counterexample_e(n: int, seed: int, noise_sd: float = 0.0) -> TypedSample:
    """Smooth-density counterexample: monotone manipulation, jumping mean.

    X* is uniform on [-1, 1]; units in [-1, -2/3) shift up by 1 (landing
    above the cutoff) and units in [-2/3, -1/3) shift up by 1/3 (landing
    just below it), so the two displaced segments refill each half
    neighbourhood and the observed density stays smooth at zero while the
    conditional mean jumps from -1/6 to -1/2. Outcomes are Y = X* plus
    optional noise. Manipulated units are labelled type 2 even though the
    middle segment's below-cutoff landing violates the one-sided landing
    rule; that violation is the entire point of this generator.
    """
    if n < 1:
        raise InvalidParams(f"n must be at least 1, got {n}")
    if noise_sd < 0:
        raise InvalidParams("noise_sd must be nonnegative")
    rng = np.random.default_rng(seed)
    x_star = rng.uniform(-1.0, 1.0, size=n)
    x = np.where(
        x_star < -2.0 / 3.0,
        x_star + 1.0,
        np.where(x_star < -1.0 / 3.0, x_star + 1.0 / 3.0, x_star),
    )
    y = x_star.copy()
    if noise_sd > 0:
        y = y + noise_sd * rng.standard_normal(n)
    d = (x >= CUTOFF).astype(float)
    manipulated = x != x_star
    t_type = np.where(manipulated, 2, 0).astype(np.int8)
    data = Dataset(xs=x, ys=y, cutoff=CUTOFF, d=d)
    return TypedSample(data=data, x_star=x_star, manipulated=manipulated, t_type=t_type)


@dataclass(frozen=True)
class TypedParams:
    """Preset knobs for the typed generator.

    ``attempt_prob`` is the manipulation attempt probability for types 1-4;
    ``exp_rate`` the landing rate of the precise types (2 and 4);
    ``noise_scale`` the gamma(2, scale) spread of the imprecise types (1
    and 3). All manipulations keep |x - x_star| above ``min_jump``.
    """

    attempt_prob: float = 0.5
    exp_rate: float = 1.0
    noise_scale: float = 0.25
    min_jump: float = MIN_JUMP

    def __post_init__(self):
        if not (0.0 <= self.attempt_prob <= 1.0):
            raise InvalidParams("attempt_prob must lie in [0, 1]")
        if self.exp_rate <= 0 or self.noise_scale <= 0 or self.min_jump <= 0:
            raise InvalidParams("exp_rate, noise_scale and min_jump must be positive")


def _rejection_exponential(rng, x_star, rate, min_jump):
    """Exponential landings redrawn until they clear min_jump from x_star."""
    x = rng.exponential(scale=1.0 / rate, size=x_star.size)
    bad = np.abs(x - x_star) <= min_jump
    while np.any(bad):
        x[bad] = rng.exponential(scale=1.0 / rate, size=int(bad.sum()))
        bad = np.abs(x - x_star) <= min_jump
    return x


def gen_typed(type_shares: dict[int, float], params: TypedParams = TypedParams(),
              n: int = 10_000, seed: int = 0) -> TypedSample:
    """Draw a sample mixing the five behavioural types.

    Type 0 never manipulates. Type 1 jumps a symmetric two-sided distance,
    independently of the latent score and the outcome. Type 2 attempts only
    from below the cutoff and lands precisely above it. Type 3 attempts only
    from below but its landing is a continuous upward shift that may fail to
    cross. Type 4 lands precisely above the cutoff with an attempt
    probability that ignores the latent score. Outcomes follow the shared
    binary model, so the cutoff effect is Phi(-0.5) - Phi(-1).
    """
    if not type_shares:
        raise InvalidWeights("type_shares must not be empty")
    keys = sorted(type_shares)
    if any(k not in (0, 1, 2, 3, 4) for k in keys):
        raise InvalidWeights(f"type labels must be 0..4, got {keys}")
    weights = np.array([type_shares[k] for k in keys], dtype=float)
    if np.any(weights < 0):
        raise InvalidWeights("type shares must be nonnegative")
    if abs(weights.sum() - 1.0) > 1e-9:
        raise InvalidWeights(f"type shares must sum to 1, got {weights.sum()}")
    if n < 1:
        raise InvalidParams(f"n must be at least 1, got {n}")
    rng = np.random.default_rng(seed)
    x_star = rng.standard_normal(n)
    eps = rng.uniform(size=n)
    attempt_u = rng.uniform(size=n)
    t_type = np.asarray(rng.choice(keys, size=n, p=weights), dtype=np.int8)

    x = x_star.copy()
    attempts = attempt_u < params.attempt_prob
    below = x_star < CUTOFF

    m1 = (t_type == 1) & attempts
    if np.any(m1):
        sign = np.where(rng.uniform(size=int(m1.sum())) < 0.5, -1.0, 1.0)
        jump = params.min_jump + rng.gamma(2.0, params.noise_scale, size=int(m1.sum()))
        x[m1] = x_star[m1] + sign * jump

    m2 = (t_type == 2) & attempts & below
    if np.any(m2):
        x[m2] = _rejection_exponential(rng, x_star[m2], params.exp_rate, params.min_jump)

    m3 = (t_type == 3) & attempts & below
    if np.any(m3):
        x[m3] = x_star[m3] + params.min_jump + rng.gamma(2.0, params.noise_scale, size=int(m3.sum()))

    m4 = (t_type == 4) & attempts
    if np.any(m4):
        x[m4] = _rejection_exponential(rng, x_star[m4], params.exp_rate, params.min_jump)

    d = (x >= CUTOFF).astype(float)
    y1 = (_mu_d(x_star, 1) >= eps).astype(float)
    y0 = (_mu_d(x_star, 0) >= eps).astype(float)
    y = np.where(d == 1.0, y1, y0)
    manipulated = x != x_star
    data = Dataset(xs=x, ys=y, cutoff=CUTOFF, y_low=0.0, y_high=1.0, d=d)
    return TypedSample(data=data, x_star=x_star, manipulated=manipulated, t_type=t_type)


@dataclass(frozen=True)
class LemmaMomentReport:
    """Window-mean residuals of the mixture identities, plus raw pieces.

    ``residuals`` holds absolute differences between the two sides of each
    applicable identity; ``estimates`` the underlying window quantities,
    including the raw density and mean jumps.
    """

    residuals: dict[str, float]
    estimates: dict[str, float]


def verify_lemma_moments(
    ts: TypedSample, window: float, point_effect: float | None = None
) -> LemmaMomentReport:
    """Check the boundary mixture identities on latent-conditional windows.

    Uses one-sided windows of the given width around the cutoff for both
    the observed and the latent running variable. Identities that need
    types absent from the sample are skipped; the type-2 family needs all
    manipulators to be type 2 style (and likewise for type 4).

    When ``point_effect`` (the generator's true cutoff effect) is supplied,
    a ``continuity_link`` residual is added: whenever the estimated density
    jump is insignificant (under three Monte Carlo sigmas), a smooth density
    implies point identification, so the observed mean jump must match the
    true effect. A significant density jump imposes no restriction and the
    residual is zero. DGPs that break the one-sided manipulation
    restrictions can fail this check while passing the density test; that
    failure mode is exactly what the smooth-density counterexample shows.
    """
    if not ts.has_latents():
        raise MissingLatents("lemma verification needs latent columns")
    if window <= 0:
        raise InvalidConfig(f"window must be positive, got {window}")
    data = ts.data
    c = data.cutoff
    x, y = data.xs, data.ys
    xs_star, manip = ts.x_star, ts.manipulated

    right = (x >= c) & (x < c + window)
    left = (x >= c - window) & (x < c)
    star_right = (xs_star >= c) & (xs_star < c + window)
    star_left = (xs_star >= c - window) & (xs_star < c)

    def mean(mask):
        return float(y[mask].mean()) if np.any(mask) else 0.0

    n = x.size
    f_plus = float(np.count_nonzero(right)) / (n * window)
    f_minus = float(np.count_nonzero(left)) / (n * window)
    f_star = float(np.count_nonzero(star_right)) / (n * window)
    mu_plus, mu_minus = mean(right), mean(left)

    est = {
        "f_plus": f_plus,
        "f_minus": f_minus,
        "f_star": f_star,
        "mu_plus": mu_plus,
        "mu_minus": mu_minus,
        "density_jump": f_plus - f_minus,
        "mean_jump": mu_plus - mu_minus,
        "manipulation_fraction": float(np.mean(manip)),
    }

    res: dict[str, float] = {}
    present = set(np.unique(ts.t_type).tolist())
    p_manip_right = float(np.mean(manip[right])) if np.any(right) else 0.0
    if f_plus <= 0.0:
        raise InsufficientData(
            f"no observations within {window} above the cutoff; widen the window",
            side="right",
        )

    if present <= {0, 2}:
        # manipulators land above and originate below, so the latent density
        # fills f(c+) from below: P(manip | X=c+) = 1 - f*(c)/f(c+)
        w_star = f_star / f_plus if f_plus > 0 else 0.0
        m_star_right = mean(star_right)
        m_manip_right = mean(right & manip)
        res["mix_plus"] = abs(mu_plus - (w_star * m_star_right + (1.0 - w_star) * m_manip_right))
        res["collapse_minus"] = abs(mu_minus - mean(star_left & ~manip))
        res["fraction_manipulated_right"] = abs(p_manip_right - (1.0 - f_star / f_plus))
        if f_star > 0:
            p_manip_star_left = float(np.mean(manip[star_left])) if np.any(star_left) else 0.0
            res["fraction_manipulated_star_left"] = abs(
                p_manip_star_left - (1.0 - f_minus / f_star)
            )

    if present <= {0, 4}:
        # sorting-free precise manipulation: the non-manipulated density at
        # the cutoff equals f(c-), so P(manip | X=c+) = 1 - f(c-)/f(c+)
        w_keep = f_minus / f_plus if f_plus > 0 else 0.0
        m_keep_right = mean(star_right & ~manip)
        m_manip_right = mean(right & manip)
        res["mix_plus_sorting_free"] = abs(
            mu_plus - (w_keep * m_keep_right + (1.0 - w_keep) * m_manip_right)
        )
        res["collapse_minus"] = abs(mu_minus - mean(star_left & ~manip))
        res["fraction_manipulated_right_sorting_free"] = abs(
            p_manip_right - (1.0 - f_minus / f_plus)
        )

    if present <= {0, 1}:
        res["density_continuity"] = abs(f_plus - f_minus)

    # Monte Carlo scale of the density jump (Poisson window counts)
    se_f = float(
        np.sqrt(max(f_plus, 1e-12) / (n * window)) + np.sqrt(max(f_minus, 1e-12) / (n * window))
    )
    est["density_jump_se"] = se_f
    if point_effect is not None:
        density_jumps = abs(f_plus - f_minus) > 3.0 * se_f
        res["continuity_link"] = 0.0 if density_jumps else abs((mu_plus - mu_minus) - point_effect)
    return LemmaMomentReport(residuals=res, estimates=est)


def brute_force_trimming(values, probs, tau: float) -> tuple[float, float]:
    """Exact extreme means of a tau-mass sub-distribution, by greedy enumeration.

    Sorts the atoms and fills mass from the bottom (top), splitting the
    boundary atom. Serves as the independent oracle for the trimmed-mean
    machinery; tau = 1 returns the plain mean twice.
    """
    values = np.asarray(values, dtype=float)
    probs = np.asarray(probs, dtype=float)
    if values.ndim != 1 or values.shape != probs.shape or values.size == 0:
        raise InvalidDistribution("need matching nonempty value/probability arrays")
    if np.any(probs < 0) or abs(probs.sum() - 1.0) > 1e-9:
        raise InvalidDistribution("probabilities must be nonnegative and sum to 1")
    if not (0.0 < tau <= 1.0):
        raise InvalidDistribution(f"tau must lie in (0, 1], got {tau}")
    order = np.argsort(values, kind="stable")
    v, q = values[order], probs[order]

    def fill(vals, masses):
        taken = 0.0
        acc = 0.0
        for val, mass in zip(vals, masses):
            take = min(mass, tau - taken)
            acc += take * val
            taken += take
            if taken >= tau - 1e-15:
                break
        return acc / tau

    g_low = fill(v, q)
    g_high = fill(v[::-1], q[::-1])
    return float(g_low), float(g_high)


def write_typed_csv(ts: TypedSample, path: str) -> None:
    """Write a TypedSample in the CLI ingestion schema plus latent columns.

    Floats are written with repr so a round trip through ``ingest`` restores
    them exactly; output is written atomically.
    """
    ts._require_latents()
    data = ts.data
    d = data.d if data.d is not None else (data.xs >= data.cutoff).astype(float)
    tmp = f"{path}.tmp"
    with open(tmp, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(TYPED_CSV_COLUMNS)
        for i in range(data.n):
            writer.writerow(
                [
                    repr(float(data.xs[i])),
                    repr(float(data.ys[i])),
                    int(d[i]),
                    repr(float(ts.x_star[i])),
                    int(ts.manipulated[i]),
                    int(ts.t_type[i]),
                ]
            )
    os.replace(tmp, path)


def read_typed_csv(path: str, cutoff: float = CUTOFF,
                   y_low: float | None = None, y_high: float | None = None) -> TypedSample:
    """Read back a file produced by :func:`write_typed_csv`."""
    rows = {name: [] for name in TYPED_CSV_COLUMNS}
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        missing = [c for c in TYPED_CSV_COLUMNS if c not in (reader.fieldnames or ())]
        if missing:
            raise MissingLatents(f"typed CSV lacks columns {missing}")
        for record in reader:
            for name in TYPED_CSV_COLUMNS:
                rows[name].append(float(record[name]))
    data = Dataset(
        xs=np.array(rows["x"]),
        ys=np.array(rows["y"]),
        cutoff=cutoff,
        y_low=y_low,
        y_high=y_high,
        d=np.array(rows["d"]),
    )
    return TypedSample(
        data=data,
        x_star=np.array(rows["x_star"]),
        manipulated=np.array(rows["manipulated"], dtype=bool),
        t_type=np.array(rows["t_type"], dtype=np.int8),
    )
