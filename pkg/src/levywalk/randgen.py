"""Heavy-tailed step sampling and the one-sided stable subordinator.

Everything here is driven by an explicit numpy Generator, so callers own
reproducibility. For ensemble work use stream_rng(master, stream, index):
sample index j of ensemble e always sees the same generator regardless of
how the samples are scheduled across threads.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import PathTooShort

__all__ = [
    "TailLaw",
    "SpectralMeasure",
    "SubordinatorPath",
    "stream_rng",
    "sample_pareto",
    "draw_pareto",
    "sample_direction",
    "positive_stable",
    "sample_stable_subordinator",
    "build_subordinator_path",
    "extend_subordinator_path",
    "inverse_subordinator",
]


def stream_rng(master_seed: int, stream: int, index: int) -> np.random.Generator:
    """Independent generator for sample `index` of stream `stream`.

    Stateless counter construction: the generator depends only on the
    triple, never on draw order elsewhere, so parallel schedules cannot
    change the output.
    """
    ss = np.random.SeedSequence(entropy=master_seed, spawn_key=(stream, index))
    return np.random.default_rng(ss)


@dataclass(frozen=True)
class TailLaw:
    """One-sided power tail: survival(x) = scale * (x/cutoff)^(-index) for x >= cutoff.

    index must lie in (0,1): both durations and speeds have infinite mean.
    scale is tail-constant bookkeeping; the Pareto sampler itself requires
    scale == 1 (anything else is not a distribution on [cutoff, inf)).
    """

    index: float
    scale: float = 1.0
    cutoff: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.index < 1.0:
            raise ValueError(f"index must be in (0,1), got {self.index}")
        if self.scale <= 0.0:
            raise ValueError(f"scale must be positive, got {self.scale}")
        if self.cutoff <= 0.0:
            raise ValueError(f"cutoff must be positive, got {self.cutoff}")

    def survival(self, x):
        x = np.asarray(x, dtype=float)
        return np.where(x < self.cutoff, 1.0, self.scale * (x / self.cutoff) ** (-self.index))

    @property
    def tail_constant(self):
        # c in survival(x) ~ c * x^(-index)
        return self.scale * self.cutoff**self.index

    @classmethod
    def stable_normalized(cls, index: float) -> "TailLaw":
        """Pareto law whose partial sums converge to the standard subordinator.

        cutoff = Gamma(1-index)^(-1/index) makes the tail constant equal
        1/Gamma(1-index), which is exactly what turns n^(-1/index) * sum(T_i)
        into S(t) with Laplace transform exp(-t s^index) and no extra scale.
        """
        return cls(index=index, cutoff=math.gamma(1.0 - index) ** (-1.0 / index))


def sample_pareto(law: TailLaw, u):
    """Invert the survival function at u in (0,1): cutoff * u^(-1/index)."""
    if law.scale != 1.0:
        raise ValueError("Pareto sampling requires scale == 1")
    u = np.asarray(u, dtype=float)
    if np.any(u <= 0.0) or np.any(u >= 1.0):
        raise ValueError("u must lie strictly inside (0,1)")
    out = law.cutoff * u ** (-1.0 / law.index)
    return float(out) if out.ndim == 0 else out


def draw_pareto(law: TailLaw, rng, size=None):
    # 1 - random() lies in (0,1], and u=1 maps to the support boundary.
    if law.scale != 1.0:
        raise ValueError("Pareto sampling requires scale == 1")
    return law.cutoff * (1.0 - rng.random(size)) ** (-1.0 / law.index)


class SpectralMeasure:
    """Distribution of step directions on the unit sphere in R^d.

    Either the uniform (isotropic) measure or a finite list of atoms
    (unit vector, probability). d = 1 is allowed; its "sphere" is {-1,+1}.
    """

    def __init__(self, dimension: int, vectors=None, probs=None):
        if dimension < 1:
            raise ValueError("dimension must be >= 1")
        self.dimension = int(dimension)
        if vectors is None:
            self.vectors = None
            self.probs = None
            return
        vectors = np.atleast_2d(np.asarray(vectors, dtype=float))
        probs = np.asarray(probs, dtype=float)
        if vectors.shape[0] == 0:
            raise ValueError("need at least one atom")
        if vectors.shape[1] != dimension:
            raise ValueError("atom vectors do not match dimension")
        norms = np.linalg.norm(vectors, axis=1)
        if np.any(np.abs(norms - 1.0) > 1e-12):
            raise ValueError("atom vectors must have unit norm within 1e-12")
        if np.any(probs <= 0.0) or abs(probs.sum() - 1.0) > 1e-12:
            raise ValueError("atom probabilities must be positive and sum to 1 within 1e-12")
        self.vectors = vectors
        self.probs = probs

    @classmethod
    def uniform(cls, dimension: int) -> "SpectralMeasure":
        return cls(dimension)

    @classmethod
    def atoms(cls, vectors, probs) -> "SpectralMeasure":
        vectors = np.atleast_2d(np.asarray(vectors, dtype=float))
        return cls(vectors.shape[1], vectors, probs)

    @property
    def is_uniform(self):
        return self.vectors is None

    def describe(self) -> str:
        if self.is_uniform:
            return f"uniform(d={self.dimension})"
        parts = [
            f"{p:g} @ {' '.join(repr(float(c)) for c in v)}"
            for v, p in zip(self.vectors, self.probs)
        ]
        return "atoms[" + "; ".join(parts) + "]"


def sample_direction(measure: SpectralMeasure, rng, size=None):
    """Draw unit vectors from the spectral measure. Shape (size, d), or (d,) if size is None."""
    n = 1 if size is None else int(size)
    d = measure.dimension
    if measure.is_uniform:
        if d == 1:
            out = np.where(rng.random(n) < 0.5, -1.0, 1.0)[:, None]
        else:
            g = rng.standard_normal((n, d))
            out = g / np.linalg.norm(g, axis=1, keepdims=True)
    else:
        cum = np.cumsum(measure.probs)
        idx = np.searchsorted(cum, rng.random(n) * cum[-1], side="right")
        idx = np.minimum(idx, len(cum) - 1)
        out = measure.vectors[idx]
    return out[0] if size is None else out


def positive_stable(alpha: float, rng, size=None):
    """Totally skewed positive stable variate X with E[exp(-s X)] = exp(-s^alpha).

    Kanter's construction: with U uniform on (0, pi) and W standard
    exponential,

        X = (sin(a U) / sin(U)^(1/a)) * (sin((1-a) U) / W)^((1-a)/a).
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must be in (0,1), got {alpha}")
    u = np.pi * (1.0 - rng.random(size))  # in (0, pi]; endpoint is harmless
    w = rng.standard_exponential(size)
    a = alpha
    return (np.sin(a * u) / np.sin(u) ** (1.0 / a)) * (np.sin((1.0 - a) * u) / w) ** ((1.0 - a) / a)


def sample_stable_subordinator(alpha: float, t: float, rng):
    """One draw of S(t), the subordinator with E[exp(-s S(t))] = exp(-t s^alpha)."""
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must be in (0,1), got {alpha}")
    if t < 0.0:
        raise ValueError("t must be nonnegative")
    if t == 0.0:
        return 0.0
    return t ** (1.0 / alpha) * float(positive_stable(alpha, rng))


@dataclass
class SubordinatorPath:
    """Grid skeleton of a subordinator sample path.

    cumulative[k] = S(k * delta_tau), with cumulative[0] = 0. Optional jump
    marks (speed v, direction u) per increment let the coupled spatial jump
    v * increment * u be reconstructed.
    """

    alpha: float
    delta_tau: float
    increments: np.ndarray
    cumulative: np.ndarray = field(default=None)
    mark_v: np.ndarray = None
    mark_u: np.ndarray = None

    def __post_init__(self):
        if self.cumulative is None:
            self.cumulative = np.concatenate([[0.0], np.cumsum(self.increments)])
        if np.any(self.increments <= 0.0):
            raise ValueError("increments must be strictly positive")

    @property
    def marked(self):
        return self.mark_v is not None

    @property
    def tau_max(self):
        return self.delta_tau * len(self.increments)

    def spatial_jumps(self):
        if not self.marked:
            raise ValueError("path carries no jump marks")
        return (self.mark_v * self.increments)[:, None] * self.mark_u


def build_subordinator_path(
    alpha: float,
    tau_max: float,
    delta_tau: float,
    rng,
    mark_jumps: bool = False,
    velocity_law=None,
    measure: SpectralMeasure = None,
) -> SubordinatorPath:
    """I.i.d. S(delta_tau) increments on a grid covering [0, tau_max].

    velocity_law may be a TailLaw or a plain positive float for a
    deterministic speed (degenerate diagnostic case).
    """
    if tau_max <= 0.0 or delta_tau <= 0.0 or delta_tau > tau_max:
        raise ValueError("need 0 < delta_tau <= tau_max")
    m = int(math.ceil(tau_max / delta_tau))
    inc = delta_tau ** (1.0 / alpha) * positive_stable(alpha, rng, m)
    mark_v = mark_u = None
    if mark_jumps:
        mark_v, mark_u = _draw_marks(m, rng, velocity_law, measure)
    return SubordinatorPath(alpha, delta_tau, inc, mark_v=mark_v, mark_u=mark_u)


def _draw_marks(m, rng, velocity_law, measure):
    if velocity_law is None or measure is None:
        raise ValueError("mark_jumps requires velocity_law and measure")
    if isinstance(velocity_law, TailLaw):
        v = draw_pareto(velocity_law, rng, m)
    else:
        v = float(velocity_law) * np.ones(m)
    u = sample_direction(measure, rng, m)
    return v, u


def extend_subordinator_path(path: SubordinatorPath, rng, extra_tau: float,
                             velocity_law=None, measure=None) -> SubordinatorPath:
    """Append fresh increments covering extra_tau more operational time."""
    m = int(math.ceil(extra_tau / path.delta_tau))
    inc = path.delta_tau ** (1.0 / path.alpha) * positive_stable(path.alpha, rng, m)
    mark_v = mark_u = None
    if path.marked:
        mark_v, mark_u = _draw_marks(m, rng, velocity_law, measure)
        mark_v = np.concatenate([path.mark_v, mark_v])
        mark_u = np.concatenate([path.mark_u, mark_u])
    return SubordinatorPath(
        path.alpha,
        path.delta_tau,
        np.concatenate([path.increments, inc]),
        mark_v=mark_v,
        mark_u=mark_u,
    )


def inverse_subordinator(path: SubordinatorPath, t):
    """First passage above level t, on the grid.

    Returns the smallest grid time tau with S(tau) > t (strict), i.e. the
    inverse subordinator rounded up to resolution delta_tau. Nondecreasing
    and right-continuous in t. Raises PathTooShort when the path never
    exceeds t; the caller extends and retries.
    """
    t = np.asarray(t, dtype=float)
    if np.any(t < 0.0):
        raise ValueError("t must be nonnegative")
    k = np.searchsorted(path.cumulative, t, side="right")
    if np.any(k == len(path.cumulative)):
        raise PathTooShort(f"path covers [0, {path.cumulative[-1]:g}], queried {t.max():g}")
    out = path.delta_tau * k
    return float(out) if out.ndim == 0 else out
