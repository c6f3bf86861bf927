"""Scalar concentration fields sensed by the bacteria.

Two fields exist: a steady-state chemoattractant anchored at the destination
nanomachine, and a time-varying quorum-sensing (QS) field assembled from
point puffs emitted by cooperating bacteria.  Both are evaluated with plain
scalar math in a fixed order so that results are bit-identical to the
accelerated trial kernel, which inlines the same expressions.
"""

import math
from dataclasses import dataclass, field

from .errors import ConfigError

MS_PER_S = 1e-3  # ms -> s conversion used for diffusion times


@dataclass(frozen=True)
class ChemoField:
    """Steady-state chemoattractant c(r) = c0 * lam / (lam + r).

    Bounded by c0 at the source and strictly decreasing with distance r
    from `source` (the destination nanomachine position, micrometers).
    """

    source: tuple[float, float]
    c0: float = 10.0
    lam: float = 10.0

    def __post_init__(self):
        if self.c0 < 0.0:
            raise ConfigError(f"c0 must be >= 0, got {self.c0}")
        if self.lam <= 0.0:
            raise ConfigError(f"lam must be > 0, got {self.lam}")

    def at(self, pos) -> float:
        """Concentration at `pos` (any 2-sequence of floats), in uM."""
        dx = float(pos[0]) - self.source[0]
        dy = float(pos[1]) - self.source[1]
        r = math.sqrt(dx * dx + dy * dy)
        return (self.c0 * self.lam) / (self.lam + r)


@dataclass(frozen=True)
class QsPuff:
    """One emitted quantum of cooperative signal."""

    origin: tuple[float, float]
    t_emit: float  # ms
    q: float  # signal units

    def __post_init__(self):
        if self.q <= 0.0:
            raise ConfigError(f"puff quantity must be > 0, got {self.q}")
        if self.t_emit < 0.0:
            raise ConfigError(f"t_emit must be >= 0, got {self.t_emit}")


@dataclass
class QsPuffField:
    """Superposition of freely diffusing 2-D Gaussian puffs.

    A puff emitted at time t_emit contributes
        q / (4 pi d_q tau) * exp(-r^2 / (4 d_q tau)),  tau = (t - t_emit + tau0) in s,
    where tau0 > 0 regularizes the t -> t_emit singularity.  Evaluation sums
    puffs sequentially in insertion order; `prune` drops puffs whose peak
    (the r = 0 value) has decayed below epsilon_prune.
    """

    d_q: float = 100.0  # um^2/s
    tau0: float = 10.0  # ms
    epsilon_prune: float = 1e-6
    puffs: list[QsPuff] = field(default_factory=list)

    def __post_init__(self):
        if self.d_q <= 0.0:
            raise ConfigError(f"d_q must be > 0, got {self.d_q}")
        if self.tau0 <= 0.0:
            raise ConfigError(f"tau0 must be > 0, got {self.tau0}")
        if self.epsilon_prune < 0.0:
            raise ConfigError(f"epsilon_prune must be >= 0, got {self.epsilon_prune}")

    def emit(self, origin, t: float, q: float) -> None:
        """Append one puff at `origin` with emission time `t` (ms)."""
        self.puffs.append(QsPuff((float(origin[0]), float(origin[1])), t, q))

    def at(self, pos, t: float) -> float:
        """Total QS concentration at `pos` and time `t` (ms).

        Only puffs with t_emit <= t contribute.  The accumulation order and
        the exact arithmetic (including the reciprocal-multiply form of the
        exponent) match the trial kernel bit for bit.
        """
        x = float(pos[0])
        y = float(pos[1])
        acc = 0.0
        for p in self.puffs:
            if p.t_emit > t:
                continue
            tau_s = (t - p.t_emit + self.tau0) * MS_PER_S
            four_dt = 4.0 * self.d_q * tau_s
            a = p.q / (math.pi * four_dt)
            b = 1.0 / four_dt
            dx = x - p.origin[0]
            dy = y - p.origin[1]
            r2 = dx * dx + dy * dy
            acc = acc + a * math.exp(-(r2 * b))
        return acc

    def prune(self, t: float) -> int:
        """Drop puffs whose peak concentration at time `t` is < epsilon_prune.

        Returns the number removed.  Retained puffs keep their order.
        """
        kept = []
        for p in self.puffs:
            tau_s = (t - p.t_emit + self.tau0) * MS_PER_S
            four_dt = 4.0 * self.d_q * tau_s
            if p.q / (math.pi * four_dt) >= self.epsilon_prune:
                kept.append(p)
        removed = len(self.puffs) - len(kept)
        self.puffs = kept
        return removed

    def __len__(self) -> int:
        return len(self.puffs)
