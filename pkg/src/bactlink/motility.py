"""Per-step run-and-tumble kinematics and the run/tumble decision rule.

Position update per step:

    pos(t) = pos(t-1) + step_size * heading * chi + noise

where chi is 1 (run) or 0 (tumble), heading is the unit velocity direction,
and noise is the Brownian displacement for the step.  A tumble replaces the
heading with a fresh uniformly random direction; a run keeps it.  The chi
decision follows the temporal gradient of the perceived signal: run with
probability p_hi while the signal is rising faster than sense_threshold,
p_lo otherwise (ties fall to p_lo).

All operations are pure given explicit inputs; randomness (uniform draw,
noise vector, fresh heading) is passed in by the caller, which is what
makes trials replayable bit for bit.
"""

import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .errors import ConfigError
from .fields import ChemoField, QsPuffField


@dataclass(frozen=True)
class SimParams:
    """All trial-level physical and behavioral constants.

    Lengths in micrometers, times in milliseconds, concentrations in uM
    (chemo) or arbitrary signal units (QS).
    """

    dt: float = 10.0  # time step (ms)
    timeout: float = 1000.0  # trial duration T (ms)
    step_size: float = 0.55  # run displacement per step (um)
    sigma_b: float = 0.05  # Brownian per-axis std dev per step (um)
    p_hi: float = 0.95  # run probability, rising signal
    p_lo: float = 0.25  # run probability otherwise
    sense_threshold: float = 0.01  # minimum signal rise treated as "increasing"
    w_q: float = 0.04  # QS weight in the perceived signal
    q_emit: float = 1.0  # puff quantity (0 disables emission)
    emit_refractory: float = 30.0  # min time between emissions per bacterium (ms)
    emit_pause: float = 1.5  # secretion time after each emission (ms, 0 = free)
    capture_radius: float = 1.0  # delivery disk radius around destination (um)
    d_q: float = 100.0  # QS diffusion coefficient (um^2/s)
    tau0: float = 10.0  # QS singularity-regularization offset (ms)
    epsilon_prune: float = 1e-6  # QS puff prune threshold (signal units)
    c0: float = 10.0  # chemoattractant density at the destination (uM)
    lam: float = 10.0  # chemoattractant decay length (um)
    distance_l: float = 20.0  # source-destination separation (um)

    def __post_init__(self):
        if self.dt <= 0.0:
            raise ConfigError(f"dt must be > 0, got {self.dt}")
        if self.timeout < self.dt:
            raise ConfigError(f"timeout must be >= dt, got {self.timeout}")
        steps = self.timeout / self.dt
        if abs(steps - round(steps)) > 1e-9:
            raise ConfigError(f"timeout/dt must be integral, got {steps}")
        if not 0.0 <= self.p_lo <= self.p_hi <= 1.0:
            raise ConfigError(f"need 0 <= p_lo <= p_hi <= 1, got {self.p_lo}, {self.p_hi}")
        for name in ("step_size", "sigma_b", "w_q", "q_emit", "emit_refractory",
                     "emit_pause", "sense_threshold", "epsilon_prune", "c0",
                     "distance_l"):
            if getattr(self, name) < 0.0:
                raise ConfigError(f"{name} must be >= 0, got {getattr(self, name)}")
        for name in ("capture_radius", "d_q", "tau0", "lam"):
            if getattr(self, name) <= 0.0:
                raise ConfigError(f"{name} must be > 0, got {getattr(self, name)}")

    @property
    def n_steps(self) -> int:
        return round(self.timeout / self.dt)

    def with_overrides(self, **kw) -> "SimParams":
        return replace(self, **kw)

    def chemo_field(self) -> ChemoField:
        """Destination-anchored chemoattractant field for these parameters."""
        return ChemoField(source=(self.distance_l, 0.0), c0=self.c0, lam=self.lam)

    def qs_field(self) -> QsPuffField:
        """Fresh empty QS field for these parameters."""
        return QsPuffField(d_q=self.d_q, tau0=self.tau0,
                           epsilon_prune=self.epsilon_prune)


@dataclass
class Bacterium:
    """State of one bacterium within a trial."""

    id: int
    pos: np.ndarray  # (2,) float64, um
    heading: np.ndarray  # (2,) float64, unit length
    cooperator: bool
    s_prev: float = 0.0  # last perceived signal
    last_emit: Optional[float] = None  # time of last puff (ms)
    secreting_ms: float = 0.0  # remaining secretion time (ms)
    delivered: bool = False
    delivery_time: Optional[float] = None  # ms

    def __post_init__(self):
        self.pos = np.asarray(self.pos, dtype=np.float64)
        self.heading = np.asarray(self.heading, dtype=np.float64)
        norm = math.sqrt(self.heading[0] ** 2 + self.heading[1] ** 2)
        if abs(norm - 1.0) > 1e-9:
            raise ConfigError(f"heading must be unit length, got norm {norm}")


def perceived_signal(b: Bacterium, chemo: ChemoField, qs: QsPuffField,
                     t: float, params: SimParams) -> float:
    """Combined signal at the bacterium's position: chemo + w_q * QS.

    Identical for cooperators and non-cooperators; in a population without
    emitters the QS term is simply zero.
    """
    c = chemo.at(b.pos)
    return c + params.w_q * qs.at(b.pos, t)


def decide_run(s_now: float, s_prev: float, u: float, params: SimParams) -> int:
    """Run/tumble decision chi from the temporal signal gradient.

    Returns 1 (run) with probability p_hi when the signal rose by more than
    sense_threshold since the previous step, else with probability p_lo.
    Ties and falls always use p_lo.  `u` is the caller's uniform [0,1) draw.
    """
    p = params.p_hi if (s_now - s_prev) > params.sense_threshold else params.p_lo
    return 1 if u < p else 0


def step(b: Bacterium, chi: int, noise: np.ndarray, fresh_heading: np.ndarray,
         params: SimParams) -> Bacterium:
    """Advance one bacterium by one step; returns the mutated bacterium.

    Run (chi=1): displace by step_size along the current heading, keep it.
    Tumble (chi=0): replace the heading with fresh_heading.  Brownian noise
    is added in either case.  While the bacterium is secreting (after an
    emission) the run displacement is reduced pro rata by the fraction of
    the step spent on secretion; heading and decision are unaffected.  The
    update order (scaled run displacement, then noise) matches the trial
    kernel exactly.
    """
    if b.delivered:
        raise ConfigError(f"bacterium {b.id} is delivered and frozen")
    speed = 1.0
    if b.secreting_ms > 0.0:
        sec = b.secreting_ms if b.secreting_ms < params.dt else params.dt
        speed = 1.0 - sec / params.dt
        b.secreting_ms = b.secreting_ms - sec
    if chi:
        b.pos = b.pos + (params.step_size * speed) * b.heading
    else:
        b.heading = np.asarray(fresh_heading, dtype=np.float64)
    b.pos = b.pos + noise
    return b


def maybe_emit(b: Bacterium, chemo_now: float, chemo_prev: float, t: float,
               qs: QsPuffField, params: SimParams) -> bool:
    """Emit a QS puff at the bacterium's position if its chemo reading rose.

    Emission requires a strictly increasing chemoattractant reading and an
    elapsed refractory period since the bacterium's previous puff.  Only
    cooperators emit, and q_emit = 0 disables emission entirely (used to
    null the cooperative machinery).  Emission is individually costly:
    synthesizing the signal occupies the emitter for emit_pause ms, during
    which its run displacement is suppressed pro rata (the public-goods
    cost that free-riders avoid).  Returns True iff a puff was emitted.
    """
    if not b.cooperator or params.q_emit <= 0.0:
        return False
    if chemo_now > chemo_prev and (b.last_emit is None
                                   or t - b.last_emit >= params.emit_refractory):
        qs.emit(b.pos, t, params.q_emit)
        b.last_emit = t
        b.secreting_ms = params.emit_pause
        return True
    return False
