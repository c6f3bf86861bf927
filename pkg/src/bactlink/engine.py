"""Trial execution: deterministic seeding, delivery detection, replication.

A trial releases n_s bacteria at the origin and steps them until the timeout;
the destination sits at (distance_l, 0) with a circular capture disk.  Every
random number is pre-drawn from a per-(seed, trial_index, bacterium) PCG64
substream before the trial loop runs, which makes trials independent of
execution order, identical across kernel backends, and replayable bit for bit.

Draw layout per bacterium (consumed positionally, never lazily): one uniform
for the initial heading angle, then an (n_steps, 4) block whose columns are
the run/tumble uniform, two normals-via-inverse-CDF uniforms for the Brownian
displacement, and the tumble reorientation angle.  A longer timeout therefore
extends a trajectory without disturbing its earlier steps.

`run_trial` drives the compiled kernel; `run_trial_reference` replays the same
trial through the plain object layer (fields/motility) and must agree bitwise,
which the test suite enforces.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np
from scipy.special import ndtri

from .errors import ConfigError
from .fields import QsPuffField
from .kernels import trial_kernel
from .motility import Bacterium, SimParams, decide_run, maybe_emit, perceived_signal
from .motility import step as motility_step

TWO_PI = 2.0 * math.pi
# smallest positive uniform stand-in: keeps ndtri finite when a draw is 0.0
MIN_UNIFORM = 2.0 ** -54


class UndefinedGainError(ConfigError):
    """Relative gain requested with a zero non-cooperative success rate."""


@dataclass(frozen=True)
class TrialConfig:
    """One trial's full specification; (seed, trial_index) pin every draw."""

    params: SimParams
    n_s: int = 100
    coop_fraction: float = 0.0
    seed: int = 0
    trial_index: int = 0

    def __post_init__(self):
        if self.n_s < 1:
            raise ConfigError(f"n_s must be >= 1, got {self.n_s}")
        if not 0.0 <= self.coop_fraction <= 1.0:
            raise ConfigError(f"coop_fraction must be in [0,1], got {self.coop_fraction}")
        if self.seed < 0 or self.trial_index < 0:
            raise ConfigError("seed and trial_index must be >= 0")


@dataclass(frozen=True)
class TrialResult:
    """Delivery outcome of one trial."""

    n_s: int
    n_d: int
    n_d_coop: int
    n_d_noncoop: int
    eta: float
    eta_coop: Optional[float]  # None when the trial has no cooperators
    eta_noncoop: Optional[float]  # None when the trial has no non-cooperators
    delivery_times: tuple  # ms, in bacterium-id order


@dataclass(eq=False)
class TrialState:
    """Final kinematic state of a trial, for diagnostics and parity tests."""

    x: np.ndarray
    y: np.ndarray
    heading_x: np.ndarray
    heading_y: np.ndarray
    delivered_step: np.ndarray  # -1 = never delivered
    puff_x: np.ndarray  # active (unpruned) puffs, insertion order
    puff_y: np.ndarray
    puff_t: np.ndarray
    puff_q: np.ndarray
    n_emitted: int


@dataclass(eq=False)
class AggregateResult:
    """Mean success rate with normal-approximation 95% CIs over trials."""

    mean_eta: float
    ci95_eta: float
    mean_eta_coop: Optional[float]
    ci95_eta_coop: Optional[float]
    mean_eta_noncoop: Optional[float]
    ci95_eta_noncoop: Optional[float]
    trials: int
    etas: np.ndarray = field(repr=False)
    etas_coop: Optional[np.ndarray] = field(repr=False, default=None)
    etas_noncoop: Optional[np.ndarray] = field(repr=False, default=None)


@dataclass(eq=False)
class TrialDraws:
    """All randomness for one trial, pre-drawn per bacterium."""

    u: np.ndarray  # (n_s, n_steps) run/tumble uniforms
    noise_x: np.ndarray  # (n_s, n_steps) Brownian displacements, sigma-scaled
    noise_y: np.ndarray
    fresh_hx: np.ndarray  # (n_s, n_steps) tumble reorientation headings
    fresh_hy: np.ndarray
    init_hx: np.ndarray  # (n_s,)
    init_hy: np.ndarray


def cooperator_mask(n_s: int, coop_fraction: float) -> np.ndarray:
    """Boolean mask with round(coop_fraction * n_s) cooperators, lowest ids."""
    n_coop = int(round(coop_fraction * n_s))
    mask = np.zeros(n_s, dtype=np.bool_)
    mask[:n_coop] = True
    return mask


def trial_draws(params: SimParams, n_s: int, seed: int, trial_index: int) -> TrialDraws:
    """Pre-draw every random number the trial will consume."""
    n_steps = params.n_steps
    u = np.empty((n_s, n_steps))
    noise_x = np.empty((n_s, n_steps))
    noise_y = np.empty((n_s, n_steps))
    fresh_hx = np.empty((n_s, n_steps))
    fresh_hy = np.empty((n_s, n_steps))
    init_hx = np.empty(n_s)
    init_hy = np.empty(n_s)
    for n in range(n_s):
        g = np.random.Generator(np.random.PCG64(np.random.SeedSequence((seed, trial_index, n))))
        theta0 = TWO_PI * g.random()
        init_hx[n] = np.cos(theta0)
        init_hy[n] = np.sin(theta0)
        block = g.random((n_steps, 4))
        u[n] = block[:, 0]
        z1 = block[:, 1].copy()
        z2 = block[:, 2].copy()
        z1[z1 == 0.0] = MIN_UNIFORM
        z2[z2 == 0.0] = MIN_UNIFORM
        noise_x[n] = params.sigma_b * ndtri(z1)
        noise_y[n] = params.sigma_b * ndtri(z2)
        ang = TWO_PI * block[:, 3]
        fresh_hx[n] = np.cos(ang)
        fresh_hy[n] = np.sin(ang)
    return TrialDraws(u, noise_x, noise_y, fresh_hx, fresh_hy, init_hx, init_hy)


def _max_puffs(params: SimParams, n_coop: int) -> int:
    # each cooperator emits at most once per refractory window (>= one step)
    if n_coop == 0 or params.q_emit <= 0.0:
        return 1
    window = max(params.emit_refractory, params.dt)
    return n_coop * (int(params.timeout / window) + 2)


def _result_from(delivered_step: np.ndarray, coop: np.ndarray, dt: float,
                 n_s: int) -> TrialResult:
    delivered = delivered_step >= 0
    n_d = int(np.count_nonzero(delivered))
    n_d_coop = int(np.count_nonzero(delivered & coop))
    n_d_noncoop = n_d - n_d_coop
    n_coop = int(np.count_nonzero(coop))
    n_noncoop = n_s - n_coop
    times = tuple(float(s) * dt for s in delivered_step[delivered])
    return TrialResult(
        n_s=n_s,
        n_d=n_d,
        n_d_coop=n_d_coop,
        n_d_noncoop=n_d_noncoop,
        eta=n_d / n_s,
        eta_coop=(n_d_coop / n_coop) if n_coop else None,
        eta_noncoop=(n_d_noncoop / n_noncoop) if n_noncoop else None,
        delivery_times=times,
    )


def run_trial(cfg: TrialConfig, *, backend: Optional[str] = None,
              return_state: bool = False):
    """Run one trial on the selected kernel backend.

    Returns a TrialResult, or (TrialResult, TrialState) with return_state.
    Identical cfg gives a bit-identical result on every backend.
    """
    p = cfg.params
    draws = trial_draws(p, cfg.n_s, cfg.seed, cfg.trial_index)
    coop = cooperator_mask(cfg.n_s, cfg.coop_fraction)
    n_s = cfg.n_s
    mp = _max_puffs(p, int(np.count_nonzero(coop)))
    px = np.zeros(mp)
    py = np.zeros(mp)
    pt = np.zeros(mp)
    pq = np.zeros(mp)
    pa = np.zeros(mp)  # per-step scratch: puff amplitude and exponent scale
    pb = np.zeros(mp)
    x = np.zeros(n_s)
    y = np.zeros(n_s)
    hx = np.zeros(n_s)
    hy = np.zeros(n_s)
    delivered_step = np.full(n_s, -1, dtype=np.int64)
    kern = trial_kernel(backend)
    n_emitted, n_active = kern(
        draws.u, draws.noise_x, draws.noise_y, draws.fresh_hx, draws.fresh_hy,
        draws.init_hx, draws.init_hy, coop,
        p.dt, p.step_size, p.sense_threshold, p.p_hi, p.p_lo, p.w_q, p.q_emit,
        p.emit_refractory, p.emit_pause, p.distance_l, p.c0, p.lam,
        p.capture_radius * p.capture_radius, p.d_q, p.tau0, p.epsilon_prune,
        px, py, pt, pq, pa, pb, x, y, hx, hy, delivered_step)
    result = _result_from(delivered_step, coop, p.dt, n_s)
    if not return_state:
        return result
    state = TrialState(x, y, hx, hy, delivered_step,
                       px[:n_active].copy(), py[:n_active].copy(),
                       pt[:n_active].copy(), pq[:n_active].copy(), n_emitted)
    return result, state


def run_trial_reference(cfg: TrialConfig, *, return_state: bool = False):
    """Replay a trial through the plain object layer (fields + motility).

    Slow path used to cross-check the kernel: consumes the same pre-drawn
    randomness in the same order and must reproduce run_trial bit for bit.
    """
    p = cfg.params
    draws = trial_draws(p, cfg.n_s, cfg.seed, cfg.trial_index)
    coop = cooperator_mask(cfg.n_s, cfg.coop_fraction)
    chemo = p.chemo_field()
    qs = p.qs_field()
    dest_x = p.distance_l
    cap2 = p.capture_radius * p.capture_radius
    n_s = cfg.n_s
    n_emitted = 0
    delivered_step = np.full(n_s, -1, dtype=np.int64)
    chem_prev = np.empty(n_s)
    bacteria = []
    for n in range(n_s):
        b = Bacterium(id=n, pos=np.zeros(2),
                      heading=np.array([draws.init_hx[n], draws.init_hy[n]]),
                      cooperator=bool(coop[n]))
        b.s_prev = perceived_signal(b, chemo, qs, 0.0, p)
        chem_prev[n] = chemo.at(b.pos)
        dx = b.pos[0] - dest_x
        dy = b.pos[1]
        if dx * dx + dy * dy <= cap2:
            b.delivered = True
            b.delivery_time = 0.0
            delivered_step[n] = 0
        bacteria.append(b)

    for step_i in range(1, p.n_steps + 1):
        t = step_i * p.dt
        # everyone senses the field as it stood at the start of the step;
        # puffs emitted below land in qs and are first sensed next step
        qs_sense = QsPuffField(d_q=p.d_q, tau0=p.tau0,
                               epsilon_prune=p.epsilon_prune,
                               puffs=list(qs.puffs))
        for n, b in enumerate(bacteria):
            if b.delivered:
                continue
            s = perceived_signal(b, chemo, qs_sense, t, p)
            chi = decide_run(s, b.s_prev, float(draws.u[n, step_i - 1]), p)
            b.s_prev = s
            motility_step(b, chi,
                          np.array([draws.noise_x[n, step_i - 1],
                                    draws.noise_y[n, step_i - 1]]),
                          np.array([draws.fresh_hx[n, step_i - 1],
                                    draws.fresh_hy[n, step_i - 1]]), p)
            dx = b.pos[0] - dest_x
            dy = b.pos[1]
            if dx * dx + dy * dy <= cap2:
                b.delivered = True
                b.delivery_time = t
                delivered_step[n] = step_i
                continue
            if b.cooperator and p.q_emit > 0.0:
                c_now = chemo.at(b.pos)
                if maybe_emit(b, c_now, chem_prev[n], t, qs, p):
                    n_emitted += 1
                chem_prev[n] = c_now
        qs.prune(t)

    result = _result_from(delivered_step, coop, p.dt, n_s)
    if not return_state:
        return result
    state = TrialState(
        x=np.array([b.pos[0] for b in bacteria]),
        y=np.array([b.pos[1] for b in bacteria]),
        heading_x=np.array([b.heading[0] for b in bacteria]),
        heading_y=np.array([b.heading[1] for b in bacteria]),
        delivered_step=delivered_step,
        puff_x=np.array([q.origin[0] for q in qs.puffs]),
        puff_y=np.array([q.origin[1] for q in qs.puffs]),
        puff_t=np.array([q.t_emit for q in qs.puffs]),
        puff_q=np.array([q.q for q in qs.puffs]),
        n_emitted=n_emitted)
    return result, state


def _mean(values) -> float:
    return math.fsum(values) / len(values)


def _ci95(values: np.ndarray) -> float:
    if len(values) < 2:
        return 0.0
    return float(1.96 * np.std(values, ddof=1) / math.sqrt(len(values)))


def run_replicated(template: TrialConfig, trials: int, *, jobs: int = 1,
                   backend: Optional[str] = None) -> AggregateResult:
    """Run `trials` independent trials (trial_index 0..trials-1) and aggregate.

    The reduction is ordered by trial_index, so the aggregate is independent
    of `jobs`; threads share the nogil kernel.
    """
    if trials < 1:
        raise ConfigError(f"trials must be >= 1, got {trials}")
    cfgs = [replace(template, trial_index=i) for i in range(trials)]
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(lambda c: run_trial(c, backend=backend), cfgs))
    else:
        results = [run_trial(c, backend=backend) for c in cfgs]

    etas = np.array([r.eta for r in results])
    agg = AggregateResult(
        mean_eta=_mean([r.eta for r in results]),
        ci95_eta=_ci95(etas),
        mean_eta_coop=None, ci95_eta_coop=None,
        mean_eta_noncoop=None, ci95_eta_noncoop=None,
        trials=trials, etas=etas)
    if results[0].eta_coop is not None:
        agg.etas_coop = np.array([r.eta_coop for r in results])
        agg.mean_eta_coop = _mean([r.eta_coop for r in results])
        agg.ci95_eta_coop = _ci95(agg.etas_coop)
    if results[0].eta_noncoop is not None:
        agg.etas_noncoop = np.array([r.eta_noncoop for r in results])
        agg.mean_eta_noncoop = _mean([r.eta_noncoop for r in results])
        agg.ci95_eta_noncoop = _ci95(agg.etas_noncoop)
    return agg


def relative_gain(eta_cc: float, eta_nc: float) -> float:
    """Relative gain of cooperation, (eta_cc - eta_nc) / eta_nc."""
    if eta_nc <= 0.0:
        raise UndefinedGainError(
            f"relative gain undefined for non-cooperative rate {eta_nc}")
    return (eta_cc - eta_nc) / eta_nc


def relative_gain_ci(coop: AggregateResult, noncoop: AggregateResult):
    """(gain, 95% CI half-width) comparing two arms' mean success rates.

    Delta-method propagation treating the arms as independent; with common
    random numbers across arms the true CI is narrower, so this is
    conservative.
    """
    m_cc = coop.mean_eta
    m_nc = noncoop.mean_eta
    gain = relative_gain(m_cc, m_nc)
    half = math.sqrt(coop.ci95_eta ** 2 / m_nc ** 2
                     + m_cc ** 2 * noncoop.ci95_eta ** 2 / m_nc ** 4)
    return gain, half
