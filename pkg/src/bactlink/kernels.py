"""Hot trial loop, compiled with numba when available.

The kernel below is written once as plain scalar Python and either executed
as-is (backend "python") or wrapped in numba.njit (backend "numba").  Both
backends consume identical pre-drawn random arrays and restrict themselves
to math.exp / math.sqrt, which numba compiles to the same libm calls CPython
uses, so the two backends produce bit-identical trajectories.  The default
backend comes from the BACTLINK_BACKEND environment variable ("numba" or
"python"); unset means numba when importable, else python.

All mutable trial state (positions, headings, delivery steps, puff buffers)
is passed in as preallocated arrays so the caller can inspect it afterwards
without numba boxing overhead.
"""

import math
import os

import numpy as np

from .errors import ConfigError

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

ENV_BACKEND = "BACTLINK_BACKEND"
MS_PER_S = 1e-3


def _trial_kernel(u, noise_x, noise_y, fresh_hx, fresh_hy, init_hx, init_hy,
                  coop, dt, step_size, sense_thr, p_hi, p_lo, w_q, q_emit,
                  refractory, emit_pause, dest_x, c0, lam, cap2, d_q, tau0,
                  eps_prune, px, py, pt, pq, pa, pb, x, y, hx, hy,
                  delivered_step):
    """Run one full trial; returns (puffs emitted, puffs still active).

    Per-bacterium draw arrays are indexed [n, step-1]: u for the run/tumble
    decision, noise_* for the Brownian displacement, fresh_h* for the tumble
    reorientation.  Each step proceeds in phases: every bacterium senses the
    QS field as it stood at the start of the step (puffs emitted during the
    step become visible from the next step on, identically for everyone),
    then decides, moves, and - cooperators only - may emit.  Bacteria are
    processed in id order, so the puff list order is deterministic.
    Delivery freezes a bacterium at the step where it first enters the
    capture disk; delivered_step holds that step index (-1 while in flight).
    """
    n = u.shape[0]
    n_steps = u.shape[1]
    s_prev = np.empty(n)
    chem_prev = np.empty(n)
    last_emit = np.empty(n)
    secreting_ms = np.zeros(n)
    n_puffs = 0
    n_emitted = 0

    for i in range(n):
        x[i] = 0.0
        y[i] = 0.0
        hx[i] = init_hx[i]
        hy[i] = init_hy[i]
        delivered_step[i] = -1
        last_emit[i] = -1.0e30
        # signal at the release point, time 0: QS field starts empty
        dx = x[i] - dest_x
        dy = y[i]
        r = math.sqrt(dx * dx + dy * dy)
        c = (c0 * lam) / (lam + r)
        s_prev[i] = c + w_q * 0.0
        chem_prev[i] = c
        if dx * dx + dy * dy <= cap2:
            delivered_step[i] = 0

    for step in range(1, n_steps + 1):
        t = step * dt
        # puffs present at step start; emissions below extend past n_sense
        n_sense = n_puffs
        for j in range(n_sense):
            tau_s = (t - pt[j] + tau0) * MS_PER_S
            four_dt = 4.0 * d_q * tau_s
            pa[j] = pq[j] / (math.pi * four_dt)
            pb[j] = 1.0 / four_dt
        for i in range(n):
            if delivered_step[i] >= 0:
                continue
            # sense the combined signal at the current position
            dx = x[i] - dest_x
            dy = y[i]
            r = math.sqrt(dx * dx + dy * dy)
            c = (c0 * lam) / (lam + r)
            acc = 0.0
            for j in range(n_sense):
                if pt[j] > t:
                    continue
                ddx = x[i] - px[j]
                ddy = y[i] - py[j]
                r2 = ddx * ddx + ddy * ddy
                acc = acc + pa[j] * math.exp(-(r2 * pb[j]))
            s = c + w_q * acc
            # run/tumble decision from the temporal gradient
            if s - s_prev[i] > sense_thr:
                chi = u[i, step - 1] < p_hi
            else:
                chi = u[i, step - 1] < p_lo
            s_prev[i] = s
            # secretion drains swim time pro rata within the step
            speed = 1.0
            if secreting_ms[i] > 0.0:
                sec = secreting_ms[i] if secreting_ms[i] < dt else dt
                speed = 1.0 - sec / dt
                secreting_ms[i] = secreting_ms[i] - sec
            if chi:
                disp = step_size * speed
                x[i] = x[i] + disp * hx[i]
                y[i] = y[i] + disp * hy[i]
            else:
                hx[i] = fresh_hx[i, step - 1]
                hy[i] = fresh_hy[i, step - 1]
            x[i] = x[i] + noise_x[i, step - 1]
            y[i] = y[i] + noise_y[i, step - 1]
            dx = x[i] - dest_x
            dy = y[i]
            if dx * dx + dy * dy <= cap2:
                delivered_step[i] = step
                continue
            if coop[i] and q_emit > 0.0:
                c_now = (c0 * lam) / (lam + math.sqrt(dx * dx + dy * dy))
                if c_now > chem_prev[i] and t - last_emit[i] >= refractory:
                    px[n_puffs] = x[i]
                    py[n_puffs] = y[i]
                    pt[n_puffs] = t
                    pq[n_puffs] = q_emit
                    n_puffs += 1
                    n_emitted += 1
                    last_emit[i] = t
                    secreting_ms[i] = emit_pause
                chem_prev[i] = c_now
        # drop puffs whose peak concentration has decayed below threshold
        if n_puffs > 0 and eps_prune > 0.0:
            k = 0
            for j in range(n_puffs):
                tau_s = (t - pt[j] + tau0) * MS_PER_S
                four_dt = 4.0 * d_q * tau_s
                if pq[j] / (math.pi * four_dt) >= eps_prune:
                    px[k] = px[j]
                    py[k] = py[j]
                    pt[k] = pt[j]
                    pq[k] = pq[j]
                    k += 1
            n_puffs = k

    return n_emitted, n_puffs


_trial_kernel_python = _trial_kernel
if HAVE_NUMBA:
    _trial_kernel_numba = numba.njit(cache=True, nogil=True)(_trial_kernel)


def available_backends() -> tuple:
    """Backends usable in this process, fastest first."""
    return ("numba", "python") if HAVE_NUMBA else ("python",)


def resolve_backend(name=None) -> str:
    """Pick the kernel backend: explicit arg > BACTLINK_BACKEND env > default."""
    b = name or os.environ.get(ENV_BACKEND) or ("numba" if HAVE_NUMBA else "python")
    b = b.strip().lower()
    if b not in ("numba", "python"):
        raise ConfigError(f"unknown backend {b!r}, expected 'numba' or 'python'")
    if b == "numba" and not HAVE_NUMBA:
        raise ConfigError("backend 'numba' requested but numba is not importable")
    return b


def trial_kernel(backend=None):
    """The trial-loop callable for the resolved backend."""
    if resolve_backend(backend) == "numba":
        return _trial_kernel_numba
    return _trial_kernel_python
