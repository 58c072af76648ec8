"""Transmit covariance optimization for the sum secrecy rate.

With the receive beamformer and antenna positions held fixed, the
(unclamped) sum secrecy rate is a difference of two concave log-sum
functions of the information covariance ``W`` and artificial-noise
covariance ``V``:

    ssr(W, V) = gain(W, V) - loss(W, V)

where every term is ``log2`` of an affine expression
``Tr(W Mw) + Tr(V Mv) + offset`` with rank-1 PSD coefficients built from
the effective channels. Each outer round linearizes the concave ``loss``
around the incumbent, which globally overestimates it, so maximizing the
concave surrogate under the power/PSD constraints never decreases the true
objective. The inner maximization runs projected gradient ascent with
Armijo backtracking; the projection onto
``{W >= 0, V >= 0, Tr(W + V) <= budget}`` is exact (per-block
eigendecomposition plus a capped-simplex projection of the joint
eigenvalue vector). Rank-1 beamformers are recovered from the leading
eigenpair, reporting the second-to-first eigenvalue ratio as the
relaxation tightness.
"""

from dataclasses import dataclass

import numpy as np

from .config import SystemConfig
from .metrics import ChannelSet

LN2 = float(np.log(2.0))


class InnerSolverError(RuntimeError):
    """Inner maximization exceeded its iteration cap; carries the last iterate."""

    def __init__(self, message, last=None):
        super().__init__(message)
        self.last = last


@dataclass(frozen=True)
class LinkPowers:
    """Position-independent constants entering the rate expressions."""

    p_ul: float
    ul_dl_gain: float    # |uplink user -> downlink user channel|^2
    ul_eve_gain: float   # |uplink user -> eavesdropper channel|^2
    noise_bs: float
    noise_dl: float
    noise_eve: float

    @classmethod
    def from_scenario(cls, scenario, config: SystemConfig) -> "LinkPowers":
        return cls(
            p_ul=config.p_ul,
            ul_dl_gain=abs(scenario.gains.ul_dl) ** 2,
            ul_eve_gain=abs(scenario.gains.ul_eve) ** 2,
            noise_bs=config.noise_bs,
            noise_dl=config.noise_dl,
            noise_eve=config.noise_eve,
        )


@dataclass(frozen=True)
class EffectiveChannels:
    """Channels seen by the covariance subproblem after receive combining.

    ``ul_effective`` is the combined uplink scalar channel,
    ``si_effective`` the residual self-interference channel folded through
    the receive beamformer; ``*_outer`` are the rank-1 Hermitian matrices
    the trace forms use.
    """

    ul_effective: complex
    si_effective: np.ndarray
    dl: np.ndarray
    eve: np.ndarray
    si_outer: np.ndarray
    dl_outer: np.ndarray
    eve_outer: np.ndarray


def effective_channels(ch: ChannelSet, w_r, rho) -> EffectiveChannels:
    si_eff = np.sqrt(rho) * (ch.si.conj().T @ w_r)
    return EffectiveChannels(
        ul_effective=complex(np.vdot(w_r, ch.ul_bs)),
        si_effective=si_eff,
        dl=ch.bs_dl,
        eve=ch.bs_eve,
        si_outer=np.outer(si_eff, si_eff.conj()),
        dl_outer=np.outer(ch.bs_dl, ch.bs_dl.conj()),
        eve_outer=np.outer(ch.bs_eve, ch.bs_eve.conj()),
    )


@dataclass(frozen=True)
class LogTerm:
    """One ``weight * log2(Tr(W on_w) + Tr(V on_v) + offset)`` summand."""

    on_w: np.ndarray | None
    on_v: np.ndarray | None
    offset: float
    weight: float = 1.0


def _real_trace_product(X, M):
    return np.einsum("ij,ji->", X, M).real


def _terms_value(terms, W, V) -> float:
    total = 0.0
    for term in terms:
        arg = term.offset
        if term.on_w is not None:
            arg = arg + _real_trace_product(W, term.on_w)
        if term.on_v is not None:
            arg = arg + _real_trace_product(V, term.on_v)
        if arg <= 0.0:
            raise ValueError(f"non-positive log argument {arg!r}; inputs are corrupt")
        total += term.weight * np.log2(arg)
    return float(total)


def _terms_gradients(terms, W, V, n):
    grad_w = np.zeros((n, n), dtype=complex)
    grad_v = np.zeros((n, n), dtype=complex)
    for term in terms:
        arg = term.offset
        if term.on_w is not None:
            arg = arg + _real_trace_product(W, term.on_w)
        if term.on_v is not None:
            arg = arg + _real_trace_product(V, term.on_v)
        coef = term.weight / (LN2 * arg)
        if term.on_w is not None:
            grad_w += coef * term.on_w
        if term.on_v is not None:
            grad_v += coef * term.on_v
    return grad_w, grad_v


@dataclass(frozen=True)
class DcObjective:
    """Difference-of-concave sum-rate objective: value = gain - loss."""

    gain_terms: tuple
    loss_terms: tuple
    size: int

    def gain(self, W, V) -> float:
        return _terms_value(self.gain_terms, W, V)

    def loss(self, W, V) -> float:
        return _terms_value(self.loss_terms, W, V)

    def value(self, W, V) -> float:
        return self.gain(W, V) - self.loss(W, V)

    def gain_gradients(self, W, V):
        return _terms_gradients(self.gain_terms, W, V, self.size)

    def loss_gradients(self, W, V):
        return _terms_gradients(self.loss_terms, W, V, self.size)

    def linearized(self, W, V, anchor) -> float:
        """gain(W, V) minus the tangent of loss at ``anchor``.

        Equals the true objective at the anchor and lower-bounds it
        everywhere (the tangent overestimates the concave loss).
        """
        a_w, a_v = anchor
        loss0 = self.loss(a_w, a_v)
        g_w, g_v = self.loss_gradients(a_w, a_v)
        lin = loss0 + _herm_inner(g_w, W - a_w) + _herm_inner(g_v, V - a_v)
        return self.gain(W, V) - lin


def _herm_inner(A, B) -> float:
    return float(np.vdot(A, B).real)


def full_duplex_objective(chan: EffectiveChannels, pw: LinkPowers) -> DcObjective:
    ul_signal = pw.p_ul * abs(chan.ul_effective) ** 2
    ul_dl = pw.p_ul * pw.ul_dl_gain
    ul_eve = pw.p_ul * pw.ul_eve_gain
    gain = (
        LogTerm(chan.si_outer, chan.si_outer, ul_signal + pw.noise_bs),
        LogTerm(chan.dl_outer, chan.dl_outer, ul_dl + pw.noise_dl),
        LogTerm(chan.eve_outer, chan.eve_outer, pw.noise_eve),
        LogTerm(None, chan.eve_outer, ul_eve + pw.noise_eve),
    )
    loss = (
        LogTerm(chan.si_outer, chan.si_outer, pw.noise_bs),
        LogTerm(None, chan.dl_outer, ul_dl + pw.noise_dl),
        LogTerm(chan.eve_outer, chan.eve_outer, ul_eve + pw.noise_eve, weight=2.0),
    )
    return DcObjective(gain, loss, chan.dl.shape[-1])


def half_duplex_objective(chan: EffectiveChannels, pw: LinkPowers) -> DcObjective:
    """Downlink-slot objective for time-division operation.

    The uplink slot's rate does not depend on the transmit covariances, so
    only the downlink secrecy difference is optimized.
    """
    gain = (
        LogTerm(chan.dl_outer, chan.dl_outer, pw.noise_dl),
        LogTerm(None, chan.eve_outer, pw.noise_eve),
    )
    loss = (
        LogTerm(None, chan.dl_outer, pw.noise_dl),
        LogTerm(chan.eve_outer, chan.eve_outer, pw.noise_eve),
    )
    return DcObjective(gain, loss, chan.dl.shape[-1])


# -- contract-level entry points on the full-duplex objective ---------------

def ssr_gain(W, V, chan: EffectiveChannels, pw: LinkPowers) -> float:
    """Concave part whose growth raises the sum secrecy rate."""
    return full_duplex_objective(chan, pw).gain(W, V)


def ssr_loss(W, V, chan: EffectiveChannels, pw: LinkPowers) -> float:
    """Concave part whose growth lowers the sum secrecy rate."""
    return full_duplex_objective(chan, pw).loss(W, V)


def ssr_loss_gradients(W, V, chan: EffectiveChannels, pw: LinkPowers):
    """Hermitian gradients of :func:`ssr_loss` with respect to W and V."""
    return full_duplex_objective(chan, pw).loss_gradients(W, V)


def linearized_ssr(W, V, anchor, chan: EffectiveChannels, pw: LinkPowers) -> float:
    """Surrogate objective: gain minus the loss tangent taken at ``anchor``."""
    return full_duplex_objective(chan, pw).linearized(W, V, anchor)


# -- feasible-set projection -------------------------------------------------

def _project_capped_simplex(vals, budget):
    """Euclidean projection onto {x >= 0, sum(x) <= budget}."""
    if budget <= 0.0:
        return np.zeros_like(vals)
    clipped = np.maximum(vals, 0.0)
    if clipped.sum() <= budget:
        return clipped
    u = np.sort(vals)[::-1]
    excess = np.cumsum(u) - budget
    ks = np.arange(1, vals.size + 1)
    active = np.flatnonzero(u - excess / ks > 0)
    # k = 1 always qualifies exactly; an empty mask means the budget fell
    # below float resolution of the largest value
    k = int(active[-1]) + 1 if active.size else 1
    tau = excess[k - 1] / k
    out = np.maximum(vals - tau, 0.0)
    total = out.sum()
    if total > budget:  # cancellation guard: never exceed the budget
        out *= budget / total
    return out


def project_to_feasible(W, V, budget, fix_v=False):
    """Exact projection onto the PSD cones under the joint trace budget.

    Eigenvectors of each block are preserved; the stacked eigenvalue vector
    is projected onto the capped simplex. With ``fix_v`` the V block is left
    untouched and only W's eigenvalues are projected.
    """
    vals_w, vecs_w = np.linalg.eigh(0.5 * (W + W.conj().T))
    if fix_v:
        new_w = _project_capped_simplex(vals_w, budget)
        return (vecs_w * new_w) @ vecs_w.conj().T, V
    vals_v, vecs_v = np.linalg.eigh(0.5 * (V + V.conj().T))
    joint = _project_capped_simplex(np.concatenate([vals_w, vals_v]), budget)
    new_w, new_v = joint[: vals_w.size], joint[vals_w.size:]
    return (vecs_w * new_w) @ vecs_w.conj().T, (vecs_v * new_v) @ vecs_v.conj().T


# -- inner concave maximization ---------------------------------------------

def solve_inner_convex(anchor, objective: DcObjective, budget, *, fix_v=False,
                       rel_tol=1e-8, grad_tol=1e-6, max_iters=10_000):
    """Maximize the linearized objective over the feasible covariance set.

    Projected gradient ascent with Armijo backtracking along the projection
    arc; stops when the relative objective change drops below ``rel_tol`` or
    the unit-step projected-gradient residual below ``grad_tol``.
    """
    a_w, a_v = anchor
    loss0 = objective.loss(a_w, a_v)
    lg_w, lg_v = objective.loss_gradients(a_w, a_v)

    def surrogate(W, V):
        lin = loss0 + _herm_inner(lg_w, W - a_w) + _herm_inner(lg_v, V - a_v)
        return objective.gain(W, V) - lin

    W, V = project_to_feasible(a_w, a_v, budget, fix_v)
    f_cur = surrogate(W, V)
    step = None
    for _ in range(max_iters):
        g_w, g_v = objective.gain_gradients(W, V)
        g_w = g_w - lg_w
        g_v = np.zeros_like(g_v) if fix_v else g_v - lg_v

        p_w, p_v = project_to_feasible(W + g_w, V + g_v, budget, fix_v)
        residual = np.sqrt(np.linalg.norm(p_w - W) ** 2 + np.linalg.norm(p_v - V) ** 2)
        if residual <= grad_tol:
            return W, V

        gnorm = np.sqrt(np.linalg.norm(g_w) ** 2 + np.linalg.norm(g_v) ** 2)
        base = max(budget, 1e-12) / max(gnorm, 1e-12)
        if step is None:
            step = base
        # keep candidate magnitudes within ~1e3 x budget of the feasible set
        t = min(step, 1e3 * base)
        c_w, c_v, f_new = W, V, f_cur
        for _ in range(80):
            c_w, c_v = project_to_feasible(W + t * g_w, V + t * g_v, budget, fix_v)
            advance = _herm_inner(g_w, c_w - W) + _herm_inner(g_v, c_v - V)
            f_new = surrogate(c_w, c_v)
            if f_new >= f_cur + 1e-4 * advance and f_new >= f_cur:
                break
            t *= 0.5
        else:
            return W, V  # no ascent step exists at float resolution
        gained = f_new - f_cur
        W, V, f_cur = c_w, c_v, f_new
        step = t * 2.0
        if gained <= rel_tol * max(1.0, abs(f_new)):
            return W, V
    raise InnerSolverError(
        f"inner solver did not converge within {max_iters} iterations",
        last=(W, V),
    )


@dataclass
class ScaState:
    """Outcome of the successive linearization loop."""

    W: np.ndarray
    V: np.ndarray
    history: list
    n_rounds: int
    converged: bool
    iterates: list


def sca_loop(initial, objective: DcObjective, budget, *, tol, max_rounds,
             fix_v=False, solver=None) -> ScaState:
    """Re-anchor and maximize the surrogate until the true objective stalls.

    The returned history (true objective per round, including the initial
    point) is non-decreasing: each surrogate equals the objective at its
    anchor and lower-bounds it elsewhere. ``solver`` may swap in another
    inner maximizer with the :func:`solve_inner_convex` signature.
    """
    inner = solve_inner_convex if solver is None else solver
    W, V = initial
    history = [objective.value(W, V)]
    iterates = [(W, V)]
    converged = False
    rounds = 0
    for _ in range(max_rounds):
        W, V = inner((W, V), objective, budget, fix_v=fix_v)
        rounds += 1
        history.append(objective.value(W, V))
        iterates.append((W, V))
        if history[-1] - history[-2] < tol:
            converged = True
            break
    return ScaState(W=W, V=V, history=history, n_rounds=rounds,
                    converged=converged, iterates=iterates)


def rank_one_extract(W):
    """Leading-eigenpair beamformer and the relaxation tightness ratio.

    Returns ``(w, ratio)`` with ``w = sqrt(lambda_1) * u_1`` and
    ``ratio = lambda_2 / lambda_1`` (0 for the zero matrix). The vector's
    global phase is fixed by rotating its first non-negligible component to
    the positive real axis.
    """
    W = np.asarray(W)
    vals, vecs = np.linalg.eigh(0.5 * (W + W.conj().T))
    lead = max(float(vals[-1]), 0.0)
    second = max(float(vals[-2]), 0.0) if vals.size > 1 else 0.0
    ratio = second / max(lead, 1e-300)
    if lead == 0.0:
        return np.zeros(W.shape[0], dtype=complex), 0.0
    u = vecs[:, -1]
    magnitudes = np.abs(u)
    pivot = int(np.argmax(magnitudes > 1e-12 * magnitudes.max()))
    u = u * np.exp(-1j * np.angle(u[pivot]))
    return np.sqrt(lead) * u, ratio
