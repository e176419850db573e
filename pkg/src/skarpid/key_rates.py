"""Secret key agreement rates under one-way and two-way communication.

One-way rate (Alice A communicates to Bob B against eavesdropper Eve E):

    max over (K, C) of  I(B : K | C) - I(E : K | C)
                     =  H(K | E, C) - H(K | B, C)

where C ⊸ K ⊸ A ⊸ (B, E) is a Markov chain, so the search space is a pair
of row-stochastic matrices p(k|a) and p(c|k) with |K| ≤ |A| and |C| ≤ |A|².
The objective is not concave, so we run a multi-start scheme: exhaustive
deterministic corners (enumerated as set partitions, since relabeling the
K or C alphabet never changes the objective) plus seeded Dirichlet
restarts, each refined by projected gradient ascent with backtracking.

The two-way rate has no known closed form; we report the standard bracket:
the larger one-way rate from below and the intrinsic mutual information

    min over p(ē|e) of  I(A : B | Ē)

from above, minimized with the same multi-start machinery (the identity
and total-erasure channels are always among the starts, so the reported
upper bound never exceeds I(A:B|E) or I(A:B)).

All returned values are certified: the reported number is the exact
objective re-evaluated at the returned parametrization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import xlogy

from .distributions import Channel, JointDistribution, VarSpec, grouped_array
from .optim import dirichlet_rows, one_hot_rows, project_rows_onto_simplex, set_partitions
from .shannon import _check_disjoint

_LN2 = math.log(2.0)
_LOG_FLOOR = 1e-300
_MAX_BITS = 128.0  # cap on per-entry log-ratio magnitude in gradients
_CORNER_SMOOTH = 0.02
_MAX_BACKTRACKS = 40
_STALL_LIMIT = 5


# --------------------------------------------------------------------------
# configuration and result records
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class OptimizerConfig:
    """Knobs for every non-convex search in this package.

    ``restarts`` counts the random starts; deterministic corner starts are
    added on top.  Identical configs give bit-identical results.
    """

    restarts: int = 64
    seed: int = 0
    max_iters: int = 2000
    step_rule: str = "backtracking"
    convergence_tol: float = 1e-9
    result_tol: float = 1e-3

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.convergence_tol <= 0 or self.result_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")


DEFAULT_CONFIG = OptimizerConfig()


@dataclass(frozen=True)
class RateBounds:
    """Bracket on a rate; ``exact`` when the two ends agree within tolerance."""

    lower: float
    upper: float
    exact: bool

    def __post_init__(self):
        if self.lower > self.upper + 1e-9:
            raise ValueError(f"lower bound {self.lower} exceeds upper {self.upper}")

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def midpoint(self) -> float:
        return 0.5 * (self.lower + self.upper)

    def to_json_dict(self) -> dict:
        return {"lower": self.lower, "upper": self.upper, "exact": self.exact}


@dataclass(frozen=True)
class OneWayParametrization:
    """Winning (p(k|a), p(c|k)) pair of a one-way rate search."""

    k_given_a: Channel
    c_given_k: Channel

    def to_json_dict(self) -> dict:
        return {
            "k_given_a": self.k_given_a.to_json_dict(),
            "c_given_k": self.c_given_k.to_json_dict(),
        }


@dataclass(frozen=True)
class RateResult:
    """Structured outcome of one rate optimization."""

    value: float
    converged: bool
    restarts_used: int
    best_restart_index: int
    parametrization: object
    bounds: RateBounds | None = None
    components: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        out = {
            "value": self.value,
            "converged": self.converged,
            "restarts_used": self.restarts_used,
            "best_restart_index": self.best_restart_index,
            "bounds": self.bounds.to_json_dict() if self.bounds else None,
        }
        if self.parametrization is None:
            out["parametrization"] = None
        elif hasattr(self.parametrization, "to_json_dict"):
            out["parametrization"] = self.parametrization.to_json_dict()
        else:
            out["parametrization"] = self.parametrization
        if self.components:
            out["components"] = {
                k: v.to_json_dict() for k, v in self.components.items()
            }
        return out


def _composite_symbols(support) -> tuple[str, ...]:
    return tuple(",".join(sym) if sym else "·" for sym in support)


def _as_groups(d: JointDistribution, a: VarSpec, b: VarSpec, e: VarSpec):
    a_t = (a,) if isinstance(a, str) else tuple(a)
    b_t = (b,) if isinstance(b, str) else tuple(b)
    e_t = (e,) if isinstance(e, str) else tuple(e)
    if not a_t or not b_t:
        raise ValueError("A and B must be non-empty")
    _check_disjoint(a_t, b_t, e_t)
    keep = tuple(v for v in d.variables if v in set(a_t) | set(b_t) | set(e_t))
    sub = d.marginalize(keep)
    return grouped_array(sub, (a_t, b_t, e_t))


# --------------------------------------------------------------------------
# generic batched refinement loop (maximizes problem.objective)
# --------------------------------------------------------------------------


def _refine(problem, params, cfg: OptimizerConfig):
    """Projected gradient ascent with backtracking, batched over restarts.

    ``params`` is a list of row-stochastic arrays, each shaped
    (R, rows, cols).  Returns refined params, final objectives (R,) and a
    per-restart convergence flag.
    """
    params = [p.copy() for p in params]
    f = problem.objective(*params)
    n_r = f.shape[0]
    step = np.full(n_r, 0.25)
    stall = np.zeros(n_r, dtype=int)
    converged = np.zeros(n_r, dtype=bool)

    for _ in range(cfg.max_iters):
        grads = problem.gradient(*params)
        f_old = f.copy()
        accepted = converged.copy()
        for _bt in range(_MAX_BACKTRACKS):
            trials = [
                project_rows_onto_simplex(p + step[:, None, None] * g)
                for p, g in zip(params, grads)
            ]
            ft = problem.objective(*trials)
            take = (~accepted) & (ft > f + 1e-15)
            if take.any():
                for p, t in zip(params, trials):
                    p[take] = t[take]
                f[take] = ft[take]
                accepted |= take
            if accepted.all():
                break
            step = np.where(accepted, step, step * 0.5)

        delta = f - f_old
        step = np.where(delta > 0, np.minimum(step * 1.3, 16.0), step)
        stall = np.where(delta < cfg.convergence_tol, stall + 1, 0)
        converged |= (stall >= _STALL_LIMIT) | (step < 1e-13)
        if converged.all():
            break

    return params, f, converged


def _run_multistart(problem, corner_params, cfg: OptimizerConfig):
    """Corners (exact) + smoothed corners and random starts (refined).

    Returns (best_value, best_params, best_index, total_candidates,
    any_refinement_converged).  ``corner_params`` is a list of per-corner
    parameter tuples; candidate i < len(corners) is corner i, the rest are
    random restarts in seed order.
    """
    n_corner = len(corner_params)
    starts = []
    for corner in corner_params:
        starts.append(
            [
                (1.0 - _CORNER_SMOOTH) * p + _CORNER_SMOOTH / p.shape[-1]
                for p in corner
            ]
        )
    for r in range(cfg.restarts):
        rng = np.random.default_rng(cfg.seed + r)
        starts.append(problem.random_start(rng))

    stacked = [
        np.stack([s[j] for s in starts]) for j in range(len(starts[0]))
    ]
    refined, f_ref, conv = _refine(problem, stacked, cfg)

    values = f_ref.copy()
    exact_corner = np.full(values.shape[0], False)
    if n_corner:
        corner_stack = [
            np.stack([c[j] for c in corner_params]) for j in range(len(corner_params[0]))
        ]
        f_corner = problem.objective(*corner_stack)
        use_corner = f_corner >= f_ref[:n_corner]
        values[:n_corner] = np.where(use_corner, f_corner, f_ref[:n_corner])
        exact_corner[:n_corner] = use_corner

    best = int(np.argmax(values))
    if exact_corner[best]:
        best_params = [p[best] for p in corner_stack]
    else:
        best_params = [p[best] for p in refined]
    # certify: report the exact objective at the returned point
    best_value = float(problem.objective(*[p[None] for p in best_params])[0])
    return best_value, best_params, best, len(starts), bool(conv.any())


# --------------------------------------------------------------------------
# one-way rates
# --------------------------------------------------------------------------


class _OneWayProblem:
    """Batched objective/gradient for H(K|E,C) - H(K|B,C)."""

    def __init__(self, p_abe: np.ndarray):
        self.w_b = p_abe.sum(axis=2)  # p(a, b)
        self.w_e = p_abe.sum(axis=1)  # p(a, e)
        self.na = p_abe.shape[0]
        self.nk = self.na
        self.nc = self.na * self.na

    def _cond_ent_and_joint(self, w, pk, pc):
        # q[r, x, k, c] = sum_a w[a, x] pk[r, a, k] pc[r, k, c]
        rx = np.einsum("ax,rak->rxk", w, pk)
        q = rx[:, :, :, None] * pc[:, None, :, :]
        pxc = q.sum(axis=2)
        h = (-xlogy(q, q).sum(axis=(1, 2, 3)) + xlogy(pxc, pxc).sum(axis=(1, 2))) / _LN2
        return h, q, pxc, rx

    def objective(self, pk, pc):
        h_e, _, _, _ = self._cond_ent_and_joint(self.w_e, pk, pc)
        h_b, _, _, _ = self._cond_ent_and_joint(self.w_b, pk, pc)
        return h_e - h_b

    @staticmethod
    def _log_ratio(q, pxc):
        # -log2 q(k | x, c), clipped to keep corner gradients finite
        val = (
            np.log(np.maximum(pxc[:, :, None, :], _LOG_FLOOR))
            - np.log(np.maximum(q, _LOG_FLOOR))
        ) / _LN2
        return np.clip(val, 0.0, _MAX_BITS)

    def gradient(self, pk, pc):
        h_terms = []
        for w in (self.w_e, self.w_b):
            _, q, pxc, rx = self._cond_ent_and_joint(w, pk, pc)
            lr = self._log_ratio(q, pxc)
            g_pk = np.einsum("ax,rkc,rxkc->rak", w, pc, lr)
            g_pc = np.einsum("rxk,rxkc->rkc", rx, lr)
            h_terms.append((g_pk, g_pc))
        (ge_k, ge_c), (gb_k, gb_c) = h_terms
        return ge_k - gb_k, ge_c - gb_c

    def random_start(self, rng):
        return [
            dirichlet_rows(rng, (self.na, self.nk)),
            dirichlet_rows(rng, (self.nk, self.nc)),
        ]

    def corners(self) -> list[list[np.ndarray]]:
        """Deterministic (p(k|a), p(c|k)) pairs.

        Every deterministic pair is, up to relabeling, a partition of the
        A alphabet into K-blocks followed by a coarsening into C-blocks;
        enumerating those covers all corners that matter.  Kept exhaustive
        only for small alphabets; the identity/constant pairs are always
        included.
        """
        out: list[list[np.ndarray]] = []
        if self.na <= 4:
            for part_a in set_partitions(self.na):
                pk = one_hot_rows(part_a, self.nk)
                n_blocks = max(part_a) + 1
                for part_k in set_partitions(n_blocks):
                    # K symbols beyond the used blocks never fire; route to c0
                    labels_k = [
                        part_k[k] if k < n_blocks else 0 for k in range(self.nk)
                    ]
                    out.append([pk, one_hot_rows(labels_k, self.nc)])
        else:
            ident = one_hot_rows(list(range(self.na)), self.nk)
            out.append([ident, one_hot_rows([0] * self.nk, self.nc)])
            out.append([ident, one_hot_rows(list(range(self.nk)), self.nc)])
        return out


def skar_one_way_result(
    d: JointDistribution,
    a: VarSpec,
    b: VarSpec,
    e: VarSpec = (),
    cfg: OptimizerConfig = DEFAULT_CONFIG,
) -> RateResult:
    """One-way secret key agreement rate with A communicating, full record."""
    p_abe, (supp_a, supp_b, supp_e) = _as_groups(d, a, b, e)
    problem = _OneWayProblem(p_abe)
    value, params, best, used, conv = _run_multistart(problem, problem.corners(), cfg)

    if value < 0.0:
        # the constant-K scheme is always feasible and achieves exactly 0
        pk = one_hot_rows([0] * problem.na, problem.nk)
        pc = one_hot_rows([0] * problem.nk, problem.nc)
        value, params, best = 0.0, [pk, pc], -1

    a_syms = _composite_symbols(supp_a)
    k_syms = tuple(f"k{i}" for i in range(problem.nk))
    c_syms = tuple(f"c{i}" for i in range(problem.nc))
    parametrization = OneWayParametrization(
        Channel(a_syms, k_syms, params[0]),
        Channel(k_syms, c_syms, params[1]),
    )
    return RateResult(
        value=value,
        converged=conv,
        restarts_used=used,
        best_restart_index=best,
        parametrization=parametrization,
    )


def skar_one_way(
    d: JointDistribution,
    a: VarSpec,
    b: VarSpec,
    e: VarSpec = (),
    cfg: OptimizerConfig = DEFAULT_CONFIG,
) -> float:
    """One-way secret key agreement rate (A communicates), clamped at 0."""
    return skar_one_way_result(d, a, b, e, cfg).value


def evaluate_one_way_objective(
    d: JointDistribution,
    a: VarSpec,
    b: VarSpec,
    e: VarSpec,
    parametrization: OneWayParametrization,
) -> float:
    """Exact I(B:K|C) - I(E:K|C) at a given parametrization (certificate)."""
    p_abe, (supp_a, _, _) = _as_groups(d, a, b, e)
    problem = _OneWayProblem(p_abe)
    a_syms = _composite_symbols(supp_a)
    ch_k = parametrization.k_given_a
    ch_c = parametrization.c_given_k
    if tuple(ch_k.input_alphabet) != a_syms:
        raise ValueError("parametrization does not match the A support")
    pk = np.asarray(ch_k.matrix)
    pc = np.asarray(ch_c.matrix)
    return float(problem.objective(pk[None], pc[None])[0])


# --------------------------------------------------------------------------
# intrinsic mutual information
# --------------------------------------------------------------------------


class _IntrinsicProblem:
    """Batched objective/gradient for -I(A:B|Ē), Ē = channel output on E."""

    def __init__(self, p_abe: np.ndarray, n_out: int):
        self.p_abe = p_abe
        self.ne = p_abe.shape[2]
        self.nf = n_out

    def _joints(self, q):
        pabf = np.einsum("abe,ref->rabf", self.p_abe, q)
        paf = pabf.sum(axis=2)
        pbf = pabf.sum(axis=1)
        pf = paf.sum(axis=1)
        return pabf, paf, pbf, pf

    def objective(self, q):
        pabf, paf, pbf, pf = self._joints(q)
        cmi = (
            xlogy(pabf, pabf).sum(axis=(1, 2, 3))
            + xlogy(pf, pf).sum(axis=1)
            - xlogy(paf, paf).sum(axis=(1, 2))
            - xlogy(pbf, pbf).sum(axis=(1, 2))
        ) / _LN2
        return -cmi

    def gradient(self, q):
        pabf, paf, pbf, pf = self._joints(q)
        lg = lambda x: np.log(np.maximum(x, _LOG_FLOOR))
        ratio = (
            lg(pabf)
            + lg(pf)[:, None, None, :]
            - lg(paf)[:, :, None, :]
            - lg(pbf)[:, None, :, :]
        ) / _LN2
        ratio = np.clip(ratio, -_MAX_BITS, _MAX_BITS)
        grad_cmi = np.einsum("abe,rabf->ref", self.p_abe, ratio)
        return (-grad_cmi,)

    def random_start(self, rng):
        return [dirichlet_rows(rng, (self.ne, self.nf))]

    def corners(self) -> list[list[np.ndarray]]:
        out: list[list[np.ndarray]] = []
        if self.ne <= 5:
            for part in set_partitions(self.ne):
                if max(part) + 1 <= self.nf:
                    out.append([one_hot_rows(part, self.nf)])
        else:
            out.append([one_hot_rows([0] * self.ne, self.nf)])
        if self.nf >= self.ne:
            ident = [one_hot_rows(list(range(self.ne)), self.nf)]
            if not any(np.array_equal(ident[0], c[0]) for c in out):
                out.append(ident)
        return out


def intrinsic_mutual_information_result(
    d: JointDistribution,
    a: VarSpec,
    b: VarSpec,
    e: VarSpec = (),
    cfg: OptimizerConfig = DEFAULT_CONFIG,
    ebar_size: int | None = None,
) -> RateResult:
    """min over p(ē|e) of I(A:B|Ē), with the winning channel attached.

    The output alphabet defaults to the size of E's support, which is
    sufficient; ``ebar_size`` overrides it.
    """
    p_abe, (_, _, supp_e) = _as_groups(d, a, b, e)
    ne = p_abe.shape[2]
    nf = ne if ebar_size is None else int(ebar_size)
    if nf < 1:
        raise ValueError("ebar_size must be >= 1")
    problem = _IntrinsicProblem(p_abe, nf)
    neg_value, params, best, used, conv = _run_multistart(problem, problem.corners(), cfg)

    value = max(0.0, -neg_value)
    e_syms = _composite_symbols(supp_e)
    f_syms = tuple(f"e{i}" for i in range(nf))
    channel = Channel(e_syms, f_syms, params[0])
    return RateResult(
        value=value,
        converged=conv,
        restarts_used=used,
        best_restart_index=best,
        parametrization=channel,
    )


def intrinsic_mutual_information(
    d: JointDistribution,
    a: VarSpec,
    b: VarSpec,
    e: VarSpec = (),
    cfg: OptimizerConfig = DEFAULT_CONFIG,
    ebar_size: int | None = None,
) -> float:
    """Intrinsic mutual information I(A : B ↓ E)."""
    return intrinsic_mutual_information_result(d, a, b, e, cfg, ebar_size).value


def evaluate_intrinsic_objective(
    d: JointDistribution, a: VarSpec, b: VarSpec, e: VarSpec, channel: Channel
) -> float:
    """Exact I(A:B|Ē) for a given eavesdropper channel (certificate)."""
    p_abe, (_, _, supp_e) = _as_groups(d, a, b, e)
    if tuple(channel.input_alphabet) != _composite_symbols(supp_e):
        raise ValueError("channel does not match the E support")
    problem = _IntrinsicProblem(p_abe, len(channel.output_alphabet))
    q = np.asarray(channel.matrix)
    return float(-problem.objective(q[None])[0])


# --------------------------------------------------------------------------
# two-way bracket
# --------------------------------------------------------------------------


def skar_two_way_bounds_result(
    d: JointDistribution,
    a: VarSpec,
    b: VarSpec,
    e: VarSpec = (),
    cfg: OptimizerConfig = DEFAULT_CONFIG,
) -> RateResult:
    """Bracket the two-way rate: best one-way rate below, intrinsic MI above."""
    fwd = skar_one_way_result(d, a, b, e, cfg)
    bwd = skar_one_way_result(d, b, a, e, cfg)
    top = intrinsic_mutual_information_result(d, a, b, e, cfg)
    lower = max(fwd.value, bwd.value)
    upper = max(top.value, lower)  # exact evaluations guarantee order anyway
    bounds = RateBounds(lower, upper, exact=upper - lower <= cfg.result_tol)
    return RateResult(
        value=bounds.midpoint(),
        converged=fwd.converged and bwd.converged and top.converged,
        restarts_used=fwd.restarts_used + bwd.restarts_used + top.restarts_used,
        best_restart_index=-1,
        parametrization=None,
        bounds=bounds,
        components={"one_way_ab": fwd, "one_way_ba": bwd, "intrinsic": top},
    )


def skar_two_way_bounds(
    d: JointDistribution,
    a: VarSpec,
    b: VarSpec,
    e: VarSpec = (),
    cfg: OptimizerConfig = DEFAULT_CONFIG,
) -> RateBounds:
    """Lower/upper interval for the two-way secret key agreement rate."""
    return skar_two_way_bounds_result(d, a, b, e, cfg).bounds
