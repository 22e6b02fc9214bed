"""Recursive volume of distilled |psi_k> states and of Z_k gates built from them.

A level that must output error ``p_out`` consumes ``n_inputs(k)`` rotations
Z_k, each teleported from a lower-level |psi_k>; half the time a Z_{k-1}
correction is needed, a quarter of the time Z_{k-2}, and so on. Every level
picks the smallest code distance whose logical failure fits within the
fraction ``epsilon / (1 + epsilon)`` of its output error. Recursion stops
once the required error is no better than raw state injection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping, Sequence

import numpy as np

from . import error_model as em
from .exceptions import Infeasible
from .geometry import v_k

MAX_LEVELS = 20


def eps_grid(lo=1e-4, hi=1e7, per_decade=4):
    """Log-spaced epsilon values from ``lo`` to ``hi`` inclusive."""
    if not 0 < lo <= hi:
        raise ValueError("need 0 < lo <= hi")
    decades = math.log10(hi / lo)
    n = int(round(decades * per_decade)) + 1
    return tuple(float(e) for e in np.logspace(math.log10(lo), math.log10(hi), n))


DEFAULT_EPS_GRID = eps_grid()  # 45 points, 4 per decade


@dataclass(frozen=True)
class LevelPlan:
    k: int
    p_out: float
    p_in: float
    p_s: float
    d: int
    inv_p0: float
    volume_pp: int
    volume_qr: float
    total_qr: float
    # (weight, child) for j = k down to 1; child None means injected, free
    children: tuple[tuple[float, LevelPlan | None], ...] = field(repr=False)

    def levels(self):
        """Depth-first walk over every distinct node of the plan tree."""
        yield self
        for _, child in self.children:
            if child is not None:
                yield from child.levels()

    def to_dict(self):
        return {
            "k": self.k,
            "p_out": self.p_out,
            "p_in": self.p_in,
            "p_s": self.p_s,
            "d": self.d,
            "inv_p0": self.inv_p0,
            "volume_pp": self.volume_pp,
            "volume_qr": self.volume_qr,
            "total_qr": self.total_qr,
            "children": [
                {"weight": w, "plan": None if c is None else c.to_dict()}
                for w, c in self.children
            ],
        }


@dataclass(frozen=True)
class ChainPlan:
    root: LevelPlan | None
    epsilon: float
    total_qr: float

    def levels(self):
        return () if self.root is None else self.root.levels()

    def to_dict(self):
        return {
            "epsilon": self.epsilon,
            "total_qr": self.total_qr,
            "root": None if self.root is None else self.root.to_dict(),
        }


@dataclass(frozen=True)
class CostReport:
    """Cheapest way found to implement one Z_k gate to a target error."""

    method: str  # "distillation" or "sequence"
    k: int
    p_target: float
    p_g: float
    total_qr: float
    parameters: dict

    def to_dict(self, full=True):
        params = {}
        for key, value in self.parameters.items():
            if hasattr(value, "to_dict"):
                if full:
                    params[key] = value.to_dict()
            elif key == "chains":
                if full:
                    params[key] = [
                        {"j": j, "weight": w, "chain": c.to_dict()} for j, w, c in value
                    ]
            else:
                params[key] = value
        return {
            "method": self.method,
            "k": self.k,
            "p_target": self.p_target,
            "p_g": self.p_g,
            "total_qr": self.total_qr,
            "parameters": params,
        }


def choose_distance(volume_pp, p_g, budget, params: em.PhysicalParams) -> int:
    """Smallest allowed distance keeping ``volume_pp`` plumbing pieces under ``budget``."""
    if budget <= 0 or volume_pp <= 0:
        raise ValueError("budget and volume must be positive")
    if 50 * p_g >= 1:
        raise Infeasible(f"p_g={p_g} gives no logical error suppression")
    for d in params.allowed_distances:
        if volume_pp * em.plumbing_failure(d, p_g) <= budget:
            return d
    raise Infeasible(f"no distance <= {params.d_max} meets budget {budget:.3g}")


@lru_cache(maxsize=1 << 18)
def _level(k, p_out, params, epsilon, depth):
    if p_out >= em.injection_error(params.p_g):
        return None
    if depth > MAX_LEVELS:
        raise Infeasible(f"|psi_{k}> chain does not terminate within {MAX_LEVELS} levels")
    p_in = em.pin_required(p_out, k, epsilon)
    if p_in <= p_out:
        # at or above the distillation threshold; the chain can only diverge
        raise Infeasible(f"|psi_{k}> distillation cannot reach {p_out:.3g} (above threshold)")
    if p_in >= 0.5:
        raise Infeasible(f"|psi_{k}> would need input error {p_in:.3g} >= 0.5")
    p_s = em.p_s_effective(p_in, k)
    vol = v_k(k)
    d = choose_distance(vol, params.p_g, epsilon * p_out / (1 + epsilon), params)
    inv_p0 = 1.0 / em.success_prob_floor(p_s, k)
    children = []
    inputs = 0.0
    for j in range(k, 0, -1):
        weight = 2.0 ** (j - k)
        child = _level(j, p_in, params, epsilon, depth + 1)
        children.append((weight, child))
        if child is not None:
            inputs += weight * child.total_qr
    volume_qr = em.qubit_rounds_per_plumbing(d) * vol
    total = inv_p0 * (volume_qr + em.n_inputs(k) * inputs)
    return LevelPlan(k, p_out, p_in, p_s, d, inv_p0, vol, volume_qr, total, tuple(children))


def state_cost(k, p_out, params: em.PhysicalParams, epsilon) -> ChainPlan:
    """Average qubits-rounds to distill one |psi_k> with error ``p_out``."""
    if not 0 < p_out < 1:
        raise ValueError("p_out must lie in (0, 1)")
    if not 1 <= k <= em.K_MAX:
        raise ValueError(f"k must lie in 1..{em.K_MAX}")
    root = _level(k, float(p_out), params, float(epsilon), 1)
    return ChainPlan(root, float(epsilon), 0.0 if root is None else root.total_qr)


def gate_cost_unequal(k, targets: Mapping[int, float], p_gate, params, epsilon) -> CostReport:
    """Gate cost when each |psi_j> may be distilled to its own error.

    ``targets[j]`` is the output error of the |psi_j> states; the weighted
    sum over the corrective cascade must not exceed ``p_gate``.
    """
    if set(targets) != set(range(1, k + 1)):
        raise ValueError(f"targets must cover j = 1..{k}")
    spent = sum(targets[j] / 2 ** (k - j) for j in targets)
    if spent > p_gate * (1 + 1e-12):
        raise ValueError(f"weighted target sum {spent:.6g} exceeds gate error {p_gate:.6g}")
    chains = []
    total = 0.0
    for j in range(k, 0, -1):
        weight = 2.0 ** (j - k)
        chain = state_cost(j, targets[j], params, epsilon)
        chains.append((j, weight, chain))
        total += weight * chain.total_qr
    return CostReport(
        "distillation", k, p_gate, params.p_g, total,
        {"epsilon": float(epsilon), "chains": tuple(chains),
         "distances": distances_of(chains)},
    )


def gate_cost(k, p_gate, params: em.PhysicalParams, epsilon) -> CostReport:
    """Qubits-rounds to apply one Z_k with error ``p_gate``, epsilon fixed."""
    if p_gate <= 0:
        raise ValueError("p_gate must be positive")
    per_state = p_gate / em.p_s_effective(1.0, k)
    return gate_cost_unequal(k, {j: per_state for j in range(1, k + 1)}, p_gate, params, epsilon)


def distances_of(chains):
    """Code distances of every level, depth-first from the highest |psi_j>."""
    return [lvl.d for _, _, chain in chains for lvl in chain.levels()]


def optimize_epsilon(k, p_gate, params, sweep_grid: Sequence[float] = DEFAULT_EPS_GRID) -> CostReport:
    """Cheapest ``gate_cost`` over the epsilon grid; ties go to the smaller epsilon."""
    if not sweep_grid:
        raise ValueError("sweep grid is empty")
    best = None
    reasons = []
    for eps in sorted(sweep_grid):
        try:
            report = gate_cost(k, p_gate, params, eps)
        except Infeasible as exc:
            reasons.append(str(exc))
            continue
        if best is None or report.total_qr < best.total_qr:
            best = report
    if best is None:
        raise Infeasible(reasons[-1] if reasons else "no feasible epsilon")
    return best


@dataclass(frozen=True)
class TableCell:
    p_out: float
    k: int
    report: CostReport | None
    reason: str = ""

    @property
    def feasible(self):
        return self.report is not None


def table_distill(params, k_range, p_out_range, sweep_grid=DEFAULT_EPS_GRID):
    """One cell per (p_out, k), rows in the order given; infeasible cells kept."""
    if not k_range or not p_out_range:
        raise ValueError("ranges must be non-empty")
    cells = []
    for p_out in p_out_range:
        for k in k_range:
            try:
                cells.append(TableCell(p_out, k, optimize_epsilon(k, p_out, params, sweep_grid)))
            except Infeasible as exc:
                cells.append(TableCell(p_out, k, None, str(exc)))
    return cells


STANDARD_P_OUT = tuple(10.0**-e for e in range(5, 19))
