"""Seeded fuzzing of the identity and bound suites.

Every trial draws its randomness from a seed derived from (master_seed, trial index)
alone, so the report does not depend on how trials are scheduled.
"""
from __future__ import annotations

import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from . import matrixfile
from . import numerics as nx
from .blocks import assemble, nonneg_numerical_radius
from .catalog import BOUND_TOL, evaluate_bound, get_spec, registry
from .core import (CompatibleOperator, MetricSpace, compatible, is_a_selfadjoint, is_a_unitary,
                   is_compatible, make_space, zm_sup)
from .errors import BadRank, DimensionMismatch, ShkitError

DEFAULT_SPREAD = 1e4
STRESS_SPREAD = 1e8
STRESS_TOL = 1e-6
LAMBDA_GRID = (0.0, 0.25, 0.5, 0.75, 1.0)
N_RANDOM_LAMBDA = 3


class UnknownIdentity(ShkitError, KeyError):
    def __str__(self):
        return ValueError.__str__(self)


# --- generators --------------------------------------------------------------

def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def _cgauss(rng, shape) -> np.ndarray:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def haar_unitary(k: int, seed) -> np.ndarray:
    Z = _cgauss(_rng(seed), (k, k))
    Q, R = np.linalg.qr(Z)
    d = np.diagonal(R)
    return Q * (d / np.abs(d))


def gen_metric(n: int, r: int, seed, spread: float = DEFAULT_SPREAD) -> MetricSpace:
    """PSD metric of rank r with range eigenvalues log-uniform over a window of width ``spread``."""
    if not (1 <= r <= n):
        raise BadRank(f"need 1 <= rank <= dim, got rank={r}, dim={n}")
    rng = _rng(seed)
    V = haar_unitary(n, rng)
    half = 0.5 * np.log10(spread)
    lam = 10.0 ** rng.uniform(-half, half, size=r)
    Vr = V[:, :r]
    A = (Vr * lam) @ Vr.conj().T
    space = make_space(0.5 * (A + A.conj().T))
    if space.rank != r:
        raise BadRank(f"generated metric has pseudo-rank {space.rank}, wanted {r}")
    return space


def _from_blocks(space: MetricSpace, X, Y, Z) -> np.ndarray:
    """V (X 0; Y Z) V^* with V = [V_r, V_0]; this pattern is exactly T N(A) inside N(A)."""
    r, k = space.rank, space.dim - space.rank
    B = np.zeros((space.dim, space.dim), dtype=complex)
    B[:r, :r] = X
    if k:
        B[r:, :r] = Y
        B[r:, r:] = Z
    V = np.hstack([space.range_basis, space.null_basis])
    return V @ B @ V.conj().T


def _free_blocks(space, rng):
    r, k = space.rank, space.dim - space.rank
    return _cgauss(rng, (k, r)), _cgauss(rng, (k, k))


def gen_compatible(space: MetricSpace, seed, scale: float = 1.0) -> CompatibleOperator:
    rng = _rng(seed)
    X = _cgauss(rng, (space.rank, space.rank))
    Y, Z = _free_blocks(space, rng)
    return compatible(space, scale * _from_blocks(space, X, Y, Z))


def gen_from_compression(space: MetricSpace, C, seed, null_block: bool = True) -> CompatibleOperator:
    """A compatible operator whose compression is the given r x r matrix C.

    X = L^{-1/2} C L^{1/2}; the N(A) rows (Y, Z) are Gaussian, or Y = 0 when
    ``null_block`` is False.
    """
    rng = _rng(seed)
    C = np.asarray(C, dtype=complex)
    if C.shape != (space.rank, space.rank):
        raise DimensionMismatch(f"compression must be {space.rank}x{space.rank}, got {C.shape}")
    s = np.sqrt(space.eigenvalues)
    X = (C / s[:, None]) * s[None, :]
    Y, Z = _free_blocks(space, rng)
    if not null_block:
        Y = np.zeros_like(Y)
    return compatible(space, _from_blocks(space, X, Y, Z))


def gen_a_unitary(space: MetricSpace, seed) -> CompatibleOperator:
    """Compression is a Haar unitary W, with the block pattern (W' 0; 0 Z)."""
    rng = _rng(seed)
    return gen_from_compression(space, haar_unitary(space.rank, rng), rng, null_block=False)


def gen_a_selfadjoint(space: MetricSpace, seed, scale: float = 1.0) -> CompatibleOperator:
    """Hermitian compression G, so A T = V (L^{1/2} G L^{1/2} 0; 0 0) V^* is Hermitian."""
    rng = _rng(seed)
    G = _cgauss(rng, (space.rank, space.rank))
    return gen_from_compression(space, scale * 0.5 * (G + G.conj().T), rng)


def trial_seed(master_seed: int, trial: int) -> int:
    ss = np.random.SeedSequence(master_seed, spawn_key=(trial,))
    return int(ss.generate_state(1, np.uint64)[0])


def _log_scale(rng) -> float:
    return float(10.0 ** rng.uniform(-1.0, 1.0))


@dataclass
class TrialOperands:
    space: MetricSpace
    T: CompatibleOperator
    S: CompatibleOperator
    P: CompatibleOperator
    Q: CompatibleOperator
    R: CompatibleOperator
    S4: CompatibleOperator  # the S of a P, Q, R, S quadruple
    U: CompatibleOperator
    H: CompatibleOperator
    M: np.ndarray  # entrywise nonnegative real matrix
    lambdas: tuple


def gen_trial(n: int, r: int, seed, spread: float = DEFAULT_SPREAD,
              zero_operands: bool = False) -> TrialOperands:
    rng = _rng(seed)
    space = gen_metric(n, r, rng, spread)
    ops = [gen_compatible(space, rng, _log_scale(rng)) for _ in range(6)]
    U = gen_a_unitary(space, rng)
    H = gen_a_selfadjoint(space, rng, _log_scale(rng))
    k = int(rng.integers(2, 6))
    M = rng.uniform(0.0, 1.0, size=(k, k)) * _log_scale(rng)
    lambdas = LAMBDA_GRID + tuple(float(x) for x in rng.uniform(0.0, 1.0, size=N_RANDOM_LAMBDA))
    if zero_operands:
        ops = [space.zero()] * 6
        H = space.zero()
        M = np.zeros_like(M)
    return TrialOperands(space, *ops, U, H, M, lambdas)


# --- identities --------------------------------------------------------------

def rel(a: float, b: float) -> float:
    return abs(a - b) / (1.0 + max(abs(a), abs(b)))


def mat_rel(X, Y) -> float:
    X = X.T if isinstance(X, CompatibleOperator) else X
    Y = Y.T if isinstance(Y, CompatibleOperator) else Y
    return nx.max_abs(X - Y) / (1.0 + max(nx.max_abs(X), nx.max_abs(Y)))


def _diez(o):
    T = o.T
    n2 = T.norm ** 2
    return max(rel((T.sharp @ T).norm, n2), rel((T @ T.sharp).norm, n2), rel(T.sharp.norm ** 2, n2))


def _involution(o):
    T, sp = o.T, o.space
    return max(mat_rel(T.sharp.sharp.sharp, T.sharp),
               mat_rel(T.sharp.sharp, sp.projector @ T.T @ sp.projector))


def _zm(o):
    w = o.T.omega
    return max(rel(zm_sup(o.space, o.T, "re"), w), rel(zm_sup(o.space, o.T, "im"), w))


def _ll2020(o):
    H = o.H
    a, b, c = H.norm, H.omega, H.radius
    return max(rel(a, b), rel(b, c), rel(a, c))


def _lem100_i(o):
    T, S = o.T, o.S
    return rel(assemble(o.space, T, S, S, T).omega, max((T + S).omega, (T - S).omega))


def _lem100_ii(o):
    T, S = o.T, o.S
    return rel(assemble(o.space, T, -S, S, T).omega, max((T + 1j * S).omega, (T - 1j * S).omega))


def _lemma1_i(o):
    T, S = o.T, o.S
    return rel(assemble(o.space, T, None, None, S).omega, max(T.omega, S.omega))


def _lemma1_ii(o):
    T, S = o.T, o.S
    target = max(T.norm, S.norm)
    return max(rel(assemble(o.space, T, None, None, S).norm, target),
               rel(assemble(o.space, None, T, S, None).norm, target))


def _lemma1_iii(o):
    B = assemble(o.space, o.P, o.Q, o.R, o.S4)
    return mat_rel(B.op.sharp, B.block_sharp().assembled)


def _p4200(o):
    return rel(nx.numerical_radius(o.M), nonneg_numerical_radius(o.M))


def _generators(o):
    sp = o.space
    ok = (all(is_compatible(sp, X.T) for X in (o.T, o.S, o.P, o.Q, o.R, o.S4, o.H))
          and is_a_unitary(sp, o.U) and is_a_selfadjoint(sp, o.H))
    return 0.0 if ok else 1.0


IDENTITIES: dict[str, Callable[[TrialOperands], float]] = {
    "diez": _diez,
    "involution": _involution,
    "product_rule": lambda o: mat_rel((o.T @ o.S).sharp, o.S.sharp @ o.T.sharp),
    "zm": _zm,
    "ll2020": _ll2020,
    "commut": lambda o: rel((o.T @ o.S).radius, (o.S @ o.T).radius),
    "weak": lambda o: rel((o.U.sharp @ o.T @ o.U).omega, o.T.omega),
    "a5so": lambda o: rel((o.T.sharp @ o.S).norm, (o.S.sharp @ o.T).norm),
    "lem100_i": _lem100_i,
    "lem100_ii": _lem100_ii,
    "lemma1_i": _lemma1_i,
    "lemma1_ii": _lemma1_ii,
    "lemma1_iii": _lemma1_iii,
    "p4200": _p4200,
    "sharp_omega": lambda o: rel(o.T.sharp.omega, o.T.omega),
    "projected_omega": lambda o: rel(
        compatible(o.space, o.space.projector @ o.T.T @ o.space.projector).omega, o.T.omega),
    "generators": _generators,
}


def identity_ids() -> tuple[str, ...]:
    return tuple(IDENTITIES)


def check_identity(identity_id: str, operands: TrialOperands) -> float:
    try:
        fn = IDENTITIES[identity_id]
    except KeyError:
        raise UnknownIdentity(f"unknown identity id {identity_id!r}") from None
    return float(fn(operands))


# --- bound operands ----------------------------------------------------------

def bound_operands(bound_id: str, o: TrialOperands) -> tuple:
    spec = get_spec(bound_id)
    if bound_id == "cor100_vs_kk2020":
        return o.P, o.Q, o.P, o.Q  # R = P, S = Q forces QR = SP
    if spec.roles == ("T", "S"):
        return o.T, o.S
    pool = {"T": o.T, "P": o.P, "Q": o.Q, "R": o.R, "S": o.S4}
    return tuple(pool[role] for role in spec.roles)


def bound_params(bound_id: str, o: TrialOperands) -> list[dict]:
    spec = get_spec(bound_id)
    if "lam" in spec.params:
        return [{"lam": lam} for lam in o.lambdas]
    if "sign" in spec.params:
        return [{"sign": 1}, {"sign": -1}]
    return [{}]


# --- suite -------------------------------------------------------------------

@dataclass(frozen=True)
class TrialConfig:
    dim: int
    rank: int
    trials: int
    master_seed: int = 0
    tol: float = BOUND_TOL
    bound_ids: tuple[str, ...] | None = None  # None means every registered bound
    identity_ids: tuple[str, ...] | None = None  # None means every identity
    stress: bool = False
    zero_operands: bool = False

    def __post_init__(self):
        if not (1 <= self.rank <= self.dim):
            raise BadRank(f"need 1 <= rank <= dim, got rank={self.rank}, dim={self.dim}")
        if self.trials < 1:
            raise ShkitError(f"trials must be at least 1, got {self.trials}")
        if not (0 <= self.master_seed < 2 ** 64):
            raise ShkitError("master_seed must fit in 64 unsigned bits")
        for b in self.bound_ids or ():
            get_spec(b)
        for i in self.identity_ids or ():
            if i not in IDENTITIES:
                raise UnknownIdentity(f"unknown identity id {i!r}")

    @property
    def spread(self) -> float:
        return STRESS_SPREAD if self.stress else DEFAULT_SPREAD

    @property
    def effective_tol(self) -> float:
        return max(self.tol, STRESS_TOL) if self.stress else self.tol

    def selected_bounds(self) -> tuple[str, ...]:
        if self.bound_ids is None:
            return tuple(s.bound_id for s in registry())
        return tuple(self.bound_ids)

    def selected_identities(self) -> tuple[str, ...]:
        return identity_ids() if self.identity_ids is None else tuple(self.identity_ids)


def _encode_ops(roles, ops) -> dict:
    return {role: matrixfile.to_dict(X.T) for role, X in zip(roles, ops)}


def run_trial(config: TrialConfig, t: int) -> dict:
    """One trial: a plain dict so it can cross process boundaries."""
    seed = trial_seed(config.master_seed, t)
    out = {"trial": t, "bounds": {}, "identities": {}, "counterexamples": [], "errors": []}
    tol = config.effective_tol
    try:
        o = gen_trial(config.dim, config.rank, seed, config.spread, config.zero_operands)
    except Exception as exc:  # recorded, never fatal
        out["errors"].append({"trial": t, "trial_seed": seed, "id": "generate", "error": repr(exc)})
        return out
    for iid in config.selected_identities():
        try:
            res = check_identity(iid, o)
        except Exception as exc:
            out["errors"].append({"trial": t, "trial_seed": seed, "id": iid, "error": repr(exc)})
            continue
        out["identities"][iid] = res
        if not res <= tol:
            out["counterexamples"].append({
                "kind": "identity", "id": iid, "trial": t, "trial_seed": seed, "residual": res,
                "dim": config.dim, "rank": config.rank, "spread": config.spread,
                "metric": matrixfile.to_dict(o.space.A)})
    for bid in config.selected_bounds():
        spec = get_spec(bid)
        rows = []
        for params in bound_params(bid, o):
            ops = bound_operands(bid, o)
            try:
                res = evaluate_bound(o.space, bid, ops, params, tol)
            except Exception as exc:
                out["errors"].append({"trial": t, "trial_seed": seed, "id": bid, "error": repr(exc)})
                continue
            rows.append((res.lhs, res.rhs, res.slack, res.holds))
            if not res.holds:
                out["counterexamples"].append({
                    "kind": "bound", "id": bid, "trial": t, "trial_seed": seed,
                    "params": res.params, "lhs": res.lhs, "rhs": res.rhs, "slack": res.slack,
                    "metric": matrixfile.to_dict(o.space.A),
                    "operands": _encode_ops(spec.roles, ops)})
        out["bounds"][bid] = rows
    return out


def _workers() -> int:
    env = os.environ.get("SHKIT_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def _ratio(lhs: float, rhs: float) -> float:
    return 1.0 if rhs == 0.0 else lhs / rhs


@dataclass
class VerificationReport:
    config: dict
    bounds: dict
    identities: dict
    counterexamples: list
    errors: list
    wall_time: float = field(default=0.0, compare=False)

    @property
    def total_violations(self) -> int:
        return sum(b["violations"] for b in self.bounds.values())

    @property
    def identity_failures(self) -> int:
        return sum(i["failures"] for i in self.identities.values())

    @property
    def ok(self) -> bool:
        return self.total_violations == 0 and self.identity_failures == 0 and not self.errors

    def as_dict(self) -> dict:
        """Everything except wall_time, which would break byte-identical reruns."""
        return {"config": self.config, "bounds": self.bounds, "identities": self.identities,
                "counterexamples": self.counterexamples, "errors": self.errors}

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True, indent=2, allow_nan=False) + "\n"


def _aggregate(config: TrialConfig, results: list[dict], wall: float) -> VerificationReport:
    tol = config.effective_tol
    bounds = {}
    for bid in config.selected_bounds():
        rows = [row for res in results for row in res["bounds"].get(bid, ())]
        ratios = np.array([_ratio(l, r) for l, r, _, _ in rows]) if rows else np.zeros(0)
        q = np.quantile(ratios, [0.5, 0.9, 0.99]) if rows else [None] * 3
        bounds[bid] = {
            "trials": sum(1 for res in results if bid in res["bounds"]),
            "evaluations": len(rows),
            "violations": sum(1 for row in rows if not row[3]),
            "min_slack": min((row[2] for row in rows), default=None),
            "q50": None if q[0] is None else float(q[0]),
            "q90": None if q[1] is None else float(q[1]),
            "q99": None if q[2] is None else float(q[2]),
        }
    identities = {}
    for iid in config.selected_identities():
        vals = [res["identities"][iid] for res in results if iid in res["identities"]]
        identities[iid] = {
            "trials": len(vals),
            "failures": sum(1 for v in vals if not v <= tol),
            "max_residual": max(vals, default=None),
        }
    cfg = asdict(config)
    for key in ("bound_ids", "identity_ids"):
        cfg[key] = "all" if cfg[key] is None else list(cfg[key])
    cfg["effective_tol"] = tol
    cfg["spread"] = config.spread
    return VerificationReport(
        config=cfg,
        bounds=bounds,
        identities=identities,
        counterexamples=[c for res in results for c in res["counterexamples"]],
        errors=[e for res in results for e in res["errors"]],
        wall_time=wall,
    )


def run_suite(config: TrialConfig, workers: int | None = None) -> VerificationReport:
    start = time.perf_counter()
    workers = _workers() if workers is None else max(1, workers)
    idx = range(config.trials)
    if workers > 1 and config.trials > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run_trial, [config] * config.trials, idx,
                                    chunksize=max(1, config.trials // (4 * workers))))
    else:
        results = [run_trial(config, t) for t in idx]
    return _aggregate(config, results, time.perf_counter() - start)
