"""Executable catalog of A-numerical-radius bounds for operators and 2 x 2 operator matrices.

Each entry evaluates both sides of one inequality. ``lhs <= rhs`` is always the
claim: for lower bounds the bound sits in ``lhs`` and the bounded quantity in
``rhs``, so ``slack = rhs - lhs`` is nonnegative whenever the inequality holds.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from math import sqrt
from typing import Callable, Mapping

import numpy as np

from . import numerics as nx
from .blocks import assemble
from .core import CompatibleOperator, MetricSpace, compatible, im_part, re_part
from .errors import IncompatibleOperandRoles, OperandConstraint, ParamOutOfDomain, UnknownBound

BOUND_TOL = 1e-8
ROOT2_HALF = sqrt(2.0) / 2.0


@dataclass(frozen=True)
class BoundSpec:
    bound_id: str
    roles: tuple[str, ...]
    direction: str  # "upper", "lower" or "comparison"
    statement: str
    params: Mapping[str, tuple] = field(default_factory=dict)  # name -> (kind, domain, default)
    constraint: str | None = None

    def param_default(self, name):
        return self.params[name][2]


@dataclass(frozen=True)
class BoundResult:
    bound_id: str
    lhs: float
    rhs: float
    slack: float
    holds: bool
    operand_digest: str
    params: dict

    def as_dict(self) -> dict:
        return {"bound_id": self.bound_id, "lhs": self.lhs, "rhs": self.rhs, "slack": self.slack,
                "holds": self.holds, "operand_digest": self.operand_digest, "params": dict(self.params)}


LAMBDA = {"lam": ("interval", (0.0, 1.0), 0.5)}
SIGN = {"sign": ("choice", (1, -1), 1)}


# --- shared pieces ---------------------------------------------------------

def _w(X: CompatibleOperator) -> float:
    return X.omega


def _n(X: CompatibleOperator) -> float:
    return X.norm


def _w2(P, Q, R, S) -> float:
    return assemble(P.space, P, Q, R, S).omega


def _half_root(a2: float, b2: float, c: float) -> float:
    """(sqrt2/2) sqrt(a2 + b2 + sqrt((a2 - b2)^2 + 4 c^2)): norm of [[a2, c], [c, b2]] rooted."""
    return ROOT2_HALF * sqrt(a2 + b2 + sqrt((a2 - b2) ** 2 + 4.0 * c * c))


def _thm101_rhs(P, Q, R, S, lam):
    PP = P @ P.sharp
    return 0.5 * (_n(P) + 2.0 * _w(S)
                  + sqrt(_n(lam ** 2 * PP + Q @ Q.sharp))
                  + sqrt(_n((1.0 - lam) ** 2 * PP + R.sharp @ R)))


def _ineq106_rhs(P, Q, R, S, lam):
    wP = _w(P)
    return 0.5 * (wP + 2.0 * _w(S)
                  + sqrt(lam ** 2 * wP ** 2 + _n(Q) ** 2)
                  + sqrt((1.0 - lam) ** 2 * wP ** 2 + _n(R) ** 2))


def _cor_pm_rhs(P, Q, lam):
    PP = P @ P.sharp
    wP = _w(P)
    mu = wP + 0.5 * (_n(P) + sqrt(_n(lam ** 2 * PP + Q @ Q.sharp))
                     + sqrt(_n((1.0 - lam) ** 2 * PP + Q.sharp @ Q)))
    nu = 1.5 * wP + 0.5 * (sqrt(lam ** 2 * wP ** 2 + _n(Q) ** 2)
                           + sqrt((1.0 - lam) ** 2 * wP ** 2 + _n(Q) ** 2))
    return min(mu, nu)


def _them10_rhs(P, Q, R, S):
    return max(_w(P), _w(S)) + 0.5 * (_w(Q + R) + _w(Q - R))


def _them100_rhs(P, Q, R, S):
    wP, wS = _w(P), _w(S)
    off = _w(Q + R) + _w(Q - R)
    return 0.5 * (wP + wS + sqrt((wP - wS) ** 2 + off ** 2))


def _cor100_rhs(P, Q, R, S):
    a, b = _w(Q @ P), _w(S @ R)
    QR, SP = Q @ R, S @ P
    return 0.5 * (a + b) + 0.5 * sqrt((a - b) ** 2 + (_w(QR + SP) + _w(QR - SP)) ** 2)


def _kk2020_rhs(P, Q, R, S):
    a, b = _w(Q @ P), _w(S @ R)
    return 0.5 * (a + b) + 0.5 * sqrt((a - b) ** 2 + 4.0 * _n(Q @ R) * _n(S @ P))


def _ffirst_rhs(P, Q):
    return _half_root(_n(P) ** 2, _n(Q) ** 2, _n(P.sharp @ Q))


def _upper3_rhs(P, Q, R, S):
    mu = _half_root(_n(P) ** 2, _n(Q) ** 2, _n(P.sharp @ Q)) \
        + _half_root(_n(R) ** 2, _n(S) ** 2, _n(S.sharp @ R))
    nu = _half_root(_n(P) ** 2, _n(R) ** 2, _n(P @ R.sharp)) \
        + _half_root(_n(Q) ** 2, _n(S) ** 2, _n(S @ Q.sharp))
    return min(mu, nu)


def _sahoo1_lhs(P, Q):
    # the max-of-maxima form; the sum form w(P+Q)+w(P-Q) is false (P = 0, Q = I gives 1 > 1/2)
    alpha = max(_w(P + Q), _w(P - Q))
    beta = max(_w(P + 1j * Q), _w(P - 1j * Q))
    return 0.5 * max(alpha, beta)


def sahoo1_sum_form(P: CompatibleOperator, Q: CompatibleOperator) -> tuple[float, float]:
    """(bound, quantity) for the sum-form lower bound 1/2 max{w(P+Q)+w(P-Q), w(P+iQ)+w(P-iQ)}.

    Not registered: it fails, e.g. for P = 0, Q = I. Kept for the regression test.
    """
    alpha = _w(P + Q) + _w(P - Q)
    beta = _w(P + 1j * Q) + _w(P - 1j * Q)
    return 0.5 * max(alpha, beta), _w2(P, Q, P.space.zero(), P.space.zero())


def _f12(T):
    sp = T.space
    proj = compatible(sp, sp.projector)
    Re, Im = re_part(sp, T), im_part(sp, T)
    O = sp.zero()
    rhs = 2.0 * min(_w2(Re, O, Im, O), _w2(O, -1j * Im, Re, O))
    return _w(proj @ T @ proj), rhs


def _sahoo2_lhs(P, Q, R, S):
    mu = max(_w(Q + R + S + P), _w(Q + R - S - P))
    nu = max(_w(Q - R + 1j * (S + P)), _w(Q - R - 1j * (S + P)))
    return 0.5 * max(mu, nu)


def _blocks_radius(P, Q, R, S):
    return assemble(P.space, P, Q, R, S).radius, nx.spectral_radius(
        np.array([[_n(P), _n(Q)], [_n(R), _n(S)]]))


def _blocks_norm(P, Q, R, S):
    return assemble(P.space, P, Q, R, S).norm, nx.largest_singular_value(
        np.array([[_n(P), _n(Q)], [_n(R), _n(S)]]))


def _zero(X):
    return X.space.zero()


# Each evaluator takes the operands in role order plus keyword params and returns (lhs, rhs).
_EVALUATORS: dict[str, Callable] = {
    "refine1_lower": lambda T: (0.5 * _n(T), _w(T)),
    "refine1_upper": lambda T: (_w(T), _n(T)),
    "thm101": lambda P, Q, R, S, lam: (_w2(P, Q, R, S), _thm101_rhs(P, Q, R, S, lam)),
    "ineq106": lambda P, Q, R, S, lam: (_w2(P, Q, R, S), _ineq106_rhs(P, Q, R, S, lam)),
    "cor_pm_plus": lambda P, Q, lam: (_w(P + Q), _cor_pm_rhs(P, Q, lam)),
    "cor_pm_minus": lambda P, Q, lam: (_w(P - Q), _cor_pm_rhs(P, Q, lam)),
    "them10": lambda P, Q, R, S: (_w2(P, Q, R, S), _them10_rhs(P, Q, R, S)),
    "them100": lambda P, Q, R, S: (_w2(P, Q, R, S), _them100_rhs(P, Q, R, S)),
    "them100_sharper": lambda P, Q, R, S: (_them100_rhs(P, Q, R, S), _them10_rhs(P, Q, R, S)),
    "cor100": lambda P, Q, R, S: ((P @ Q + R @ S).radius, _cor100_rhs(P, Q, R, S)),
    "kk2020": lambda P, Q, R, S: ((P @ Q + R @ S).radius, _kk2020_rhs(P, Q, R, S)),
    "cor100_vs_kk2020": lambda P, Q, R, S: (_cor100_rhs(P, Q, R, S), _kk2020_rhs(P, Q, R, S)),
    "remark_qsi": lambda P, R: (
        (P + R).radius,
        0.5 * (_w(P) + _w(R)) + 0.5 * sqrt((_w(P) - _w(R)) ** 2 + (_w(P + R) + _w(P - R)) ** 2)),
    "upper3": lambda P, Q, R, S: (_w2(P, Q, R, S), _upper3_rhs(P, Q, R, S)),
    "ffirst": lambda P, Q: (_w2(P, Q, _zero(P), _zero(P)), _ffirst_rhs(P, Q)),
    "sahoo1": lambda P, Q: (_sahoo1_lhs(P, Q), _w2(P, Q, _zero(P), _zero(P))),
    "sk1": lambda T, S, sign: (_w(T @ S + sign * (S @ T.sharp)), 2.0 * _n(T) * _w(S)),
    "sahoo3": lambda P, Q: (0.5 * max(_w(P + 1j * Q), _w(P - 1j * Q)),
                            _w2(P, Q, _zero(P), _zero(P))),
    "f12": _f12,
    "lemf": lambda T, S, sign: (_w(T + sign * 1j * S), 2.0 * _w2(_zero(T), T, 1j * S, _zero(T))),
    "c2": lambda T, S: (max(_w(T + S), _w(T - S)), 2.0 * _w2(_zero(T), T, S, _zero(T))),
    "sahoo2": lambda P, Q, R, S: (_sahoo2_lhs(P, Q, R, S), _w2(P, Q, R, S)),
    "lm5": _blocks_radius,
    "lmm05": _blocks_norm,
    "kkkk2020": lambda T: (T.radius, _w(T)),
}

W2 = "wA2([[P,Q],[R,S]])"
_REGISTRY = (
    BoundSpec("refine1_lower", ("T",), "lower", "||T||_A / 2 <= w_A(T)"),
    BoundSpec("refine1_upper", ("T",), "upper", "w_A(T) <= ||T||_A"),
    BoundSpec("thm101", ("P", "Q", "R", "S"), "upper",
              f"{W2} <= (||P|| + 2 w(S) + sqrt||lam^2 PP# + QQ#|| + sqrt||(1-lam)^2 PP# + R#R||) / 2",
              LAMBDA),
    BoundSpec("ineq106", ("P", "Q", "R", "S"), "upper",
              f"{W2} <= (w(P) + 2 w(S) + sqrt(lam^2 w(P)^2 + ||Q||^2) + sqrt((1-lam)^2 w(P)^2 + ||R||^2)) / 2",
              LAMBDA),
    BoundSpec("cor_pm_plus", ("P", "Q"), "upper", "w(P + Q) <= min(mu, nu)", LAMBDA),
    BoundSpec("cor_pm_minus", ("P", "Q"), "upper", "w(P - Q) <= min(mu, nu)", LAMBDA),
    BoundSpec("them10", ("P", "Q", "R", "S"), "upper",
              f"{W2} <= max(w(P), w(S)) + (w(Q+R) + w(Q-R)) / 2"),
    BoundSpec("them100", ("P", "Q", "R", "S"), "upper",
              f"{W2} <= (w(P) + w(S) + sqrt((w(P) - w(S))^2 + (w(Q+R) + w(Q-R))^2)) / 2"),
    BoundSpec("them100_sharper", ("P", "Q", "R", "S"), "comparison", "rhs(them100) <= rhs(them10)"),
    BoundSpec("cor100", ("P", "Q", "R", "S"), "upper",
              "r(PQ+RS) <= (w(QP)+w(SR))/2 + sqrt((w(QP)-w(SR))^2 + (w(QR+SP)+w(QR-SP))^2)/2"),
    BoundSpec("kk2020", ("P", "Q", "R", "S"), "upper",
              "r(PQ+RS) <= (w(QP)+w(SR))/2 + sqrt((w(QP)-w(SR))^2 + 4 ||QR|| ||SP||)/2"),
    BoundSpec("cor100_vs_kk2020", ("P", "Q", "R", "S"), "comparison",
              "rhs(cor100) <= rhs(kk2020)", constraint="QR = SP"),
    BoundSpec("remark_qsi", ("P", "R"), "upper",
              "r(P+R) <= (w(P)+w(R))/2 + sqrt((w(P)-w(R))^2 + (w(P+R)+w(P-R))^2)/2"),
    BoundSpec("upper3", ("P", "Q", "R", "S"), "upper", f"{W2} <= min(mu, nu)"),
    BoundSpec("ffirst", ("P", "Q"), "upper",
              "wA2([[P,Q],[O,O]]) <= (sqrt2/2) sqrt(||P||^2 + ||Q||^2 + sqrt((||P||^2-||Q||^2)^2 + 4||P#Q||^2))"),
    BoundSpec("sahoo1", ("P", "Q"), "lower",
              "max(max(w(P+Q), w(P-Q)), max(w(P+iQ), w(P-iQ))) / 2 <= wA2([[P,Q],[O,O]])"),
    BoundSpec("sk1", ("T", "S"), "upper", "w(TS + sign ST#) <= 2 ||T|| w(S)", SIGN),
    BoundSpec("sahoo3", ("P", "Q"), "lower", "max(w(P+iQ), w(P-iQ)) / 2 <= wA2([[P,Q],[O,O]])"),
    BoundSpec("f12", ("T",), "upper",
              "w(P_R T P_R) <= 2 min(wA2([[Re T, O],[Im T, O]]), wA2([[O, -i Im T],[Re T, O]]))"),
    BoundSpec("lemf", ("T", "S"), "upper", "w(T + sign iS) <= 2 wA2([[O,T],[iS,O]])", SIGN),
    BoundSpec("c2", ("T", "S"), "upper", "max(w(T+S), w(T-S)) <= 2 wA2([[O,T],[S,O]])"),
    BoundSpec("sahoo2", ("P", "Q", "R", "S"), "lower", f"max(mu, nu) / 2 <= {W2}"),
    BoundSpec("lm5", ("P", "Q", "R", "S"), "upper", "rA2([[P,Q],[R,S]]) <= r([[||P||,||Q||],[||R||,||S||]])"),
    BoundSpec("lmm05", ("P", "Q", "R", "S"), "upper",
              "||[[P,Q],[R,S]]||_A2 <= ||[[||P||,||Q||],[||R||,||S||]]||"),
    BoundSpec("kkkk2020", ("T",), "upper", "r_A(T) <= w_A(T)"),
)
_BY_ID = {spec.bound_id: spec for spec in _REGISTRY}
assert len(_BY_ID) == len(_REGISTRY) and set(_BY_ID) == set(_EVALUATORS)


def registry() -> tuple[BoundSpec, ...]:
    return _REGISTRY


def get_spec(bound_id: str) -> BoundSpec:
    try:
        return _BY_ID[bound_id]
    except KeyError:
        raise UnknownBound(f"unknown bound id {bound_id!r}") from None


def _resolve_params(spec: BoundSpec, params: Mapping | None) -> dict:
    params = dict(params or {})
    out = {}
    for name, (kind, domain, default) in spec.params.items():
        value = params.get(name, default)
        if kind == "interval":
            value = float(value)
            if not (domain[0] <= value <= domain[1]):
                raise ParamOutOfDomain(f"{spec.bound_id}: {name}={value} outside [{domain[0]}, {domain[1]}]")
        elif value not in domain:
            raise ParamOutOfDomain(f"{spec.bound_id}: {name}={value!r} not in {domain}")
        out[name] = value
    return out


def _operands(space: MetricSpace, spec: BoundSpec, operands) -> list[CompatibleOperator]:
    if isinstance(operands, Mapping):
        missing = [r for r in spec.roles if r not in operands]
        if missing:
            raise IncompatibleOperandRoles(f"{spec.bound_id}: missing operands {missing}")
        ops = [operands[r] for r in spec.roles]
    else:
        ops = list(operands)
        if len(ops) != len(spec.roles):
            raise IncompatibleOperandRoles(
                f"{spec.bound_id}: expected {len(spec.roles)} operands {spec.roles}, got {len(ops)}")
    return [compatible(space, X) for X in ops]


def operand_digest(space: MetricSpace, roles, ops, params: Mapping) -> str:
    h = hashlib.sha256()
    h.update(np.ascontiguousarray(space.A).tobytes())
    for role, X in zip(roles, ops):
        h.update(role.encode())
        h.update(np.ascontiguousarray(X.T).tobytes())
    for name in sorted(params):
        h.update(f"{name}={params[name]!r}".encode())
    return h.hexdigest()[:16]


def _check_constraint(spec: BoundSpec, ops) -> None:
    if spec.constraint == "QR = SP":
        P, Q, R, S = ops
        lhs, rhs = (Q @ R).T, (S @ P).T
        if nx.max_abs(lhs - rhs) > BOUND_TOL * (1.0 + nx.max_abs(lhs)):
            raise OperandConstraint(f"{spec.bound_id}: requires QR = SP")


def evaluate_bound(space: MetricSpace, bound_id: str, operands, params: Mapping | None = None,
                   tol: float = BOUND_TOL) -> BoundResult:
    spec = get_spec(bound_id)
    p = _resolve_params(spec, params)
    ops = _operands(space, spec, operands)
    _check_constraint(spec, ops)
    lhs, rhs = _EVALUATORS[bound_id](*ops, **p)
    lhs, rhs = float(lhs), float(rhs)
    slack = rhs - lhs
    return BoundResult(
        bound_id=bound_id,
        lhs=lhs,
        rhs=rhs,
        slack=slack,
        holds=bool(slack >= -tol * (1.0 + abs(rhs))),
        operand_digest=operand_digest(space, spec.roles, ops, p),
        params=p,
    )


def compare_bounds(space: MetricSpace, bound_ids, operands, params: Mapping | None = None,
                   tol: float = BOUND_TOL) -> list[BoundResult]:
    """Evaluate several bounds sharing operand roles; sorted by rhs, then bound id."""
    specs = [get_spec(b) for b in bound_ids]
    roles = {s.roles for s in specs}
    if len(roles) > 1:
        raise IncompatibleOperandRoles(f"bounds do not share operand roles: {sorted(roles)}")
    rows = [evaluate_bound(space, s.bound_id, operands, params, tol) for s in specs]
    return sorted(rows, key=lambda row: (row.rhs, row.bound_id))
