"""Per-round mathematics of double-base asymmetric boosting.

With x = e^alpha, a stump's optimal weight is the unique positive root of

    a*eP*x^(2Cp) + b*eN*x^(Cp+Cn) - b*(1-eN)*x^(Cp-Cn) - a*(1-eP) = 0,

equivalently the crossing of the static curve S(x) = a + b*x^(Cp-Cn) with
V(x) = a*eP*(x^(2Cp)+1) + b*eN*(x^(Cp+Cn)+x^(Cp-Cn)). Both curves increase,
so a candidate whose V lies below S at the incumbent's root has a larger
root; conditional search only solves for such candidates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import CostPair, NumericalError, PreconditionError, WeightState
from .roots import zeroin
from .weak import ClassErrors, StumpPool, clamp_errors

ROOT_RTOL = 1e-12
MAX_DOUBLINGS = 64
# relative gap under which two candidates count as tied (lowest index wins)
TIE_RTOL = 1e-10


@dataclass(frozen=True)
class RoundStatics:
    a: float
    b: float
    c_pos: int
    c_neg: int

    @classmethod
    def from_state(cls, w: WeightState, cost: CostPair) -> "RoundStatics":
        # z = ln(Cn*WN*AN) - ln(Cp*WP*AP); the smaller weight is computed directly
        z = (math.log(cost.c_neg) + w.log_acc_neg) - (math.log(cost.c_pos) + w.log_acc_pos)
        if z >= 0:
            a = _expit(-z)
            b = 1.0 - a
        else:
            b = _expit(z)
            a = 1.0 - b
        return cls(a, b, cost.c_pos, cost.c_neg)

    @classmethod
    def from_a(cls, a: float, cost: CostPair) -> "RoundStatics":
        return cls(a, 1.0 - a, cost.c_pos, cost.c_neg)


def _expit(z: float) -> float:
    if z >= 0:
        return 1.0 / (1.0 + math.exp(-z))
    ez = math.exp(z)
    return ez / (1.0 + ez)


def _pow(lnx: float, k: int) -> float:
    """x**k via exp(k ln x); saturates to inf instead of raising."""
    t = k * lnx
    return math.exp(t) if t < 709.0 else math.inf


def eval_poly(st: RoundStatics, e: ClassErrors, x: float) -> float:
    if not x > 0:
        raise PreconditionError(f"eval_poly requires x > 0, got {x}")
    a, b, cp, cn = st.a, st.b, st.c_pos, st.c_neg
    ep, en = e.eps_pos, e.eps_neg
    if x == 1.0:
        return a * ep + b * en - b * (1.0 - en) - a * (1.0 - ep)
    lx = math.log(x)
    return (a * ep * _pow(lx, 2 * cp) + b * en * _pow(lx, cp + cn)
            - b * (1.0 - en) * _pow(lx, cp - cn) - a * (1.0 - ep))


def static_value(st: RoundStatics, x: float) -> float:
    """S(x) = a + b x^(Cp-Cn)."""
    return st.a + st.b * _pow(math.log(x), st.c_pos - st.c_neg)


def variable_value(st: RoundStatics, e: ClassErrors, x: float) -> float:
    """V(x) = a eP (x^(2Cp)+1) + b eN (x^(Cp+Cn) + x^(Cp-Cn))."""
    c1, c2 = st.a * e.eps_pos, st.b * e.eps_neg
    return float(np.dot((c1, c2), root_basis(st, x)))


def poly_coefficients(st: RoundStatics, e: ClassErrors) -> dict[int, float]:
    """Exponent -> coefficient, like terms merged, shifted to nonnegative powers."""
    cp, cn = st.c_pos, st.c_neg
    shift = max(0, cn - cp)
    terms = [
        (2 * cp, st.a * e.eps_pos),
        (cp + cn, st.b * e.eps_neg),
        (cp - cn, -st.b * (1.0 - e.eps_neg)),
        (0, -st.a * (1.0 - e.eps_pos)),
    ]
    out: dict[int, float] = {}
    for k, c in terms:
        out[k + shift] = out.get(k + shift, 0.0) + c
    return dict(sorted(out.items(), reverse=True))


def sign_changes(coeffs) -> int:
    signs = [c > 0 for c in coeffs if c != 0]
    return sum(1 for s, t in zip(signs, signs[1:]) if s != t)


def contribution_condition(st: RoundStatics, e: ClassErrors) -> bool:
    """True iff the stump's optimal weight is strictly positive."""
    return st.a * e.eps_pos + st.b * e.eps_neg < 0.5


@dataclass(frozen=True)
class CandidateVector:
    c1: float
    c2: float

    @classmethod
    def of(cls, st: RoundStatics, e: ClassErrors) -> "CandidateVector":
        return cls(st.a * e.eps_pos, st.b * e.eps_neg)


def root_basis(st: RoundStatics, r: float) -> tuple[float, float]:
    lr = math.log(r)
    cp, cn = st.c_pos, st.c_neg
    return _pow(lr, 2 * cp) + 1.0, _pow(lr, cp + cn) + _pow(lr, cp - cn)


@dataclass(frozen=True)
class RoundBest:
    root: float
    stump_index: int
    s_value: float
    basis: tuple[float, float]

    @classmethod
    def sentinel(cls) -> "RoundBest":
        return cls(1.0, -1, 1.0, (2.0, 2.0))

    @classmethod
    def at(cls, st: RoundStatics, cand: CandidateVector, root: float, index: int) -> "RoundBest":
        basis = root_basis(st, root)
        # the candidate's own V(root); equals S(root) up to solver tolerance
        s = cand.c1 * basis[0] + cand.c2 * basis[1]
        return cls(root, index, s, basis)


def improvement_condition(cand: CandidateVector, best: RoundBest) -> bool:
    """True iff the candidate's V at the incumbent root lies strictly below S there."""
    return cand.c1 * best.basis[0] + cand.c2 * best.basis[1] < best.s_value


def solve_round_root(st: RoundStatics, e: ClassErrors, rtol: float = ROOT_RTOL) -> float:
    """Unique root > 1 of the round polynomial (requires the contribution condition)."""
    f0 = eval_poly(st, e, 1.0)
    if not f0 < 0:
        raise PreconditionError(
            f"contribution condition fails (poly(1) = {f0}); no root above 1"
        )
    lo, hi = 1.0, 2.0
    fhi = eval_poly(st, e, hi)
    doublings = 0
    while fhi <= 0:
        doublings += 1
        if doublings > MAX_DOUBLINGS:
            raise NumericalError(f"root bracket not found for statics={st}, errors={e}")
        lo, f0 = hi, fhi
        hi *= 2.0
        fhi = eval_poly(st, e, hi)
    return zeroin(lambda x: eval_poly(st, e, x), lo, hi, rtol=rtol, fa=f0, fb=fhi)


@dataclass
class SearchStats:
    stumps_evaluated: int = 0
    roots_computed: int = 0


@dataclass(frozen=True)
class SearchResult:
    stump_index: int
    alpha: float
    root: float
    errors: ClassErrors


@dataclass
class RoundErrors:
    """Clamped class errors of every pool stump for one round."""

    eps_pos: np.ndarray
    eps_neg: np.ndarray
    c1: np.ndarray = field(init=False)
    c2: np.ndarray = field(init=False)
    st: RoundStatics = field(init=False)

    @classmethod
    def compute(cls, st: RoundStatics, pool: StumpPool, w: WeightState) -> "RoundErrors":
        ep, en = pool.class_error_arrays(w.d_pos, w.d_neg)
        out = cls(clamp_errors(ep), clamp_errors(en))
        out.st = st
        out.c1 = st.a * out.eps_pos
        out.c2 = st.b * out.eps_neg
        return out

    def errors(self, f: int) -> ClassErrors:
        return ClassErrors(float(self.eps_pos[f]), float(self.eps_neg[f]))

    def candidate(self, f: int) -> CandidateVector:
        return CandidateVector(float(self.c1[f]), float(self.c2[f]))

    def contributing(self) -> np.ndarray:
        return self.c1 + self.c2 < 0.5


def _canonical_winner(re: RoundErrors, best: RoundBest, contrib: np.ndarray) -> int:
    """Lowest index among contributors whose crossing ties the incumbent's."""
    vals = re.c1 * best.basis[0] + re.c2 * best.basis[1]
    tied = contrib & (vals <= best.s_value * (1.0 + TIE_RTOL))
    return int(np.flatnonzero(tied)[0])


def conditional_search(st: RoundStatics, pool: StumpPool, w: WeightState,
                       stats: SearchStats | None = None,
                       round_errors: RoundErrors | None = None) -> SearchResult | None:
    """Pool stump with the largest root, solving only for improving candidates.

    Equivalent to a sequential scan in pool order: each stump is checked
    against the contribution condition and then against the incumbent with
    the improvement condition. Between two solves the incumbent is fixed, so
    the scan jumps straight to the next stump passing both tests.
    """
    stats = SearchStats() if stats is None else stats
    re = RoundErrors.compute(st, pool, w) if round_errors is None else round_errors
    F = len(pool)
    stats.stumps_evaluated += F
    contrib = re.contributing()
    best = RoundBest.sentinel()
    pos = 0
    while pos < F:
        b0, b1 = best.basis
        hits = np.flatnonzero(contrib[pos:] & (re.c1[pos:] * b0 + re.c2[pos:] * b1 < best.s_value))
        if hits.size == 0:
            break
        f = pos + int(hits[0])
        root = solve_round_root(st, re.errors(f))
        stats.roots_computed += 1
        best = RoundBest.at(st, re.candidate(f), root, f)
        pos = f + 1
    if best.stump_index < 0:
        return None
    f = _canonical_winner(re, best, contrib)
    if f != best.stump_index:
        best = RoundBest(solve_round_root(st, re.errors(f)), f, best.s_value, best.basis)
        stats.roots_computed += 1
    return SearchResult(f, math.log(best.root), best.root, re.errors(f))


def exhaustive_search(st: RoundStatics, pool: StumpPool, w: WeightState,
                      stats: SearchStats | None = None,
                      round_errors: RoundErrors | None = None) -> SearchResult | None:
    """Solve every contributing stump and keep the largest root."""
    stats = SearchStats() if stats is None else stats
    re = RoundErrors.compute(st, pool, w) if round_errors is None else round_errors
    stats.stumps_evaluated += len(pool)
    contrib = re.contributing()
    roots: dict[int, float] = {}
    best_f, best_root = -1, 1.0
    for f in np.flatnonzero(contrib):
        f = int(f)
        r = solve_round_root(st, re.errors(f))
        stats.roots_computed += 1
        roots[f] = r
        if r > best_root:
            best_f, best_root = f, r
    if best_f < 0:
        return None
    best = RoundBest.at(st, re.candidate(best_f), best_root, best_f)
    f = _canonical_winner(re, best, contrib)
    return SearchResult(f, math.log(roots[f]), roots[f], re.errors(f))
