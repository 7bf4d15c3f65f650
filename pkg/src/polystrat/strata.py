"""Perversities, the non-properness filtration builder, and a numeric
Whitney condition-(b) sampler.

A perversity is an integer tuple (p_2, ..., p_m) with p_2 = 0 growing by
steps of 0 or 1; it throttles how deeply chains may touch the filtration
pieces.  The filtration builder assembles the descending chain of target
sets for a plane map: the full space, its non-properness set, then the
union of that set's singular points, the non-properness set of the
restricted map, and sampled Whitney-failure points (advisory only).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .gaussian import gr
from .polynomials import MultiPoly, PolyMap, PolyError
from .varieties import AlgebraicSet
from .asymptotics import (AnalysisError, jelonek_set, solve_fiber_numeric,
                          TARGET_VARS)


class PerversityError(ValueError):
    def __init__(self, message: str, index: Optional[int] = None):
        super().__init__(message)
        self.index = index


@dataclass(frozen=True)
class Perversity:
    """Integer tuple (p_2, ..., p_m): p_2 = 0 and unit-step growth."""

    m: int
    values: Tuple[int, ...]

    def __post_init__(self):
        if self.m < 2:
            raise PerversityError("perversities need ambient dimension >= 2")
        if len(self.values) != self.m - 1:
            raise PerversityError(
                f"expected {self.m - 1} values p_2..p_{self.m}, "
                f"got {len(self.values)}")
        if self.values[0] != 0:
            raise PerversityError("p_2 must be 0", index=2)
        for k in range(1, len(self.values)):
            step = self.values[k] - self.values[k - 1]
            if step not in (0, 1):
                raise PerversityError(
                    f"growth law fails at p_{k + 2}: step {step}", index=k + 2)

    def __getitem__(self, k: int) -> int:
        """Value p_k for codimension k (2 <= k <= m)."""
        if not 2 <= k <= self.m:
            raise IndexError(f"perversity index {k} out of range 2..{self.m}")
        return self.values[k - 2]

    def name(self) -> str:
        for kind in ("zero", "max", "lower-middle", "upper-middle"):
            if self == make_perversity(kind, self.m):
                return kind
        return "custom:" + ",".join(str(v) for v in self.values)

    def complement(self) -> "Perversity":
        top = make_perversity("max", self.m)
        return Perversity(self.m, tuple(t - v for t, v in
                                        zip(top.values, self.values)))

    def is_complementary(self, other: "Perversity") -> bool:
        if self.m != other.m:
            return False
        top = make_perversity("max", self.m)
        return tuple(a + b for a, b in zip(self.values, other.values)) \
            == top.values


def make_perversity(kind: str, m: int,
                    custom: Optional[Sequence[int]] = None) -> Perversity:
    """Named perversities: zero, max, lower-middle, upper-middle, custom.

    max is (0, 1, ..., m-2); lower-middle takes floor((k-2)/2) at
    codimension k and upper-middle floor((k-1)/2).
    """
    if m < 2:
        raise PerversityError("perversities need ambient dimension >= 2")
    ks = range(2, m + 1)
    if kind == "zero":
        values = tuple(0 for _ in ks)
    elif kind == "max":
        values = tuple(k - 2 for k in ks)
    elif kind == "lower-middle":
        values = tuple((k - 2) // 2 for k in ks)
    elif kind == "upper-middle":
        values = tuple((k - 1) // 2 for k in ks)
    elif kind == "custom":
        if custom is None:
            raise PerversityError("custom perversity needs values")
        values = tuple(int(v) for v in custom)
    else:
        raise PerversityError(f"unknown perversity kind {kind!r}")
    return Perversity(m, values)


def standard_perversities(m: int) -> List[Perversity]:
    out: List[Perversity] = []
    for kind in ("zero", "lower-middle", "upper-middle", "max"):
        p = make_perversity(kind, m)
        if all(p != q for q in out):
            out.append(p)
    return out


# ---------------------------------------------------------------------------
# filtration builder
# ---------------------------------------------------------------------------

PROVENANCE_FULL = "FullSpace"
PROVENANCE_JELONEK = "Jelonek"
PROVENANCE_SING = "Sing"
PROVENANCE_RESTRICTED = "JelonekOfRestriction"
PROVENANCE_WHITNEY = "WhitneyFailureApprox"


@dataclass(frozen=True)
class FiltrationLevel:
    index: int                      # real dimension index 2k
    sets: Tuple[AlgebraicSet, ...]  # union of the listed sets
    provenance: Tuple[str, ...]
    advisory: Tuple[bool, ...]

    def describe(self) -> str:
        if not self.sets:
            return "(empty)"
        parts = []
        for s, p, a in zip(self.sets, self.provenance, self.advisory):
            flag = " [advisory]" if a else ""
            parts.append(f"{s.describe()} <{p}>{flag}")
        return " u ".join(parts)


@dataclass(frozen=True)
class Filtration:
    """Descending chain W_{2n} >= W_{2n-1} = W_{2n-2} >= ... over the target.

    Levels are stored for even indices only; odd levels equal the next even
    level by construction.
    """

    ambient_vars: Tuple[str, ...]
    levels: Tuple[FiltrationLevel, ...]   # descending, starting at 2n

    def level_by_index(self, idx: int) -> FiltrationLevel:
        # odd indices collapse onto the even level below
        even = idx if idx % 2 == 0 else idx - 1
        for lv in self.levels:
            if lv.index == even:
                return lv
        raise KeyError(idx)

    def to_json(self) -> Dict:
        return {
            "ambient_vars": list(self.ambient_vars),
            "levels": [
                {
                    "index": lv.index,
                    "sets": [s.to_json() for s in lv.sets],
                    "provenance": list(lv.provenance),
                    "advisory": list(lv.advisory),
                }
                for lv in self.levels
            ],
        }

    def describe(self) -> str:
        lines = []
        for lv in self.levels:
            lines.append(f"W_{lv.index} = {lv.describe()}")
            if lv.index > 0:
                lines.append(f"W_{lv.index - 1} = W_{lv.index - 2}"
                             if lv.index - 2 >= 0 else f"W_{lv.index - 1} = (empty)")
        return "\n".join(lines)


def _curve_singular_points(aset: AlgebraicSet) -> List[AlgebraicSet]:
    """Singular points of a plane curve union: common zeros of each
    generator with its gradient, plus pairwise intersections of components."""
    out: List[AlgebraicSet] = []
    vars_ = aset.ambient_vars
    comps = aset.components if aset.components else ((g,) for g in aset.generators)
    comp_list = [c for c in comps]
    for gens in comp_list:
        for g in gens:
            grads = [g.derivative(v) for v in vars_]
            if all(gr_.is_constant() for gr_ in grads):
                continue
            sys_gens = tuple([g] + [d for d in grads if not d.is_zero()])
            out.append(AlgebraicSet(vars_, sys_gens))
    for i in range(len(comp_list)):
        for j in range(i + 1, len(comp_list)):
            out.append(AlgebraicSet(vars_, tuple(comp_list[i]) +
                                    tuple(comp_list[j])))
    return out


def restricted_jelonek_points(F: PolyMap, W2: AlgebraicSet, seed: int = 0,
                              radii: Sequence[float] = (1e2, 1e3, 1e4),
                              samples: int = 24) -> List[List[complex]]:
    """Limit values of F along escaping branches of the preimage of W2.

    Numerically samples points of the preimage curve g(F(x, y)) = 0 at
    growing norms and clusters the convergent image values; these are the
    candidate deeper-stratum points coming from non-properness of the
    restricted map.
    """
    if W2.is_trivially_empty():
        return []
    rng = np.random.default_rng(seed)
    x, y = F.variables
    limits: List[List[complex]] = []
    for g in W2.generators:
        pull = g.compose([F.components[0], F.components[1]])
        if pull.is_zero():
            continue
        pts: List[List[complex]] = []
        R = radii[-1]
        for fixed, solved in ((x, y), (y, x)):
            if pull.degree_in(solved) < 1:
                continue
            tries = 0
            found = 0
            while found < samples and tries < samples * 8:
                tries += 1
                theta = float(rng.uniform(0, 2 * np.pi))
                v0 = R * np.exp(1j * theta)
                spec_coeffs = pull.coefficients_in(solved)
                deg = max(spec_coeffs)
                point = {fixed: v0}
                dense = [
                    spec_coeffs.get(k, MultiPoly.zero(pull.variables))
                    .evaluate_complex([point.get(v, 0j)
                                       for v in pull.variables])
                    for k in range(deg + 1)
                ]
                arr = np.array(dense[::-1])
                nz = np.flatnonzero(np.abs(arr) > 1e-9 * max(R, 1.0) ** deg)
                if len(nz) == 0 or len(arr[nz[0]:]) <= 1:
                    continue
                for rt in np.roots(arr[nz[0]:]):
                    coords = {fixed: v0, solved: complex(rt)}
                    p = [coords[x], coords[y]]
                    if max(abs(c) for c in p) >= R * 0.5:
                        pts.append(p)
                        found += 1
        # keep image values that stay bounded: limits of the escaping branch
        imgs = [F.evaluate_complex(p) for p in pts]
        bounded = [v for v in imgs if max(abs(c) for c in v) < 1e3]
        for v in bounded:
            if all(max(abs(a - b) for a, b in zip(v, w)) > 1e-2
                   for w in limits):
                limits.append([complex(a) for a in v])
    return limits


def build_filtration(F: PolyMap, seed: int = 0) -> Filtration:
    """Filtration of the target plane for a generically finite map (n = 2).

    W_4 is the whole target, W_2 the non-properness set, and W_0 collects
    the singular points of W_2, the limit points of the restricted map
    along the preimage of W_2, and sampled Whitney-failure candidates (the
    latter flagged advisory; the sampler never enlarges exact generators).
    """
    if F.n != 2:
        raise AnalysisError("filtration builder implemented for n = 2 only")
    S = jelonek_set(F, seed=seed)
    tv = TARGET_VARS
    full = FiltrationLevel(4, (AlgebraicSet.whole_space(tv),),
                           (PROVENANCE_FULL,), (False,))
    if S.is_trivially_empty():
        return Filtration(tuple(tv), (full,))
    w2 = FiltrationLevel(2, (S,), (PROVENANCE_JELONEK,), (False,))
    deep_sets: List[AlgebraicSet] = []
    provenance: List[str] = []
    advisory: List[bool] = []
    for s in _curve_singular_points(S):
        deep_sets.append(s)
        provenance.append(PROVENANCE_SING)
        advisory.append(False)
    pts = restricted_jelonek_points(F, S, seed=seed)
    for p in pts:
        gens = []
        for name, val in zip(tv, p):
            approx = _rationalize(val)
            gens.append(MultiPoly.var(tv, name)
                        - MultiPoly.const(tv, approx))
        deep_sets.append(AlgebraicSet(tuple(tv), tuple(gens)))
        provenance.append(PROVENANCE_RESTRICTED)
        advisory.append(False)
    w0 = FiltrationLevel(0, tuple(deep_sets), tuple(provenance),
                         tuple(advisory))
    return Filtration(tuple(tv), (full, w2, w0))


def _rationalize(z: complex, tol: float = 1e-6):
    from fractions import Fraction
    re = Fraction(z.real).limit_denominator(10 ** 6)
    im = Fraction(z.imag).limit_denominator(10 ** 6)
    if abs(float(re) - z.real) > tol or abs(float(im) - z.imag) > tol:
        re, im = Fraction(round(z.real * 1e6), 10 ** 6), \
            Fraction(round(z.imag * 1e6), 10 ** 6)
    return gr(re, im)


# ---------------------------------------------------------------------------
# Whitney (b) sampler
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Parametrization:
    """Polynomial parametrization of a stratum around a base parameter."""

    components: Tuple[MultiPoly, ...]   # ambient coordinates as polynomials
    parameters: Tuple[str, ...]

    def evaluate(self, params: Sequence[float]) -> np.ndarray:
        pt = [complex(p) for p in params]
        return np.array([c.evaluate_complex(pt).real for c in self.components])

    def jacobian_at(self, params: Sequence[float]) -> np.ndarray:
        pt = [complex(p) for p in params]
        cols = []
        for v in self.parameters:
            cols.append([c.derivative(v).evaluate_complex(pt).real
                         for c in self.components])
        return np.array(cols).T


@dataclass(frozen=True)
class WhitneyReport:
    passed: bool
    worst_distance: float
    tolerance: float
    sequences: int
    detail: str


def _principal_subspace_distance(A: np.ndarray, B: np.ndarray) -> float:
    """Grassmannian-style distance via principal angles of column spaces."""
    qa, _ = np.linalg.qr(A)
    qb, _ = np.linalg.qr(B)
    sv = np.linalg.svd(qa.T @ qb, compute_uv=False)
    sv = np.clip(sv, -1.0, 1.0)
    angles = np.arccos(sv)
    return float(np.max(angles)) if len(angles) else 0.0


def _vector_to_subspace_distance(v: np.ndarray, B: np.ndarray) -> float:
    qb, _ = np.linalg.qr(B)
    proj = qb @ (qb.T @ v)
    resid = v - proj
    return float(np.linalg.norm(resid))


def _project_to_stratum(stratum: Parametrization, start: Sequence[float],
                        target: np.ndarray) -> np.ndarray:
    """Parameter of the stratum point nearest to target (local search)."""
    from scipy.optimize import least_squares
    res = least_squares(
        lambda p: stratum.evaluate(p) - target,
        np.asarray(start, dtype=float), method="lm", max_nfev=200)
    return res.x


def whitney_b_sample_test(
    big: Parametrization,
    small: Parametrization,
    base_point: Sequence[float],
    big_params_at_base: Sequence[float],
    small_params_at_base: Sequence[float],
    samples: int = 12,
    seed: int = 0,
    tolerance: float = 1e-3,
    scales: Sequence[float] = (1e-2, 1e-3, 1e-4),
) -> WhitneyReport:
    """Sampled condition-(b) test for a stratum pair at a base point.

    Approach directions in the big stratum's parameter space are the
    coordinate axes plus seeded random ones.  At each of the three scales
    the big-stratum point x_s is paired with its projection y_s onto the
    small stratum (the adversarial pairing: secants from generic pairings
    converge into the small stratum's own tangent and hide failures).
    Tangent planes from the parametrization Jacobian must stabilize across
    scales (principal angles); the secant direction at the finest scale
    must lie within ``tolerance`` of the limiting tangent plane.
    """
    rng = np.random.default_rng(seed)
    kb = len(big.parameters)
    worst = 0.0
    used = 0
    detail = ""
    directions: List[np.ndarray] = []
    for j in range(kb):
        e = np.zeros(kb)
        e[j] = 1.0
        directions.append(e.copy())
        directions.append(-e)
    while len(directions) < max(samples, 2 * kb):
        d = rng.normal(size=kb)
        n = np.linalg.norm(d)
        if n > 1e-12:
            directions.append(d / n)
    for s, dir_big in enumerate(directions[:max(samples, 2 * kb)]):
        tangents = []
        secants = []
        ok = True
        for scale in scales:
            pb = np.asarray(big_params_at_base, dtype=float) + scale * dir_big
            xb = big.evaluate(pb)
            ps = _project_to_stratum(small, small_params_at_base, xb)
            ys = small.evaluate(ps)
            J = big.jacobian_at(pb)
            if np.linalg.matrix_rank(J, tol=1e-12) < min(J.shape):
                ok = False
                break
            tangents.append(J)
            diff = xb - ys
            nd = np.linalg.norm(diff)
            if nd < 1e-14:
                ok = False
                break
            secants.append(diff / nd)
        if not ok:
            continue
        t_drift = _principal_subspace_distance(tangents[-1], tangents[-2])
        if t_drift > tolerance * 10:
            # tangent plane itself has not stabilized; skip the sequence
            continue
        used += 1
        d = _vector_to_subspace_distance(secants[-1], tangents[-1])
        if d > worst:
            worst = d
            detail = f"sequence {s}: secant off tangent by {d:.3e}"
    passed = worst <= tolerance and used > 0
    if used == 0:
        detail = "no usable sequences (degenerate parametrization)"
        return WhitneyReport(False, float("inf"), tolerance, 0, detail)
    return WhitneyReport(passed, worst, tolerance, used, detail)
