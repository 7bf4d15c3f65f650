"""Non-properness analysis of polynomial self-maps.

For a generically finite map F the set of points where F fails to be proper
(the Jelonek set) is computed, for n = 2, from the leading coefficients of
the two bidirectional resultant eliminants; candidate components are then
confirmed or discarded by explicit escaping witness arcs.  Critical values
are obtained by iterated resultant elimination over each singular-locus
component, with spurious factors removed by forward sampling of the singular
curves.  Everything exact runs over Gaussian rationals; floating point
appears only in the sampling and arc-search layers.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import least_squares

from .gaussian import GaussianRational, gr
from .polynomials import (MultiPoly, PolyMap, PolyError,
                          exact_divide, factor_candidates, jacobian_det,
                          parse_poly, poly_gcd, resultant, squarefree_part,
                          sturm_real_root_count, univariate_squarefree)
from .infinity import WitnessArc, monomial_arc
from .varieties import (AlgebraicSet, SignCondition, REAL_SEMIALGEBRAIC,
                        union_of_components)

TARGET_VARS = ("alpha", "beta")


class AnalysisError(ValueError):
    pass


class FiberCountError(AnalysisError):
    pass


# ---------------------------------------------------------------------------
# map files
# ---------------------------------------------------------------------------

def load_map_text(text: str) -> PolyMap:
    """Parse the map-file format: a `var` line, then `F1 = ...` .. `Fn = ...`."""
    variables: Optional[Tuple[str, ...]] = None
    comps: Dict[int, MultiPoly] = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("var ") or line == "var":
            if variables is not None:
                raise AnalysisError("duplicate var line")
            names = line[3:].split()
            if not names:
                raise AnalysisError("var line declares no variables")
            variables = tuple(names)
            continue
        if "=" not in line:
            raise AnalysisError(f"malformed map line: {line!r}")
        head, expr = line.split("=", 1)
        head = head.strip()
        if not (head.startswith("F") and head[1:].isdigit()):
            raise AnalysisError(f"component names must be F1..Fn, got {head!r}")
        if variables is None:
            raise AnalysisError("var line must precede component definitions")
        comps[int(head[1:])] = parse_poly(expr.strip(), variables)
    if variables is None:
        raise AnalysisError("missing var line")
    n = len(variables)
    if sorted(comps) != list(range(1, n + 1)):
        raise AnalysisError(f"expected components F1..F{n}")
    return PolyMap(tuple(comps[k] for k in range(1, n + 1)))


def load_map_file(path: str) -> PolyMap:
    with open(path, "r", encoding="utf-8") as fh:
        return load_map_text(fh.read())


# ---------------------------------------------------------------------------
# exact locus computations
# ---------------------------------------------------------------------------

def singular_locus(F: PolyMap) -> AlgebraicSet:
    """Zero set of the Jacobian determinant, squarefree-reduced."""
    J = jacobian_det(F)
    if J.is_zero():
        return AlgebraicSet.whole_space(F.variables)
    return AlgebraicSet(F.variables, (squarefree_part(J),))


def _target_names(F: PolyMap) -> Tuple[str, ...]:
    tnames = TARGET_VARS if F.n == 2 else tuple(f"t{k+1}" for k in range(F.n))
    clash = set(tnames) & set(F.variables)
    if clash:
        raise AnalysisError(f"source variables clash with target names {clash}")
    return tnames


def _graph_polys(F: PolyMap) -> Tuple[Tuple[str, ...], Tuple[str, ...], List[MultiPoly]]:
    """Graph equations F_i - target_i inside the joint (source+target) ring."""
    tnames = _target_names(F)
    big = F.variables + tnames
    polys = [comp.rename(big) - MultiPoly.var(big, t)
             for comp, t in zip(F.components, tnames)]
    return big, tnames, polys


def _target_only(p: MultiPoly, tnames: Sequence[str]) -> Optional[MultiPoly]:
    try:
        return p.rename(tuple(tnames))
    except PolyError:
        return None


def _eliminate_pair(p: MultiPoly, q: MultiPoly, name: str) -> Optional[MultiPoly]:
    """Resultant in ``name``; None when degenerate or uninformative."""
    if p.is_zero() or q.is_zero():
        return None
    if p.degree_in(name) <= 0 and q.degree_in(name) <= 0:
        return None
    r = resultant(p, q, name)
    return None if r.is_zero() else r


def _sample_source_curve(curve: MultiPoly, count: int, seed: int = 0
                         ) -> List[List[complex]]:
    aset = AlgebraicSet(curve.variables, (curve,))
    return aset.sample_points(count, seed=seed)


def _drop_redundant_components(F_components: List[Tuple[MultiPoly, ...]],
                               seed: int = 0) -> List[Tuple[MultiPoly, ...]]:
    """Remove components whose sampled points lie inside another component."""
    if len(F_components) <= 1:
        return F_components
    sets = [AlgebraicSet(c[0].variables, c) for c in F_components]
    samples = [s.sample_points(6, seed=seed) if len(s.generators) == 1
               else _solve_point_component(s) for s in sets]
    keep = []
    for i, comp in enumerate(F_components):
        redundant = False
        pts = samples[i]
        if pts:
            for j, other in enumerate(sets):
                if j == i:
                    continue
                if all(other.contains_numeric(p, tol=1e-5) for p in pts):
                    # ties between equal components: keep the earlier one
                    if F_components[j] != comp or j < i:
                        redundant = True
                        break
        if not redundant:
            keep.append(comp)
    return keep or F_components


def _solve_point_component(aset: AlgebraicSet) -> List[List[complex]]:
    """Numeric solutions of a 2-generator system in 2 variables."""
    if len(aset.generators) < 2 or len(aset.ambient_vars) != 2:
        return []
    g1, g2 = aset.generators[0], aset.generators[1]
    v0, v1 = aset.ambient_vars
    r = _eliminate_pair(g1, g2, v1)
    if r is None or r.degree_in(v0) < 1:
        return []
    pts: List[List[complex]] = []
    cdict0 = r.coefficients_in(v0)
    arr = np.array([cdict0.get(k, MultiPoly.zero(r.variables)).constant_term()
                    .to_complex() for k in range(max(cdict0) + 1)][::-1])
    nz = np.flatnonzero(np.abs(arr) > 1e-12)
    if len(nz) == 0 or len(arr[nz[0]:]) <= 1:
        return []
    solver = g1 if g1.degree_in(v1) >= 1 else g2
    if solver.degree_in(v1) < 1:
        return []
    for a in np.roots(arr[nz[0]:]):
        cdict = solver.coefficients_in(v1)
        dense1 = [cdict.get(k, MultiPoly.zero(solver.variables))
                  .evaluate_complex([complex(a), 0j])
                  for k in range(max(cdict) + 1)]
        arr1 = np.array(dense1[::-1])
        nz1 = np.flatnonzero(np.abs(arr1) > 1e-12)
        if len(nz1) == 0 or len(arr1[nz1[0]:]) <= 1:
            continue
        for b in np.roots(arr1[nz1[0]:]):
            p = [complex(a), complex(b)]
            if aset.contains_numeric(p, tol=1e-6):
                pts.append(p)
    return pts


def critical_values(F: PolyMap, seed: int = 0) -> AlgebraicSet:
    """Image of the singular locus, for n = 2, by iterated resultants.

    Each squarefree Jacobian factor is eliminated separately along both
    variable orders (identically vanishing paths are skipped).  A candidate
    component survives only if forward images of sampled points of its
    singular curve actually land on it; redundant components contained in
    others are dropped.
    """
    if F.n != 2:
        raise AnalysisError("critical values implemented for n = 2 only")
    J = jacobian_det(F)
    if J.is_zero():
        raise AnalysisError("identically zero Jacobian: map is not generically finite")
    Jsf = squarefree_part(J)
    if Jsf.is_constant():
        return AlgebraicSet.empty(TARGET_VARS)
    big, tnames, graph = _graph_polys(F)
    x, y = F.variables
    components: List[Tuple[MultiPoly, ...]] = []
    for jfac in factor_candidates(Jsf):
        jb = jfac.rename(big)
        forward = [F.evaluate_complex(p)
                   for p in _sample_source_curve(jfac, 8, seed=seed)]
        for first, second in ((x, y), (y, x)):
            e1 = _eliminate_pair(graph[0], jb, first)
            e2 = _eliminate_pair(graph[1], jb, first)
            if e1 is None or e2 is None:
                continue
            gens: List[MultiPoly] = []
            t1 = _target_only(e1, tnames)
            t2 = _target_only(e2, tnames)
            if t1 is not None and t2 is not None:
                gens = [t for t in (t1, t2) if not t.is_constant()]
            else:
                if t1 is None and t2 is None:
                    e3 = _eliminate_pair(e1, e2, second)
                    t3 = _target_only(e3, tnames) if e3 is not None else None
                    if t3 is not None and not t3.is_constant():
                        gens = [t3]
                else:
                    t = t1 if t1 is not None else t2
                    if not t.is_constant():
                        gens = [t]
            if not gens:
                continue
            for comp in _confirm_image_components(gens, forward):
                if all(comp != c for c in components):
                    components.append(comp)
    components = _drop_redundant_components(components, seed=seed)
    if not components:
        return AlgebraicSet.empty(TARGET_VARS)
    return union_of_components(components)


def _confirm_image_components(gens: List[MultiPoly],
                              forward: List[List[complex]]
                              ) -> List[Tuple[MultiPoly, ...]]:
    """Split candidates into factors and keep those hit by forward samples."""
    if not forward:
        return []
    if len(gens) >= 2:
        aset = AlgebraicSet(gens[0].variables, tuple(gens))
        if all(aset.contains_numeric(p, tol=1e-5) for p in forward):
            return [tuple(squarefree_part(g) for g in gens)]
        return []
    out = []
    for f in factor_candidates(gens[0]):
        hits = sum(1 for p in forward if abs(f.evaluate_complex(p)) < 1e-5)
        if hits == len(forward):
            out.append((f,))
    return out


def jelonek_set(F: PolyMap, seed: int = 0) -> AlgebraicSet:
    """Candidate description of the non-properness set, for n = 2.

    Leading coefficients (in each retained source variable) of the two
    bidirectional eliminants give candidate loci; every candidate factor is
    confirmed by an explicit escaping witness arc over a sampled point or
    discarded.  The confirmed set is either empty or pure codimension one.
    """
    if F.n != 2:
        raise AnalysisError("exact non-properness set implemented for n = 2 only")
    big, tnames, graph = _graph_polys(F)
    x, y = F.variables
    r_x = _eliminate_pair(graph[0], graph[1], y)   # eliminant in x
    r_y = _eliminate_pair(graph[0], graph[1], x)   # eliminant in y
    if r_x is None or r_y is None:
        raise AnalysisError(
            "an eliminant vanished identically: map not generically finite")
    candidates: List[MultiPoly] = []
    for r, v in ((r_x, x), (r_y, y)):
        if r.degree_in(v) <= 0:
            continue
        lc = r.leading_coefficient_in(v)
        t = _target_only(lc, tnames)
        if t is None or t.is_constant():
            continue
        for f in factor_candidates(t):
            if all(f != g for g in candidates):
                candidates.append(f)
    confirmed: List[Tuple[MultiPoly, ...]] = []
    witnesses: List[WitnessArc] = []
    for f in candidates:
        arc = _confirm_escape_component(F, f, seed=seed)
        if arc is not None:
            confirmed.append((f,))
            witnesses.append(arc)
    if not confirmed:
        return AlgebraicSet.empty(TARGET_VARS)
    confirmed = _drop_redundant_components(confirmed, seed=seed)
    return union_of_components(confirmed)


def _confirm_escape_component(F: PolyMap, f: MultiPoly, seed: int = 0,
                              tries: int = 3) -> Optional[WitnessArc]:
    aset = AlgebraicSet(f.variables, (f,))
    pts = aset.sample_points(tries, seed=seed)
    for pt in pts:
        arc = witness_arc_search(F, pt, seed=seed)
        if arc is not None:
            return arc
    return None


# ---------------------------------------------------------------------------
# fiber analysis
# ---------------------------------------------------------------------------

def fiber_count(F: PolyMap, target: Sequence[GaussianRational],
                mode: str = "complex") -> int:
    """Number of distinct fiber solutions over a noncritical target.

    Complex mode counts the degree of the squarefree specialized eliminant
    in the second variable; real mode counts its real roots by Sturm sign
    variations (inputs must be real).
    """
    if F.n != 2:
        raise FiberCountError("fiber counting implemented for n = 2 only")
    if mode not in ("complex", "real"):
        raise FiberCountError(f"unknown mode {mode!r}")
    K0 = critical_values(F)
    if not K0.is_trivially_empty():
        for g in K0.generators:
            if g.evaluate(list(target)).is_zero():
                raise FiberCountError("target lies on the critical-value set")
    x, y = F.variables
    p1 = F.components[0] - MultiPoly.const(F.variables, target[0])
    p2 = F.components[1] - MultiPoly.const(F.variables, target[1])
    if mode == "real":
        for comp, t in zip(F.components, target):
            if any(not c.is_real() for c in comp.terms.values()) or not t.is_real():
                raise FiberCountError("real mode requires a real-coefficient system")
    r = _eliminate_pair(p1, p2, x)
    if r is None:
        raise FiberCountError("degenerate eliminant at target")
    try:
        _, coeffs = r.univariate()
    except PolyError as exc:
        raise FiberCountError(f"eliminant not univariate: {exc}") from exc
    sq = univariate_squarefree(coeffs)
    if mode == "complex":
        return max(len(sq) - 1, 0)
    return sturm_real_root_count([c.re for c in sq])


def solve_fiber_numeric(F: PolyMap, target: Sequence[complex],
                        tol: float = 1e-6) -> List[List[complex]]:
    """All finite numeric solutions of F(x, y) = target (n = 2)."""
    x, y = F.variables
    big, tnames, graph = _graph_polys(F)
    r_y = _eliminate_pair(graph[0], graph[1], x)
    if r_y is None or r_y.degree_in(y) <= 0:
        return []
    # joint-ring numeric point [x, y, alpha, beta]; eliminated slots unused
    def dense_coeffs(p: MultiPoly, keep: str, point: Dict[str, complex]
                     ) -> np.ndarray:
        cdict = p.coefficients_in(keep)
        deg = max(cdict)
        full = [point.get(v, 0j) for v in p.variables]
        dense = [
            cdict.get(k, MultiPoly.zero(p.variables)).evaluate_complex(full)
            for k in range(deg + 1)
        ]
        arr = np.array(dense[::-1])
        nz = np.flatnonzero(np.abs(arr) > 1e-12)
        return arr[nz[0]:] if len(nz) else np.array([])

    base = {tnames[0]: complex(target[0]), tnames[1]: complex(target[1])}
    arr = dense_coeffs(r_y, y, base)
    if len(arr) <= 1:
        return []
    sols: List[List[complex]] = []
    for y0 in np.roots(arr):
        p = graph[0] if graph[0].degree_in(x) > 0 else graph[1]
        arr_x = dense_coeffs(p, x, {**base, y: complex(y0)})
        if len(arr_x) <= 1:
            continue
        for x0 in np.roots(arr_x):
            pt = [complex(x0), complex(y0)]
            img = F.evaluate_complex(pt)
            err = max(abs(a - b) for a, b in zip(img, target))
            if err < tol * (1 + max(abs(t) for t in target)):
                if all(max(abs(a - b) for a, b in zip(pt, s)) > 1e-7
                       for s in sols):
                    sols.append(pt)
    return sols


# ---------------------------------------------------------------------------
# witness arcs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ArcSearchParams:
    exponent_bound: int = 6
    starts: int = 5
    seed: int = 0
    residual_tol: float = 1e-9
    validation_ts: Tuple[float, ...] = (1e-2, 1e-4, 1e-6)


def _arc_conditions(F: PolyMap, exponents: Sequence[int],
                    target: Sequence[complex]):
    """Asymptotic matching constraints on the arc coefficients.

    Substituting x_j = c_j t^{a_j} into F_i and grouping by t-power, every
    negative power must vanish and the t^0 part must equal target_i.  Each
    constraint is (monomial-dict over c, required value).
    """
    conditions = []
    for i, comp in enumerate(F.components):
        by_power: Dict[int, Dict[Tuple[int, ...], complex]] = {}
        for e, c in comp.terms.items():
            mu = sum(k * a for k, a in zip(e, exponents))
            bucket = by_power.setdefault(mu, {})
            bucket[e] = bucket.get(e, 0j) + c.to_complex()
        for mu in sorted(by_power):
            if mu < 0:
                conditions.append((by_power[mu], 0j))
        conditions.append((by_power.get(0, {}), complex(target[i])))
    return conditions


def _quick_infeasible(conditions, exponents: Sequence[int], n: int) -> bool:
    """Cheap propagation: single-variable forced zeros and constant clashes."""
    forced_zero = set()
    changed = True
    conds = [(dict(m), rhs) for m, rhs in conditions]
    while changed:
        changed = False
        for mono, rhs in conds:
            live = {e: c for e, c in mono.items()
                    if not any(e[j] > 0 and j in forced_zero for j in range(n))}
            if not live:
                if abs(rhs) > 1e-12:
                    return True
                continue
            if abs(rhs) < 1e-12 and len(live) == 1:
                (e,) = live.keys()
                active = [j for j in range(n) if e[j] > 0]
                if len(active) == 1 and active[0] not in forced_zero:
                    forced_zero.add(active[0])
                    changed = True
    if all(exponents[j] >= 0 or j in forced_zero for j in range(n)):
        return True  # no coordinate left to escape along
    return False


def _eval_conditions(conditions, cs: np.ndarray) -> np.ndarray:
    out = []
    for mono, rhs in conditions:
        v = -rhs
        for e, coeff in mono.items():
            term = coeff
            for j, k in enumerate(e):
                if k:
                    term = term * cs[j] ** k
            v = v + term
        out.append(v.real)
        out.append(v.imag)
    return np.asarray(out)


def witness_arc_search(F: PolyMap, target: Sequence[complex],
                       params: Optional[ArcSearchParams] = None,
                       seed: Optional[int] = None) -> Optional[WitnessArc]:
    """Search for a monomial escaping arc whose image converges to target.

    The ansatz is gamma(t) = (c_1 t^{a_1}, ..., c_n t^{a_n}) with integer
    exponents from a bounded grid; coefficients are solved by least squares
    on the asymptotic matching conditions, then the arc is validated at
    t in {1e-2, 1e-4, 1e-6} (image error must decrease while the arc norm
    grows).  Failure returns None; it is a normal outcome, not an error.
    """
    if params is None:
        params = ArcSearchParams()
    if seed is not None:
        params = ArcSearchParams(params.exponent_bound, params.starts, seed,
                                 params.residual_tol, params.validation_ts)
    n = F.n
    rng = np.random.default_rng(params.seed)
    bound = params.exponent_bound
    grid = sorted(
        (v for v in itertools.product(range(-bound, bound + 1), repeat=n)
         if min(v) < 0),
        key=lambda v: (sum(abs(a) for a in v), v),
    )
    target = [complex(t) for t in target]
    nvar = 2 * n
    for exponents in grid:
        conditions = _arc_conditions(F, exponents, target)
        if _quick_infeasible(conditions, exponents, n):
            continue
        solved = None
        for attempt in range(params.starts):
            x0 = np.ones(nvar) if attempt == 0 else rng.normal(scale=1.5,
                                                               size=nvar)
            try:
                res = least_squares(
                    lambda v: _eval_conditions(conditions,
                                               v[::2] + 1j * v[1::2]),
                    x0, method="lm", max_nfev=400)
            except Exception:
                continue
            if float(np.max(np.abs(res.fun))) < params.residual_tol:
                solved = res.x[::2] + 1j * res.x[1::2]
                break
        if solved is None:
            continue
        if not any(exponents[j] < 0 and abs(solved[j]) > 1e-6
                   for j in range(n)):
            continue
        try:
            arc = monomial_arc(solved, exponents)
        except ValueError:
            continue
        if _validate_arc(F, arc, target, params.validation_ts):
            return arc
    return None


def _validate_arc(F: PolyMap, arc: WitnessArc, target: Sequence[complex],
                  ts: Sequence[float]) -> bool:
    errs = []
    norms = []
    for t in ts:
        pt = arc.evaluate(t)
        img = F.evaluate_complex(pt)
        errs.append(max(abs(a - b) for a, b in zip(img, target)))
        norms.append(max(abs(z) for z in pt))
    decreasing = all(e2 < e1 * 0.9 + 1e-12 for e1, e2 in zip(errs, errs[1:]))
    escaping = all(n2 > n1 * 1.5 for n1, n2 in zip(norms, norms[1:]))
    small_end = errs[-1] < 1e-4 * (1 + max(abs(t) for t in target))
    return decreasing and escaping and norms[-1] > 1e3 and small_end


# ---------------------------------------------------------------------------
# real non-properness for the built-in family
# ---------------------------------------------------------------------------

def real_jelonek_builtin(F: PolyMap) -> Optional[AlgebraicSet]:
    """Real semialgebraic non-properness set for maps (x, c*x^k*q(y)).

    Requires F1 = x exactly and F2 = g(x)*q(y) with g a monomial vanishing
    at 0 and q a real quadratic; escaping real fibers then push the image
    onto {alpha = 0} with the sign of beta fixed by lc(q) and the sign of g
    near 0 (equivalently, by the sign of the real fiber discriminant).
    Returns None when the map is outside the family.
    """
    if F.n != 2:
        return None
    x, y = F.variables
    f1, f2 = F.components
    if f1 != MultiPoly.var(F.variables, x) or f2.is_zero():
        return None
    cdict = f2.coefficients_in(y)
    if not cdict or max(cdict) != 2:
        return None
    gx = None
    for cp in cdict.values():
        gx = cp if gx is None else poly_gcd(gx, cp)
    if gx is None or gx.degree_in(x) < 1 or gx.degree_in(y) > 0:
        return None
    if len(gx.terms) != 1:
        return None
    q = exact_divide(f2, gx)
    if q.degree_in(x) > 0:
        return None
    lead = q.coefficients_in(y).get(2)
    if lead is None:
        return None
    lc = lead.constant_term()
    gcoeff = next(iter(gx.terms.values()))
    if not (lc.is_real() and gcoeff.is_real()):
        return None
    if any(not c.is_real() for c in q.terms.values()):
        return None
    xexp = next(iter(gx.terms))[F.variables.index(x)]
    tv = TARGET_VARS
    alpha = MultiPoly.var(tv, tv[0])
    beta = MultiPoly.var(tv, tv[1])
    if xexp % 2 == 1:
        # g changes sign through 0: every real beta is a limit value
        return AlgebraicSet(tv, (alpha,), REAL_SEMIALGEBRAIC)
    sign = 1 if (lc.re > 0) == (gcoeff.re > 0) else -1
    cond_poly = beta if sign > 0 else -beta
    return AlgebraicSet(tv, (alpha,), REAL_SEMIALGEBRAIC,
                        (SignCondition(cond_poly, ">="),))


# ---------------------------------------------------------------------------
# properness verdicts and reports
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PropernessReport:
    verdict: str  # Proper | NonProper | Unknown
    witness: Optional[WitnessArc] = None
    jelonek: Optional[AlgebraicSet] = None
    note: str = ""

    def to_json(self) -> Dict:
        return {
            "verdict": self.verdict,
            "witness": self.witness.to_json() if self.witness else None,
            "jelonek": self.jelonek.to_json() if self.jelonek else None,
            "note": self.note,
        }


def properness_test(F: PolyMap, seed: int = 0) -> PropernessReport:
    """Proper / NonProper / Unknown with witnesses.

    For n = 2 the exact non-properness set decides; a nonempty confirmed
    component carries a witness arc.  Other dimensions fall back to a pure
    witness search over a few generic targets and report Unknown on failure.
    """
    if F.n == 2:
        try:
            S = jelonek_set(F, seed=seed)
        except AnalysisError as exc:
            return PropernessReport("Unknown", note=str(exc))
        if S.is_trivially_empty():
            arc = witness_arc_search(F, [0j] * F.n, seed=seed)
            if arc is not None:
                return PropernessReport(
                    "NonProper", witness=arc,
                    note="witness arc found despite empty computed set")
            return PropernessReport("Proper", jelonek=S)
        pts = S.sample_points(3, seed=seed)
        arc = None
        for p in pts:
            arc = witness_arc_search(F, p, seed=seed)
            if arc is not None:
                break
        return PropernessReport("NonProper", witness=arc, jelonek=S)
    rng = np.random.default_rng(seed)
    for _ in range(3):
        tgt = [complex(v) for v in rng.normal(size=F.n)]
        arc = witness_arc_search(F, tgt, seed=seed)
        if arc is not None:
            return PropernessReport("NonProper", witness=arc)
    return PropernessReport(
        "Unknown", note="witness search inconclusive; no exact backend for n != 2")


@dataclass(frozen=True)
class MapAnalysis:
    map: PolyMap
    singular: AlgebraicSet
    critical: AlgebraicSet
    jelonek_complex: AlgebraicSet
    jelonek_real: Optional[AlgebraicSet]
    properness: PropernessReport
    leading_rank: object

    def to_json(self) -> Dict:
        return {
            "singular_locus": self.singular.to_json(),
            "critical_values": self.critical.to_json(),
            "jelonek_complex": self.jelonek_complex.to_json(),
            "jelonek_real": (self.jelonek_real.to_json()
                             if self.jelonek_real else None),
            "verdict": self.properness.verdict,
            "generators": [str(g) for g in self.jelonek_complex.generators],
            "sign_conditions": ([str(s) for s in self.jelonek_real.sign_conditions]
                                if self.jelonek_real else []),
            "witnesses": ([self.properness.witness.to_json()]
                          if self.properness.witness else []),
            "leading_rank": {
                "rank": self.leading_rank.rank,
                "condition_holds": self.leading_rank.condition_holds,
            },
        }


def analyze_map(F: PolyMap, seed: int = 0) -> MapAnalysis:
    """Full analysis bundle used by reports and the model builder."""
    from .infinity import leading_rank as _leading_rank
    if F.n != 2:
        raise AnalysisError("full analysis implemented for n = 2 only")
    sing = singular_locus(F)
    crit = critical_values(F, seed=seed)
    jel = jelonek_set(F, seed=seed)
    jreal = real_jelonek_builtin(F)
    prop = properness_test(F, seed=seed)
    rank = _leading_rank(F, seed=seed)
    return MapAnalysis(F, sing, crit, jel, jreal, prop, rank)
