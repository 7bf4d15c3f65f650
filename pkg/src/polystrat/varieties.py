"""Finite generator-list descriptions of algebraic and semialgebraic sets.

An :class:`AlgebraicSet` is the common zero set of its generators (possibly
redundant, never reduced beyond squarefree parts).  Real semialgebraic sets
additionally carry sign conditions.  Unions with several components keep the
component generator lists for reporting; the flat ``generators`` list is the
pairwise-product encoding of the union, so each generator vanishes on the
whole set.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .gaussian import GaussianRational, gr
from .polynomials import MultiPoly, squarefree_part

COMPLEX_ALGEBRAIC = "complex-algebraic"
REAL_SEMIALGEBRAIC = "real-semialgebraic"

_RELATIONS = (">=", ">", "=")


@dataclass(frozen=True)
class SignCondition:
    poly: MultiPoly
    relation: str

    def __post_init__(self):
        if self.relation not in _RELATIONS:
            raise ValueError(f"relation must be one of {_RELATIONS}")

    def holds_numeric(self, point: Sequence[complex], tol: float = 1e-9) -> bool:
        v = self.poly.evaluate_complex(point)
        if abs(v.imag) > tol:
            return False
        if self.relation == "=":
            return abs(v.real) <= tol
        if self.relation == ">=":
            return v.real >= -tol
        return v.real > tol

    def __str__(self) -> str:
        return f"{self.poly} {self.relation} 0"


@dataclass(frozen=True)
class AlgebraicSet:
    ambient_vars: Tuple[str, ...]
    generators: Tuple[MultiPoly, ...]
    flavor: str = COMPLEX_ALGEBRAIC
    sign_conditions: Tuple[SignCondition, ...] = ()
    components: Tuple[Tuple[MultiPoly, ...], ...] = ()

    def __post_init__(self):
        for g in self.generators:
            if g.is_zero():
                raise ValueError("zero generator not allowed")
            if g.variables != self.ambient_vars:
                raise ValueError("generator uses wrong ambient variables")

    @staticmethod
    def whole_space(ambient_vars: Sequence[str]) -> "AlgebraicSet":
        return AlgebraicSet(tuple(ambient_vars), ())

    @staticmethod
    def empty(ambient_vars: Sequence[str]) -> "AlgebraicSet":
        """The empty set, encoded by the unit generator."""
        v = tuple(ambient_vars)
        return AlgebraicSet(v, (MultiPoly.const(v, gr(1)),))

    @staticmethod
    def from_generators(gens: Sequence[MultiPoly],
                        flavor: str = COMPLEX_ALGEBRAIC,
                        sign_conditions: Sequence[SignCondition] = ()) -> "AlgebraicSet":
        if not gens:
            raise ValueError("need at least one generator (or use whole_space)")
        return AlgebraicSet(gens[0].variables, tuple(gens), flavor,
                            tuple(sign_conditions))

    def is_whole_space(self) -> bool:
        return not self.generators and not self.sign_conditions

    def is_trivially_empty(self) -> bool:
        """True when some generator is a nonzero constant."""
        return any(g.is_constant() and not g.is_zero() for g in self.generators)

    def contains_numeric(self, point: Sequence[complex], tol: float = 1e-7) -> bool:
        if self.is_trivially_empty():
            return False
        for g in self.generators:
            if abs(g.evaluate_complex(point)) > tol:
                return False
        for sc in self.sign_conditions:
            if not sc.holds_numeric(point, tol):
                return False
        return True

    def contains_exact(self, point: Sequence[GaussianRational]) -> bool:
        if self.is_trivially_empty():
            return False
        if self.sign_conditions:
            for sc in self.sign_conditions:
                v = sc.poly.evaluate(point)
                if not v.is_real():
                    return False
                if sc.relation == "=" and v.re != 0:
                    return False
                if sc.relation == ">=" and v.re < 0:
                    return False
                if sc.relation == ">" and v.re <= 0:
                    return False
        return all(g.evaluate(point).is_zero() for g in self.generators)

    def sample_points(self, count: int, seed: int = 0,
                      scale: int = 7) -> List[List[complex]]:
        """Numeric points on the zero set (2-variable curve case).

        For a single-curve description, picks rational values for one
        variable and solves the specialized univariate generator for the
        other.  Used by membership cross-checks, not by exact reasoning.
        """
        if self.is_trivially_empty() or not self.generators:
            return []
        if len(self.ambient_vars) != 2:
            raise ValueError("sampling implemented for plane curves only")
        rng = np.random.default_rng(seed)
        pts: List[List[complex]] = []
        g = self.generators[0]
        v0, v1 = self.ambient_vars
        attempts = 0
        while len(pts) < count and attempts < count * 20:
            attempts += 1
            # alternate which variable is free
            free_first = attempts % 2 == 0
            val = gr(int(rng.integers(-scale, scale + 1)),
                     0)
            name_fixed = v0 if free_first else v1
            name_solve = v1 if free_first else v0
            spec = g.specialize({name_fixed: val})
            if spec.degree_in(name_solve) < 1:
                if spec.is_zero():
                    other = complex(int(rng.integers(-scale, scale + 1)))
                    p = {name_fixed: val.to_complex(), name_solve: other}
                    pts.append([p[v0], p[v1]])
                continue
            cdict = spec.coefficients_in(name_solve)
            deg = max(cdict)
            dense = [0j] * (deg + 1)
            for k, cp in cdict.items():
                dense[k] = cp.constant_term().to_complex()
            roots = np.roots(dense[::-1])
            for r in roots:
                p = {name_fixed: val.to_complex(), name_solve: complex(r)}
                pts.append([p[v0], p[v1]])
                if len(pts) >= count:
                    break
        # verify residuals; other generators may cut the sample down
        good = [p for p in pts if self.contains_numeric(p, tol=1e-6)]
        return good[:count]

    def describe(self) -> str:
        if self.is_whole_space():
            return "whole space"
        if self.is_trivially_empty():
            return "empty"
        parts = [f"{g} = 0" for g in self.generators]
        parts += [str(sc) for sc in self.sign_conditions]
        return "{ " + ", ".join(parts) + " }"

    def to_json(self) -> Dict:
        return {
            "ambient_vars": list(self.ambient_vars),
            "generators": [str(g) for g in self.generators],
            "flavor": self.flavor,
            "sign_conditions": [
                {"poly": str(sc.poly), "relation": sc.relation}
                for sc in self.sign_conditions
            ],
            "components": [[str(g) for g in comp] for comp in self.components],
        }


def union_of_components(components: Sequence[Sequence[MultiPoly]]) -> AlgebraicSet:
    """Encode a finite union of common-zero sets as one AlgebraicSet.

    Generators are the squarefree parts of all cross-products, so every
    generator vanishes on every component.
    """
    comps = [tuple(c) for c in components if c]
    if not comps:
        raise ValueError("no components")
    ambient = comps[0][0].variables
    gens: List[MultiPoly] = []
    for pick in itertools.product(*comps):
        prod = pick[0]
        for g in pick[1:]:
            prod = prod * g
        prod = squarefree_part(prod)
        if all(prod != h for h in gens):
            gens.append(prod)
    return AlgebraicSet(ambient, tuple(gens), COMPLEX_ALGEBRAIC,
                        components=tuple(comps))
