"""Exact sparse multivariate polynomials over the Gaussian rationals.

A polynomial is a map from exponent tuples to nonzero ``GaussianRational``
coefficients, together with an ordered variable list.  The zero polynomial
stores no terms and has degree -1 (a sentinel every degree-dependent caller
must branch on).  Printing uses graded lexicographic order on the declared
variables and round-trips through :func:`parse_poly`.

The module also provides the elimination workhorses used elsewhere:
Sylvester resultants, fraction-free polynomial determinants, multivariate
gcd by a primitive pseudo-remainder sequence, and squarefree reduction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .gaussian import GaussianRational, gr, ONE, ZERO

Exponent = Tuple[int, ...]


class PolyError(ValueError):
    pass


class PolyParseError(PolyError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class UnknownVariableError(PolyError):
    def __init__(self, name: str, position: int = -1):
        at = f" (at position {position})" if position >= 0 else ""
        super().__init__(f"unknown variable {name!r}{at}")
        self.name = name


@dataclass(frozen=True)
class MultiPoly:
    """Sparse polynomial in a fixed ordered tuple of variables."""

    variables: Tuple[str, ...]
    terms: Dict[Exponent, GaussianRational] = field(default_factory=dict)

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero(variables: Sequence[str]) -> "MultiPoly":
        return MultiPoly(tuple(variables), {})

    @staticmethod
    def const(variables: Sequence[str], value: GaussianRational) -> "MultiPoly":
        v = tuple(variables)
        if value.is_zero():
            return MultiPoly(v, {})
        return MultiPoly(v, {(0,) * len(v): value})

    @staticmethod
    def var(variables: Sequence[str], name: str) -> "MultiPoly":
        v = tuple(variables)
        if name not in v:
            raise UnknownVariableError(name)
        e = [0] * len(v)
        e[v.index(name)] = 1
        return MultiPoly(v, {tuple(e): ONE})

    # -- basic queries ------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self.terms)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, name: str) -> int:
        if name not in self.variables:
            raise UnknownVariableError(name)
        if not self.terms:
            return -1
        i = self.variables.index(name)
        return max(e[i] for e in self.terms)

    def constant_term(self) -> GaussianRational:
        return self.terms.get((0,) * len(self.variables), ZERO)

    def active_variables(self) -> Tuple[str, ...]:
        idx = [i for i in range(len(self.variables))
               if any(e[i] > 0 for e in self.terms)]
        return tuple(self.variables[i] for i in idx)

    # -- arithmetic ---------------------------------------------------

    def _check_same_ring(self, other: "MultiPoly") -> None:
        if self.variables != other.variables:
            raise PolyError(
                f"variable mismatch: {self.variables} vs {other.variables}")

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        self._check_same_ring(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, ZERO) + c
            if s.is_zero():
                out.pop(e, None)
            else:
                out[e] = s
        return MultiPoly(self.variables, out)

    def __sub__(self, other: "MultiPoly") -> "MultiPoly":
        return self + (-other)

    def __neg__(self) -> "MultiPoly":
        return MultiPoly(self.variables, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other: "MultiPoly") -> "MultiPoly":
        self._check_same_ring(other)
        out: Dict[Exponent, GaussianRational] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, ZERO) + c1 * c2
                if s.is_zero():
                    out.pop(e, None)
                else:
                    out[e] = s
        return MultiPoly(self.variables, out)

    def scale(self, c: GaussianRational) -> "MultiPoly":
        if c.is_zero():
            return MultiPoly.zero(self.variables)
        return MultiPoly(self.variables,
                         {e: k * c for e, k in self.terms.items()})

    def __pow__(self, k: int) -> "MultiPoly":
        if k < 0:
            raise PolyError("negative polynomial power")
        out = MultiPoly.const(self.variables, ONE)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, MultiPoly)
                and self.variables == other.variables
                and self.terms == other.terms)

    # -- calculus and structure ----------------------------------------

    def derivative(self, name: str) -> "MultiPoly":
        """Formal partial derivative with respect to a declared variable."""
        if name not in self.variables:
            raise UnknownVariableError(name)
        i = self.variables.index(name)
        out: Dict[Exponent, GaussianRational] = {}
        for e, c in self.terms.items():
            if e[i] == 0:
                continue
            ne = list(e)
            ne[i] -= 1
            out[tuple(ne)] = c * gr(e[i])
        return MultiPoly(self.variables, out)

    def leading_form(self) -> "MultiPoly":
        """Sum of the terms of maximal total degree (a homogeneous polynomial)."""
        if not self.terms:
            raise PolyError("leading form of the zero polynomial is undefined")
        d = self.degree()
        return MultiPoly(self.variables,
                         {e: c for e, c in self.terms.items() if sum(e) == d})

    def is_homogeneous(self) -> bool:
        if not self.terms:
            return True
        degs = {sum(e) for e in self.terms}
        return len(degs) == 1

    def evaluate(self, point: Sequence[GaussianRational]) -> GaussianRational:
        if len(point) != len(self.variables):
            raise PolyError(
                f"point has length {len(point)}, expected {len(self.variables)}")
        total = ZERO
        for e, c in self.terms.items():
            v = c
            for p, k in zip(point, e):
                if k:
                    v = v * (p ** k)
            total = total + v
        return total

    def evaluate_complex(self, point: Sequence[complex]) -> complex:
        """Floating-point evaluation, for sampling-based callers only."""
        total = 0j
        for e, c in self.terms.items():
            v = c.to_complex()
            for p, k in zip(point, e):
                if k:
                    v *= p ** k
            total += v
        return total

    def specialize(self, assignment: Mapping[str, GaussianRational]) -> "MultiPoly":
        """Substitute exact values for a subset of the variables."""
        for name in assignment:
            if name not in self.variables:
                raise UnknownVariableError(name)
        out = MultiPoly.zero(self.variables)
        for e, c in self.terms.items():
            coeff = c
            ne = list(e)
            for name, val in assignment.items():
                i = self.variables.index(name)
                if e[i]:
                    coeff = coeff * (val ** e[i])
                ne[i] = 0
            out = out + MultiPoly(self.variables, {tuple(ne): coeff}) \
                if not coeff.is_zero() else out
        return out

    def compose(self, replacements: Sequence["MultiPoly"]) -> "MultiPoly":
        """Substitute a polynomial for every variable (all in one shared ring)."""
        if len(replacements) != len(self.variables):
            raise PolyError("need one replacement per variable")
        ring = replacements[0].variables
        out = MultiPoly.zero(ring)
        for e, c in self.terms.items():
            term = MultiPoly.const(ring, c)
            for r, k in zip(replacements, e):
                if k:
                    term = term * (r ** k)
            out = out + term
        return out

    def rename(self, variables: Sequence[str]) -> "MultiPoly":
        """Reinterpret in a ring with the given (superset-compatible) variables."""
        new = tuple(variables)
        idx = []
        for v in self.variables:
            if v not in new:
                if any(e[self.variables.index(v)] > 0 for e in self.terms):
                    raise PolyError(f"cannot drop active variable {v!r}")
                idx.append(None)
            else:
                idx.append(new.index(v))
        out: Dict[Exponent, GaussianRational] = {}
        for e, c in self.terms.items():
            ne = [0] * len(new)
            for j, k in enumerate(e):
                if k:
                    ne[idx[j]] = k
            out[tuple(ne)] = c
        return MultiPoly(new, out)

    # -- univariate views ----------------------------------------------

    def coefficients_in(self, name: str) -> Dict[int, "MultiPoly"]:
        """View as a univariate polynomial in ``name``; values keep the full ring."""
        if name not in self.variables:
            raise UnknownVariableError(name)
        i = self.variables.index(name)
        out: Dict[int, Dict[Exponent, GaussianRational]] = {}
        for e, c in self.terms.items():
            ne = list(e)
            k = ne[i]
            ne[i] = 0
            out.setdefault(k, {})[tuple(ne)] = c
        return {k: MultiPoly(self.variables, t) for k, t in out.items()}

    def leading_coefficient_in(self, name: str) -> "MultiPoly":
        d = self.degree_in(name)
        if d < 0:
            raise PolyError("zero polynomial has no leading coefficient")
        return self.coefficients_in(name).get(d, MultiPoly.zero(self.variables))

    def univariate(self) -> Tuple[str, List[GaussianRational]]:
        """Dense coefficient list (low to high) when at most one variable is active."""
        active = self.active_variables()
        if len(active) > 1:
            raise PolyError(f"not univariate: active variables {active}")
        name = active[0] if active else self.variables[0]
        d = max(self.degree_in(name), 0)
        coeffs = [ZERO] * (d + 1)
        for k, p in self.coefficients_in(name).items():
            coeffs[k] = p.constant_term()
        return name, coeffs

    # -- ordering and printing ------------------------------------------

    def sorted_terms(self) -> List[Tuple[Exponent, GaussianRational]]:
        """Terms in descending graded lexicographic order."""
        return sorted(self.terms.items(),
                      key=lambda ec: (sum(ec[0]), ec[0]), reverse=True)

    def leading_coefficient(self) -> GaussianRational:
        """Coefficient of the graded-lex leading term."""
        if not self.terms:
            return ZERO
        return self.sorted_terms()[0][1]

    def monic(self) -> "MultiPoly":
        """Divide by the graded-lex leading coefficient."""
        if not self.terms:
            return self
        return self.scale(self.leading_coefficient().inverse())

    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"MultiPoly({format_poly(self)!r}, vars={self.variables})"


@dataclass(frozen=True)
class PolyMap:
    """A polynomial self-map: n components sharing one n-variable ring."""

    components: Tuple[MultiPoly, ...]

    def __post_init__(self):
        if not self.components:
            raise PolyError("empty polynomial map")
        ring = self.components[0].variables
        for c in self.components:
            if c.variables != ring:
                raise PolyError("map components must share one variable list")
        if len(ring) != len(self.components):
            raise PolyError(
                f"{len(self.components)} components over {len(ring)} variables; "
                "self-maps need equal source and target dimension")

    @property
    def n(self) -> int:
        return len(self.components)

    @property
    def variables(self) -> Tuple[str, ...]:
        return self.components[0].variables

    def evaluate_complex(self, point: Sequence[complex]) -> List[complex]:
        return [c.evaluate_complex(point) for c in self.components]

    def evaluate(self, point: Sequence[GaussianRational]) -> List[GaussianRational]:
        return [c.evaluate(point) for c in self.components]


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

_TOKEN_OPS = set("+-*^()")


def _tokenize(text: str) -> List[Tuple[str, str, int]]:
    tokens: List[Tuple[str, str, int]] = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in _TOKEN_OPS or ch == "/":
            tokens.append(("op", ch, i))
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(("int", text[i:j], i))
            i = j
            continue
        if ch.isalpha():
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("name", text[i:j], i))
            i = j
            continue
        raise PolyParseError(f"unexpected character {ch!r}", i)
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    """Recursive descent over: expr = term (('+'|'-') term)*;
    term = factor ('*' factor)*; factor = ('+'|'-')* power;
    power = atom ('^' INT)?; atom = INT ('/' INT)? | 'i' | VAR | '(' expr ')'.

    Division appears only inside rational literals; implicit multiplication
    is rejected.
    """

    def __init__(self, text: str, variables: Sequence[str]):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.ring = tuple(variables)

    def peek(self) -> Tuple[str, str, int]:
        return self.tokens[self.pos]

    def next(self) -> Tuple[str, str, int]:
        t = self.tokens[self.pos]
        self.pos += 1
        return t

    def expect_op(self, op: str) -> None:
        kind, val, at = self.next()
        if kind != "op" or val != op:
            raise PolyParseError(f"expected {op!r}, found {val or 'end'!r}", at)

    def parse(self) -> MultiPoly:
        p = self.expr()
        kind, val, at = self.peek()
        if kind != "end":
            raise PolyParseError(f"unexpected trailing input {val!r}", at)
        return p

    def expr(self) -> MultiPoly:
        p = self.term()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.next()
                q = self.term()
                p = p + q if val == "+" else p - q
            else:
                return p

    def term(self) -> MultiPoly:
        p = self.factor()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val == "*":
                self.next()
                p = p * self.factor()
            else:
                return p

    def factor(self) -> MultiPoly:
        sign = 1
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.next()
                if val == "-":
                    sign = -sign
            else:
                break
        p = self.power()
        return p if sign > 0 else -p

    def power(self) -> MultiPoly:
        p = self.atom()
        kind, val, _ = self.peek()
        if kind == "op" and val == "^":
            self.next()
            kind, val, at = self.next()
            if kind != "int":
                raise PolyParseError("exponent must be a nonnegative integer", at)
            p = p ** int(val)
        return p

    def atom(self) -> MultiPoly:
        kind, val, at = self.next()
        if kind == "int":
            num = int(val)
            k2, v2, _ = self.peek()
            if k2 == "op" and v2 == "/":
                self.next()
                k3, v3, at3 = self.next()
                if k3 != "int":
                    raise PolyParseError("denominator must be an integer", at3)
                den = int(v3)
                if den == 0:
                    raise PolyParseError("zero denominator", at3)
                return MultiPoly.const(self.ring, gr(Fraction(num, den)))
            return MultiPoly.const(self.ring, gr(num))
        if kind == "name":
            if val == "i":
                return MultiPoly.const(self.ring, gr(0, 1))
            if val not in self.ring:
                raise UnknownVariableError(val, at)
            return MultiPoly.var(self.ring, val)
        if kind == "op" and val == "(":
            p = self.expr()
            self.expect_op(")")
            return p
        raise PolyParseError(f"unexpected token {val or 'end'!r}", at)


def parse_poly(text: str, variables: Sequence[str]) -> MultiPoly:
    """Parse an expression into canonical expanded form.

    Grammar: integers, rationals a/b, the imaginary unit i, declared
    variables, operators + - * ^ and parentheses.  ``i`` is reserved and
    cannot be declared as a variable.
    """
    if "i" in variables:
        raise PolyError("'i' is reserved for the imaginary unit")
    return _Parser(text, variables).parse()


def _format_coeff(c: GaussianRational, alone: bool) -> str:
    """Render a coefficient for the printer.

    ``alone`` means no monomial follows (so no '*' will be appended).
    Returns (text) where text never starts with '-'; callers handle signs
    for real or purely imaginary coefficients, while mixed coefficients are
    parenthesized verbatim.
    """
    if c.im == 0:
        return str(c.re)
    if c.re == 0:
        if c.im == 1:
            return "i"
        return f"{c.im}*i"
    sign = "+" if c.im > 0 else "-"
    mag = abs(c.im)
    itxt = "i" if mag == 1 else f"{mag}*i"
    return f"({c.re}{sign}{itxt})"


def format_poly(p: MultiPoly) -> str:
    """Graded-lex descending rendering that reparses to the same polynomial."""
    if p.is_zero():
        return "0"
    parts: List[str] = []
    for e, c in p.sorted_terms():
        mono = "*".join(
            (v if k == 1 else f"{v}^{k}")
            for v, k in zip(p.variables, e) if k > 0)
        neg = False
        cc = c
        if c.im == 0 and c.re < 0:
            neg, cc = True, -c
        elif c.re == 0 and c.im < 0:
            neg, cc = True, -c
        if mono:
            if cc.re == 1 and cc.im == 0:
                body = mono
            else:
                body = f"{_format_coeff(cc, alone=False)}*{mono}"
        else:
            body = _format_coeff(cc, alone=True)
        if not parts:
            parts.append(f"-{body}" if neg else body)
        else:
            parts.append(f"- {body}" if neg else f"+ {body}")
    return " ".join(parts)


# ---------------------------------------------------------------------------
# determinants, resultants, gcd
# ---------------------------------------------------------------------------

def exact_divide(num: MultiPoly, den: MultiPoly) -> MultiPoly:
    """Exact polynomial division; raises PolyError if den does not divide num."""
    if den.is_zero():
        raise PolyError("division by the zero polynomial")
    num._check_same_ring(den)
    quo = MultiPoly.zero(num.variables)
    rem = num
    d_terms = den.sorted_terms()
    de, dc = d_terms[0]
    while not rem.is_zero():
        re_, rc = rem.sorted_terms()[0]
        qe = tuple(a - b for a, b in zip(re_, de))
        if any(k < 0 for k in qe):
            raise PolyError("inexact polynomial division")
        qt = MultiPoly(num.variables, {qe: rc / dc})
        quo = quo + qt
        rem = rem - qt * den
    return quo


def poly_det(matrix: Sequence[Sequence[MultiPoly]]) -> MultiPoly:
    """Fraction-free (Bareiss) determinant of a square matrix of polynomials."""
    n = len(matrix)
    if n == 0:
        raise PolyError("empty matrix")
    ring = matrix[0][0].variables
    m = [list(row) for row in matrix]
    sign = 1
    prev = MultiPoly.const(ring, ONE)
    for k in range(n - 1):
        if m[k][k].is_zero():
            pivot = next((r for r in range(k + 1, n) if not m[r][k].is_zero()), None)
            if pivot is None:
                return MultiPoly.zero(ring)
            m[k], m[pivot] = m[pivot], m[k]
            sign = -sign
        for r in range(k + 1, n):
            for c in range(k + 1, n):
                m[r][c] = exact_divide(
                    m[k][k] * m[r][c] - m[r][k] * m[k][c], prev)
            m[r][k] = MultiPoly.zero(ring)
        prev = m[k][k]
    det = m[n - 1][n - 1]
    return det if sign > 0 else -det


def jacobian_matrix(F: PolyMap) -> List[List[MultiPoly]]:
    return [[c.derivative(v) for v in F.variables] for c in F.components]


def jacobian_det(F: PolyMap) -> MultiPoly:
    """Determinant of the Jacobian matrix, fully expanded."""
    return poly_det(jacobian_matrix(F))


def sylvester_matrix(p: MultiPoly, q: MultiPoly, name: str) -> List[List[MultiPoly]]:
    dp = p.degree_in(name)
    dq = q.degree_in(name)
    ring = p.variables
    zero = MultiPoly.zero(ring)
    pc = p.coefficients_in(name)
    qc = q.coefficients_in(name)
    size = dp + dq
    rows: List[List[MultiPoly]] = []
    for shift in range(dq):
        row = [zero] * size
        for k in range(dp + 1):
            row[shift + dp - k] = pc.get(k, zero)
        rows.append(row)
    for shift in range(dp):
        row = [zero] * size
        for k in range(dq + 1):
            row[shift + dq - k] = qc.get(k, zero)
        rows.append(row)
    return rows


def resultant(p: MultiPoly, q: MultiPoly, name: str) -> MultiPoly:
    """Sylvester resultant with respect to one variable.

    When one argument is constant in the variable, the convention
    res(p, q) = p^{deg q} (resp. q^{deg p}) applies; both arguments constant
    in the variable is an error.
    """
    if p.is_zero() or q.is_zero():
        raise PolyError("resultant of the zero polynomial")
    dp = p.degree_in(name)
    dq = q.degree_in(name)
    if dp <= 0 and dq <= 0:
        raise PolyError(f"neither argument involves {name!r}")
    if dp == 0:
        return p ** dq
    if dq == 0:
        return q ** dp
    return poly_det(sylvester_matrix(p, q, name))


def _content_and_primitive(p: MultiPoly, name: str) -> Tuple[MultiPoly, MultiPoly]:
    """Content/primitive split of p viewed univariately in ``name``."""
    coeffs = list(p.coefficients_in(name).values())
    cont = coeffs[0]
    for c in coeffs[1:]:
        cont = poly_gcd(cont, c)
        if cont.is_constant():
            break
    if cont.is_constant():
        cont = MultiPoly.const(p.variables, ONE)
    return cont, exact_divide(p, cont)


def _pseudo_remainder(p: MultiPoly, q: MultiPoly, name: str) -> MultiPoly:
    """prem(p, q) in the variable ``name``: lc(q)^(dp-dq+1) p mod q."""
    dp = p.degree_in(name)
    dq = q.degree_in(name)
    lc_q = q.leading_coefficient_in(name)
    x = MultiPoly.var(p.variables, name)
    rem = p
    while not rem.is_zero() and rem.degree_in(name) >= dq:
        dr = rem.degree_in(name)
        lc_r = rem.leading_coefficient_in(name)
        rem = rem.scale(ONE) * lc_q - q * lc_r * (x ** (dr - dq))
        # scale the remaining pseudo-division budget uniformly
        dp = dr
    return rem


def poly_gcd(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    """Multivariate gcd (primitive PRS), normalized to graded-lex monic.

    Constants are units: the gcd of nonzero constants is 1.
    """
    if p.is_zero():
        return q.monic()
    if q.is_zero():
        return p.monic()
    if p.is_constant() or q.is_constant():
        return MultiPoly.const(p.variables, ONE)
    name = next(v for v in p.variables
                if p.degree_in(v) > 0 or q.degree_in(v) > 0)
    if p.degree_in(name) == 0 or q.degree_in(name) == 0:
        # one argument is free of the chosen main variable: gcd divides its
        # coefficients in that variable
        if p.degree_in(name) == 0:
            free, other = p, q
        else:
            free, other = q, p
        g = free
        for c in other.coefficients_in(name).values():
            g = poly_gcd(g, c)
            if g.is_constant():
                return MultiPoly.const(p.variables, ONE)
        return g.monic()
    cp, pp = _content_and_primitive(p, name)
    cq, qq = _content_and_primitive(q, name)
    a, b = pp, qq
    if a.degree_in(name) < b.degree_in(name):
        a, b = b, a
    while True:
        r = _pseudo_remainder(a, b, name)
        if r.is_zero():
            break
        if r.degree_in(name) == 0:
            b = MultiPoly.const(p.variables, ONE)
            break
        _, r = _content_and_primitive(r, name)
        a, b = b, r
    g = b
    cont = poly_gcd(cp, cq)
    return (g * cont).monic()


def squarefree_part(p: MultiPoly) -> MultiPoly:
    """p divided by gcd(p, all partials); graded-lex monic.

    Over characteristic zero this removes repeated factors exactly.
    Constants reduce to 1.
    """
    if p.is_zero():
        raise PolyError("squarefree part of the zero polynomial")
    if p.is_constant():
        return MultiPoly.const(p.variables, ONE)
    g = p
    for v in p.active_variables():
        g = poly_gcd(g, p.derivative(v))
        if g.is_constant():
            return p.monic()
    return exact_divide(p, g).monic()


def factor_candidates(p: MultiPoly) -> List[MultiPoly]:
    """Split a polynomial into coarse factors without true factorization.

    Iterated content/primitive splits over each variable, applied to the
    squarefree part.  The result is a list of monic polynomials whose product
    has the same zero set as p.  Factors that are irreducible only split
    further if they are contents in some variable.
    """
    work = [squarefree_part(p)]
    out: List[MultiPoly] = []
    while work:
        q = work.pop()
        if q.is_constant():
            continue
        split = False
        for v in q.active_variables():
            if q.degree_in(v) == 0:
                continue
            cont, prim = _content_and_primitive(q, v)
            if not cont.is_constant():
                work.append(cont)
                work.append(prim)
                split = True
                break
        if not split:
            out.append(q.monic())
    # dedupe identical factors
    uniq: List[MultiPoly] = []
    for f in out:
        if all(f != g for g in uniq):
            uniq.append(f)
    return uniq


# ---------------------------------------------------------------------------
# univariate tools (exact)
# ---------------------------------------------------------------------------

def univariate_gcd(a: List[GaussianRational], b: List[GaussianRational]) -> List[GaussianRational]:
    """Euclidean gcd of dense univariate coefficient lists (low to high)."""
    def trim(c):
        while c and c[-1].is_zero():
            c.pop()
        return c

    a, b = trim(list(a)), trim(list(b))
    while b:
        # a mod b
        r = list(a)
        db = len(b) - 1
        lb = b[-1]
        while len(r) - 1 >= db and r:
            dr = len(r) - 1
            f = r[-1] / lb
            for k in range(db + 1):
                r[dr - db + k] = r[dr - db + k] - f * b[k]
            trim(r)
            if not r:
                break
        a, b = b, r
    if a:
        lead = a[-1]
        a = [c / lead for c in a]
    return a


def univariate_squarefree(coeffs: List[GaussianRational]) -> List[GaussianRational]:
    """Squarefree part of a dense univariate polynomial, monic."""
    c = [x for x in coeffs]
    while c and c[-1].is_zero():
        c.pop()
    if len(c) <= 1:
        return [ONE] if c else []
    deriv = [c[k].__mul__(gr(k)) for k in range(1, len(c))]
    g = univariate_gcd(c, deriv)
    if len(g) <= 1:
        lead = c[-1]
        return [x / lead for x in c]
    # exact division c / g
    q: List[GaussianRational] = [ZERO] * (len(c) - len(g) + 1)
    r = list(c)
    dg = len(g) - 1
    while len(r) - 1 >= dg and any(not x.is_zero() for x in r):
        dr = len(r) - 1
        f = r[-1] / g[-1]
        q[dr - dg] = f
        for k in range(dg + 1):
            r[dr - dg + k] = r[dr - dg + k] - f * g[k]
        while r and r[-1].is_zero():
            r.pop()
    lead = q[-1]
    return [x / lead for x in q]


def sturm_real_root_count(coeffs: List[Fraction]) -> int:
    """Number of distinct real roots of a real univariate polynomial.

    Uses the Sturm chain of the squarefree part, with sign variations
    evaluated at -inf and +inf.
    """
    sq = univariate_squarefree([gr(c) for c in coeffs])
    p = [c.re for c in sq]
    if len(p) <= 1:
        return 0
    chain: List[List[Fraction]] = [p, [p[k] * k for k in range(1, len(p))]]
    while True:
        a, b = chain[-2], chain[-1]
        if len(b) == 0:
            break
        r = list(a)
        db = len(b) - 1
        while len(r) - 1 >= db and any(x != 0 for x in r):
            dr = len(r) - 1
            f = r[-1] / b[-1]
            for k in range(db + 1):
                r[dr - db + k] -= f * b[k]
            while r and r[-1] == 0:
                r.pop()
        if not r:
            break
        chain.append([-x for x in r])
        if len(chain[-1]) == 1:
            break

    def variations(at_inf: int) -> int:
        signs = []
        for c in chain:
            if not c:
                continue
            lead = c[-1]
            s = lead if at_inf > 0 else lead * (-1) ** (len(c) - 1)
            if s != 0:
                signs.append(1 if s > 0 else -1)
        return sum(1 for a, b in zip(signs, signs[1:]) if a != b)

    return variations(-1) - variations(+1)
