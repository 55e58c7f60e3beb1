"""Anderson-Thakur polynomials, the Omega series, the deformation-series
evaluator, Frobenius difference systems, and the Carlitz tensor-power
module action with torsion search.

All ramified arithmetic (the (q-1)-th roots of -theta) is carried by the
integer grade of GradedSeries; no root of theta is ever materialised.
Difference equations are checked in once-forward-twisted form,
psi = Phi^(1) psi^(1), because the forward twist keeps grades integral.

The evaluator uses the derived evaluations Omega^(l)(theta) = 1/(pi~ L_l)
(a consequence of the difference equation satisfied by Omega) so that the
normalised value pi~^w * L(theta) stays inside k_infinity.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    BudgetError,
    ConvergenceError,
    DomainError,
    FFZetaError,
    InvalidIndexError,
    ResolutionError,
)
from .indices import coerce_index
from .laurent import INF, Laurent
from .scalar import (
    BiPoly,
    Field,
    Poly,
    RatFunc,
    TVAR,
    bracket_D,
    carlitz_gamma,
    frobenius_twist,
    inverse_twist,
)
from .zeta import _l_power_inverse, convergence_check, infty_norm_degree, _validate_signs
from . import cache, linalg

AT_BUDGET = 400


# ---------------------------------------------------------------------------
# graded t-series
# ---------------------------------------------------------------------------

class GradedSeries:
    """A pair (m, f): the value (-theta)^{m/(q-1)} * f(t) with f a t-polynomial
    of degree <= cap over Laurent coefficients.

    Multiplication adds grades; the forward twist maps (m, f) to
    (m, (-theta)^m * f^(1)), so the grade stays integral.
    """

    __slots__ = ("field", "grade", "cap", "coeffs")

    def __init__(self, field: Field, grade: int, coeffs, cap: int):
        coeffs = list(coeffs)
        if len(coeffs) > cap + 1:
            coeffs = coeffs[: cap + 1]
        while len(coeffs) < cap + 1:
            coeffs.append(Laurent.zero(field))
        self.field = field
        self.grade = int(grade)
        self.cap = int(cap)
        self.coeffs = tuple(coeffs)

    @classmethod
    def one(cls, field, cap):
        return cls(field, 0, [Laurent.one(field)], cap)

    @classmethod
    def from_bipoly(cls, bp: BiPoly, cap: int, grade: int = 0):
        coeffs = [Laurent.from_poly(c) for c in bp.t_coeffs()]
        return cls(bp.field, grade, coeffs, cap)

    def _check(self, other):
        if self.field is not other.field or self.cap != other.cap:
            raise DomainError("mixed fields or t-degree caps")

    def __add__(self, other):
        self._check(other)
        if self.grade != other.grade:
            raise DomainError(f"grade mismatch: {self.grade} vs {other.grade}")
        return GradedSeries(
            self.field,
            self.grade,
            [a + b for a, b in zip(self.coeffs, other.coeffs)],
            self.cap,
        )

    def __mul__(self, other):
        if isinstance(other, BiPoly):
            other = GradedSeries.from_bipoly(other, self.cap)
        elif isinstance(other, Poly) and other.var == TVAR:
            other = GradedSeries.from_bipoly(BiPoly.from_poly(other), self.cap)
        self._check(other)
        out = [Laurent.zero(self.field) for _ in range(self.cap + 1)]
        for i, a in enumerate(self.coeffs):
            if a.is_exact_zero:
                continue
            for j, b in enumerate(other.coeffs):
                if i + j > self.cap:
                    break
                if not b.is_exact_zero:
                    out[i + j] = out[i + j] + a * b
        return GradedSeries(self.field, self.grade + other.grade, out, self.cap)

    def scale_laurent(self, c: Laurent):
        return GradedSeries(
            self.field, self.grade, [x * c for x in self.coeffs], self.cap
        )

    def __pow__(self, k: int):
        if k < 0:
            raise DomainError("negative GradedSeries power")
        result = GradedSeries.one(self.field, self.cap)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def twist(self, steps: int = 1):
        """Forward Frobenius twist of the represented value."""
        out = self
        fld = self.field
        for _ in range(steps):
            sign = fld.pow(fld.from_int(-1), out.grade)
            mono = Laurent.monomial(fld, sign, -out.grade)  # (-theta)^grade
            out = GradedSeries(
                fld,
                out.grade,
                [c.qth_power(1) * mono for c in out.coeffs],
                out.cap,
            )
        return out

    def truncate_prec(self, prec):
        return GradedSeries(
            self.field, self.grade, [c.truncate(prec) for c in self.coeffs], self.cap
        )

    def min_known_val(self):
        """Smallest valuation bound over the coefficients (INF when every
        coefficient is indistinguishable from zero)."""
        vals = [c.val for c in self.coeffs if c.coeffs.size]
        return min(vals) if vals else INF

    def all_fuzzy_zero(self):
        return all(c.is_zero_to_precision for c in self.coeffs)

    def eval_unit_at_theta_power(self, k: int) -> Laurent:
        """f(theta^{q^k}) for the unit part f (grade ignored)."""
        step = self.field.q ** k
        acc = Laurent.zero(self.field)
        for i, c in enumerate(self.coeffs):
            acc = acc + c.shift(-i * step)
        return acc

    def divide_by_t_minus_theta_q(self):
        """Synthetic division of the unit part by (t - theta^q): returns
        (quotient, remainder = f(theta^q)).  Degrees above the cap are
        suppressed; for the entire series handled here their contribution
        has far larger valuation than anything probed."""
        fld = self.field
        q = fld.q
        gs = [Laurent.zero(fld)] * (self.cap + 1)
        carry = Laurent.zero(fld)
        for i in range(self.cap, 0, -1):
            carry = self.coeffs[i] + carry.shift(-q)
            gs[i - 1] = carry
        rem = self.coeffs[0] + carry.shift(-q)
        return GradedSeries(fld, self.grade, gs, self.cap), rem

    def agrees_with(self, other) -> bool:
        self._check(other)
        if self.grade != other.grade:
            return False
        return all(a.agrees_with(b) for a, b in zip(self.coeffs, other.coeffs))

    def __repr__(self):
        return (
            f"GradedSeries(grade={self.grade}, cap={self.cap}, "
            f"f=[{', '.join(repr(c) for c in self.coeffs[:3])}...])"
        )


# ---------------------------------------------------------------------------
# Omega
# ---------------------------------------------------------------------------

def omega_unit(fld: Field, cap: int, prec) -> GradedSeries:
    """The unit part of Omega: prod_{i>=1} (1 - t * theta^{-q^i}), truncated
    to t-degree cap with coefficients exact through prec.  Every omitted
    factor differs from 1 only beyond prec."""
    if cap < 1 or prec < 1:
        raise DomainError("omega_unit wants cap >= 1 and prec >= 1")
    out = GradedSeries.one(fld, cap)
    i = 1
    while fld.q ** i <= prec:
        factor = GradedSeries(
            fld,
            0,
            [Laurent.one(fld), Laurent.monomial(fld, fld.neg(1), fld.q ** i)],
            cap,
        )
        out = out * factor
        i += 1
    return out.truncate_prec(prec)


def omega(fld: Field, cap: int, prec) -> GradedSeries:
    """Omega itself, housed as grade -q times the unit part."""
    unit = omega_unit(fld, cap, prec)
    return GradedSeries(fld, -fld.q, unit.coeffs, cap)


def omega_unit_equation_check(fld: Field, cap: int, prec) -> bool:
    """The difference equation of Omega in unit-part, forward-twisted form:
    Omega~ = (1 - t*theta^{-q}) * Omega~^(1)."""
    w = omega_unit(fld, cap, prec)
    twisted = GradedSeries(
        fld, 0, [c.qth_power(1) for c in w.coeffs], cap
    )
    factor = GradedSeries(
        fld,
        0,
        [Laurent.one(fld), Laurent.monomial(fld, fld.neg(1), fld.q)],
        cap,
    )
    return w.agrees_with(factor * twisted)


# ---------------------------------------------------------------------------
# Anderson-Thakur polynomials
# ---------------------------------------------------------------------------

class _TFrac:
    """num/den with num in F_q[theta][t] and den in F_q[t]; reduced."""

    __slots__ = ("num", "den")

    def __init__(self, num: BiPoly, den: Poly, reduce=True):
        if reduce and not num.is_zero and den.degree > 0:
            content = den
            for col in range(num.coeffs.shape[1]):
                column = Poly(num.field, num.coeffs[:, col], TVAR)
                if not column.is_zero:
                    content = content.gcd(column)
                if content.degree <= 0:
                    break
            if content.degree > 0:
                num = num.exact_div_t(content)
                den = den.exact_div(content)
        lead = den.leading()
        if lead != 1:
            inv = den.field.inv(lead)
            den = den.scale(inv)
            num = num.scale(inv)
        self.num = num
        self.den = den

    def __add__(self, other):
        g = self.den.gcd(other.den)
        da = self.den.exact_div(g) if g.degree > 0 else self.den
        db = other.den.exact_div(g) if g.degree > 0 else other.den
        num = self.num * db + other.num * da
        return _TFrac(num, da * other.den)

    def mul_frac(self, num: BiPoly, den: Poly):
        return _TFrac(self.num * num, self.den * den)


_AT_COEFF_MEMO: dict = {}
_AT_MEMO: dict = {}


def _at_coeffs(fld: Field, n: int):
    """Coefficients c_0..c_n of the inverted generating series, as _TFracs."""
    key = fld.q
    coeffs = _AT_COEFF_MEMO.setdefault(key, [])
    if len(coeffs) > n:
        return coeffs
    q = fld.q
    # g_{q^i} = F_i / D_i|_{theta=t}
    gens = {}
    i = 0
    while q ** i <= n:
        fi = BiPoly.one(fld)
        for j in range(1, i + 1):
            term = BiPoly.from_poly(Poly.monomial(fld, 1, q ** i, TVAR)) - BiPoly.from_poly(
                Poly.monomial(fld, 1, q ** j)
            )
            fi = fi * term
        gens[q ** i] = (fi, bracket_D(fld, i).with_var(TVAR))
        i += 1
    if not coeffs:
        coeffs.append(_TFrac(BiPoly.one(fld), Poly.one(fld, TVAR), reduce=False))
    for m in range(len(coeffs), n + 1):
        acc = None
        for step, (fnum, fden) in gens.items():
            if step <= m:
                term = coeffs[m - step].mul_frac(fnum, fden)
                acc = term if acc is None else acc + term
        coeffs.append(acc)
    return coeffs


def at_polynomial(fld: Field, n: int) -> BiPoly:
    """The Anderson-Thakur polynomial H_n in F_q[theta][t].

    Obtained by inverting the generating series
    1 - sum_i (F_i / D_i|_{theta=t}) x^{q^i} to order x^n and scaling the
    x^n coefficient by Gamma_{n+1}|_{theta=t}; the denominator must clear
    exactly (anything else indicates an arithmetic bug)."""
    if n < 0:
        raise InvalidIndexError("at_polynomial wants n >= 0")
    if n > AT_BUDGET:
        raise BudgetError(f"at_polynomial budget is n <= {AT_BUDGET}, got {n}")
    key = (fld.q, n)
    hit = _AT_MEMO.get(key)
    if hit is not None:
        return hit
    store = cache.get_active()
    if store is not None:
        payload = store.get("at_poly", key)
        if payload is not None:
            result = cache.bipoly_from_json(fld, payload)
            _AT_MEMO[key] = result
            return result
    frac = _at_coeffs(fld, n)[n]
    gamma_t = carlitz_gamma(fld, n + 1).with_var(TVAR)
    num = frac.num * gamma_t
    try:
        result = num.exact_div_t(frac.den)
    except DomainError as exc:
        raise FFZetaError(
            f"internal: H_{n} failed to clear its denominator (q={fld.q})"
        ) from exc
    _AT_MEMO[key] = result
    if store is not None:
        store.put("at_poly", key, cache.bipoly_to_json(result))
    return result


# ---------------------------------------------------------------------------
# the deformation evaluator (normalised by pi~^w)
# ---------------------------------------------------------------------------

def _coerce_q(fld: Field, item):
    if isinstance(item, BiPoly):
        return item
    if isinstance(item, Poly):
        return item if item.var == TVAR else BiPoly.from_poly(item)
    if isinstance(item, RatFunc):
        return item
    if isinstance(item, int):
        return RatFunc.constant(fld, item)
    raise DomainError(f"cannot interpret deformation input {item!r}")


def _twisted_value_at_point(fld: Field, qpoly, ell: int, point_pow: int, prec) -> Laurent:
    """Q^{(ell)} evaluated at t = theta^{q^point_pow}, exact or through prec."""
    if isinstance(qpoly, RatFunc):
        base_prec = max(prec // fld.q ** ell + 1, 0)
        return Laurent.from_ratfunc(qpoly, base_prec).qth_power(ell, out_prec=prec)
    if isinstance(qpoly, Poly):  # polynomial in t over F_q
        step = fld.q ** point_pow
        acc = Laurent.zero(fld)
        for k, c in enumerate(qpoly.coeffs):
            if c:
                acc = acc + Laurent.monomial(fld, int(c), -k * step)
        return acc
    # Q^(ell) evaluated at theta^{q^P} is sum_k c_k(theta)^{q^ell} theta^{k q^P}:
    # the twist powers the coefficients, the point only dilates the monomials
    step = fld.q ** point_pow
    acc = Laurent.zero(fld)
    for k in range(qpoly.coeffs.shape[0]):
        c = qpoly.t_coeff(k)
        if c.is_zero:
            continue
        part = Laurent.from_poly(c).qth_power(ell)
        acc = acc + part.shift(-k * step)
    return acc


def _norm_profile(fld: Field, item):
    """(max theta-degree, t-degree) bounds used for valuation pruning."""
    m = infty_norm_degree(item)
    tdeg = item.t_degree if isinstance(item, BiPoly) else (
        item.degree if isinstance(item, Poly) and item.var == TVAR else 0
    )
    return int(m), int(tdeg)


def deformation_value(fld: Field, s, qs, prec, eps=None, point_power: int = 0) -> Laurent:
    """The normalised deformation value pi~^{w q^P} * L_{s,Q}(theta^{q^P}).

    For P = 0 this is the plain normalised value: with Anderson-Thakur
    inputs it equals Gamma-scaled multizeta, with constant inputs the
    corresponding CMPL, and with a sign vector the remaining eps^l weights
    reproduce Gamma-scaled alternating multizeta (the fixed (q-1)-th roots
    cancel analytically against the normalisation).
    """
    s = coerce_index(s)
    prec = int(prec)
    if point_power not in (0, 1):
        raise DomainError("point_power must be 0 or 1")
    if point_power and eps is not None:
        raise DomainError("sign vectors are only supported at the theta point")
    qs = [_coerce_q(fld, item) for item in qs]
    if len(qs) != s.depth:
        raise InvalidIndexError("one deformation input per index entry required")
    if any(isinstance(item, RatFunc) and item.is_zero or
           isinstance(item, (Poly, BiPoly)) and item.is_zero for item in qs):
        return Laurent.zero(fld)
    if not convergence_check(fld, s, qs):
        bad = [j for j, item in enumerate(qs)
               if infty_norm_degree(item) * (fld.q - 1) >= fld.q * s[j]]
        raise ConvergenceError(f"deformation series diverges at slot(s) {bad}")
    signs = _validate_signs(fld, s, eps) if eps is not None else None
    q = fld.q
    r = s.depth
    P = point_power
    profiles = [_norm_profile(fld, item) for item in qs]

    def denom_deg(j, ell):
        # valuation of L_{ell-P}^{q^P s_j}
        return q ** P * s[j] * ((q ** (ell - P + 1) - q) // (q - 1))

    def val_bound(j, ell):
        # val(Q^(ell)(theta^{q^P})) >= -(m q^ell + tdeg q^P); increasing in
        # ell exactly under the strict convergence condition
        m, tdeg = profiles[j]
        return denom_deg(j, ell) - m * q ** ell - tdeg * q ** P

    def factor(j, ell, out_prec):
        dd = denom_deg(j, ell)
        numer = _twisted_value_at_point(fld, qs[j], ell, P, out_prec - dd)
        if numer.is_zero_to_precision:
            # nothing visible through out_prec once the denominator shifts it
            return Laurent.zero_to_prec(fld, out_prec)
        linv = _l_power_inverse(fld, ell - P, q ** P * s[j],
                                out_prec - int(numer.val))
        return numer * linv

    total = Laurent.zero(fld)
    chosen = [0] * r

    def rec(pos_from_right, lo, acc):
        nonlocal total
        pos = r - 1 - pos_from_right
        ell = lo
        while acc + val_bound(pos, ell) <= prec:
            chosen[pos] = ell
            if pos == 0:
                bounds = [val_bound(j, chosen[j]) for j in range(r)]
                tb = sum(bounds)
                term = Laurent.one(fld)
                for j in range(r):
                    term = term * factor(j, chosen[j], prec - (tb - bounds[j]))
                if signs is not None:
                    c = 1
                    for e, ell_j in zip(signs, chosen):
                        c = fld.mul(c, fld.pow(e, ell_j))
                    term = term.scale(c)
                total = total + term
            else:
                rec(pos_from_right + 1, ell + 1, acc + val_bound(pos, ell))
            ell += 1

    rec(0, P, 0)
    return total.truncate(prec)


def specialization_frobenius_check(fld: Field, s, qs, prec) -> bool:
    """Checks the N = 1 instance of L(theta^{q^N}) = L(theta)^{q^N}: the
    evaluator rerun at the point theta^q must equal the q-th power of the
    theta-value through the propagated precision."""
    at_theta = deformation_value(fld, s, qs, prec)
    target = (int(prec) + 1) * fld.q - 1
    at_theta_q = deformation_value(fld, s, qs, target, point_power=1)
    return at_theta_q.agrees_with(at_theta.qth_power(1))


# ---------------------------------------------------------------------------
# deformation series as t-series (for difference systems and orders)
# ---------------------------------------------------------------------------

def deformation_t_series(fld: Field, s, qs, cap: int, prec) -> list:
    """The partial deformation series L_{s,Q;1..j} as graded t-series,
    j = 1..depth; entry j carries grade -q*(s_1+...+s_j)."""
    s = coerce_index(s)
    qs = [_coerce_q(fld, item) for item in qs]
    if not convergence_check(fld, s, qs):
        raise ConvergenceError("deformation series diverges")
    base = omega_unit(fld, cap, prec)
    out = []
    # suffix[x] = sum over ell >= x of (A_j twisted ell) * suffix_{j-1}[ell+1]
    prev_suffix = None
    for j in range(s.depth):
        qj = qs[j]
        if isinstance(qj, RatFunc):
            qj_series = GradedSeries(
                fld, 0, [Laurent.from_ratfunc(qj, prec)], cap
            )
        else:
            bp = qj if isinstance(qj, BiPoly) else BiPoly.from_poly(qj)
            qj_series = GradedSeries.from_bipoly(bp, cap)
        a = GradedSeries(fld, -fld.q * s[j], (base ** s[j]).coeffs, cap) * qj_series
        # Coefficient valuations obey v(l+1) = q v(l) + q s_j under twisting,
        # so with v0 the smallest initial valuation the l-th twist is
        # invisible through prec once q^l v0 + q s_j (q^l - 1)/(q-1) > prec.
        v0 = a.min_known_val()
        twists = [a]
        if v0 != INF:
            v0 = int(v0)
            while v0 <= prec:
                twists.append(twists[-1].twist())
                v0 = fld.q * v0 + fld.q * s[j]
        terms = []
        for ell, a_tw in enumerate(twists):
            if prev_suffix is None:
                terms.append(a_tw)
            else:
                tail = prev_suffix[ell + 1] if ell + 1 < len(prev_suffix) else None
                if tail is None:
                    zero_tail = GradedSeries(
                        fld,
                        prev_suffix[0].grade,
                        [Laurent.zero_to_prec(fld, prec)],
                        cap,
                    )
                    terms.append(a_tw * zero_tail)
                else:
                    terms.append(a_tw * tail)
        # suffix sums for the next depth, truncated to the working precision
        suffix = [None] * (len(terms) + 1)
        grade = terms[0].grade
        acc = GradedSeries(fld, grade, [Laurent.zero_to_prec(fld, prec)], cap)
        suffix[len(terms)] = acc
        for ell in range(len(terms) - 1, -1, -1):
            acc = (terms[ell] + acc).truncate_prec(prec)
            suffix[ell] = acc
        out.append(suffix[0])
        prev_suffix = suffix
    return out


# ---------------------------------------------------------------------------
# block systems
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BlockSystem:
    """Materialised Phi_star (exact BiPoly entries) and psi_star (graded
    t-series truncations) for a family of indices."""

    field: Field
    weight: int
    shapes: tuple
    phi: tuple          # tuple of tuples of BiPoly (or None for zero)
    psi: tuple          # tuple of GradedSeries
    cap: int
    prec: int


def _coerce_t_poly(fld: Field, a) -> Poly:
    if isinstance(a, Poly):
        if a.var != TVAR:
            raise DomainError("linear-combination coefficients live in F_q[t]")
        return a
    if isinstance(a, int):
        return Poly.constant(fld, a, TVAR)
    return Poly(fld, a, TVAR)


def build_block_system(fld: Field, family, qs_per_index, a_coeffs, cap: int, prec) -> BlockSystem:
    """Materialise Phi_star and psi_star for the given indices.

    ``family`` is a list of same-weight indices (the construction is
    generic; g-independence is not required), ``qs_per_index`` the
    deformation inputs per index, ``a_coeffs`` the F_q[t] coefficients of
    the linear combination carried in the last row.  Phi entries involve
    the inverse twists Q^(-1), so every theta-exponent of every Q must be
    divisible by q (true for all Anderson-Thakur inputs used here).
    """
    family = [coerce_index(s) for s in family]
    if not family:
        raise DomainError("empty family")
    w = family[0].weight
    if any(s.weight != w for s in family):
        raise DomainError("family members must share one weight")
    if len(qs_per_index) != len(family) or len(a_coeffs) != len(family):
        raise DomainError("need one input tuple and one coefficient per index")
    qs_per_index = [[_coerce_q(fld, q) for q in qs] for qs in qs_per_index]
    for s, qs in zip(family, qs_per_index):
        if len(qs) != s.depth:
            raise DomainError(f"index {tuple(s)} needs {s.depth} inputs")
        if any(isinstance(q, RatFunc) for q in qs):
            raise DomainError("block systems want exact polynomial inputs")
    a_polys = [_coerce_t_poly(fld, a) for a in a_coeffs]

    def as_bipoly(q):
        return q if isinstance(q, BiPoly) else BiPoly.from_poly(q)

    size = 1 + sum(s.depth - 1 for s in family) + 1
    phi = [[None] * size for _ in range(size)]
    phi[0][0] = BiPoly.t_minus_theta_power(fld, 1, w)
    last = size - 1
    phi[last][last] = BiPoly.one(fld)

    offset = 1
    psi_mid = []
    last_row_zero_col = BiPoly.zero(fld)
    omega_w = omega(fld, cap, prec) ** w
    psi_last = None
    for s, qs, a in zip(family, qs_per_index, a_polys):
        r = s.depth
        tails = [sum(s[j:]) for j in range(r)]  # tails[j] = s_{j+1}+...+s_r (0-based)
        qinv = [inverse_twist(as_bipoly(q)) for q in qs]
        series = deformation_t_series(fld, s, qs, cap, prec)
        if r == 1:
            nu = qinv[0] * BiPoly.t_minus_theta_power(fld, 1, w)
            last_row_zero_col = last_row_zero_col + BiPoly.from_poly(a) * nu
        else:
            phi[offset][0] = qinv[0] * BiPoly.t_minus_theta_power(fld, 1, w)
            for jj in range(r - 1):
                phi[offset + jj][offset + jj] = BiPoly.t_minus_theta_power(
                    fld, 1, tails[jj + 1]
                )
                if jj >= 1:
                    phi[offset + jj][offset + jj - 1] = qinv[jj] * BiPoly.t_minus_theta_power(
                        fld, 1, tails[jj]
                    )
            nu = qinv[r - 1] * BiPoly.t_minus_theta_power(fld, 1, tails[r - 1])
            phi[last][offset + r - 2] = BiPoly.from_poly(a) * nu
            for jj in range(1, r):
                entry = (omega(fld, cap, prec) ** tails[jj]) * series[jj - 1]
                psi_mid.append(entry)
            offset += r - 1
        contrib = series[r - 1] * BiPoly.from_poly(a)
        psi_last = contrib if psi_last is None else psi_last + contrib
    if not last_row_zero_col.is_zero:
        phi[last][0] = last_row_zero_col
    psi = [omega_w] + psi_mid + [psi_last]
    return BlockSystem(
        field=fld,
        weight=w,
        shapes=tuple(s.depth for s in family),
        phi=tuple(tuple(row) for row in phi),
        psi=tuple(psi),
        cap=cap,
        prec=prec,
    )


def verify_difference_system(system: BlockSystem) -> bool:
    """Checks psi = Phi^(1) psi^(1) entrywise through the stored truncation
    (the once-forward-twisted equivalent of psi^(-1) = Phi psi)."""
    fld = system.field
    psi_tw = [entry.twist() for entry in system.psi]
    for a, row in enumerate(system.phi):
        acc = None
        for b, entry in enumerate(row):
            if entry is None or entry.is_zero:
                continue
            part = psi_tw[b] * frobenius_twist(entry, 1)
            acc = part if acc is None else acc + part
        if acc is None or not system.psi[a].agrees_with(acc):
            return False
    return True


def _vanishing_orders_once(fld: Field, s, qs, cap: int, prec):
    series = deformation_t_series(fld, s, qs, cap, prec)
    tails = [sum(s[j:]) for j in range(s.depth)]
    om = omega(fld, cap, prec)
    orders = []
    for j in range(1, s.depth):
        entry = (om ** tails[j]) * series[j - 1]
        order = None
        for k in range(cap + 1):
            value = entry.eval_unit_at_theta_power(1)
            if not value.is_zero_to_precision:
                order = k
                break
            if entry.all_fuzzy_zero():
                raise ResolutionError(
                    f"cannot resolve vanishing order beyond {k} at (cap={cap}, prec={prec})"
                )
            entry, _ = entry.divide_by_t_minus_theta_q()
        if order is None:
            raise ResolutionError(f"vanishing order exceeds the t-degree cap {cap}")
        orders.append(order)
    return orders


def vanishing_order_profile(fld: Field, s, qs, cap: int, prec) -> frozenset:
    """The t-adic vanishing orders at t = theta^q of the interior psi''
    entries; under the nonvanishing hypothesis this is exactly the g-image
    of the index.  Depth 1 has no interior entries (empty set).

    Successive Taylor coefficients of an entry at theta^q can differ in
    valuation by a lot (the Frobenius rigidity of the series forces deep
    cancellations), so a single truncation can mistake a barely-visible
    coefficient for zero.  The profile is therefore recomputed at doubled
    precision and a larger t-cap and must agree, else ResolutionError."""
    s = coerce_index(s)
    if s.depth == 1:
        return frozenset()
    qs = [_coerce_q(fld, item) for item in qs]
    first = _vanishing_orders_once(fld, s, qs, cap, prec)
    second = _vanishing_orders_once(fld, s, qs, cap + 4, 2 * int(prec))
    if first != second:
        raise ResolutionError(
            f"vanishing orders unstable under refinement at (cap={cap}, prec={prec}): "
            f"{first} vs {second}; increase the truncation orders"
        )
    return frozenset(first)


# ---------------------------------------------------------------------------
# Carlitz tensor powers
# ---------------------------------------------------------------------------

def carlitz_tensor_t_action(fld: Field, n: int, point) -> list:
    """[t]_n acting on an n-coordinate point: theta*v_i + v_{i+1} in rows
    below the last, theta*v_n + v_1^q in the last row."""
    if n < 1:
        raise DomainError("dimension must be >= 1")
    v = [u if isinstance(u, RatFunc) else RatFunc.constant(fld, u) for u in point]
    if len(v) != n:
        raise DomainError(f"point must have {n} coordinates")
    theta = RatFunc.from_poly(Poly.gen(fld))
    out = []
    for i in range(n - 1):
        out.append(theta * v[i] + v[i + 1])
    out.append(theta * v[n - 1] + v[0] ** fld.q)
    return out


def torsion_search(fld: Field, n: int, point, dmax: int):
    """Brute-force annihilator search: the smallest-degree nonzero
    a in F_q[t] of degree <= dmax with [a]_n(point) = 0, or None.

    Uses F_q-linearity of the module action: it suffices to solve for
    F_q-combinations of the iterates [t^j](point).  The zero point is
    reported as torsion with annihilator 1 by convention.
    """
    if dmax < 0:
        raise DomainError("dmax must be >= 0")
    v = [u if isinstance(u, RatFunc) else RatFunc.constant(fld, u) for u in point]
    if len(v) != n:
        raise DomainError(f"point must have {n} coordinates")
    if all(u.is_zero for u in v):
        return Poly.one(fld, TVAR)
    iterates = [v]
    for _ in range(dmax):
        iterates.append(carlitz_tensor_t_action(fld, n, iterates[-1]))
    rows = []
    for c in range(n):
        den = Poly.one(fld)
        for it in iterates:
            den = den.exact_div(den.gcd(it[c].den)) * it[c].den
        cleared = [it[c].num * den.exact_div(it[c].den) for it in iterates]
        width = max((int(p.degree) + 1 for p in cleared if not p.is_zero), default=0)
        block = np.zeros((width, dmax + 1), dtype=np.int64)
        for j, p in enumerate(cleared):
            block[: p.coeffs.size, j] = p.coeffs
        rows.append(block)
    matrix = np.vstack(rows) if rows else np.zeros((0, dmax + 1), dtype=np.int64)
    basis = linalg.nullspace(fld, matrix)
    if not basis:
        return None
    best = min(basis, key=lambda vec: max(np.nonzero(vec)[0]))
    return Poly(fld, best, TVAR).monic()
