"""Exact arithmetic in the symbol L and the formal variable T.

``T`` stands for ``L**-s``.  Everything here is exact: coefficients are
``int`` or :class:`fractions.Fraction`, never floats.

The main objects are

* :class:`LaurentPoly` -- Laurent polynomials in ``L`` over ``Q``;
* :class:`MotivicRational` -- finite sums of :class:`MotivicTerm`, each of the
  shape ``c(L) * T^a * prod T^A L^-B / (1 - T^A L^-B)``;
* :class:`UniRational` -- reduced rational functions of ``T`` over ``Q``
  (what is left after substituting a number for ``L``);
* :class:`RationalFunctionS` -- rational functions of ``s`` whose
  denominators split into linear factors ``a*s + b``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import gcd
from numbers import Rational
from typing import Iterable, Mapping, Sequence

__all__ = [
    "LaurentPoly",
    "L",
    "PieceMeta",
    "MotivicTerm",
    "MotivicRational",
    "UniRational",
    "RationalFunctionS",
    "mr_equal",
    "mr_series",
    "mr_specialize",
    "mr_normal_form",
    "mr_canonical_text",
    "geometric",
    "binomial",
]


def _norm(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    if isinstance(c, (int, Fraction)):
        return c
    if isinstance(c, Rational):
        return Fraction(c.numerator, c.denominator)
    raise TypeError(f"exact rational coefficient expected, got {type(c).__name__}")


def _fmt_coeff(c) -> str:
    return str(c) if not isinstance(c, Fraction) else f"{c.numerator}/{c.denominator}"


# ---------------------------------------------------------------------------
# Laurent polynomials in L
# ---------------------------------------------------------------------------


class LaurentPoly:
    """Laurent polynomial in ``L`` with rational coefficients.

    >>> (L - 1) ** 2
    L^2 - 2*L + 1
    >>> LaurentPoly.parse("(L-1)^2*L^-1")
    L - 2 + L^-1
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, object] | None = None):
        clean = {}
        for e, c in (terms or {}).items():
            c = _norm(c)
            if c:
                clean[int(e)] = c
        self._terms = clean
        self._hash = None

    # -- constructors -----------------------------------------------------
    @classmethod
    def const(cls, c) -> "LaurentPoly":
        return cls({0: c})

    @classmethod
    def mono(cls, e: int, c=1) -> "LaurentPoly":
        return cls({e: c})

    @classmethod
    def coerce(cls, x) -> "LaurentPoly":
        if isinstance(x, LaurentPoly):
            return x
        if isinstance(x, str):
            return cls.parse(x)
        return cls.const(x)

    @classmethod
    def parse(cls, text: str) -> "LaurentPoly":
        """Parse expressions such as ``"(L-1)^2 + 3/2*L^-1"``."""
        return _LaurentParser(text).parse()

    # -- access ---------------------------------------------------------------
    @property
    def terms(self) -> dict[int, object]:
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items())

    def coeff(self, e: int):
        return self._terms.get(e, 0)

    def is_zero(self) -> bool:
        return not self._terms

    def min_exp(self) -> int:
        return min(self._terms)

    def max_exp(self) -> int:
        return max(self._terms)

    def __bool__(self):
        return bool(self._terms)

    # -- arithmetic -------------------------------------------------------------
    def __add__(self, other):
        other = LaurentPoly.coerce(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-LaurentPoly.coerce(other))

    def __rsub__(self, other):
        return LaurentPoly.coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, LaurentPoly):
            other = _norm(other)
            return LaurentPoly({e: c * other for e, c in self._terms.items()})
        out: dict[int, object] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if len(self._terms) != 1:
                raise ValueError("only monomials can be inverted")
            ((e, c),) = self._terms.items()
            return LaurentPoly({-e * (-n): Fraction(1) / c ** (-n)})
        result = LaurentPoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by ``L**k``."""
        return LaurentPoly({e + k: c for e, c in self._terms.items()})

    def divmod(self, other: "LaurentPoly") -> tuple["LaurentPoly", "LaurentPoly"]:
        """Division with remainder after clearing negative powers.

        Both operands are treated as polynomials times a power of L; the
        remainder is zero exactly when ``other`` divides ``self`` in
        ``Q[L, L^-1]``.
        """
        if other.is_zero():
            raise ZeroDivisionError("division by zero Laurent polynomial")
        if self.is_zero():
            return LaurentPoly(), LaurentPoly()
        lo_o = other.min_exp()
        den = {e - lo_o: c for e, c in other._terms.items()}
        lo_s = self.min_exp()
        rem = {e - lo_s: c for e, c in self._terms.items()}
        dd = max(den)
        lead = den[dd]
        quot: dict[int, object] = {}
        while rem and max(rem) >= dd:
            top = max(rem)
            q = _norm(Fraction(rem[top]) / Fraction(lead))
            quot[top - dd] = q
            for e, c in den.items():
                k = e + top - dd
                v = rem.get(k, 0) - q * c
                if v:
                    rem[k] = v
                else:
                    rem.pop(k, None)
        q = LaurentPoly(quot).shift(lo_s - lo_o)
        r = LaurentPoly(rem).shift(lo_s)
        return q, r

    def exact_div(self, other: "LaurentPoly") -> "LaurentPoly":
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ValueError(f"{other} does not divide {self}")
        return q

    def __call__(self, x):
        """Evaluate at an exact rational (or integer) value of L."""
        x = _norm(x)
        total = 0
        for e, c in self._terms.items():
            if e < 0:
                if x == 0:
                    raise ZeroDivisionError("negative power of L evaluated at 0")
                total += c * Fraction(1, 1) / Fraction(x) ** (-e)
            else:
                total += c * x**e
        return _norm(total)

    def order_at_one(self) -> int:
        """Multiplicity of ``L = 1`` as a root (``-1`` is never returned)."""
        if self.is_zero():
            raise ValueError("zero has infinite order at L = 1")
        k, p = 0, self
        one_minus = LaurentPoly({1: 1, 0: -1})
        while p(1) == 0:
            p = p.exact_div(one_minus)
            k += 1
        return k

    # -- comparison / hashing ------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, LaurentPoly):
            try:
                other = LaurentPoly.coerce(other)
            except TypeError:
                return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # -- text -------------------------------------------------------------------
    def __str__(self):
        if not self._terms:
            return "0"
        out = []
        for e, c in sorted(self._terms.items(), reverse=True):
            sign = "-" if c < 0 else "+"
            a = -c if c < 0 else c
            if e == 0:
                body = _fmt_coeff(a)
            else:
                mono = "L" if e == 1 else f"L^{e}"
                body = mono if a == 1 else f"{_fmt_coeff(a)}*{mono}"
            out.append((sign, body))
        first_sign, first = out[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in out[1:]:
            text += f" {sign} {body}"
        return text

    __repr__ = __str__


L = LaurentPoly.mono(1)


class _LaurentParser:
    _token = re.compile(r"\s*(?:(\d+)|(L)|(\^)|([-+*/()]))")

    def __init__(self, text: str):
        self.tokens = []
        pos = 0
        text = text.strip()
        while pos < len(text):
            m = self._token.match(text, pos)
            if not m:
                raise ValueError(f"cannot parse Laurent polynomial {text!r} at {pos}")
            pos = m.end()
            self.tokens.append(next(g for g in m.groups() if g is not None))
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def take(self, expected=None):
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            raise ValueError(f"unexpected token {tok!r}, wanted {expected!r}")
        self.i += 1
        return tok

    def parse(self) -> LaurentPoly:
        if not self.tokens:
            raise ValueError("empty Laurent polynomial")
        value = self.expr()
        if self.peek() is not None:
            raise ValueError(f"trailing input at token {self.peek()!r}")
        return value

    def expr(self):
        sign = 1
        if self.peek() in "+-":
            sign = -1 if self.take() == "-" else 1
        value = self.term() * sign
        while self.peek() in ("+", "-"):
            op = self.take()
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.power()
        while self.peek() in ("*", "/"):
            op = self.take()
            rhs = self.power()
            if op == "*":
                value = value * rhs
            else:
                if len(rhs.terms) != 1:
                    raise ValueError("can only divide by a monomial")
                value = value * rhs ** -1
        return value

    def power(self):
        base = self.atom()
        if self.peek() == "^":
            self.take()
            sign = 1
            if self.peek() == "-":
                self.take()
                sign = -1
            exp = int(self.take())
            base = base ** (sign * exp)
        return base

    def atom(self):
        tok = self.peek()
        if tok == "(":
            self.take()
            v = self.expr()
            self.take(")")
            return v
        if tok == "L":
            self.take()
            return L
        if tok is not None and tok.isdigit():
            self.take()
            return LaurentPoly.const(int(tok))
        if tok == "-":
            self.take()
            return -self.power()
        raise ValueError(f"unexpected token {tok!r}")


# ---------------------------------------------------------------------------
# Polynomials in (L, L^-1, T): internal workhorse for normal forms
# ---------------------------------------------------------------------------


def _lt_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for (i1, j1), c1 in a.items():
        for (i2, j2), c2 in b.items():
            k = (i1 + i2, j1 + j2)
            v = out.get(k, 0) + c1 * c2
            if v:
                out[k] = v
            else:
                out.pop(k, None)
    return out


def _lt_add_into(acc: dict, b: dict, scale=1) -> None:
    for k, c in b.items():
        v = acc.get(k, 0) + scale * c
        if v:
            acc[k] = v
        else:
            acc.pop(k, None)


def _lt_binomial(A: int, B: int) -> dict:
    """``1 - T^A L^-B``."""
    out = {(0, 0): 1}
    _lt_add_into(out, {(-B, A): 1}, -1)
    return out


def _lt_pow(p: dict, n: int) -> dict:
    out = {(0, 0): 1}
    for _ in range(n):
        out = _lt_mul(out, p)
    return out


def _lt_div_binomial(num: dict, A: int, B: int) -> dict | None:
    """Exact quotient ``num / (1 - T^A L^-B)`` or None if not exact."""
    if not num:
        return {}
    rem = dict(num)
    quot: dict = {}
    if A == 0:
        by_t: dict[int, dict] = {}
        for (i, j), c in rem.items():
            by_t.setdefault(j, {})[i] = c
        div = LaurentPoly({0: 1, -B: -1})
        for j, coeffs in by_t.items():
            q, r = LaurentPoly(coeffs).divmod(div)
            if not r.is_zero():
                return None
            for i, c in q.terms.items():
                quot[(i, j)] = c
        return quot
    # long division in T: divisor has T-degree A with unit leading coefficient -L^-B
    while rem:
        jmax = max(j for (_, j) in rem)
        if jmax < A:
            return None
        top = {i: c for (i, j), c in rem.items() if j == jmax}
        for i, c in top.items():
            # quotient monomial q = -c * L^(i+B) T^(jmax-A)
            qi, qj, qc = i + B, jmax - A, -c
            quot[(qi, qj)] = quot.get((qi, qj), 0) + qc
            _lt_add_into(rem, {(qi, qj): qc, (qi - B, qj + A): -qc}, -1)
    return {k: v for k, v in quot.items() if v}


# ---------------------------------------------------------------------------
# Motivic terms and sums
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PieceMeta:
    """Bookkeeping carried from the explicit formula to the L -> 1 limit."""

    size_I: int
    size_M: int
    stratum: str
    euler: int | None = None


@dataclass(frozen=True)
class MotivicTerm:
    """``coeff * [symbol] * prod plain * prod T^A L^-B / (1 - T^A L^-B)``.

    ``factors`` and ``plain`` are multisets of pairs ``(A, B)`` kept as sorted
    tuples; a plain pair ``(A, B)`` means the monomial ``T^A L^-B``.  Plain
    pairs are merged on construction into at most one ``(a, 0)`` with the
    L-part folded into ``coeff``.
    """

    coeff: LaurentPoly
    factors: tuple[tuple[int, int], ...] = ()
    plain: tuple[tuple[int, int], ...] = ()
    symbol: str | None = None
    meta: PieceMeta | None = field(default=None, compare=False)

    def __post_init__(self):
        coeff = LaurentPoly.coerce(self.coeff)
        facs = tuple(sorted((int(a), int(b)) for a, b in self.factors))
        for a, b in facs:
            if (a, b) == (0, 0):
                raise ValueError("fraction factor with (A, B) = (0, 0) is undefined")
            if a < 0:
                raise ValueError("fraction factor with negative T-exponent")
        ta = sum(a for a, _ in self.plain)
        tb = sum(b for _, b in self.plain)
        if ta < 0:
            raise ValueError("plain factor with negative T-exponent")
        object.__setattr__(self, "coeff", coeff.shift(-tb) if tb else coeff)
        object.__setattr__(self, "factors", facs)
        object.__setattr__(self, "plain", ((ta, 0),) if ta else ())

    @property
    def t_power(self) -> int:
        return self.plain[0][0] if self.plain else 0

    def is_zero(self) -> bool:
        return self.coeff.is_zero()

    def scale(self, c) -> "MotivicTerm":
        return MotivicTerm(self.coeff * c, self.factors, self.plain, self.symbol, self.meta)

    def __mul__(self, other: "MotivicTerm") -> "MotivicTerm":
        if self.symbol and other.symbol:
            raise ValueError("product of two symbolic classes is not represented")
        return MotivicTerm(
            self.coeff * other.coeff,
            self.factors + other.factors,
            self.plain + other.plain,
            self.symbol or other.symbol,
        )

    def shift_s(self, shift: int) -> "MotivicTerm":
        """Substitute ``s -> s + shift``; ``T^A L^-B`` becomes ``T^A L^-(B + A*shift)``."""
        facs = tuple((a, b + a * shift) for a, b in self.factors)
        coeff = self.coeff.shift(-self.t_power * shift)
        return MotivicTerm(coeff, facs, self.plain, self.symbol, self.meta)

    def lt_numerator(self) -> dict:
        """``coeff * T^a * prod T^A L^-B`` as an (L, T) polynomial dict."""
        ta = self.t_power + sum(a for a, _ in self.factors)
        lb = sum(b for _, b in self.factors)
        return {(e - lb, ta): c for e, c in self.coeff.terms.items()}

    def text(self) -> str:
        parts = [f"({self.coeff})"]
        if self.symbol:
            parts.append(f"[{self.symbol}]")
        if self.t_power:
            parts.append(f"T^{self.t_power}")
        parts.extend(f"F({a},{b})" for a, b in self.factors)
        return "*".join(parts)


class MotivicRational:
    """A finite sum of :class:`MotivicTerm`, an element of the factored ring.

    Equality via ``==`` is *mathematical* equality (see :func:`mr_equal`).
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Iterable[MotivicTerm] = ()):
        self.terms = tuple(t for t in terms if not t.is_zero())

    @classmethod
    def const(cls, c) -> "MotivicRational":
        return cls([MotivicTerm(LaurentPoly.coerce(c))])

    @classmethod
    def T(cls, power: int = 1, coeff=1) -> "MotivicRational":
        return cls([MotivicTerm(LaurentPoly.coerce(coeff), plain=((power, 0),))])

    def __add__(self, other):
        other = _as_mr(other)
        return MotivicRational(self.terms + other.terms)

    __radd__ = __add__

    def __neg__(self):
        return MotivicRational(t.scale(-1) for t in self.terms)

    def __sub__(self, other):
        return self + (-_as_mr(other))

    def __rsub__(self, other):
        return _as_mr(other) - self

    def __mul__(self, other):
        other = _as_mr(other)
        return MotivicRational(a * b for a in self.terms for b in other.terms)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        return reduce(lambda x, _: x * self, range(n), MotivicRational.const(1))

    def __eq__(self, other):
        if not isinstance(other, MotivicRational):
            try:
                other = _as_mr(other)
            except TypeError:
                return NotImplemented
        return mr_equal(self, other)

    __hash__ = None

    def shift_s(self, shift: int) -> "MotivicRational":
        return MotivicRational(t.shift_s(shift) for t in self.terms)

    def symbols(self) -> set[str]:
        return {t.symbol for t in self.terms if t.symbol}

    def substitute_symbols(self, classes: Mapping[str, LaurentPoly]) -> "MotivicRational":
        out = []
        for t in self.terms:
            if t.symbol is None:
                out.append(t)
            elif t.symbol in classes:
                cls = LaurentPoly.coerce(classes[t.symbol])
                out.append(MotivicTerm(t.coeff * cls, t.factors, t.plain, None, t.meta))
            else:
                out.append(t)
        return MotivicRational(out)

    def evaluate(self, Lval, Tval, symbol_values: Mapping[str, object] | None = None):
        """Exact numeric value at ``(L, T) = (Lval, Tval)``."""
        Lval, Tval = Fraction(Lval), Fraction(Tval)
        total = Fraction(0)
        for t in self.terms:
            v = Fraction(t.coeff(Lval)) * Tval ** t.t_power
            if t.symbol:
                v *= Fraction(_norm((symbol_values or {})[t.symbol]))
            for a, b in t.factors:
                x = Tval**a * Lval ** (-b)
                v *= x / (1 - x)
            total += v
        return _norm(total)

    def pole_pairs(self) -> list[tuple[int, int]]:
        return sorted({f for t in self.terms for f in t.factors})

    def __repr__(self):
        return f"MotivicRational({len(self.terms)} terms)"

    def __str__(self):
        return mr_canonical_text(self)


def _as_mr(x) -> MotivicRational:
    if isinstance(x, MotivicRational):
        return x
    if isinstance(x, MotivicTerm):
        return MotivicRational([x])
    return MotivicRational.const(x)


def geometric(A: int, B: int, coeff=1) -> MotivicRational:
    """``coeff / (1 - T^A L^-B)`` written as ``coeff * (1 + x/(1-x))``."""
    c = LaurentPoly.coerce(coeff)
    if A == 0:
        # 1/(1 - L^-B) = L^B * L^-B/(1 - L^-B), a single term
        return MotivicRational([MotivicTerm(c.shift(B), ((0, B),))])
    return MotivicRational([MotivicTerm(c), MotivicTerm(c, ((A, B),))])


def binomial(A: int, B: int) -> MotivicRational:
    """``1 - T^A L^-B`` as a polynomial element."""
    return MotivicRational(
        [MotivicTerm(LaurentPoly.const(1)), MotivicTerm(LaurentPoly.mono(-B, -1), plain=((A, 0),))]
    )


# ---------------------------------------------------------------------------
# Equality, normal forms, text
# ---------------------------------------------------------------------------


def _group_by_symbol(a: MotivicRational) -> dict[str | None, list[MotivicTerm]]:
    out: dict[str | None, list[MotivicTerm]] = {}
    for t in a.terms:
        out.setdefault(t.symbol, []).append(t)
    return out


def _multiplicities(terms: Iterable[MotivicTerm]) -> dict[tuple[int, int], int]:
    mult: dict[tuple[int, int], int] = {}
    for t in terms:
        local: dict[tuple[int, int], int] = {}
        for f in t.factors:
            local[f] = local.get(f, 0) + 1
        for f, k in local.items():
            mult[f] = max(mult.get(f, 0), k)
    return mult


def _cleared_numerator(terms: Sequence[MotivicTerm], mult: Mapping[tuple[int, int], int]) -> dict:
    """``sum(terms) * prod (1 - x_f)^mult[f]`` as an (L, T) polynomial dict."""
    groups: dict[tuple, dict] = {}
    for t in terms:
        acc = groups.setdefault(t.factors, {})
        _lt_add_into(acc, t.lt_numerator())
    total: dict = {}
    cache: dict[tuple[tuple[int, int], int], dict] = {}
    for facs, num in groups.items():
        if not num:
            continue
        local: dict[tuple[int, int], int] = {}
        for f in facs:
            local[f] = local.get(f, 0) + 1
        poly = num
        for f, k in mult.items():
            extra = k - local.get(f, 0)
            if extra:
                key = (f, extra)
                if key not in cache:
                    cache[key] = _lt_pow(_lt_binomial(*f), extra)
                poly = _lt_mul(poly, cache[key])
        _lt_add_into(total, poly)
    return total


def mr_equal(a: MotivicRational, b: MotivicRational) -> bool:
    """True iff ``a`` and ``b`` are the same rational function of (L, T).

    Symbolic stratum classes are treated as independent indeterminates.
    """
    ga, gb = _group_by_symbol(a), _group_by_symbol(b)
    for sym in set(ga) | set(gb):
        ta, tb = ga.get(sym, []), gb.get(sym, [])
        mult = _multiplicities(list(ta) + list(tb))
        diff = _cleared_numerator(ta, mult)
        _lt_add_into(diff, _cleared_numerator(tb, mult), -1)
        if diff:
            return False
    return True


def _lt_text(poly: dict) -> str:
    if not poly:
        return "0"
    by_t: dict[int, dict[int, object]] = {}
    for (i, j), c in poly.items():
        by_t.setdefault(j, {})[i] = c
    parts = []
    for j in sorted(by_t):
        coeff = LaurentPoly(by_t[j])
        if j == 0:
            parts.append(f"({coeff})")
        else:
            parts.append(f"({coeff})*T" if j == 1 else f"({coeff})*T^{j}")
    return " + ".join(parts)


def mr_normal_form(
    a: MotivicRational, denominator: Sequence[tuple[int, int]] | None = None
) -> tuple[dict[str | None, dict], tuple[tuple[int, int], ...]]:
    """Numerator over a canonical product of binomials ``1 - T^A L^-B``.

    With ``denominator`` given, the numerator of ``a`` over exactly that
    product is returned, or ``ValueError`` if it is not a polynomial.  With
    ``denominator=None`` the representation's common denominator is reduced
    greedily, dropping factors (in sorted order) that divide the numerator.
    """
    groups = _group_by_symbol(a)
    mult = _multiplicities(a.terms)
    nums = {sym: _cleared_numerator(ts, mult) for sym, ts in groups.items()}
    have: list[tuple[int, int]] = sorted(f for f, k in mult.items() for _ in range(k))

    def divide_all(pair):
        out = {}
        for sym, num in nums.items():
            q = _lt_div_binomial(num, *pair)
            if q is None:
                return None
            out[sym] = q
        return out

    if denominator is None:
        changed = True
        while changed:
            changed = False
            for pair in sorted(set(have)):
                q = divide_all(pair)
                if q is not None:
                    nums = q
                    have.remove(pair)
                    changed = True
                    break
        return nums, tuple(have)

    target = sorted(tuple(p) for p in denominator)
    remaining = list(target)
    # cancel the common part, then move the rest of our factors away
    for pair in list(have):
        if pair in remaining:
            remaining.remove(pair)
        else:
            q = divide_all(pair)
            if q is None:
                raise ValueError(f"value is not a polynomial over the given denominator (factor {pair})")
            nums = q
    for pair in remaining:
        nums = {sym: _lt_mul(num, _lt_binomial(*pair)) for sym, num in nums.items()}
    return nums, tuple(target)


def _binomial_text(A: int, B: int) -> str:
    parts = []
    if A:
        parts.append("T" if A == 1 else f"T^{A}")
    if B:
        parts.append("L" if B == -1 else f"L^{-B}")
    return f"(1 - {'*'.join(parts)})"


def mr_canonical_text(a: MotivicRational, denominator: Sequence[tuple[int, int]] | None = None) -> str:
    """Canonical text ``numerator / prod(1 - T^A*L^-B)`` with sorted monomials."""
    nums, den = mr_normal_form(a, denominator)
    blocks = []
    for sym in sorted(nums, key=lambda s: "" if s is None else s):
        body = _lt_text(nums[sym])
        if sym is not None:
            body = f"[{sym}]*({body})"
        blocks.append(body if body != "0" or len(nums) == 1 else None)
    num_text = " + ".join(b for b in blocks if b) or "0"
    if not den:
        return num_text
    den_text = "*".join(_binomial_text(A, B) for A, B in den)
    return f"[{num_text}] / [{den_text}]"


# ---------------------------------------------------------------------------
# Series in T
# ---------------------------------------------------------------------------


def _series_mul(a: list[LaurentPoly], b: list[LaurentPoly], order: int) -> list[LaurentPoly]:
    out = [LaurentPoly() for _ in range(order + 1)]
    for i, x in enumerate(a):
        if x.is_zero():
            continue
        for j in range(order + 1 - i):
            y = b[j]
            if not y.is_zero():
                out[i + j] = out[i + j] + x * y
    return out


def mr_series(a: MotivicRational, order: int) -> list[LaurentPoly]:
    """Coefficients of ``T^0 .. T^order`` of the power series of ``a``.

    Fraction factors with ``A = 0`` (constants in T) are only accepted when
    they cancel against the coefficients, i.e. when each series coefficient of
    the total is still a Laurent polynomial; otherwise ``ValueError``.
    """
    if order < 0:
        raise ValueError("order must be non-negative")
    if a.symbols():
        raise ValueError(f"cannot expand symbolic classes {sorted(a.symbols())}; substitute them first")
    const_mult: dict[int, int] = {}
    for t in a.terms:
        local: dict[int, int] = {}
        for A, B in t.factors:
            if A == 0:
                local[B] = local.get(B, 0) + 1
        for B, k in local.items():
            const_mult[B] = max(const_mult.get(B, 0), k)
    common = LaurentPoly.const(1)
    for B, k in const_mult.items():
        common = common * LaurentPoly({0: 1, -B: -1}) ** k
    total = [LaurentPoly() for _ in range(order + 1)]
    for t in a.terms:
        coeff = t.coeff
        local: dict[int, int] = {}
        for A, B in t.factors:
            if A == 0:
                local[B] = local.get(B, 0) + 1
                coeff = coeff.shift(-B)
        for B, k in const_mult.items():
            coeff = coeff * LaurentPoly({0: 1, -B: -1}) ** (k - local.get(B, 0))
        series = [LaurentPoly() for _ in range(order + 1)]
        if t.t_power <= order:
            series[t.t_power] = coeff
        for A, B in t.factors:
            if A == 0:
                continue
            geo = [LaurentPoly() for _ in range(order + 1)]
            k = 1
            while k * A <= order:
                geo[k * A] = LaurentPoly.mono(-k * B)
                k += 1
            series = _series_mul(series, geo, order)
        total = [x + y for x, y in zip(total, series)]
    if common != 1:
        try:
            total = [c.exact_div(common) for c in total]
        except ValueError:
            raise ValueError("constant-in-T poles do not cancel; series is not L-polynomial") from None
    return total


# ---------------------------------------------------------------------------
# Univariate rational functions in T (after L -> p)
# ---------------------------------------------------------------------------


def _poly_trim(p: list) -> list:
    p = [_norm(c) for c in p]
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_mul(a: Sequence, b: Sequence) -> list:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _poly_trim(out)


def _poly_add(a: Sequence, b: Sequence) -> list:
    n = max(len(a), len(b))
    return _poly_trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def _poly_divmod(a: Sequence, b: Sequence) -> tuple[list, list]:
    a, b = _poly_trim(list(a)), _poly_trim(list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [0] * max(len(a) - len(b) + 1, 0)
    r = [Fraction(c) for c in a]
    lead = Fraction(b[-1])
    while len(r) >= len(b) and r:
        k = len(r) - len(b)
        c = r[-1] / lead
        q[k] = c
        for i, bc in enumerate(b):
            r[k + i] -= c * bc
        r = _poly_trim(r)
    return _poly_trim(q), r


def _poly_gcd(a: Sequence, b: Sequence) -> list:
    a, b = _poly_trim(list(a)), _poly_trim(list(b))
    while b:
        _, r = _poly_divmod(a, b)
        a, b = b, r
    if not a:
        return [1]
    lead = Fraction(a[-1])
    return _poly_trim([Fraction(c) / lead for c in a])


class UniRational:
    """Reduced rational function of T over Q.

    The denominator is scaled so that its lowest nonzero coefficient is 1,
    which makes ``den[0] == 1`` whenever the value is a power series.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Sequence, den: Sequence = (1,)):
        num, den = _poly_trim(list(num)), _poly_trim(list(den))
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            self.num, self.den = (), (1,)
            return
        g = _poly_gcd(num, den)
        if len(g) > 1:
            num, _ = _poly_divmod(num, g)
            den, _ = _poly_divmod(den, g)
        low = next(c for c in den if c != 0)
        self.num = tuple(_norm(Fraction(c) / low) for c in num)
        self.den = tuple(_norm(Fraction(c) / low) for c in den)

    def __add__(self, other: "UniRational") -> "UniRational":
        g = _poly_gcd(self.den, other.den)
        d2, _ = _poly_divmod(other.den, g)
        d1, _ = _poly_divmod(self.den, g)
        return UniRational(_poly_add(_poly_mul(self.num, d2), _poly_mul(other.num, d1)), _poly_mul(self.den, d2))

    def __mul__(self, other: "UniRational") -> "UniRational":
        return UniRational(_poly_mul(self.num, other.num), _poly_mul(self.den, other.den))

    def __eq__(self, other):
        if not isinstance(other, UniRational):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __call__(self, t):
        t = Fraction(t)
        n = sum(Fraction(c) * t**i for i, c in enumerate(self.num))
        d = sum(Fraction(c) * t**i for i, c in enumerate(self.den))
        return _norm(n / d)

    def series(self, order: int) -> list:
        """Power-series coefficients of T^0..T^order."""
        if not self.den or self.den[0] == 0:
            raise ValueError("denominator vanishes at T = 0; no power series")
        d0 = Fraction(self.den[0])
        out = []
        for n in range(order + 1):
            c = Fraction(self.num[n]) if n < len(self.num) else Fraction(0)
            for k in range(1, min(n, len(self.den) - 1) + 1):
                c -= Fraction(self.den[k]) * out[n - k]
            out.append(c / d0)
        return [_norm(c) for c in out]

    @staticmethod
    def _ptext(p: Sequence) -> str:
        if not p:
            return "0"
        parts = []
        for i, c in enumerate(p):
            if c == 0:
                continue
            mono = "" if i == 0 else ("T" if i == 1 else f"T^{i}")
            if not mono:
                parts.append(_fmt_coeff(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{_fmt_coeff(c)}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def __str__(self):
        if self.den == (1,):
            return self._ptext(self.num)
        return f"({self._ptext(self.num)}) / ({self._ptext(self.den)})"

    __repr__ = __str__


def mr_specialize(a: MotivicRational, p, symbol_values: Mapping[str, object] | None = None) -> UniRational:
    """Substitute ``L := p``; symbolic classes need point counts in ``symbol_values``."""
    p = _norm(p)
    if p == 0:
        raise ValueError("cannot specialize at L = 0")
    missing = a.symbols() - set(symbol_values or {})
    if missing:
        raise ValueError(f"point counts required for symbolic classes {sorted(missing)}")
    groups: dict[tuple, list] = {}
    for t in a.terms:
        c = t.coeff(p)
        if t.symbol:
            c = c * _norm(symbol_values[t.symbol])
        groups[t.factors] = _poly_add(groups.get(t.factors, []), [0] * t.t_power + [c])
    # one common denominator, reduced once at the end
    mult = _multiplicities(a.terms)
    cache: dict[tuple[tuple[int, int], int], list] = {}

    def binom_pow(f: tuple[int, int], k: int) -> list:
        if (f, k) not in cache:
            A, B = f
            out: list = [1]
            for _ in range(k):
                out = _poly_mul(out, _poly_add([1], [0] * A + [-Fraction(p) ** (-B)]))
            cache[(f, k)] = out
        return cache[(f, k)]

    den: list = [1]
    for f, k in mult.items():
        den = _poly_mul(den, binom_pow(f, k))
    if not den:
        raise ZeroDivisionError(f"denominator vanishes identically at L = {p}")
    num: list = []
    for facs, part in groups.items():
        local: dict[tuple[int, int], int] = {}
        for A, B in facs:
            local[(A, B)] = local.get((A, B), 0) + 1
            part = _poly_mul(part, [0] * A + [Fraction(p) ** (-B)])
        for f, k in mult.items():
            if k > local.get(f, 0):
                part = _poly_mul(part, binom_pow(f, k - local.get(f, 0)))
        num = _poly_add(num, part)
    return UniRational(num, den)


# ---------------------------------------------------------------------------
# Rational functions in s with linear denominators
# ---------------------------------------------------------------------------


def _int_content(coeffs: Sequence) -> Fraction:
    fr = [Fraction(c) for c in coeffs if c != 0]
    if not fr:
        return Fraction(1)
    den = reduce(lambda x, y: x * y // gcd(x, y), (f.denominator for f in fr), 1)
    num = reduce(gcd, (abs(f.numerator * (den // f.denominator)) for f in fr), 0)
    return Fraction(num, den)


class RationalFunctionS:
    """``scalar * num(s) / prod(a*s + b)``, reduced.

    ``num`` is a primitive integer polynomial (low degree first) with positive
    leading coefficient; each linear factor is a primitive integer pair with
    ``a > 0`` (constant factors are folded into ``scalar``).
    """

    __slots__ = ("scalar", "num", "factors")

    def __init__(self, num: Sequence = (1,), factors: Iterable[tuple[int, int]] = (), scalar=1):
        num = _poly_trim(list(num))
        scalar = Fraction(scalar)
        if not num or scalar == 0:
            self.scalar, self.num, self.factors = 0, (), ()
            return
        facs = []
        for a, b in factors:
            a, b = Fraction(a), Fraction(b)
            if a == 0 and b == 0:
                raise ValueError("linear factor (0, 0) is not allowed")
            if a == 0:
                scalar /= b
                continue
            # clear denominators, make primitive, a > 0
            den = a.denominator * b.denominator // gcd(a.denominator, b.denominator)
            ai, bi = int(a * den), int(b * den)
            g = gcd(ai, bi)
            ai, bi = ai // g, bi // g
            scalar /= Fraction(g, den)
            if ai < 0:
                ai, bi = -ai, -bi
                scalar = -scalar
            facs.append((ai, bi))
        # cancel factors that divide the numerator
        kept = []
        for ai, bi in sorted(facs):
            root = Fraction(-bi, ai)
            if sum(Fraction(c) * root**i for i, c in enumerate(num)) == 0:
                num, _ = _poly_divmod(num, [bi, ai])
            else:
                kept.append((ai, bi))
        content = _int_content(num)
        if Fraction(num[-1]) < 0:
            content = -content
        self.num = tuple(_norm(Fraction(c) / content) for c in num)
        self.scalar = _norm(scalar * content)
        self.factors = tuple(sorted(kept))

    @classmethod
    def reciprocal_product(cls, pairs: Iterable[tuple[int, int]], scalar=1) -> "RationalFunctionS":
        """``scalar / prod(A*s + B)``."""
        return cls((1,), pairs, scalar)

    def is_zero(self) -> bool:
        return not self.num

    def __add__(self, other: "RationalFunctionS") -> "RationalFunctionS":
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        rest_other = list(other.factors)
        for f in self.factors:
            if f in rest_other:
                rest_other.remove(f)
        union = list(self.factors) + rest_other

        def lift(x: "RationalFunctionS"):
            missing = list(union)
            for f in x.factors:
                missing.remove(f)
            poly = [Fraction(c) * Fraction(x.scalar) for c in x.num]
            for a, b in missing:
                poly = _poly_mul(poly, [b, a])
            return poly
        return RationalFunctionS(_poly_add(lift(self), lift(other)), union)

    def __mul__(self, other: "RationalFunctionS") -> "RationalFunctionS":
        return RationalFunctionS(
            _poly_mul(self.num, other.num), self.factors + other.factors, Fraction(self.scalar) * Fraction(other.scalar)
        )

    def __eq__(self, other):
        if not isinstance(other, RationalFunctionS):
            return NotImplemented
        return (self.scalar, self.num, self.factors) == (other.scalar, other.num, other.factors)

    def __hash__(self):
        return hash((self.scalar, self.num, self.factors))

    def __call__(self, s):
        s = Fraction(s)
        n = sum(Fraction(c) * s**i for i, c in enumerate(self.num))
        d = reduce(lambda acc, f: acc * (f[0] * s + f[1]), self.factors, Fraction(1))
        return _norm(Fraction(self.scalar) * n / d)

    @staticmethod
    def _lin(a: int, b: int) -> str:
        left = "s" if a == 1 else f"{a}*s"
        if b == 0:
            return left
        return f"{left}+{b}" if b > 0 else f"{left}-{-b}"

    def __str__(self):
        if self.is_zero():
            return "0"
        sc = Fraction(self.scalar)
        u, v = sc.numerator, sc.denominator
        if len(self.num) == 1:
            top = str(u)
        else:
            terms = []
            for i in range(len(self.num) - 1, -1, -1):
                c = self.num[i]
                if c == 0:
                    continue
                mono = "" if i == 0 else ("s" if i == 1 else f"s^{i}")
                if not mono:
                    body = str(abs(c))
                else:
                    body = mono if abs(c) == 1 else f"{abs(c)}*{mono}"
                terms.append(("-" if c < 0 else "+", body))
            poly = ("-" if terms[0][0] == "-" else "") + terms[0][1]
            poly += "".join(f"{sg}{b}" for sg, b in terms[1:])
            top = f"({poly})" if u == 1 else (f"-({poly})" if u == -1 else f"{u}*({poly})")
        counted: dict[tuple[int, int], int] = {}
        for f in self.factors:
            counted[f] = counted.get(f, 0) + 1
        den_parts = [str(v)] if v != 1 else []
        for (a, b), k in sorted(counted.items()):
            lin = f"({self._lin(a, b)})"
            den_parts.append(lin if k == 1 else f"{lin}^{k}")
        if not den_parts:
            return top
        if len(den_parts) == 1 and (v != 1 or sum(counted.values()) == 1):
            return f"{top}/{den_parts[0]}"
        return f"{top}/({'*'.join(den_parts)})"

    __repr__ = __str__
