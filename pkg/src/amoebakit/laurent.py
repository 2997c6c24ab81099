"""Laurent polynomials with complex coefficients.

A polynomial is stored as a sorted tuple of ``(exponent, coefficient)`` pairs.
Evaluation on the torus always factors out the dominant monomial magnitude so
that log-radii of several tens of units do not overflow.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping

import numpy as np

Exponent = tuple[int, ...]
#: Degeneration weights nu(alpha), one real per support point.
Weights = Mapping[Exponent, float]

TWO_PI = 2.0 * math.pi


class ParseError(ValueError):
    """Raised for malformed polynomial text; ``position`` is a 0-based offset."""

    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


@dataclass(frozen=True)
class TorusPoint:
    """A point ``z_j = exp(x_j + i*theta_j)`` of the complex torus."""

    log_radii: tuple[float, ...]
    angles: tuple[float, ...]

    def __post_init__(self):
        if len(self.log_radii) != len(self.angles):
            raise ValueError("log_radii and angles must have equal length")
        object.__setattr__(self, "log_radii", tuple(float(v) for v in self.log_radii))
        object.__setattr__(self, "angles", tuple(float(a) % TWO_PI for a in self.angles))

    @property
    def dim(self) -> int:
        return len(self.log_radii)


@dataclass(frozen=True)
class LaurentPolynomial:
    dim: int
    terms: tuple[tuple[Exponent, complex], ...] = field(repr=False)

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dimension must be positive")
        if not self.terms:
            raise ValueError("polynomial has no terms")
        merged: dict[Exponent, complex] = {}
        for exp, coeff in self.terms:
            exp = tuple(int(e) for e in exp)
            if len(exp) != self.dim:
                raise ValueError(f"exponent {exp} does not have length {self.dim}")
            merged[exp] = merged.get(exp, 0j) + complex(coeff)
        cleaned = tuple(sorted((e, c) for e, c in merged.items() if c != 0))
        if not cleaned:
            raise ValueError("polynomial has no nonzero terms")
        object.__setattr__(self, "terms", cleaned)

    @classmethod
    def from_dict(cls, terms: Mapping[Exponent, complex], dim: int | None = None) -> "LaurentPolynomial":
        if dim is None:
            dim = len(next(iter(terms)))
        return cls(dim, tuple(terms.items()))

    def as_dict(self) -> dict[Exponent, complex]:
        return dict(self.terms)

    @property
    def support(self) -> list[Exponent]:
        return [e for e, _ in self.terms]

    @cached_property
    def exponents(self) -> np.ndarray:
        return np.array(self.support, dtype=np.int64).reshape(len(self.terms), self.dim)

    @cached_property
    def coefficients(self) -> np.ndarray:
        return np.array([c for _, c in self.terms], dtype=complex)

    def __len__(self) -> int:
        return len(self.terms)

    def __mul__(self, other: "LaurentPolynomial") -> "LaurentPolynomial":
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        if other.dim != self.dim:
            raise ValueError("dimension mismatch")
        out: dict[Exponent, complex] = {}
        for ea, ca in self.terms:
            for eb, cb in other.terms:
                e = tuple(a + b for a, b in zip(ea, eb))
                out[e] = out.get(e, 0j) + ca * cb
        return LaurentPolynomial(self.dim, tuple(out.items()))

    def degree_range(self, axis: int) -> tuple[int, int]:
        col = self.exponents[:, axis]
        return int(col.min()), int(col.max())

    def __str__(self) -> str:
        return format_laurent(self)


# ----------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<cplx>\(\s*[-+]?[^()]*\))
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)
  | (?P<var>z(?P<idx>\d+))
  | (?P<op>[-+*^])
    """,
    re.VERBOSE,
)


def _parse_complex(body: str, pos: int) -> complex:
    s = body.replace(" ", "")
    try:
        if not s.endswith("i"):
            return complex(float(s), 0.0)
        s = s[:-1].rstrip("*")
        split = 0
        for k in range(len(s) - 1, 0, -1):
            if s[k] in "+-" and s[k - 1] not in "eE":
                split = k
                break
        re_txt, im_txt = s[:split], s[split:]
        if im_txt in ("", "+"):
            im = 1.0
        elif im_txt == "-":
            im = -1.0
        else:
            im = float(im_txt)
        return complex(float(re_txt) if re_txt else 0.0, im)
    except ValueError:
        raise ParseError(f"malformed complex coefficient '({body})'", pos) from None


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind == "idx":
            kind = "var"
        if kind != "ws":
            tokens.append((kind, m.group(0), pos))
        pos = m.end()
    return tokens


def parse_laurent(text: str, dim: int) -> LaurentPolynomial:
    """Parse polynomial text such as ``"1 + (2-1i)*z1^2*z2^-1 - 3*z2"``."""
    if dim < 1:
        raise ParseError("dimension must be positive")
    tokens = _tokenize(text)
    if not tokens:
        raise ParseError("empty input", 0)
    i = 0
    terms: dict[Exponent, complex] = {}

    def peek():
        return tokens[i] if i < len(tokens) else None

    while i < len(tokens):
        sign = 1.0
        tok = peek()
        if tok[0] == "op" and tok[1] in "+-":
            sign = -1.0 if tok[1] == "-" else 1.0
            i += 1
        elif terms:
            raise ParseError(f"expected '+' or '-', got {tok[1]!r}", tok[2])
        tok = peek()
        if tok is None:
            raise ParseError("dangling sign at end of input", len(text))
        coeff = complex(sign)
        exp = [0] * dim
        have_factor = False
        if tok[0] == "num":
            coeff *= float(tok[1])
            i += 1
            have_factor = True
        elif tok[0] == "cplx":
            coeff *= _parse_complex(tok[1][1:-1], tok[2])
            i += 1
            have_factor = True
        while True:
            tok = peek()
            if tok is None:
                break
            if tok[0] == "op" and tok[1] == "*":
                if not have_factor:
                    raise ParseError("'*' without a left operand", tok[2])
                i += 1
                tok = peek()
                if tok is None or tok[0] != "var":
                    raise ParseError("expected a variable after '*'", tok[2] if tok else len(text))
            if tok[0] != "var":
                break
            k = int(tok[1][1:])
            if not 1 <= k <= dim:
                raise ParseError(f"variable {tok[1]} outside z1..z{dim}", tok[2])
            i += 1
            power = 1
            nxt = peek()
            if nxt is not None and nxt[0] == "op" and nxt[1] == "^":
                i += 1
                psign = 1
                nxt = peek()
                if nxt is not None and nxt[0] == "op" and nxt[1] in "+-":
                    psign = -1 if nxt[1] == "-" else 1
                    i += 1
                    nxt = peek()
                if nxt is None or nxt[0] != "num" or not nxt[1].isdigit():
                    raise ParseError("expected an integer exponent", nxt[2] if nxt else len(text))
                power = psign * int(nxt[1])
                i += 1
            exp[k - 1] += power
            have_factor = True
        if not have_factor:
            tok = peek()
            raise ParseError("expected a term", tok[2] if tok else len(text))
        key = tuple(exp)
        terms[key] = terms.get(key, 0j) + coeff
        tok = peek()
        if tok is not None and not (tok[0] == "op" and tok[1] in "+-"):
            raise ParseError(f"unexpected token {tok[1]!r}", tok[2])

    nonzero = {e: c for e, c in terms.items() if c != 0}
    if not nonzero:
        raise ParseError("polynomial is empty after merging like terms")
    return LaurentPolynomial(dim, tuple(nonzero.items()))


def _fmt_real(v: float) -> str:
    if v.is_integer() and abs(v) < 1e15:
        return str(int(v))
    return repr(v)


def format_laurent(f: LaurentPolynomial) -> str:
    """Canonical text form; terms appear in lexicographic exponent order."""
    parts = []
    for exp, c in f.terms:
        mono = "*".join(
            f"z{k + 1}" if e == 1 else f"z{k + 1}^{e}" for k, e in enumerate(exp) if e != 0
        )
        if c.imag == 0:
            sign = "-" if c.real < 0 else "+"
            mag = abs(c.real)
            if mono and mag == 1:
                body = mono
            else:
                body = _fmt_real(mag) + ("*" + mono if mono else "")
        else:
            sign = "+"
            im = c.imag
            num = f"({_fmt_real(c.real)}{'-' if im < 0 else '+'}{_fmt_real(abs(im))}i)"
            body = num + ("*" + mono if mono else "")
        if not parts:
            parts.append(body if sign == "+" else "-" + body)
        else:
            parts.append(f"{sign} {body}")
    return " ".join(parts)


# ----------------------------------------------------------------------------
# evaluation


def log_magnitudes(f: LaurentPolynomial, x: np.ndarray) -> np.ndarray:
    """``log|a_alpha| + <alpha, x>`` for every term; ``x`` may be batched (..., n)."""
    x = np.asarray(x, dtype=float)
    return np.log(np.abs(f.coefficients)) + x @ f.exponents.T


def evaluate_factored(f: LaurentPolynomial, x, theta) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(F, g)`` with ``f(e^{x+i theta}) = e^F * g`` and ``|g| <= #terms``.

    ``F`` is the largest term magnitude in log units.  ``x`` and ``theta`` broadcast
    over leading axes; the last axis has length ``f.dim``.
    """
    x = np.asarray(x, dtype=float)
    theta = np.asarray(theta, dtype=float)
    logs = log_magnitudes(f, x)
    top = logs.max(axis=-1)
    phases = np.angle(f.coefficients) + theta @ f.exponents.T
    g = np.sum(np.exp(logs - top[..., None] + 1j * phases), axis=-1)
    return top, g


def evaluate(f: LaurentPolynomial, p: TorusPoint) -> complex:
    if p.dim != f.dim:
        raise ValueError(f"point has dimension {p.dim}, polynomial {f.dim}")
    top, g = evaluate_factored(f, p.log_radii, p.angles)
    return complex(np.exp(top) * g)


def substitute_t(f: LaurentPolynomial, weights: Weights, t: float) -> LaurentPolynomial:
    """The degenerate member ``f_t = sum a_alpha e^{nu} t^{nu} z^alpha``."""
    if not (0.0 < t <= math.exp(-1.0) * (1 + 1e-15)):
        raise ValueError(f"t={t} outside (0, 1/e]")
    missing = [e for e in f.support if e not in weights]
    if missing:
        raise ValueError(f"no weight for support point(s) {missing}")
    extra = [e for e in weights if tuple(e) not in set(f.support)]
    if extra:
        raise ValueError(f"weights given off the support: {extra}")
    log_t = math.log(t)
    # a * e^nu * t^nu = a * exp(nu * (1 + log t)) keeps tiny t^nu from underflowing early
    terms = tuple((e, c * math.exp(float(weights[e]) * (1.0 + log_t))) for e, c in f.terms)
    return LaurentPolynomial(f.dim, terms)
