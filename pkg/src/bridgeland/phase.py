"""Exact Gaussian rationals, phases and the universal-cover action on phases.

A phase is stored as ``winding + phi_H(ray)`` with ``ray`` in the closed upper
half plane minus the non-negative reals, so ``phi_H(ray)`` lies in (0, 1].
All comparisons are sign computations on rationals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering

from gmpy2 import mpq


_MPQ = type(mpq(0))


def Q(x) -> mpq:
    if type(x) is _MPQ:
        return x
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, str):
        return mpq(Fraction(x).numerator, Fraction(x).denominator)
    return mpq(x)


def qstr(x) -> str:
    x = mpq(x)
    return f"{int(x.numerator)}/{int(x.denominator)}"


@dataclass(frozen=True)
class Gauss:
    """``re + im*i`` with rational parts."""

    re: mpq
    im: mpq = mpq(0)

    def __post_init__(self):
        object.__setattr__(self, "re", Q(self.re))
        object.__setattr__(self, "im", Q(self.im))

    @classmethod
    def parse(cls, text) -> "Gauss":
        if isinstance(text, Gauss):
            return text
        if isinstance(text, dict):
            return cls(Q(str(text["re"])), Q(str(text["im"])))
        if isinstance(text, (tuple, list)):
            return cls(Q(text[0]), Q(text[1]))
        if isinstance(text, (int, Fraction)) or hasattr(text, "numerator"):
            return cls(Q(text))
        s = str(text).replace(" ", "").replace("I", "i").replace("j", "i")
        if not s.endswith("i"):
            return cls(Q(s))
        body = s[:-1]
        cut = max(body.rfind("+"), body.rfind("-"))
        while cut > 0 and body[cut - 1] in "eE/":
            cut = max(body.rfind("+", 0, cut), body.rfind("-", 0, cut))
        re_part, im_part = (body[:cut], body[cut:]) if cut > 0 else ("0", body)
        if im_part in ("", "+"):
            im_part = "1"
        elif im_part == "-":
            im_part = "-1"
        return cls(Q(re_part or "0"), Q(im_part))

    def __add__(self, o):
        return Gauss(self.re + o.re, self.im + o.im)

    def __sub__(self, o):
        return Gauss(self.re - o.re, self.im - o.im)

    def __neg__(self):
        return Gauss(-self.re, -self.im)

    def __mul__(self, o):
        if isinstance(o, Gauss):
            return Gauss(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)
        return Gauss(self.re * o, self.im * o)

    __rmul__ = __mul__

    def __truediv__(self, o):
        if isinstance(o, Gauss):
            n = o.norm2
            if n == 0:
                raise ZeroDivisionError("division by zero")
            return self * o.conj() * (1 / n)
        return Gauss(self.re / o, self.im / o)

    def conj(self):
        return Gauss(self.re, -self.im)

    @property
    def norm2(self) -> mpq:
        return self.re * self.re + self.im * self.im

    @property
    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def to_json(self) -> dict:
        return {"re": qstr(self.re), "im": qstr(self.im), "display": [float(self.re), float(self.im)]}

    def __repr__(self):
        r, i = Fraction(int(self.re.numerator), int(self.re.denominator)), Fraction(int(self.im.numerator), int(self.im.denominator))
        return f"({r}{'+' if i >= 0 else '-'}{abs(i)}i)"


I = Gauss(0, 1)


def cross(a: Gauss, b: Gauss) -> mpq:
    """``Im(conj(a) * b)``: positive when b is counterclockwise from a."""
    return a.re * b.im - a.im * b.re


def in_H(z: Gauss) -> bool:
    """``z = m exp(i pi phi)`` with ``m > 0`` and ``0 < phi <= 1``."""
    return z.im > 0 or (z.im == 0 and z.re < 0)


def _cmp_H(a: Gauss, b: Gauss) -> int:
    c = cross(a, b)
    return (c < 0) - (c > 0)


@total_ordering
@dataclass(frozen=True)
class PhaseValue:
    winding: int
    ray: Gauss

    def __post_init__(self):
        if not in_H(self.ray):
            raise ValueError(f"ray {self.ray!r} not in the half plane H")
        object.__setattr__(self, "winding", int(self.winding))

    def _cmp(self, o: "PhaseValue") -> int:
        if self.winding != o.winding:
            return -1 if self.winding < o.winding else 1
        return _cmp_H(self.ray, o.ray)

    def __lt__(self, o):
        return self._cmp(o) < 0

    def __eq__(self, o):
        return isinstance(o, PhaseValue) and self._cmp(o) == 0

    def __hash__(self):
        r = self.ray
        n = r.norm2
        # direction key invariant under positive scaling
        return hash((self.winding, r.re * abs(r.re) / n, r.im * abs(r.im) / n))

    def __add__(self, k: int) -> "PhaseValue":
        return PhaseValue(self.winding + int(k), self.ray)

    def __sub__(self, k: int) -> "PhaseValue":
        return PhaseValue(self.winding - int(k), self.ray)

    @property
    def in_window(self) -> float:
        return math.atan2(float(self.ray.im), float(self.ray.re)) / math.pi

    def __float__(self):
        return self.winding + self.in_window

    def exact(self) -> Fraction | None:
        """The phase as a rational when the ray is on an axis or a diagonal."""
        r = self.ray
        base = None
        if r.re == 0:
            base = Fraction(1, 2)
        elif r.im == 0:
            base = Fraction(1)
        elif r.re == r.im:
            base = Fraction(1, 4)
        elif r.re == -r.im:
            base = Fraction(3, 4)
        return None if base is None else base + self.winding

    def to_json(self) -> dict:
        ex = self.exact()
        return {
            "winding": self.winding,
            "ray": self.ray.to_json(),
            "exact": None if ex is None else str(ex),
            "display": float(self),
        }

    def __repr__(self):
        ex = self.exact()
        return f"φ={ex}" if ex is not None else f"φ≈{float(self):.6f}"


def phase_of(z: Gauss, winding: int = 0) -> PhaseValue:
    """Phase of z in (winding - 1, winding + 1], normalized to a ray in H.

    ``phase_of(z)`` for z in H is phi_H(z) in (0, 1]; otherwise phi_H(-z) - 1.
    """
    z = Gauss.parse(z)
    if z.is_zero:
        raise ZeroDivisionError("zero has no phase")
    if in_H(z):
        return PhaseValue(winding, z)
    return PhaseValue(winding - 1, -z)


def compare_phases(a: PhaseValue, b: PhaseValue) -> int:
    return a._cmp(b)


def rational_phase_ray(phi: Fraction) -> PhaseValue:
    """Exact PhaseValue for phases in (1/4)Z."""
    phi = Fraction(phi)
    if (phi * 4).denominator != 1:
        raise ValueError("only quarter-integer phases have exact Gaussian rational rays")
    q = int(phi * 4)
    w, r = divmod(q - 1, 4)
    rays = [Gauss(1, 1), I, Gauss(-1, 1), Gauss(-1, 0)]
    return PhaseValue(w, rays[r])


# ---------------------------------------------------- GL+(2, R) universal cover


def _mat_inv(T):
    (a, b), (c, d) = T
    det = a * d - b * c
    if det == 0:
        raise ZeroDivisionError("singular matrix")
    return ((d / det, -b / det), (-c / det, a / det))


def _mat_mul(A, B):
    return tuple(
        tuple(sum(A[i][k] * B[k][j] for k in range(2)) for j in range(2)) for i in range(2)
    )


def apply_matrix(T, z: Gauss) -> Gauss:
    return Gauss(T[0][0] * z.re + T[0][1] * z.im, T[1][0] * z.re + T[1][1] * z.im)


@dataclass(frozen=True)
class GLElement:
    """A point ``(T, f)`` of the universal cover of GL+(2, R).

    Charges move by ``T^{-1}``. ``f`` is the unique increasing lift with
    ``f(phi + 1) = f(phi) + 1`` compatible with T; ``lift = 0`` picks the one
    with ``f(1)`` in (0, 2], each unit of lift adds 2.
    """

    T: tuple = ((mpq(1), mpq(0)), (mpq(0), mpq(1)))
    lift: int = 0

    def __post_init__(self):
        T = tuple(tuple(Q(x) for x in row) for row in self.T)
        object.__setattr__(self, "T", T)
        if self.det <= 0:
            raise ValueError("GL+ element needs det T > 0")

    @property
    def det(self) -> mpq:
        (a, b), (c, d) = self.T
        return a * d - b * c

    @property
    def Tinv(self):
        return _mat_inv(self.T)

    def charge(self, z: Gauss) -> Gauss:
        return apply_matrix(self.Tinv, z)

    def _f1_base(self) -> PhaseValue:
        """f_0(1) for lift 0, in (0, 2]."""
        p = phase_of(self.charge(Gauss(-1, 0)))
        return p if p.winding >= 0 else p + 2

    def f_one(self) -> PhaseValue:
        return self._f1_base() + 2 * self.lift

    def transport(self, phi: PhaseValue) -> PhaseValue:
        """f(phi)."""
        top = self.f_one()
        u = self.charge(phi.ray)
        p = phase_of(u, top.winding + 1)
        while p > top:
            p = p - 1
        while not p > top - 1:
            p = p + 1
        return p + phi.winding

    def then(self, other: "GLElement") -> "GLElement":
        """Apply self, then other: charges by T_other^{-1} T_self^{-1}, phases by f_other o f_self."""
        T = _mat_mul(self.T, other.T)
        target = other.transport(self.f_one())
        g = GLElement(T, 0)
        base = g.f_one()
        diff = target.winding - base.winding
        if not (target.ray == base.ray or cross(target.ray, base.ray) == 0) or diff % 2:
            raise ArithmeticError("inconsistent lift composition")
        return GLElement(T, diff // 2)

    def to_json(self) -> dict:
        return {"T": [[qstr(x) for x in row] for row in self.T], "lift": self.lift}

    @classmethod
    def from_json(cls, data) -> "GLElement":
        return cls(tuple(tuple(Q(str(x)) for x in row) for row in data["T"]), int(data.get("lift", 0)))


IDENTITY = GLElement()
