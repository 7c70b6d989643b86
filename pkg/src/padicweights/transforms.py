"""Kernel transforms V -> V^wedge -> V^sharp -> h^sharp, with the s-deformation.

For a kernel V on N\\G we only need the function (y, z) -> V(a(y) n'(z)).

* V^wedge[s](xi, z) = int |y|^(s1-s2) V(a(y)n'(z)) psi(xi y) d^x y
* V^sharp[s](x, y)  = int |xi|^(-2 s2) V^wedge[s](xi, -x/xi) psi(-xi y) dxi
* h^sharp[s](t)     = int |1-x|^(2 s1) |x|^(2 s2) V^sharp[s](x, (x-t)/(x(1-x))) dx/|x(1-x)|

The canonical kernel attached to a ramified chi with Q = C(chi) is
V(a(y)n'(z)) = 1_{|y|=1} 1_{|z|<=1/Q} chi(y), for which everything is explicit:
V^wedge is a Gauss sum and V^sharp = Q^(-2 s2) 1_{|x|<=1} 1_{|y|=1} chi(y).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .characters import MultChar, e, unit_tables
from .errors import LevelTooLow, SingularArgument
from .lfactors import gauss_sum
from .padic_core import ValuedUnit, frac_p, reduce_mod, vp


@dataclass(frozen=True)
class DeformParams:
    s1: complex = 0j
    s2: complex = 0j
    s3: complex = 0j

    def __post_init__(self):
        for name in ("s1", "s2", "s3"):
            val = complex(getattr(self, name))
            if abs(val.real) >= 1 / 6:
                raise ValueError(f"|Re {name}| must be below 1/6")
            object.__setattr__(self, name, val)


ZERO_S = DeformParams()


def _frac(x) -> Fraction:
    return x.to_fraction() if isinstance(x, ValuedUnit) else Fraction(x)


def _v(x: Fraction, p: int) -> float:
    return vp(x, p)


# --- kernels ------------------------------------------------------------------------


@dataclass(frozen=True)
class KernelTable:
    """V(a(y) n'(z)) tabulated on (y-shell, z-annulus, unit residue of y mod p^m).

    ``values[i, j, u]`` is the value for v(y) = yvals[i], u the unit part of y
    mod p^m, and z in row j: rows 0..(k1-k0) are the annuli v(z) = k0..k1, the
    last row is v(z) > k1 (including z = 0). V vanishes for v(z) < k0.
    """

    p: int
    m: int
    yvals: tuple[int, ...]
    k0: int
    k1: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        shape = (len(self.yvals), self.k1 - self.k0 + 2, self.p**self.m)
        if self.values.shape != shape:
            raise ValueError(f"kernel table shape {self.values.shape} != {shape}")

    @classmethod
    def canonical(cls, chi: MultChar) -> "KernelTable":
        n = chi.n
        row = chi.table(n)
        vals = np.stack([row, row])[None, :, :]
        return cls(chi.p, n, (0,), n, n, vals.astype(complex))

    @classmethod
    def random(cls, rng: np.random.Generator, p: int, m: int, yvals=(0, 1), k0: int = 0,
               k1: int = 1) -> "KernelTable":
        shape = (len(yvals), k1 - k0 + 2, p**m)
        vals = rng.normal(size=shape) + 1j * rng.normal(size=shape)
        vals[..., np.arange(p**m) % p == 0] = 0
        return cls(p, m, tuple(yvals), k0, k1, vals)

    def z_row(self, z: Fraction) -> int | None:
        if z == 0:
            return self.k1 - self.k0 + 1
        v = int(_v(z, self.p))
        if v < self.k0:
            return None
        return min(v, self.k1 + 1) - self.k0

    def __call__(self, y: Fraction, z: Fraction) -> complex:
        y, z = Fraction(y), Fraction(z)
        row = self.z_row(z)
        if y == 0 or row is None:
            return 0j
        v = int(_v(y, self.p))
        if v not in self.yvals:
            return 0j
        u = reduce_mod(y / Fraction(self.p) ** v, self.p**self.m, self.p)
        return complex(self.values[self.yvals.index(v), row, u])

    def __add__(self, other: "KernelTable") -> "KernelTable":
        if (self.p, self.m, self.yvals, self.k0, self.k1) != (other.p, other.m, other.yvals,
                                                               other.k0, other.k1):
            raise ValueError("kernel grids differ")
        return KernelTable(self.p, self.m, self.yvals, self.k0, self.k1, self.values + other.values)

    def scale(self, c: complex) -> "KernelTable":
        return KernelTable(self.p, self.m, self.yvals, self.k0, self.k1, c * self.values)


@dataclass(frozen=True)
class KernelSpec:
    """Either the canonical kernel of chi or a tabulated one."""

    chi: MultChar
    table: KernelTable | None = None

    def __post_init__(self):
        if not self.chi.ramified:
            raise ValueError("kernel character must be ramified")

    @property
    def canonical(self) -> bool:
        return self.table is None

    @property
    def p(self) -> int:
        return self.chi.p

    @property
    def Q(self) -> int:
        return self.chi.conductor

    @property
    def vol_J(self) -> Fraction:
        q = self.chi.p
        return Fraction(q, q - 1) / self.Q

    def tabulated(self) -> KernelTable:
        return self.table if self.table is not None else KernelTable.canonical(self.chi)


# --- V^wedge --------------------------------------------------------------------------


def _psi_phase(w: Fraction, p: int, r: np.ndarray) -> np.ndarray:
    """psi(w r) for integer residues r; w in Z[1/p]."""
    if w == 0 or _v(w, p) >= 0:
        return np.ones(len(r), dtype=complex)
    k = -int(_v(w, p))
    a = reduce_mod(w * p**k, p**k, p)
    return np.exp(2j * np.pi * ((a * r) % p**k) / p**k)


def _wedge_table(T: KernelTable, xi: Fraction, row: int, s: DeformParams) -> complex:
    p = T.p
    total = 0j
    for i, yv in enumerate(T.yvals):
        w = xi * Fraction(p) ** yv
        need = max(T.m, -int(_v(w, p)) if w else 0)
        tab = unit_tables(p, need)
        u = tab.units
        vals = T.values[i, row, u % p**T.m] * _psi_phase(w, p, u)
        total += complex(p) ** (-yv * (s.s1 - s.s2)) * complex(np.sum(vals)) * float(p) ** (-need)
    return total


def v_wedge(K: KernelSpec, xi, z, s: DeformParams = ZERO_S) -> complex:
    xi, z = _frac(xi), _frac(z)
    if K.canonical:
        if z != 0 and _v(z, K.p) < K.chi.n:
            return 0j
        return gauss_sum(K.chi, xi)
    T = K.table
    row = T.z_row(z)
    if row is None:
        return 0j
    return _wedge_table(T, xi, row, s)


# --- V^sharp ----------------------------------------------------------------------------


def _xi_shells(T: KernelTable, x: Fraction) -> tuple[int, int | None]:
    """Range of xi-valuations j on which V^wedge(xi, -x/xi) can be nonzero."""
    j_lo = -T.m - max(T.yvals)
    if x == 0:
        return j_lo, None
    return j_lo, int(_v(x, T.p)) - T.k0


def _shell_direct(T: KernelTable, x: Fraction, y: Fraction, j: int, s: DeformParams) -> complex:
    """Shell |xi| = q^-j of the V^sharp integral as a double residue sum."""
    p = T.p
    xi_z = -x / Fraction(p) ** j  # z = -x/xi = (-x/p^j) w^-1: only its valuation matters
    row = T.z_row(xi_z)
    if row is None:
        return 0j
    need = max(1, T.m)
    for yv in T.yvals:
        need = max(need, -(j + yv))
    if y != 0:
        need = max(need, -j - int(_v(y, p)))
    tab = unit_tables(p, need)
    r = tab.units
    mod = p**need
    total = 0j
    outer = _psi_phase(-y * Fraction(p) ** j, p, r)  # psi(-xi y), indexed by w
    for i, yv in enumerate(T.yvals):
        Tu = T.values[i, row, r % p**T.m]
        k = j + yv
        if k >= 0:
            inner = np.full(len(r), np.sum(Tu))
        else:
            # sum_u T(u) psi(p^k w u): a matrix-vector product over residues mod p^-k
            kk = -k
            wu = np.outer(r % p**kk, r % p**kk) % p**kk
            inner = np.exp(2j * np.pi * wu / p**kk) @ Tu
        total += complex(p) ** (-yv * (s.s1 - s.s2)) * complex(np.sum(outer * inner))
    return total * float(mod) ** (-2)


def _unit_shell_psi(a: Fraction, p: int) -> float:
    v = _v(a, p)
    if v >= 0:
        return 1 - 1 / p
    if v == -1:
        return -1 / p
    return 0.0


def _shell_swapped(T: KernelTable, x: Fraction, y: Fraction, j: int, s: DeformParams) -> complex:
    """Same shell with the w-integral done first in closed form."""
    p = T.p
    row = T.z_row(-x / Fraction(p) ** j)
    if row is None:
        return 0j
    total = 0j
    for i, yv in enumerate(T.yvals):
        need = max(1, T.m, -j - yv + 2)
        if y != 0:
            need = max(need, int(_v(y, p)) - yv + 2)
        acc = 0j
        for u in range(p**need):
            if u % p == 0:
                continue
            tu = T.values[i, row, u % p**T.m]
            if tu == 0:
                continue
            a = Fraction(p) ** j * (Fraction(p) ** yv * u - y)
            acc += tu * _unit_shell_psi(a, p)
        total += complex(p) ** (-yv * (s.s1 - s.s2)) * acc * float(p) ** (-need)
    return total


def _v_sharp_table(T: KernelTable, x: Fraction, y: Fraction, s: DeformParams,
                   swapped: bool = False) -> complex:
    p = T.p
    j_lo, j_hi = _xi_shells(T, x)
    shell = _shell_swapped if swapped else _shell_direct
    tail = 0j
    if j_hi is None:
        # x = 0: beyond J the shells are a geometric series in q^(2 s2 - 1)
        J = max(j_lo, -min(T.yvals), -int(_v(y, p)) if y else j_lo)
        row = T.z_row(Fraction(0))
        units = unit_tables(p, T.m).units
        c0 = sum(complex(p) ** (-yv * (s.s1 - s.s2))
                 * complex(np.sum(T.values[i, row, units])) * float(p) ** (-T.m)
                 for i, yv in enumerate(T.yvals))
        r = complex(p) ** (2 * s.s2 - 1)
        tail = c0 * (1 - 1 / p) * r**J / (1 - r)
        j_hi = J - 1
    total = 0j
    for j in range(j_lo, j_hi + 1):
        weight = complex(p) ** (-j * (1 - 2 * s.s2))  # |xi|^(1 - 2 s2) from dxi and the deformation
        total += weight * shell(T, x, y, j, s)
    return total + tail


def v_sharp(K: KernelSpec, x, y, s: DeformParams = ZERO_S) -> complex:
    x, y = _frac(x), _frac(y)
    p = K.p
    if K.canonical:
        if (x != 0 and _v(x, p) < 0) or y == 0 or _v(y, p) != 0:
            return 0j
        return complex(K.Q) ** (-2 * s.s2) * K.chi(y)
    return _v_sharp_table(K.table, x, y, s)


def v_sharp_swapped(K: KernelSpec, x, y, s: DeformParams = ZERO_S) -> complex:
    """Independent evaluation of V^sharp for tabulated kernels (x != 0)."""
    x, y = _frac(x), _frac(y)
    return _v_sharp_table(K.tabulated(), x, y, s, swapped=True)


def v_sharp_numeric(K: KernelSpec, x, y, s: DeformParams = ZERO_S) -> complex:
    """V^sharp through the tabulated route, also for the canonical kernel."""
    return _v_sharp_table(K.tabulated(), _frac(x), _frac(y), s)


def inverse_xi_transform(K: KernelSpec, x, xi, s: DeformParams = ZERO_S) -> complex:
    """int V^sharp(x, y) psi(xi y) dy, which should equal |xi|^(-2 s2) V^wedge(xi, -x/xi)."""
    x, xi = _frac(x), _frac(xi)
    T = K.tabulated()
    p = T.p
    if x == 0:
        raise SingularArgument("inverse transform needs x != 0")
    j_lo, j_hi = _xi_shells(T, x)
    # V^sharp(x, .) lives on v(y) >= -J and is constant on cosets of p^-j_lo o
    J = 1 + max(j + max(T.m, -(j + min(T.yvals))) for j in range(j_lo, j_hi + 1))
    res = max(-j_lo, -int(_v(xi, p)) if xi else -j_lo)
    count = J + res
    if count > 8:
        raise LevelTooLow("inverse transform grid too large")
    total = 0j
    for r in range(p**count):
        yy = Fraction(r) * Fraction(p) ** (-J)
        val = v_sharp(K, x, yy, s) if K.canonical else _v_sharp_table(T, x, yy, s)
        total += val * e(frac_p(xi * yy, p))
    return total * float(p) ** (-res)


# --- h^sharp ---------------------------------------------------------------------------


def h_sharp(K: KernelSpec, t, s: DeformParams = ZERO_S) -> complex:
    """h^sharp[s](t) for the canonical kernel, summed shell by shell in x."""
    if not K.canonical:
        raise NotImplementedError("h_sharp is implemented for the canonical kernel")
    t = _frac(t)
    if t == 0 or t == 1:
        raise SingularArgument("t must avoid 0 and 1")
    p, n = K.p, K.chi.n
    vt, v1t = _v(t, p), _v(1 - t, p)
    if vt < 0:
        return 0j
    mod = p**n
    tab = unit_tables(p, n)
    w = tab.units
    chi_tab = K.chi.table(n)
    scale = float(p) ** (-n)
    total = 0j
    # (A) x = p^i w, 1 <= i <= v(t): |x - t| = |x| needed
    for i in range(1, int(vt) + 1):
        tt = reduce_mod(t / Fraction(p) ** i, mod, p)
        num = (w - tt) % mod
        den = (w * (1 - p**i * w)) % mod
        ok = num % p != 0
        y = (num[ok] * tab.inverse(den[ok] % mod)) % mod
        total += complex(p) ** (-2 * i * s.s2) * complex(np.sum(chi_tab[y])) * scale
    # (B) x = 1 - p^j w, 1 <= j <= v(1 - t)
    for j in range(1, int(v1t) + 1):
        ss = reduce_mod((1 - t) / Fraction(p) ** j, mod, p)
        # x - t = (1 - t) - p^j w = p^j (ss - w); x(1-x) = (1 - p^j w) p^j w
        num = (ss - w) % mod
        den = ((1 - p**j * w) * w) % mod
        ok = num % p != 0
        y = (num[ok] * tab.inverse(den[ok] % mod)) % mod
        total += complex(p) ** (-2 * j * s.s1) * complex(np.sum(chi_tab[y])) * scale
    # (C) x a unit, x != 0, 1, t mod p
    x = w[w % p != 1]
    tr = reduce_mod(t, mod, p)
    num = (x - tr) % mod
    den = (x * (1 - x)) % mod
    ok = num % p != 0
    y = (num[ok] * tab.inverse(den[ok] % mod)) % mod
    total += complex(np.sum(chi_tab[y])) * scale
    return complex(K.Q) ** (-2 * s.s2) * total


def h_sharp_brute(K: KernelSpec, t, s: DeformParams = ZERO_S, extra: int = 1) -> complex:
    """Direct x-sum over o mod p^M with exact rational arithmetic."""
    t = _frac(t)
    p, n = K.p, K.chi.n
    vt, v1t = _v(t, p), _v(1 - t, p)
    if vt < 0:
        return 0j
    M = n + int(max(vt, v1t)) + extra
    total = 0j
    for r in range(p**M):
        x = Fraction(r)
        if r == 0 or (r - 1) % p**M == 0:
            continue
        vx, v1x = _v(x, p), _v(1 - x, p)
        if vx >= M or v1x >= M:
            continue
        y = (x - t) / (x * (1 - x))
        if y == 0 or _v(y, p) != 0:
            continue
        weight = complex(p) ** (-2 * s.s1 * v1x - 2 * s.s2 * vx) * float(p) ** (vx + v1x)
        total += weight * complex(K.Q) ** (-2 * s.s2) * K.chi(y)
    return total * float(p) ** (-M)
