"""The dual weight h~(omega) of the canonical kernel and its dyadic pieces rho_{U,V}.

U = q^a, V = q^b. On the piece, u = p^-a w and v = p^-b w' with w, w' units, so

    rho_{U,V} = omega(p)^-(a+b) * int int chi(1 - p^a/w) chi^-1(1 - p^b/w')
                omega_0(w w' - p^(a+b)) d^x w d^x w'

with the constraints w != 1 (mod p) when a = 0 and w w' != 1 (mod p) when a = b = 0.
The whole weight is h~ = rho(omega) + chi(-1) rho(omega^-1) - rho_{1,1}(omega) where
rho(omega) = sum (UV)^(-1/2) rho_{U,V}.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .characters import MultChar, XiClass, dlog, is_atypical, totient, unit_tables
from .errors import LevelTooLow, RegimeMismatch

SCHEMA_VERSION = 1

BOUND_UNRAMIFIED = "unramified-O(1)"
BOUND_ZERO = "zero"
BOUND_GENERIC = "generic-O(1/Q)"
BOUND_ATYPICAL = "atypical"


def required_level(chi: MultChar, omega: MultChar) -> int:
    return max(chi.n, omega.n, 1)


def _phase(omega: MultChar, a: int, b: int) -> complex:
    return omega.uniformizer_value ** (-(a + b))


def term_count(chi: MultChar, omega: MultChar, m: int | None = None) -> int:
    m = required_level(chi, omega) if m is None else m
    return totient(chi.p, m) ** 2


# --- brute force -------------------------------------------------------------------


def _side_values(chi: MultChar, a: int, m: int) -> np.ndarray:
    """chi(1 - p^a / w) over units w mod p^m (zero where the constraint fails)."""
    p = chi.p
    tab = unit_tables(p, m)
    w = tab.units
    arg = (1 - p**a * tab.inverse(w)) % p**m
    vals = chi.table(m)[arg]
    if a == 0:
        vals = np.where(w % p == 1, 0, vals)
    return vals


def rho_uv_brute(chi: MultChar, omega: MultChar, a: int, b: int, m: int | None = None,
                 block: int = 4096) -> complex:
    """Exhaustive double sum over unit residues mod p^m."""
    need = required_level(chi, omega)
    m = need if m is None else m
    if m < need:
        raise LevelTooLow(f"level {m} below required {need}")
    p = chi.p
    mod = p**m
    tab = unit_tables(p, m)
    w = tab.units
    A = _side_values(chi, a, m)
    B = _side_values(chi.inverse(), b, m)
    om = omega.table(m)
    shift = p ** (a + b) % mod
    total = 0j
    for lo in range(0, len(w), block):
        wb = w[lo:lo + block]
        z = (np.multiply.outer(wb, w) - shift) % mod
        Om = om[z]
        if a == 0 and b == 0:
            Om = np.where((np.multiply.outer(wb, w) % p) == 1, 0, Om)
        total += complex(A[lo:lo + block] @ (Om @ B))
    return _phase(omega, a, b) * total * float(mod) ** (-2)


# --- closed forms for C(omega) = 1 ----------------------------------------------------------


def trivial_omega_table(p: int, n: int, a: int, b: int, par: int = 1) -> float:
    """rho_{q^a, q^b} for C(omega) = 1 and omega(p) = 1, with Q = q^n and par = chi(-1).

    At U = V = 1, Q = q the piece is (1 + chi(-1))/q^2: the excluded set
    uv = 1 (mod p) carries -chi(-1)/q^2, so 2/q^2 holds only for even chi.
    """
    q = p
    e = n - 1  # Q/q
    if min(a, b) < e:
        return 0.0
    if a == e and b == e:
        return (1 + par) / q**2 if n == 1 else 1 / q**2
    if a == e or b == e:
        return (-1 / q) * (1 - 1 / q)
    return (1 - 1 / q) ** 2


def tabulated_value(p: int, n: int, a: int, b: int) -> float:
    """The tabulated C(omega) = 1 value as stated, i.e. assuming chi(-1) = 1 at Q = q."""
    return trivial_omega_table(p, n, a, b, par=1)


def parity(chi: MultChar) -> int:
    return 1 if chi.finite_part()(-1).real > 0 else -1


def single_var_closed(p: int, n: int, a: int) -> float:
    """int_{|u-1|=|u|=q^a} chi(1 - 1/u) d^x u for C(chi) = q^n."""
    if a <= n - 2:
        return 0.0
    if a == n - 1:
        return -1 / p
    return 1 - 1 / p


def single_var_brute(chi: MultChar, a: int, m: int | None = None) -> complex:
    m = max(chi.n, 1) if m is None else m
    vals = _side_values(chi, a, m)
    return complex(np.sum(vals)) * float(chi.p) ** (-m)


def c_constants(p: int, n: int, par: int = 1) -> tuple[float, float, float]:
    """(c0, c1, c2) with D_{Q/q,Q/q} = c0/q^2, D_{Q/q,V>=Q} = c1/q, D_{U,V>=Q} = c2."""
    c0 = float(1 + par) if n == 1 else 1.0
    c1 = -(1 - 1 / p)
    c2 = (1 - 1 / p) ** 2
    return c0, c1, c2


def rho_sum_trivial(p: int, n: int, z: complex, par: int = 1) -> complex:
    """sum_{a,b>=0} z^(a+b) * trivial_omega_table(p, n, a, b, par), summed in closed form."""
    c0, c1, c2 = c_constants(p, n, par)
    tail = z**n / (1 - z)
    return c0 / p**2 * z ** (2 * n - 2) + 2 * (c1 / p) * z ** (n - 1) * tail + c2 * tail * tail


# --- stationary phase ---------------------------------------------------------------------


def additive_constant(chi: MultChar, k: int) -> tuple[int, int]:
    """(c, e) with chi(1 + p^k x) = e(c x / p^e) for integral x; needs 2k >= n."""
    p, n = chi.p, chi.n
    if n <= k:
        return 0, 0
    if 2 * k < n:
        raise ValueError("need 2k >= conductor exponent")
    d = dlog(1 + p**k, p, n)
    step = totient(p, n) // p ** (n - k)
    c, rem = divmod(chi.k * d, step)
    assert rem == 0
    return c % p ** (n - k), n - k


@dataclass(frozen=True)
class _CosetGeometry:
    """omega-independent data for the coset reduction at (p, m, a, b)."""

    k: int
    w0: np.ndarray  # representatives mod p^k, one per row
    w1: np.ndarray  # representatives mod p^k, one per column
    valid: np.ndarray  # constraint mask
    X_u: np.ndarray  # p^a / (w0 - p^a) mod p^(m-k)
    X_v: np.ndarray  # p^b / (w1 - p^b) mod p^(m-k)
    Z: np.ndarray  # z0 / (z0 - p^(a+b)) mod p^(m-k)
    z_idx: np.ndarray  # (z0 - p^(a+b)) mod p^m
    u_idx: np.ndarray  # 1 - p^a / w0 mod p^m
    v_idx: np.ndarray  # 1 - p^b / w1 mod p^m


@lru_cache(maxsize=512)
def _coset_geometry(p: int, m: int, a: int, b: int) -> _CosetGeometry:
    k = (m + 1) // 2
    mk = p**m
    reps = unit_tables(p, k).units
    w0 = reps[:, None]
    w1 = reps[None, :]
    z0 = (w0 * w1) % mk
    shift = p ** (a + b)
    valid = np.ones(z0.shape, dtype=bool)
    if a == 0:
        valid &= w0 % p != 1
    if b == 0:
        valid &= w1 % p != 1
    if a == 0 and b == 0:
        valid &= z0 % p != 1
    D = m - k
    if D > 0:
        inv = unit_tables(p, D).inverse

        def safe_inv(x):
            return inv(np.where(x % p == 0, 1, x % p**D))

        X_u = (p**a * safe_inv(w0 - p**a)) % p**D
        X_v = (p**b * safe_inv(w1 - p**b)) % p**D
        Z = (z0 * safe_inv(z0 - shift)) % p**D
    else:
        X_u = np.zeros_like(w0)
        X_v = np.zeros_like(w1)
        Z = np.zeros_like(z0)
    inv_m = unit_tables(p, m).inverse
    u_idx = (1 - p**a * inv_m(w0 % mk)) % mk
    v_idx = (1 - p**b * inv_m(w1 % mk)) % mk
    return _CosetGeometry(k, w0, w1, valid, X_u, X_v, Z, (z0 - shift) % mk, u_idx, v_idx)


def _coset_sum(chi: MultChar, omega: MultChar, a: int, b: int) -> complex:
    """Exact evaluation by averaging over cosets w0 (1 + p^k o), k = ceil(m/2).

    On each coset every character factor is a linear phase in the coset
    coordinate, so the coset average is 1 or 0 according to whether both
    linear coefficients are integral; only w0 mod p^k is enumerated.
    """
    p = chi.p
    m = required_level(chi, omega)
    g = _coset_geometry(p, m, a, b)
    k = g.k
    D = m - k
    c_chi, e_chi = additive_constant(chi, k)
    c_om, e_om = additive_constant(omega.finite_part(), k) if omega.ramified else (0, 0)
    valid = g.valid
    if D > 0 and (e_chi or e_om):
        modD = p**D
        # linear coefficients scaled by p^D; both must vanish mod p^D
        cu = c_chi * p ** (D - e_chi) if e_chi else 0
        cz = c_om * p ** (D - e_om) if e_om else 0
        lam_z = (cz * g.Z) % modD
        valid = valid & ((cu * g.X_u + lam_z) % modD == 0) & ((-cu * g.X_v + lam_z) % modD == 0)
    rows, cols = np.nonzero(valid)
    if len(rows) == 0:
        return 0j
    A = chi.table(m)[g.u_idx[rows, 0]]
    B = chi.inverse().table(m)[g.v_idx[0, cols]]
    Om = omega.table(m)[g.z_idx[rows, cols]]
    return _phase(omega, a, b) * complex(np.sum(A * B * Om)) * float(p) ** (-2 * k)


def in_stationary_regime(chi: MultChar, omega: MultChar, a: int, b: int) -> bool:
    n, c = chi.n, omega.n
    lo, hi = min(a, b), max(a, b)
    return 1 <= c <= n - hi and hi < n and n - lo >= 2


def rho_uv_stationary(chi: MultChar, omega: MultChar, a: int, b: int) -> complex:
    """Coset evaluation restricted to q <= C(omega) <= Q/V, U <= V < Q, Q/U >= q^2."""
    if not in_stationary_regime(chi, omega, a, b):
        raise RegimeMismatch(f"(a={a}, b={b}, C(omega)=q^{omega.n}) outside the stationary regime")
    return _coset_sum(chi, omega, a, b)


def rho_uv_fast(chi: MultChar, omega: MultChar, a: int, b: int) -> complex:
    """Dispatching evaluator: closed table for C(omega) = 1, coset reduction otherwise."""
    if not omega.ramified:
        return _phase(omega, a, b) * trivial_omega_table(chi.p, chi.n, a, b, parity(chi))
    return _coset_sum(chi, omega, a, b)


def predicted_support(chi: MultChar, omega: MultChar) -> tuple[int, int] | None:
    """The only (a, b) where rho_{U,V} can be nonzero when C(omega) > 1."""
    if not omega.ramified or omega.n > chi.n:
        return None
    e = chi.n - omega.n
    return (e, e)


# --- the report -------------------------------------------------------------------------------


@dataclass
class DualWeightReport:
    chi: MultChar
    omega: MultChar
    value: complex
    pieces: dict = field(default_factory=dict)  # (sign, a, b) -> complex; sign +1 or -1
    atypical: XiClass | None = None
    bound_class: str = BOUND_GENERIC
    max_ratio: float = 0.0
    level: int = 0
    terms: int = 0

    @property
    def Q(self) -> int:
        return self.chi.conductor

    def as_dict(self) -> dict:
        pieces = [{"omega_sign": s, "a": a, "b": b, "U": self.chi.p**a, "V": self.chi.p**b,
                   "re": v.real, "im": v.imag} for (s, a, b), v in sorted(self.pieces.items())]
        atyp = None
        if self.atypical is not None:
            atyp = {"xi": self.atypical.xi, "alpha": self.atypical.alpha,
                    "n_alpha": self.atypical.n_alpha, "atypical": self.atypical.atypical,
                    "small_p_caveat": self.atypical.small_p_caveat}
        return {"schema": SCHEMA_VERSION, "chi": self.chi.spec(), "omega": self.omega.spec(),
                "value_re": self.value.real, "value_im": self.value.imag, "pieces": pieces,
                "atypical": atyp, "bound_class": self.bound_class, "max_ratio": self.max_ratio,
                "level": self.level, "terms": self.terms}

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True)


def bound_class(chi: MultChar, omega: MultChar, atypical: bool) -> str:
    if not omega.ramified:
        return BOUND_UNRAMIFIED
    if omega.n > chi.n:
        return BOUND_ZERO
    return BOUND_ATYPICAL if atypical else BOUND_GENERIC


def dual_weight(chi: MultChar, omega: MultChar, extra: int = 0, evaluator=None) -> DualWeightReport:
    """Assemble h~(omega) from its dyadic pieces.

    Exponents a, b run over 0..n+1 (+extra). For C(omega) = 1 the value uses the
    exact geometric sum of the table; pieces are reported over the same window.
    """
    if not chi.ramified:
        raise ValueError("chi must be ramified")
    p, n = chi.p, chi.n
    rho = evaluator or rho_uv_fast
    chi_m1 = float(parity(chi))
    top = n + 1 + extra
    pieces = {}
    for sign, om in ((1, omega), (-1, omega.inverse())):
        for a in range(top + 1):
            for b in range(top + 1):
                pieces[(sign, a, b)] = rho(chi, om, a, b)
    if omega.ramified:
        value = sum(p ** (-(a + b) / 2) * (v if s == 1 else chi_m1 * v)
                    for (s, a, b), v in pieces.items())
        value -= pieces[(1, 0, 0)]
    else:
        z = 1 / (omega.uniformizer_value * math.sqrt(p))
        zi = omega.uniformizer_value / math.sqrt(p)
        par = parity(chi)
        value = rho_sum_trivial(p, n, z, par) + chi_m1 * rho_sum_trivial(p, n, zi, par) - pieces[(1, 0, 0)]
    atyp, xc = is_atypical(chi, omega)
    Q = chi.conductor
    ratio = max(abs(v) * Q / math.sqrt(p ** (a + b)) for (s, a, b), v in pieces.items())
    return DualWeightReport(chi, omega, complex(value), pieces, xc,
                            bound_class(chi, omega, atyp), float(ratio),
                            required_level(chi, omega), term_count(chi, omega))


# --- independent route through h^sharp -----------------------------------------------------------


def dual_weight_via_hsharp(chi: MultChar, omega: MultChar, shells: int | None = None) -> complex:
    """h~(omega) = int h^sharp(t) omega((1-t)/t) dt/|t(1-t)|^(1/2), shell by shell in t.

    On the shells |t| = q^-k and |1-t| = q^-k the integrand is r^k times an
    affine function of k once k exceeds the resolution of the characters; the
    tail is summed in closed form after checking the second difference vanishes.
    """
    from .transforms import KernelSpec, h_sharp

    p = chi.p
    K = KernelSpec(chi)
    L = max(chi.n, omega.n)
    mod = p**L
    units = unit_tables(p, L).units
    om = omega.finite_part()
    scale = float(p) ** (-L)
    K_max = shells if shells is not None else 2 * L + 3

    def shell(k: int, near_one: bool) -> complex:
        acc = 0j
        for w in units:
            w = int(w)
            if near_one:
                t = 1 - Fraction(p**k * w)
                arg = w * pow((1 - p**k * w) % mod, -1, mod) % mod
            else:
                t = Fraction(p**k * w)
                arg = (1 - p**k * w) * pow(w, -1, mod) % mod
            acc += h_sharp(K, t) * om.unit_value(arg)
        return acc * scale * p ** (-k / 2)

    total = 0j
    for t in units:
        t = int(t)
        if t % p in (0, 1):
            continue
        arg = (1 - t) * pow(t, -1, mod) % mod
        total += h_sharp(K, Fraction(t)) * om.unit_value(arg) * scale
    wp = omega.uniformizer_value
    for near_one, ratio in ((False, 1 / (wp * math.sqrt(p))), (True, wp / math.sqrt(p))):
        vals = [shell(k, near_one) for k in range(1, K_max + 1)]
        total += sum(v * (wp ** (k if near_one else -k)) for k, v in zip(range(1, K_max + 1), vals))
        # the unit part of the k-th shell is eventually affine in k: u_k = alpha + beta k
        u = [v * (wp ** (k if near_one else -k)) / ratio**k for k, v in zip(range(1, K_max + 1), vals)]
        beta = u[-1] - u[-2]
        if abs(u[-1] - 2 * u[-2] + u[-3]) > 1e-9 * (1 + abs(u[-1])):
            raise LevelTooLow("t-shell integrals have not stabilized; raise shells")
        alpha = u[-1] - beta * K_max
        r, K1 = ratio, K_max + 1
        total += alpha * r**K1 / (1 - r) + beta * (K1 * r**K1 / (1 - r) + r ** (K1 + 1) / (1 - r) ** 2)
    return total


def classify_bounds(report: DualWeightReport, constants: dict | None = None) -> tuple[bool, dict]:
    """Compare |h~| with the bound that applies to (chi, omega)."""
    from .constants import load_constants

    c = constants or load_constants()
    q, Q = report.chi.p, report.Q
    mag = abs(report.value)
    entry = {"chi": report.chi.spec(), "omega": report.omega.spec(), "bound_class": report.bound_class,
             "abs_value": mag}
    if report.bound_class == BOUND_ZERO:
        limit = c["zero_atol"] * report.terms
    elif report.bound_class == BOUND_UNRAMIFIED:
        limit = c["unramified_const"]
    elif report.bound_class == BOUND_GENERIC:
        limit = c["generic_const"] / Q
    else:
        xc = report.atypical
        odd = report.chi.n % 2 == 1
        limit = c["atypical_const"] * max(xc.n_alpha, 1) * (math.sqrt(q) if odd else 1.0) / Q
    entry["limit"] = limit
    ok = mag <= limit
    entry["pass"] = ok
    return ok, entry


def xi_scaling_ratio(report: DualWeightReport) -> float:
    """|h~| Q / (max(N_alpha, 1) q^(1/2 if n odd)) for atypical reports."""
    xc = report.atypical
    q = report.chi.p
    odd = report.chi.n % 2 == 1
    return abs(report.value) * report.Q / (max(xc.n_alpha, 1) * (math.sqrt(q) if odd else 1.0))
