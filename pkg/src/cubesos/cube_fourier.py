"""Polynomials on the boolean hypercube {0,1}^n.

Multilinear representation (monomials are subsets, since x_i^2 = x_i on the
cube), evaluation, Walsh-Hadamard/Fourier transform in the character basis
chi_a(x) = (-1)^{a.x}, decomposition into harmonic (fixed Fourier weight)
components, sup-norm and exact minimization by enumeration.

Bit conventions: a subset of variables is stored as an integer bitmask where
bit i-1 corresponds to variable i. Bitstrings serialize with variable 1
leftmost.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .config import check_cap

__all__ = [
    "CubePolynomial",
    "FourierPolynomial",
    "HarmonicDecomposition",
    "MatrixPolynomial",
    "DimensionMismatchError",
    "fwht",
    "evaluate",
    "value_table",
    "from_values",
    "fourier_transform",
    "fourier_to_values",
    "inverse_fourier",
    "harmonic_parts",
    "sup_norm",
    "brute_force_min",
    "translate_to_zero",
    "masks_up_to_weight",
    "popcount_table",
    "read_polynomial_json",
    "write_polynomial_json",
    "read_matrix_polynomial_json",
]


class DimensionMismatchError(ValueError):
    pass


# ---------------------------------------------------------------------------
# bitmask helpers


def popcount_table(n: int) -> np.ndarray:
    """Hamming weight of every mask in [0, 2^n)."""
    idx = np.arange(1 << n, dtype=np.int64)
    pc = np.zeros(1 << n, dtype=np.int64)
    for i in range(n):
        pc += (idx >> i) & 1
    return pc


def masks_up_to_weight(n: int, r: int) -> np.ndarray:
    """All masks of weight <= r, sorted by (weight, mask). Deterministic basis order."""
    pc = popcount_table(n)
    masks = np.flatnonzero(pc <= r)
    order = np.lexsort((masks, pc[masks]))
    return masks[order].astype(np.int64)


def mask_to_bitstring(mask: int, n: int) -> str:
    return "".join("1" if (mask >> i) & 1 else "0" for i in range(n))


def bitstring_to_mask(s: str) -> int:
    return sum(1 << i for i, ch in enumerate(s) if ch == "1")


def point_to_mask(x) -> int:
    return sum(1 << i for i, xi in enumerate(x) if int(xi) == 1)


def mask_to_point(mask: int, n: int) -> np.ndarray:
    return np.array([(mask >> i) & 1 for i in range(n)], dtype=np.int64)


def _lex_keys(masks: np.ndarray, n: int) -> np.ndarray:
    # lexicographic order on points (x_1,...,x_n) = numeric order of the
    # bit-reversed mask (variable 1 most significant)
    keys = np.zeros_like(masks)
    for i in range(n):
        keys |= ((masks >> i) & 1) << (n - 1 - i)
    return keys


# ---------------------------------------------------------------------------
# fast Walsh-Hadamard transform

_JIT_THRESHOLD = 1 << 18
_jit_fwht = None
_jit_unavailable = False


def _numba_fwht():
    # compiled butterfly, picked up lazily so short runs never pay for numba
    global _jit_fwht, _jit_unavailable
    if _jit_fwht is not None or _jit_unavailable:
        return _jit_fwht
    try:
        import numba

        @numba.njit(cache=False)
        def kernel(a):
            m = a.size
            h = 1
            while h < m:
                step = 2 * h
                for start in range(0, m, step):
                    for i in range(start, start + h):
                        x = a[i]
                        y = a[i + h]
                        a[i] = x + y
                        a[i + h] = x - y
                h = step

        kernel(np.zeros(4))
        _jit_fwht = kernel
    except Exception:
        _jit_unavailable = True
    return _jit_fwht


def fwht(values: np.ndarray) -> np.ndarray:
    """Unnormalized Walsh-Hadamard transform: out[a] = sum_x (-1)^{a.x} in[x].

    Length must be a power of two. Involution up to the factor 2^n.
    """
    a = np.array(values, dtype=np.float64, copy=True).ravel()
    m = a.size
    if m & (m - 1):
        raise ValueError("length must be a power of two")
    if m >= _JIT_THRESHOLD:
        kernel = _numba_fwht()
        if kernel is not None:
            kernel(a)
            return a
    h = 1
    while h < m:
        a = a.reshape(-1, 2, h)
        top = a[:, 0, :] + a[:, 1, :]
        bot = a[:, 0, :] - a[:, 1, :]
        a[:, 0, :] = top
        a[:, 1, :] = bot
        a = a.reshape(-1)
        h *= 2
    return a


def _zeta_inplace(a: np.ndarray) -> np.ndarray:
    # values[x] = sum over submasks S of x of coef[S]
    m = a.size
    h = 1
    while h < m:
        a = a.reshape(-1, 2, h)
        a[:, 1, :] += a[:, 0, :]
        a = a.reshape(-1)
        h *= 2
    return a


def _moebius_inplace(a: np.ndarray) -> np.ndarray:
    # inverse of _zeta_inplace
    m = a.size
    h = 1
    while h < m:
        a = a.reshape(-1, 2, h)
        a[:, 1, :] -= a[:, 0, :]
        a = a.reshape(-1)
        h *= 2
    return a


# ---------------------------------------------------------------------------
# core types


@dataclass(frozen=True)
class CubePolynomial:
    """Real multilinear polynomial on {0,1}^n, stored as mask -> coefficient."""

    n: int
    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("n must be nonnegative")
        full = (1 << self.n) - 1
        for mask, coef in self.terms.items():
            if mask & ~full:
                raise DimensionMismatchError(f"monomial {mask:#x} uses variables beyond n={self.n}")
            if not np.isfinite(coef):
                raise ValueError("coefficients must be finite")

    @classmethod
    def from_terms(cls, n: int, terms) -> "CubePolynomial":
        """Build from (variables, coefficient) pairs; variables are 1-based and
        may repeat (x_i^2 = x_i collapses repeats)."""
        acc: dict[int, float] = {}
        for variables, coef in terms:
            mask = 0
            for v in variables:
                if not 1 <= v <= n:
                    raise DimensionMismatchError(f"variable {v} out of range 1..{n}")
                mask |= 1 << (v - 1)
            acc[mask] = acc.get(mask, 0.0) + float(coef)
        return cls(n, {m: c for m, c in acc.items() if c != 0.0})

    @classmethod
    def constant(cls, n: int, c: float) -> "CubePolynomial":
        return cls(n, {0: float(c)} if c != 0.0 else {})

    @property
    def degree(self) -> int:
        if not self.terms:
            return 0
        return max(m.bit_count() for m in self.terms)

    def evaluate(self, x) -> float:
        return evaluate(self, x)

    def __add__(self, other):
        if isinstance(other, CubePolynomial):
            if other.n != self.n:
                raise DimensionMismatchError("dimension mismatch")
            acc = dict(self.terms)
            for m, c in other.terms.items():
                acc[m] = acc.get(m, 0.0) + c
            return CubePolynomial(self.n, {m: c for m, c in acc.items() if c != 0.0})
        return self + CubePolynomial.constant(self.n, float(other))

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-1.0) * (other if isinstance(other, CubePolynomial)
                                else CubePolynomial.constant(self.n, float(other)))

    def __mul__(self, scalar):
        s = float(scalar)
        return CubePolynomial(self.n, {m: c * s for m, c in self.terms.items() if c * s != 0.0})

    __rmul__ = __mul__


@dataclass(frozen=True)
class FourierPolynomial:
    """Expansion p = sum_a coeffs[a] * chi_a over characters chi_a(x) = (-1)^{a.x}."""

    n: int
    coeffs: dict = field(default_factory=dict)

    def weight_support(self) -> set:
        return {a.bit_count() for a in self.coeffs}

    def parseval(self) -> float:
        """sum of squared Fourier coefficients (= mean of p^2 over the cube)."""
        return float(sum(c * c for c in self.coeffs.values()))


@dataclass(frozen=True)
class HarmonicDecomposition:
    """parts[k] collects the weight-k Fourier coefficients of p."""

    n: int
    parts: tuple  # tuple[FourierPolynomial, ...]


# ---------------------------------------------------------------------------
# operations


def evaluate(p: CubePolynomial, x) -> float:
    """Evaluate sum_S c_S prod_{i in S} x_i at a 0/1 point."""
    xs = np.asarray(x, dtype=np.int64)
    if xs.shape != (p.n,):
        raise DimensionMismatchError(f"point has shape {xs.shape}, expected ({p.n},)")
    mask = point_to_mask(xs)
    total = 0.0
    for m, c in p.terms.items():
        if m & mask == m:
            total += c
    return total


def value_table(p: CubePolynomial, cap: int | None = None) -> np.ndarray:
    """Values of p on all 2^n points, indexed by mask."""
    check_cap(p.n, cap)
    a = np.zeros(1 << p.n)
    for m, c in p.terms.items():
        a[m] = c
    return _zeta_inplace(a)


def from_values(n: int, values: np.ndarray, prune_tol: float = 0.0) -> CubePolynomial:
    """Multilinear polynomial interpolating the given value table."""
    a = np.array(values, dtype=np.float64, copy=True)
    if a.size != 1 << n:
        raise DimensionMismatchError("value table has wrong length")
    a = _moebius_inplace(a)
    keep = np.flatnonzero(np.abs(a) > prune_tol)
    return CubePolynomial(n, {int(m): float(a[m]) for m in keep})


def fourier_transform(p: CubePolynomial, cap: int | None = None) -> FourierPolynomial:
    """Fourier coefficients p_hat(a) = 2^{-n} sum_x p(x) (-1)^{a.x}.

    Computed with the Walsh-Hadamard butterfly over the full value table;
    coefficients below the transform's rounding floor are pruned so the
    support reflects the true degree.
    """
    vals = value_table(p, cap)
    coeffs = fwht(vals) / vals.size
    tol = 16.0 * max(p.n, 1) * np.finfo(np.float64).eps * max(np.max(np.abs(vals)), 1e-300)
    keep = np.flatnonzero(np.abs(coeffs) > tol)
    return FourierPolynomial(p.n, {int(a): float(coeffs[a]) for a in keep})


def fourier_to_values(fp: FourierPolynomial, cap: int | None = None) -> np.ndarray:
    check_cap(fp.n, cap)
    a = np.zeros(1 << fp.n)
    for m, c in fp.coeffs.items():
        a[m] = c
    return fwht(a)


def inverse_fourier(fp: FourierPolynomial, cap: int | None = None) -> CubePolynomial:
    """Multilinear polynomial with the given Fourier expansion."""
    return from_values(fp.n, fourier_to_values(fp, cap))


def harmonic_parts(p: CubePolynomial, cap: int | None = None) -> HarmonicDecomposition:
    """Split p into components p_k supported on weight-k characters, k = 0..deg(p)."""
    fp = fourier_transform(p, cap)
    d = p.degree
    buckets: list[dict] = [dict() for _ in range(d + 1)]
    for a, c in fp.coeffs.items():
        w = a.bit_count()
        if w > d:
            raise AssertionError("Fourier support exceeds polynomial degree")
        buckets[w][a] = c
    return HarmonicDecomposition(p.n, tuple(FourierPolynomial(p.n, b) for b in buckets))


def sup_norm(p: CubePolynomial, cap: int | None = None) -> float:
    """max_x |p(x)| over the cube, by enumeration."""
    return float(np.max(np.abs(value_table(p, cap))))


def brute_force_min(p: CubePolynomial, cap: int | None = None) -> tuple[float, np.ndarray]:
    """Exact minimum and its lexicographically smallest minimizer."""
    vals = value_table(p, cap)
    vmin = float(np.min(vals))
    ties = np.flatnonzero(vals == vals.min())
    best = ties[np.argmin(_lex_keys(ties, p.n))]
    return vmin, mask_to_point(int(best), p.n)


def translate_to_zero(p: CubePolynomial, x0) -> CubePolynomial:
    """The polynomial q(x) = p(x XOR x0); q(0) = p(x0).

    Substitutes x_i -> 1 - x_i for coordinates with x0_i = 1, term by term,
    so no cube enumeration is needed.
    """
    xs = np.asarray(x0, dtype=np.int64)
    if xs.shape != (p.n,):
        raise DimensionMismatchError(f"point has shape {xs.shape}, expected ({p.n},)")
    flip = point_to_mask(xs)
    acc: dict[int, float] = {}
    for mask, coef in p.terms.items():
        keep = mask & ~flip
        flipped = mask & flip
        # prod_{i in flipped} (1 - x_i) expands over subsets with sign
        sub = flipped
        while True:
            key = keep | sub
            acc[key] = acc.get(key, 0.0) + coef * (-1) ** sub.bit_count()
            if sub == 0:
                break
            sub = (sub - 1) & flipped
    return CubePolynomial(p.n, {m: c for m, c in acc.items() if c != 0.0})


# ---------------------------------------------------------------------------
# matrix-valued polynomials


@dataclass(frozen=True)
class MatrixPolynomial:
    """Symmetric k x k matrix with CubePolynomial entries (entries[(i,j)], 0-based)."""

    n: int
    k: int
    entries: dict

    def __post_init__(self):
        for (i, j), poly in self.entries.items():
            if not (0 <= i < self.k and 0 <= j < self.k):
                raise ValueError("entry index out of range")
            if poly.n != self.n:
                raise DimensionMismatchError("entry dimension mismatch")

    @classmethod
    def from_entries(cls, n: int, k: int, entries) -> "MatrixPolynomial":
        """Build from {(i, j): CubePolynomial}; missing (j, i) is completed
        symmetrically, and conflicting symmetric pairs are rejected."""
        acc: dict = {}
        for (i, j), poly in entries.items():
            for key in {(i, j), (j, i)}:
                if key in acc and acc[key].terms != poly.terms:
                    raise ValueError(f"conflicting entries for symmetric pair {key}")
                acc[key] = poly
        return cls(n, k, acc)

    @property
    def degree(self) -> int:
        return max((p.degree for p in self.entries.values()), default=0)

    def entry(self, i: int, j: int) -> CubePolynomial:
        return self.entries.get((i, j), CubePolynomial(self.n, {}))

    def value_tables(self, cap: int | None = None) -> np.ndarray:
        """Array of shape (2^n, k, k): the matrix F(x) at every cube point."""
        check_cap(self.n, cap)
        out = np.zeros((1 << self.n, self.k, self.k))
        for i in range(self.k):
            for j in range(self.k):
                if (i, j) in self.entries:
                    out[:, i, j] = value_table(self.entries[(i, j)], cap)
        return out

    def sup_norm(self, cap: int | None = None) -> float:
        """max_x ||F(x)|| in the spectral norm."""
        eigs = np.linalg.eigvalsh(self.value_tables(cap))
        return float(np.max(np.abs(eigs)))

    def min_eigenvalue(self, cap: int | None = None) -> float:
        """F_min = min_x lambda_min(F(x)), by enumeration."""
        eigs = np.linalg.eigvalsh(self.value_tables(cap))
        return float(np.min(eigs[:, 0]))


# ---------------------------------------------------------------------------
# JSON interchange

# polynomial files: {"n": int, "terms": [{"vars": [..1-based..], "coef": float}]}
# or Fourier form:  {"n": int, "fourier": [{"a": "<bitstring>", "coef": float}]}


def polynomial_from_dict(data: dict) -> CubePolynomial:
    n = int(data["n"])
    if "terms" in data:
        return CubePolynomial.from_terms(
            n, [(t["vars"], t["coef"]) for t in data["terms"]]
        )
    if "fourier" in data:
        coeffs = {}
        for item in data["fourier"]:
            bits = item["a"]
            if len(bits) != n:
                raise DimensionMismatchError("bitstring length != n")
            coeffs[bitstring_to_mask(bits)] = float(item["coef"])
        return inverse_fourier(FourierPolynomial(n, coeffs))
    raise ValueError("polynomial JSON needs a 'terms' or 'fourier' field")


def polynomial_to_dict(p: CubePolynomial, form: str = "terms") -> dict:
    if form == "terms":
        items = sorted(p.terms.items(), key=lambda mc: (mc[0].bit_count(), mc[0]))
        return {
            "n": p.n,
            "terms": [
                {"vars": [i + 1 for i in range(p.n) if (m >> i) & 1], "coef": c}
                for m, c in items
            ],
        }
    if form == "fourier":
        fp = fourier_transform(p)
        items = sorted(fp.coeffs.items(), key=lambda mc: (mc[0].bit_count(), mc[0]))
        return {
            "n": p.n,
            "fourier": [{"a": mask_to_bitstring(m, p.n), "coef": c} for m, c in items],
        }
    raise ValueError(f"unknown form {form!r}")


def read_polynomial_json(path) -> CubePolynomial:
    with open(path) as fh:
        return polynomial_from_dict(json.load(fh))


def write_polynomial_json(p: CubePolynomial, path, form: str = "terms") -> None:
    with open(path, "w") as fh:
        json.dump(polynomial_to_dict(p, form), fh, indent=1)


def matrix_polynomial_from_dict(data: dict) -> MatrixPolynomial:
    """{"n":..., "k":..., "entries": [{"i":..., "j":..., "poly": [terms...]}]},
    i and j 1-based, symmetric completion applied."""
    n, k = int(data["n"]), int(data["k"])
    entries = {}
    for item in data["entries"]:
        i, j = int(item["i"]) - 1, int(item["j"]) - 1
        poly = CubePolynomial.from_terms(n, [(t["vars"], t["coef"]) for t in item["poly"]])
        entries[(i, j)] = poly
    return MatrixPolynomial.from_entries(n, k, entries)


def read_matrix_polynomial_json(path) -> MatrixPolynomial:
    with open(path) as fh:
        return matrix_polynomial_from_dict(json.load(fh))
