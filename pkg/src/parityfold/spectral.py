"""Exact Boolean-function representations and Walsh-Hadamard analysis.

A function f : F2^n -> {-1, +1} is held either as a dense truth table or
as a sparse spectrum of scaled-integer coefficients c_a = fhat(a) * 2^n.
Every coefficient of a +-1 function is an integral multiple of 1/2^n, so
the scaled form is lossless and all identities below are exact integer
equations (zero tolerance).

Truth-table index convention: bit i of the index is variable x_{i+1}.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from .gf2 import MAX_DIMENSION, check_vector


class NotBooleanValuedError(ValueError):
    """The spectrum does not evaluate to +-1 everywhere."""


class AlphaNotInSupportError(ValueError):
    pass


class BetaNotInSupportError(ValueError):
    pass


def parity(mask: int, x: int) -> int:
    """<mask, x> over F2."""
    return (mask & x).bit_count() & 1


def character(mask: int, x: int) -> int:
    """chi_mask(x) = (-1)^<mask, x>."""
    return -1 if parity(mask, x) else 1


def parity_of(masked: np.ndarray) -> np.ndarray:
    """Vectorized popcount parity of a uint32/uint64 array."""
    return (np.bitwise_count(masked) & 1).astype(np.int8)


@dataclass(frozen=True)
class TruthTable:
    n: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        if not 0 <= self.n <= MAX_DIMENSION:
            raise ValueError(f"dimension {self.n} outside [0, {MAX_DIMENSION}]")
        vals = np.asarray(self.values, dtype=np.int8)
        if vals.shape != (1 << self.n,):
            raise ValueError(f"expected {1 << self.n} entries, got {vals.shape}")
        if not np.all(np.abs(vals) == 1):
            raise ValueError("truth table entries must be +-1")
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, TruthTable)
            and self.n == other.n
            and np.array_equal(self.values, other.values)
        )

    def evaluate(self, x: int) -> int:
        check_vector(x, self.n)
        return int(self.values[x])

    def negate(self) -> "TruthTable":
        return TruthTable(self.n, -self.values)

    def shift(self, y: int) -> "TruthTable":
        """The input-translated function x -> f(x + y)."""
        check_vector(y, self.n)
        idx = np.arange(1 << self.n) ^ y
        return TruthTable(self.n, self.values[idx])


@dataclass(frozen=True)
class FourierSpectrum:
    """Sparse exact spectrum: coeffs maps mask a -> c_a with fhat(a) = c_a / 2^n.

    Only nonzero integer coefficients are stored.
    """

    n: int
    coeffs: dict[int, int]

    def __post_init__(self) -> None:
        if not 0 <= self.n <= MAX_DIMENSION:
            raise ValueError(f"dimension {self.n} outside [0, {MAX_DIMENSION}]")
        for mask, c in self.coeffs.items():
            check_vector(mask, self.n)
            if c == 0:
                raise ValueError(f"zero coefficient stored at mask {mask}")
            if not isinstance(c, (int, np.integer)):
                raise ValueError(f"non-integer coefficient at mask {mask}: {c!r}")

    def __getitem__(self, mask: int) -> int:
        return self.coeffs.get(mask, 0)

    def support(self) -> set[int]:
        return set(self.coeffs)

    @property
    def sparsity(self) -> int:
        return len(self.coeffs)

    def evaluate_scaled(self, x: int) -> int:
        """2^n * f(x) as an exact integer character sum."""
        check_vector(x, self.n)
        return sum(c * character(mask, x) for mask, c in self.coeffs.items())

    def evaluate(self, x: int) -> int:
        scaled = self.evaluate_scaled(x)
        full = 1 << self.n
        if scaled == full:
            return 1
        if scaled == -full:
            return -1
        raise NotBooleanValuedError(f"evaluation at {x} is {scaled}/{full}, not +-1")


def _fwht_inplace(arr: np.ndarray) -> None:
    h = 1
    size = arr.size
    while h < size:
        view = arr.reshape(-1, 2, h)
        top = view[:, 0, :].copy()
        view[:, 0, :] = top + view[:, 1, :]
        view[:, 1, :] = top - view[:, 1, :]
        h <<= 1


def wht(table: TruthTable) -> FourierSpectrum:
    """Exact Walsh-Hadamard transform, c_a = sum_x f(x) chi_a(x)."""
    arr = table.values.astype(np.int64)
    _fwht_inplace(arr)
    coeffs = {int(mask): int(arr[mask]) for mask in np.nonzero(arr)[0]}
    return FourierSpectrum(table.n, coeffs)


def inverse_wht(spectrum: FourierSpectrum) -> TruthTable:
    """Inverse transform; raises NotBooleanValuedError unless every point is +-1."""
    full = 1 << spectrum.n
    arr = np.zeros(full, dtype=np.int64)
    for mask, c in spectrum.coeffs.items():
        arr[mask] = c
    _fwht_inplace(arr)
    if not np.all(np.abs(arr) == full):
        bad = int(np.flatnonzero(np.abs(arr) != full)[0])
        raise NotBooleanValuedError(
            f"spectrum evaluates to {int(arr[bad])}/{full} at x={bad}"
        )
    return TruthTable(spectrum.n, (arr // full).astype(np.int8))


def support(spectrum: FourierSpectrum) -> set[int]:
    return spectrum.support()


def sparsity(spectrum: FourierSpectrum) -> int:
    return spectrum.sparsity


def verify_parseval(spectrum: FourierSpectrum) -> bool:
    """sum c_a^2 == 4^n, the exact scaled form of sum fhat^2 = 1."""
    return sum(c * c for c in spectrum.coeffs.values()) == 1 << (2 * spectrum.n)


def verify_titsworth(spectrum: FourierSpectrum) -> list[int]:
    """Directions g != 0 where sum over ordered pairs a1+a2=g of c_a1*c_a2 != 0.

    Iterates only over the sumset S+S (every other direction is vacuously
    zero).  Empty list == the correlation condition holds exactly; spectra
    of +-1 functions always pass.
    """
    masks = np.fromiter(spectrum.coeffs.keys(), dtype=np.int64)
    coeffs = np.fromiter(spectrum.coeffs.values(), dtype=np.int64)
    k = masks.size
    if k <= 1:
        return []
    sums = np.zeros(1 << spectrum.n, dtype=np.float64)
    # chunk rows so the k x k intermediates stay modest; per-direction sums
    # are bounded by 4^n (Cauchy-Schwarz), exact in float64 for n <= 24
    step = max(1, (1 << 22) // k)
    for lo in range(0, k, step):
        rows = slice(lo, min(lo + step, k))
        dirs = (masks[rows, None] ^ masks[None, :]).ravel()
        prods = (coeffs[rows, None] * coeffs[None, :]).ravel()
        sums += np.bincount(dirs, weights=prods, minlength=sums.size)
    sums[0] = 0
    return [int(g) for g in np.flatnonzero(sums)]


def is_plateaued(spectrum: FourierSpectrum) -> bool:
    return len({abs(c) for c in spectrum.coeffs.values()}) <= 1


def granularity_check(spectrum: FourierSpectrum) -> bool:
    """All coefficients are integral multiples of 1/2^n in scaled form.

    True by construction for wht outputs; exposed so spectra loaded from
    files can be vetted through the same gate.
    """
    return all(
        isinstance(c, (int, np.integer)) and c != 0 for c in spectrum.coeffs.values()
    )


def spectral_l1(spectrum: FourierSpectrum) -> Fraction:
    """Exact sum of |fhat(a)|; squares to at most the sparsity for +-1 functions."""
    return Fraction(sum(abs(c) for c in spectrum.coeffs.values()), 1 << spectrum.n)


def normalize_signs(table: TruthTable, alpha: int, beta: int) -> TruthTable:
    """A function +-f(x + y) with the same coefficient magnitudes as f and
    both the alpha and beta coefficients strictly positive.

    When a translation is required, the smallest y with chi_{alpha+beta}(y)
    = -1 is used, making the output deterministic.
    """
    if alpha == beta:
        raise ValueError("alpha and beta must be distinct")
    spectrum = wht(table)
    ca = spectrum[alpha]
    cb = spectrum[beta]
    if ca == 0:
        raise AlphaNotInSupportError(f"mask {alpha} not in support")
    if cb == 0:
        raise BetaNotInSupportError(f"mask {beta} not in support")
    if ca * cb > 0:
        return table if ca > 0 else table.negate()
    diff = alpha ^ beta
    y = diff & -diff  # lowest set bit: smallest y with odd overlap
    shifted = table.shift(y)
    # shifted coefficient at alpha is ca * chi_alpha(y)
    if ca * character(alpha, y) > 0:
        return shifted
    return shifted.negate()


# ---------------------------------------------------------------------------
# file formats
# ---------------------------------------------------------------------------


def table_to_dict(table: TruthTable) -> dict:
    return {"n": table.n, "values": [int(v) for v in table.values]}


def table_from_dict(data: dict) -> TruthTable:
    return TruthTable(int(data["n"]), np.array(data["values"], dtype=np.int64))


def spectrum_to_dict(spectrum: FourierSpectrum) -> dict:
    coeffs = [
        {"mask": mask, "num": spectrum.coeffs[mask]} for mask in sorted(spectrum.coeffs)
    ]
    return {"n": spectrum.n, "coeffs": coeffs}


def spectrum_from_dict(data: dict) -> FourierSpectrum:
    n = int(data["n"])
    coeffs: dict[int, int] = {}
    for entry in data["coeffs"]:
        mask = entry["mask"]
        num = entry["num"]
        if not isinstance(num, int) or isinstance(num, bool) or num == 0:
            raise ValueError(f"coefficient at mask {mask} must be a nonzero integer")
        if not isinstance(mask, int) or mask < 0 or mask >= 1 << n:
            raise ValueError(f"mask {mask} out of range for n={n}")
        if mask in coeffs:
            raise ValueError(f"duplicate mask {mask}")
        coeffs[mask] = num
    return FourierSpectrum(n, coeffs)


def load_function(path: str | Path):
    """Load a truth-table or spectrum JSON file, sniffing by keys."""
    data = json.loads(Path(path).read_text())
    if "values" in data:
        return table_from_dict(data)
    if "coeffs" in data:
        return spectrum_from_dict(data)
    raise ValueError(f"{path}: neither a truth-table nor a spectrum file")
