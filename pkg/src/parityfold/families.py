"""Generators for the Boolean-function corpus.

Variable layout conventions (fixed for file interop):
  - addressing on k targets: the (log k)/2 address bits occupy the lowest
    index positions, the sqrt(k) target bits follow; address value v
    selects target bit v (addresses are numbered from the all-zero
    address upward).
  - the modified ("if-else") variant prepends its two selector bits at
    positions 0 and 1.
  - inner product on 2m variables pairs bits (0,1), (2,3), ...
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .gf2 import row_reduce
from .spectral import TruthTable, parity_of

MAX_TABLE_DIMENSION = 20


class InvalidFamilyParameterError(ValueError):
    pass


def _check_addressing_k(k: int) -> tuple[int, int]:
    if k < 4 or k & (k - 1) or int(math.log2(k)) % 2:
        raise InvalidFamilyParameterError(f"k must be an even power of 2 >= 4, got {k}")
    addr_bits = int(math.log2(k)) // 2
    sqrt_k = math.isqrt(k)
    return addr_bits, sqrt_k


def addressing_dimension(k: int) -> int:
    addr_bits, sqrt_k = _check_addressing_k(k)
    return addr_bits + sqrt_k


def addressing_support(k: int) -> tuple[tuple[int, ...], int]:
    """Symbolic support {M union {y_a}}: every subset of the address bits
    joined with exactly one target bit.  Returns (masks, addr_bits)."""
    addr_bits, sqrt_k = _check_addressing_k(k)
    masks = [
        m | (1 << (addr_bits + a)) for a in range(sqrt_k) for m in range(1 << addr_bits)
    ]
    return tuple(sorted(masks)), addr_bits


def gen_addressing(k: int) -> TruthTable:
    """Address bits select which target bit's sign is output."""
    addr_bits, sqrt_k = _check_addressing_k(k)
    n = addr_bits + sqrt_k
    if n > MAX_TABLE_DIMENSION:
        raise InvalidFamilyParameterError(f"k={k} needs n={n} > {MAX_TABLE_DIMENSION}")
    idx = np.arange(1 << n, dtype=np.uint32)
    addr = idx & ((1 << addr_bits) - 1)
    selected = (idx >> (addr_bits + addr)) & 1
    return TruthTable(n, 1 - 2 * selected.astype(np.int64))


def gen_modified_addressing(k: int) -> TruthTable:
    """Output the sign of selector bit z1 where the addressing core is +1
    and of z2 where it is -1."""
    addr_bits, sqrt_k = _check_addressing_k(k)
    n = 2 + addr_bits + sqrt_k
    if n > MAX_TABLE_DIMENSION:
        raise InvalidFamilyParameterError(f"k={k} needs n={n} > {MAX_TABLE_DIMENSION}")
    idx = np.arange(1 << n, dtype=np.uint32)
    z1 = idx & 1
    z2 = (idx >> 1) & 1
    addr = (idx >> 2) & ((1 << addr_bits) - 1)
    core_negative = (idx >> (2 + addr_bits + addr)) & 1
    selector = np.where(core_negative == 0, z1, z2)
    return TruthTable(n, 1 - 2 * selector.astype(np.int64))


def gen_inner_product(m: int) -> TruthTable:
    """Bent function on 2m variables: sign of sum of products of bit pairs."""
    if m < 1:
        raise InvalidFamilyParameterError(f"m must be >= 1, got {m}")
    n = 2 * m
    if n > MAX_TABLE_DIMENSION:
        raise InvalidFamilyParameterError(f"m={m} needs n={n} > {MAX_TABLE_DIMENSION}")
    idx = np.arange(1 << n, dtype=np.uint32)
    acc = np.zeros(1 << n, dtype=np.uint32)
    for i in range(m):
        acc ^= ((idx >> (2 * i)) & 1) & ((idx >> (2 * i + 1)) & 1)
    return TruthTable(n, 1 - 2 * acc.astype(np.int64))


def gen_parity(mask: int, n: int) -> TruthTable:
    idx = np.arange(1 << n, dtype=np.uint64)
    return TruthTable(n, 1 - 2 * parity_of(idx & np.uint64(mask)).astype(np.int64))


def gen_conjunction(mask: int, n: int) -> TruthTable:
    """-1 exactly where all variables in mask are set."""
    idx = np.arange(1 << n, dtype=np.uint64)
    hit = (idx & np.uint64(mask)) == np.uint64(mask)
    return TruthTable(n, np.where(hit, -1, 1).astype(np.int64))


def gen_junta(inner: TruthTable, masks: Sequence[int], n: int) -> TruthTable:
    """Embed inner through the parities <mask_i, x>: f(x) = inner(l_1(x), ...).

    The masks must be one per inner variable and linearly independent, so
    the sparsity of the result equals the inner sparsity.
    """
    if len(masks) != inner.n:
        raise InvalidFamilyParameterError(
            f"need {inner.n} embedding masks, got {len(masks)}"
        )
    if row_reduce(masks, n).rank != len(masks):
        raise InvalidFamilyParameterError("embedding masks must be linearly independent")
    idx = np.arange(1 << n, dtype=np.uint64)
    inner_index = np.zeros(1 << n, dtype=np.int64)
    for i, mask in enumerate(masks):
        inner_index |= parity_of(idx & np.uint64(mask)).astype(np.int64) << i
    return TruthTable(n, inner.values[inner_index])


def gen_random(n: int, seed: int) -> TruthTable:
    rng = np.random.default_rng(seed)
    return TruthTable(n, 1 - 2 * rng.integers(0, 2, size=1 << n, dtype=np.int64))


@dataclass(frozen=True)
class FunctionSpec:
    """Declarative corpus entry, e.g. {"family": "addressing", "k": 16}."""

    family: str
    params: dict

    def label(self) -> str:
        items = ",".join(f"{key}={self.params[key]}" for key in sorted(self.params))
        return f"{self.family}({items})"


def build_function(spec: FunctionSpec) -> TruthTable:
    family, p = spec.family, spec.params
    if family == "addressing":
        return gen_addressing(int(p["k"]))
    if family == "modified-addressing":
        return gen_modified_addressing(int(p["k"]))
    if family == "inner-product":
        return gen_inner_product(int(p["m"]))
    if family == "parity":
        return gen_parity(int(p["mask"]), int(p["n"]))
    if family == "conjunction":
        return gen_conjunction(int(p["mask"]), int(p["n"]))
    if family == "junta":
        inner = build_function(FunctionSpec(p["inner"]["family"], p["inner"]["params"]))
        return gen_junta(inner, [int(m) for m in p["masks"]], int(p["n"]))
    if family == "random":
        return gen_random(int(p["n"]), int(p["seed"]))
    raise InvalidFamilyParameterError(f"unknown family {family!r}")
