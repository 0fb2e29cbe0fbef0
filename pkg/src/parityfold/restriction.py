"""Affine-subspace machinery: spectrum restriction, bucket complexity,
and character identification.

A constraint system {(g_i, b_i)} carves out the affine subspace
H = {x | <g_i, x> = b_i for all i}.  Restricting a spectrum to H groups
its support into cosets of span{g_i} ("buckets"); the restricted
spectrum keeps the ambient dimension and uses each bucket's canonical
coset label as its character, so recursive restriction stays in one
index space.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .gf2 import Gf2Basis, check_vector, coset_label, in_span, row_reduce
from .spectral import FourierSpectrum


class InconsistentConstraintsError(ValueError):
    """Some F2-combination of the constraints forces 0 = 1."""


@dataclass(frozen=True)
class AffineConstraintSystem:
    """List of (mask, bit) parity constraints plus the reduced augmented rows.

    Inconsistent systems can be constructed (e.g. loaded from a file) but
    raise as soon as they are used to restrict.
    """

    n: int
    constraints: tuple[tuple[int, int], ...]
    reduced: tuple[tuple[int, int], ...] = field(init=False)
    consistent: bool = field(init=False)

    def __post_init__(self) -> None:
        rows: list[tuple[int, int]] = []  # reduced echelon, decreasing leads
        consistent = True
        for mask, bit in self.constraints:
            check_vector(mask, self.n)
            if bit not in (0, 1):
                raise ValueError(f"constraint bit must be 0 or 1, got {bit!r}")
            v, b = self._reduce_pair(mask, bit, rows)
            if v == 0:
                if b == 1:
                    consistent = False
                continue
            lead = v.bit_length() - 1
            rows = [
                ((r ^ v, rb ^ b) if (r >> lead) & 1 else (r, rb)) for r, rb in rows
            ]
            rows.append((v, b))
            rows.sort(reverse=True)
        object.__setattr__(self, "reduced", tuple(rows))
        object.__setattr__(self, "consistent", consistent)

    @staticmethod
    def _reduce_pair(v: int, b: int, rows: list[tuple[int, int]]) -> tuple[int, int]:
        for r, rb in rows:
            if (v >> (r.bit_length() - 1)) & 1:
                v ^= r
                b ^= rb
        return v, b

    @property
    def codimension(self) -> int:
        return len(self.reduced)

    def direction_basis(self) -> Gf2Basis:
        return Gf2Basis(self.n, tuple(r for r, _ in self.reduced))

    def reduce_with_bit(self, v: int) -> tuple[int, int]:
        """Canonical coset label of v and the value <v - label, x> takes on H."""
        check_vector(v, self.n)
        return self._reduce_pair(v, 0, list(self.reduced))

    def contains(self, x: int) -> bool:
        check_vector(x, self.n)
        return all((mask & x).bit_count() & 1 == bit for mask, bit in self.constraints)


def restrict(
    spectrum: FourierSpectrum, system: AffineConstraintSystem
) -> FourierSpectrum:
    """Spectrum of the restriction of f to the system's affine subspace.

    Each support element a contributes c_a * (-1)^<a - label(a), x> to its
    bucket's label; contributions that cancel exactly are dropped, so the
    output sparsity can be strictly below the bucket count.  The output
    agrees with f pointwise on the subspace.
    """
    if spectrum.n != system.n:
        raise ValueError(f"dimension mismatch: spectrum n={spectrum.n}, system n={system.n}")
    if not system.consistent:
        raise InconsistentConstraintsError("constraint system forces 0 = 1")
    out: dict[int, int] = {}
    for mask, c in spectrum.coeffs.items():
        label, bit = system.reduce_with_bit(mask)
        out[label] = out.get(label, 0) + (-c if bit else c)
    return FourierSpectrum(spectrum.n, {a: c for a, c in out.items() if c})


@dataclass(frozen=True)
class BucketReport:
    """Partition of a support set into cosets of span(Gamma)."""

    bucket_count: int
    buckets: dict[int, tuple[int, ...]]
    identified_count: int

    @property
    def support_size(self) -> int:
        return sum(len(b) for b in self.buckets.values())

    def to_dict(self) -> dict:
        return {
            "bucket_count": self.bucket_count,
            "identified_count": self.identified_count,
            "buckets": {str(label): list(self.buckets[label]) for label in sorted(self.buckets)},
        }


def bucket_count(support: Iterable[int], basis: Gf2Basis) -> int:
    """Number of cosets of the basis span meeting the support."""
    return len({coset_label(a, basis) for a in support})


def system_to_list(system: AffineConstraintSystem) -> list[dict]:
    return [{"mask": mask, "bit": bit} for mask, bit in system.constraints]


def system_from_list(data: list, n: int) -> AffineConstraintSystem:
    constraints = []
    for entry in data:
        mask, bit = entry["mask"], entry["bit"]
        if not isinstance(mask, int) or not isinstance(bit, int):
            raise ValueError(f"constraint entries need integer mask and bit: {entry!r}")
        constraints.append((mask, bit))
    return AffineConstraintSystem(n, tuple(constraints))


def bucket_complexity(
    support: Iterable[int], gammas: Iterable[int], n: int
) -> BucketReport:
    basis = row_reduce(gammas, n)
    groups: dict[int, list[int]] = {}
    for a in support:
        check_vector(a, n)
        groups.setdefault(coset_label(a, basis), []).append(a)
    buckets = {label: tuple(sorted(members)) for label, members in groups.items()}
    identified = sum(len(b) for b in buckets.values() if len(b) >= 2)
    return BucketReport(len(buckets), buckets, identified)


def identified(beta: int, delta: int, gammas: Iterable[int], n: int) -> bool:
    """True when beta and delta land in the same coset of span(gammas)."""
    check_vector(beta, n)
    check_vector(delta, n)
    return in_span(beta ^ delta, row_reduce(gammas, n))


@dataclass(frozen=True)
class IdentificationBound:
    identified_count: int  # h: support elements sharing a bucket with another
    bound: int  # k - ceil(h/2)
    actual: int  # the bucket count


def identification_bound_check(
    support: Iterable[int], gammas: Iterable[int], n: int
) -> IdentificationBound:
    report = bucket_complexity(support, gammas, n)
    k = report.support_size
    h = report.identified_count
    bound = k - (h + 1) // 2
    # singleton buckets number k - h, shared buckets at most h/2
    assert 2 * report.bucket_count <= 2 * k - h
    return IdentificationBound(h, bound, report.bucket_count)
