"""Finite measure spaces, partitions, and conditional expectation by block averaging.

A space is a finite list of atoms with positive weights; a sub-sigma-algebra is
represented by a partition of the atoms into blocks.  Conditional expectation
averages a function over each block with respect to the weights, which makes it
an exact projection: idempotent, positive, and multiplicative against
block-measurable factors.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, NegativeInput, NotMeasurable, SpaceMismatch

__all__ = [
    "MeasureSpace",
    "Partition",
    "SimpleFunction",
    "as_values",
    "cond_exp",
    "block_values",
    "is_block_constant",
    "build_symmetric_space",
    "build_rotation_space",
    "check_averaging",
    "jensen_check",
    "MinOfLinear",
    "generalized_jensen_check",
    "domination_constant",
]


@dataclass(frozen=True)
class MeasureSpace:
    """Atoms 0..n-1 with strictly positive weights and optional position labels."""

    weights: np.ndarray
    labels: tuple[float, ...] | None = None

    def __post_init__(self) -> None:
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 1 or w.size == 0:
            raise ConfigError("space.weights: need a nonempty 1D array")
        if np.any(w <= 0) or not np.all(np.isfinite(w)):
            raise ConfigError("space.weights: weights must be finite and positive")
        if self.labels is not None and len(self.labels) != w.size:
            raise ConfigError("space.labels: must have one label per atom")
        w = w.copy()
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @property
    def n_atoms(self) -> int:
        return int(self.weights.size)

    @property
    def total(self) -> float:
        return float(np.sum(self.weights))

    def integrate(self, values: np.ndarray) -> float:
        values = np.asarray(values, dtype=float)
        if values.shape != self.weights.shape:
            raise SpaceMismatch(
                f"function has {values.size} values but the space has {self.n_atoms} atoms"
            )
        return float(np.sum(self.weights * values))


@dataclass(frozen=True)
class Partition:
    """Blocks of atom indices covering a space exactly once.

    `labels[i]` is the block index of atom i; blocks are numbered 0..n_blocks-1
    with every label present.
    """

    labels: np.ndarray

    def __post_init__(self) -> None:
        lab = np.asarray(self.labels, dtype=int)
        if lab.ndim != 1 or lab.size == 0:
            raise ConfigError("partition.labels: need a nonempty 1D array")
        uniq = np.unique(lab)
        if uniq[0] != 0 or uniq[-1] != uniq.size - 1:
            raise ConfigError("partition.labels: block ids must be 0..n_blocks-1 with no gaps")
        lab = lab.copy()
        lab.setflags(write=False)
        object.__setattr__(self, "labels", lab)

    @property
    def n_atoms(self) -> int:
        return int(self.labels.size)

    @property
    def n_blocks(self) -> int:
        return int(self.labels.max()) + 1

    def block_members(self, block: int) -> np.ndarray:
        return np.flatnonzero(self.labels == block)

    def block_measures(self, space: MeasureSpace) -> np.ndarray:
        self._check_space(space)
        return np.bincount(self.labels, weights=space.weights, minlength=self.n_blocks)

    def is_refinement_of(self, coarser: "Partition") -> bool:
        """True when every block of self sits inside a single block of `coarser`."""
        if self.n_atoms != coarser.n_atoms:
            return False
        for b in range(self.n_blocks):
            members = self.block_members(b)
            if np.unique(coarser.labels[members]).size != 1:
                return False
        return True

    def _check_space(self, space: MeasureSpace) -> None:
        if self.n_atoms != space.n_atoms:
            raise SpaceMismatch(
                f"partition covers {self.n_atoms} atoms but the space has {space.n_atoms}"
            )


@dataclass(frozen=True)
class SimpleFunction:
    """Per-atom values bound to a specific space."""

    space: MeasureSpace
    values: np.ndarray

    def __post_init__(self) -> None:
        v = np.asarray(self.values, dtype=float)
        if v.shape != self.space.weights.shape:
            raise SpaceMismatch(
                f"function has {v.size} values but the space has {self.space.n_atoms} atoms"
            )
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)


def as_values(space: MeasureSpace, f) -> np.ndarray:
    """Coerce a SimpleFunction or array-like to a value array bound to `space`."""
    if isinstance(f, SimpleFunction):
        if f.space is not space and not np.array_equal(f.space.weights, space.weights):
            raise SpaceMismatch("function is bound to a different space")
        return f.values
    v = np.asarray(f, dtype=float)
    if v.shape != space.weights.shape:
        raise SpaceMismatch(
            f"function has {v.size} values but the space has {space.n_atoms} atoms"
        )
    return v


def cond_exp(space: MeasureSpace, partition: Partition, f) -> np.ndarray:
    """Weighted average of f over each partition block, broadcast back to atoms.

    This is the conditional expectation onto the block sigma-algebra: linear,
    idempotent, positive, and exact in double precision up to summation error.
    """
    partition._check_space(space)
    values = as_values(space, f)
    block_mass = partition.block_measures(space)
    block_sum = np.bincount(
        partition.labels, weights=space.weights * values, minlength=partition.n_blocks
    )
    return (block_sum / block_mass)[partition.labels]


def block_values(partition: Partition, values: np.ndarray) -> np.ndarray:
    """One representative value per block for a block-constant function."""
    values = np.asarray(values, dtype=float)
    first = np.zeros(partition.n_blocks, dtype=int)
    seen = np.zeros(partition.n_blocks, dtype=bool)
    for i, b in enumerate(partition.labels):
        if not seen[b]:
            first[b] = i
            seen[b] = True
    return values[first]


def is_block_constant(partition: Partition, values: np.ndarray, tol: float = 0.0) -> bool:
    values = np.asarray(values, dtype=float)
    rep = block_values(partition, values)[partition.labels]
    return bool(np.all(np.abs(values - rep) <= tol))


def build_symmetric_space(n_half: int) -> tuple[MeasureSpace, Partition]:
    """The interval [-1, 1] with half-Lebesgue measure, cut into 2*n_half equal cells.

    Each cell carries weight 1/(2*n_half) so the total measure is 1; blocks
    pair cell i with its mirror cell, making conditional expectation the
    symmetrization f(x) -> (f(x) + f(-x)) / 2.  Labels are cell midpoints.
    """
    if n_half < 1:
        raise ConfigError("n_half must be at least 1")
    n = 2 * n_half
    mids = tuple(-1.0 + (2 * i + 1) / n for i in range(n))
    labels = np.minimum(np.arange(n), n - 1 - np.arange(n))
    return MeasureSpace(np.full(n, 1.0 / n), labels=mids), Partition(labels)


def build_rotation_space(n: int, cells_per_block_orbit: int) -> tuple[MeasureSpace, Partition]:
    """The circle [0, 1) cut into n*m equal cells; blocks are orbits of the 1/n shift.

    With m = cells_per_block_orbit, the shift by 1/n moves cell i to cell i+m,
    so the orbit of cell i is {i, i+m, i+2m, ...} with exactly n members and
    there are m blocks.  Conditional expectation averages over each orbit with
    an explicit 1/n factor; the plain orbit sum would not be idempotent, which
    forces the averaged convention here.  Labels are cell midpoints.
    """
    if n < 2 or cells_per_block_orbit < 1:
        raise ConfigError("need n >= 2 and cells_per_block_orbit >= 1")
    m = cells_per_block_orbit
    total = n * m
    mids = tuple((i + 0.5) / total for i in range(total))
    labels = np.arange(total) % m
    return MeasureSpace(np.full(total, 1.0 / total), labels=mids), Partition(labels)


def check_averaging(
    space: MeasureSpace,
    partition: Partition,
    f: np.ndarray,
    g: np.ndarray,
    tol: float = 1e-12,
) -> dict:
    """Verify E(f*g) = E(f)*g for a block-constant g.

    Raises NotMeasurable when g is not block-constant, since the identity is
    only meaningful for measurable multipliers.
    """
    g = as_values(space, g)
    if not is_block_constant(partition, g):
        raise NotMeasurable("g is not constant on partition blocks")
    lhs = cond_exp(space, partition, as_values(space, f) * g)
    rhs = cond_exp(space, partition, f) * g
    err = float(np.max(np.abs(lhs - rhs)))
    scale = max(1.0, float(np.max(np.abs(rhs))))
    return {"holds": err <= tol * scale, "max_error": err, "scale": scale}


def jensen_check(
    space: MeasureSpace,
    partition: Partition,
    phi,
    f: np.ndarray,
    tol: float = 1e-12,
) -> dict:
    """Verify the convexity inequality phi(E f) <= E(phi(|f|)) atomwise.

    phi is any callable convex function accepting arrays (a YoungFunction in
    practice, which evaluates on |x| and so absorbs the absolute value).
    """
    f = as_values(space, f)
    lhs = np.asarray(phi(cond_exp(space, partition, np.abs(f))))
    rhs = cond_exp(space, partition, np.asarray(phi(f)))
    gap = lhs - rhs
    worst = float(np.max(gap))
    scale = max(1.0, float(np.max(np.abs(rhs))))
    return {"holds": worst <= tol * scale, "max_violation": worst, "scale": scale}


@dataclass(frozen=True)
class MinOfLinear:
    """(x_1,..,x_n) -> min_j sum_i coeffs[j][i]*x_i, concave and positively homogeneous.

    Coefficient vectors must be nonnegative so the function is monotone in each
    argument; this is the finite surrogate for a min over countably many linear
    functionals.
    """

    coeffs: tuple[tuple[float, ...], ...]

    def __post_init__(self) -> None:
        if not self.coeffs:
            raise ConfigError("min_of_linear: need at least one coefficient vector")
        n = len(self.coeffs[0])
        if any(len(row) != n for row in self.coeffs):
            raise ConfigError("min_of_linear: coefficient vectors must share a length")
        if any(c < 0 for row in self.coeffs for c in row):
            raise ConfigError("min_of_linear: coefficients must be nonnegative")

    @property
    def arity(self) -> int:
        return len(self.coeffs[0])

    def __call__(self, stacked):
        """Evaluate on an array of shape (arity, ...) stacking the arguments."""
        stacked = np.asarray(stacked, dtype=float)
        vals = np.tensordot(np.asarray(self.coeffs), stacked, axes=(1, 0))
        out = np.min(vals, axis=0)
        return float(out) if out.ndim == 0 else out


def generalized_jensen_check(
    space: MeasureSpace,
    partition: Partition,
    theta: MinOfLinear,
    fs,
    tol: float = 1e-12,
) -> dict:
    """Verify E(theta(f_1,..,f_n)) <= theta(E f_1,..,E f_n) for nonnegative inputs.

    Each linear piece commutes with E exactly, so the min of the averaged
    pieces dominates the average of the min; this check confirms the sampled
    direction and raises NegativeInput when any input has negative entries,
    where the one-sided form no longer applies.
    """
    fs = [as_values(space, f) for f in fs]
    if any(np.any(f < 0) for f in fs):
        raise NegativeInput("generalized Jensen check needs nonnegative functions")
    stacked = np.stack(fs)
    lhs = cond_exp(space, partition, np.asarray(theta(stacked)))
    averaged = np.stack([cond_exp(space, partition, f) for f in fs])
    rhs = np.asarray(theta(averaged))
    gap = lhs - rhs
    worst = float(np.max(gap))
    scale = max(1.0, float(np.max(np.abs(rhs))))
    return {"holds": worst <= tol * scale, "max_violation": worst, "scale": scale}


def domination_constant(space: MeasureSpace, partition: Partition) -> float:
    """Smallest C0 with E(h)(atom) <= C0 * h(atom) for every h >= 0 and every atom.

    Blockwise, E(h) at atom i is a weighted average over i's block, bounded by
    mu(block) / w_i times h(i) in the worst case where h concentrates on i; the
    constant is the maximum of that ratio over atoms.
    """
    partition._check_space(space)
    block_mass = partition.block_measures(space)
    return float(np.max(block_mass[partition.labels] / space.weights))
