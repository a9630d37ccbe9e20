"""Hidden-partition problem instances.

An instance pairs Alice's string x in {-1,+1}^n with Bob's permutation
sigma of [n] and target string w of length alpha*n/t.  The induced string
z = B_f(x, sigma) applies f to each of the first alpha*n/t size-t blocks
of the permuted string sigma(x), where sigma(x)_i = x_{sigma^-1(i)}.  The
promise is z o w = b^(alpha*n/t) for a hidden bit b.

Blocks are 1-indexed and contiguous in the permuted string; the partition
fraction alpha is stored as an exact rational so the promise length is an
integer by construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .boolfn import BooleanFunction
from .rng import fisher_yates


@dataclass(frozen=True)
class PartitionParams:
    """Problem-size parameters (n total bits, t block size, alpha exact)."""

    n: int
    t: int
    alpha: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "alpha", Fraction(self.alpha))
        if self.t < 1 or self.n < 1:
            raise ValueError("n and t must be positive")
        if self.n % self.t != 0:
            raise ValueError(f"block size {self.t} must divide n={self.n}")
        if not 0 < self.alpha <= 1:
            raise ValueError("alpha must lie in (0, 1]")
        active = self.alpha * self.n / self.t
        if active.denominator != 1 or active.numerator < 1:
            raise ValueError(
                f"alpha*n/t = {active} must be a positive integer"
            )

    @property
    def num_blocks(self) -> int:
        return self.n // self.t

    @property
    def active_blocks(self) -> int:
        """Number of blocks carrying promise information (alpha*n/t)."""
        return int(self.alpha * self.n / self.t)

    @property
    def active_len(self) -> int:
        return self.active_blocks * self.t


@dataclass(frozen=True)
class PartitionInstance:
    """One full problem input; ``b`` is set on generated instances only."""

    params: PartitionParams
    x: tuple[int, ...]
    sigma: tuple[int, ...]
    w: tuple[int, ...]
    b: Optional[int] = None

    def __post_init__(self) -> None:
        n = self.params.n
        if len(self.x) != n:
            raise ValueError("x length mismatch")
        if any(v not in (-1, 1) for v in self.x):
            raise ValueError("x entries must be +-1")
        if len(self.sigma) != n or sorted(self.sigma) != list(range(1, n + 1)):
            raise ValueError("sigma must be a bijection on [n]")
        if len(self.w) != self.params.active_blocks:
            raise ValueError("w length must be alpha*n/t")
        if any(v not in (-1, 1) for v in self.w):
            raise ValueError("w entries must be +-1")
        if self.b is not None and self.b not in (-1, 1):
            raise ValueError("b must be +-1 when present")


def apply_permutation(sigma: Sequence[int], x: Sequence[int]) -> tuple[int, ...]:
    """Permuted string y with y_i = x at sigma^-1(i)."""
    n = len(x)
    if len(sigma) != n:
        raise ValueError("length mismatch")
    y = [0] * n
    seen = [False] * n
    for i, image in enumerate(sigma):
        if not 1 <= image <= n or seen[image - 1]:
            raise ValueError("sigma is not a bijection on [n]")
        seen[image - 1] = True
        y[image - 1] = x[i]
    return tuple(y)


def permute_rows(sigma: np.ndarray, xs: np.ndarray) -> np.ndarray:
    """Vectorised apply_permutation for a stack of strings (rows of xs)."""
    out = np.empty_like(xs)
    out[:, np.asarray(sigma, dtype=np.int64) - 1] = xs
    return out


def compose_permutations(sigma: Sequence[int], tau: Sequence[int]) -> tuple[int, ...]:
    """(sigma o tau)(i) = sigma(tau(i))."""
    return tuple(sigma[tau[i] - 1] for i in range(len(tau)))


def _blocks_to_rows(blocks: np.ndarray) -> np.ndarray:
    """Row-encoding indices for a (..., t) array of +-1 block values."""
    t = blocks.shape[-1]
    bits = (1 - blocks) // 2
    weights = (1 << np.arange(t, dtype=np.int64))
    return bits @ weights


def b_map_rows(
    f: BooleanFunction, xs: np.ndarray, sigma: Sequence[int], params: PartitionParams
) -> np.ndarray:
    """Vectorised block map: (N, n) strings -> (N, active_blocks) values."""
    permuted = permute_rows(np.asarray(sigma), np.asarray(xs, dtype=np.int64))
    active = permuted[:, : params.active_len]
    blocks = active.reshape(active.shape[0], params.active_blocks, params.t)
    return f.evaluate_rows(_blocks_to_rows(blocks))


def b_map(
    f: BooleanFunction,
    x: Sequence[int],
    sigma: Sequence[int],
    params: PartitionParams,
) -> tuple[int, ...]:
    """z_j = f(block j of sigma(x)) for the first alpha*n/t blocks."""
    if f.t != params.t:
        raise ValueError(f"function arity {f.t} != block size {params.t}")
    if len(x) != params.n:
        raise ValueError("x length mismatch")
    result = b_map_rows(f, np.asarray(x, dtype=np.int64)[None, :], sigma, params)
    return tuple(int(v) for v in result[0])


def generate_instance(
    f: BooleanFunction,
    params: PartitionParams,
    b: int,
    rng: np.random.Generator,
) -> PartitionInstance:
    """Sample x uniformly, sigma uniformly (Fisher-Yates), and set
    w = b * B_f(x, sigma) so the promise holds with hidden bit b."""
    if b not in (-1, 1):
        raise ValueError("b must be +-1")
    if f.t != params.t:
        raise ValueError(f"function arity {f.t} != block size {params.t}")
    x = 1 - 2 * rng.integers(0, 2, size=params.n, dtype=np.int64)
    sigma = fisher_yates(params.n, rng)
    z = b_map(f, x, sigma, params)
    w = tuple(b * zj for zj in z)
    return PartitionInstance(
        params,
        tuple(int(v) for v in x),
        tuple(int(v) for v in sigma),
        w,
        b,
    )


def verify_promise(f: BooleanFunction, instance: PartitionInstance) -> Optional[int]:
    """The hidden bit if z o w is constant, else None (promise violated)."""
    z = b_map(f, instance.x, instance.sigma, instance.params)
    products = {zj * wj for zj, wj in zip(z, instance.w)}
    if len(products) == 1:
        return products.pop()
    return None


# ---------------------------------------------------------------------------
# JSON instance format
# ---------------------------------------------------------------------------


def instance_to_json(instance: PartitionInstance) -> dict:
    doc = {
        "n": instance.params.n,
        "t": instance.params.t,
        "alpha_num": instance.params.alpha.numerator,
        "alpha_den": instance.params.alpha.denominator,
        "x": list(instance.x),
        "sigma": list(instance.sigma),
        "w": list(instance.w),
    }
    if instance.b is not None:
        doc["b"] = instance.b
    return doc


def instance_from_json(doc: dict) -> PartitionInstance:
    params = PartitionParams(
        int(doc["n"]),
        int(doc["t"]),
        Fraction(int(doc["alpha_num"]), int(doc["alpha_den"])),
    )
    return PartitionInstance(
        params,
        tuple(int(v) for v in doc["x"]),
        tuple(int(v) for v in doc["sigma"]),
        tuple(int(v) for v in doc["w"]),
        int(doc["b"]) if "b" in doc else None,
    )
