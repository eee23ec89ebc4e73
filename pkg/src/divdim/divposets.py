"""Divisibility posets and constructions on their prime intervals.

The two constructions here are the realiser seeds for prime intervals
(a, b]: randomized suitable permutation sets, drawn and then verified
deterministically, and embeddings of the squarefree part into a
cover-free family, verified as poset embeddings.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Iterator, Sequence

from .base import DomainError, PreconditionError, RetryBudgetError, Verdict
from .coverfree import SetFamily, greatest_prime_power
from .multisets import Permutation
from .posets import FinitePoset, verify_embedding
from .primes import PrimeTable, factorize
from .rng import SplitMix64, child_seed

RETRY_BUDGET = 8
EMBEDDING_VERIFY_GUARD = 5000
EXACT_SIZE_HINT = 25


@dataclass(frozen=True)
class DivPosetSpec:
    """Divisibility order on {m <= n : all prime factors of m in X}.

    X is either an explicit prime set or an interval (a, b] resolved
    against a prime table.  ``squarefree_only`` restricts to squarefree m.
    """

    n: int
    prime_set: tuple[int, ...] | None = None
    interval: tuple[float, float] | None = None
    squarefree_only: bool = False

    def __post_init__(self):
        if self.n < 1:
            raise DomainError("n must be positive")
        if (self.prime_set is None) == (self.interval is None):
            raise DomainError("give exactly one of prime_set and interval")
        if self.interval is not None:
            a, b = self.interval
            if not 1 <= a < b:
                raise DomainError("interval must satisfy 1 <= a < b")

    def resolve(self, table: PrimeTable) -> tuple[int, ...]:
        if self.interval is not None:
            a, b = self.interval
            return table.primes_in(a, b)
        for p in self.prime_set:
            if not table.is_prime(p):
                raise DomainError(f"{p} is not prime")
        return tuple(sorted(self.prime_set))


def smooth_numbers(primes: Sequence[int], n: int, *, squarefree: bool = False) -> list[int]:
    """Ascending m <= n whose prime factors all lie in ``primes`` (1 included)."""
    out = [1]

    def rec(start: int, value: int) -> None:
        for i in range(start, len(primes)):
            p = primes[i]
            v = value * p
            while v <= n:
                out.append(v)
                rec(i + 1, v)
                if squarefree:
                    break
                v *= p

    rec(0, 1)
    out.sort()
    return out


def build_div_poset(spec: DivPosetSpec, table: PrimeTable) -> FinitePoset:
    """Materialise the divisibility poset described by ``spec``."""
    primes = spec.resolve(table)
    elems = smooth_numbers(primes, spec.n, squarefree=spec.squarefree_only)
    if len(elems) > EXACT_SIZE_HINT:
        warnings.warn(
            f"poset has {len(elems)} elements, above the exact-dimension guard "
            f"({EXACT_SIZE_HINT}); fine for verification-only use",
            stacklevel=2,
        )
    return FinitePoset.from_predicate(elems, lambda a, b: b % a == 0, trusted=True)


def squarefree_support_sets(primes: Sequence[int], n: int) -> list[frozenset]:
    """Supports of the squarefree m <= n with all factors in ``primes``."""
    return [
        frozenset(factorize(m)) if m > 1 else frozenset()
        for m in smooth_numbers(primes, n, squarefree=True)
    ]


def _squarefree_index_masks(primes: Sequence[int], n: int) -> Iterator[tuple[int, int]]:
    """(product, prime-index bitmask) for each qualifying squarefree m."""

    def rec(start: int, value: int, mask: int) -> Iterator[tuple[int, int]]:
        yield value, mask
        for i in range(start, len(primes)):
            v = value * primes[i]
            if v > n:
                break
            yield from rec(i + 1, v, mask | 1 << i)

    yield from rec(0, 1, 0)


def check_interval_suitability(
    n: int, primes: Sequence[int], rank_rows: Sequence[Sequence[int]]
) -> Verdict:
    """Deterministic check of the interval covering property.

    Enumerates the squarefree m <= n over ``primes`` by ascending products
    (never scanning [n]); for each m and each non-dividing prime p, some
    row must rank every prime factor of m at or below p.  The witness on
    failure is the first uncovered (m, p).
    """
    length = len(primes)
    if not rank_rows:
        raise DomainError("at least one permutation is required")
    all_mask = (1 << length) - 1
    suffixes = []
    for ranks in rank_rows:
        if sorted(ranks) != list(range(length)):
            raise DomainError("rank row is not a permutation")
        at_rank = [0] * length
        for idx, rk in enumerate(ranks):
            at_rank[rk] = idx
        suf = [0] * (length + 1)
        for t in range(length - 1, -1, -1):
            suf[t] = suf[t + 1] | 1 << at_rank[t]
        suffixes.append(suf)

    def visit(start: int, value: int, mask: int, tops: list[int]) -> Verdict | None:
        covered = 0
        for suf, t in zip(suffixes, tops):
            covered |= suf[t]
            if covered == all_mask:
                break
        missing = all_mask & ~(covered | mask)
        if missing:
            idx = (missing & -missing).bit_length() - 1
            return Verdict(False, (value, primes[idx]))
        for i in range(start, length):
            v = value * primes[i]
            if v > n:
                break
            child = [max(t, ranks[i]) for t, ranks in zip(tops, rank_rows)]
            bad = visit(i + 1, v, mask | 1 << i, child)
            if bad is not None:
                return bad
        return None

    bad = visit(0, 1, 0, [0] * len(rank_rows))
    return bad if bad is not None else Verdict(True)


@dataclass(frozen=True)
class IntervalSuitableSet:
    """Verified suitable permutations of the primes in (a, b], with its seed."""

    n: int
    a: float
    b: float
    primes: tuple[int, ...]
    perms: tuple[Permutation, ...]
    seed: int
    retry_index: int
    target_size: int

    @property
    def interval_prime_count(self) -> int:
        return len(self.primes)

    def rank_rows(self) -> list[list[int]]:
        return [[perm.rank_map[p] for p in self.primes] for perm in self.perms]

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "a": self.a,
            "b": self.b,
            "primes": list(self.primes),
            "ranks": self.rank_rows(),
            "seed": self.seed,
            "retry_index": self.retry_index,
            "target_size": self.target_size,
        }


def draw_interval_perms(
    primes: Sequence[int], seed: int, retry_index: int, count: int
) -> list[list[int]]:
    """Re-derivable draw of ``count`` uniform rank rows for one retry."""
    rng = SplitMix64(child_seed(seed, retry_index))
    rows = []
    for _ in range(count):
        order = list(range(len(primes)))
        rng.shuffle(order)
        ranks = [0] * len(primes)
        for position, idx in enumerate(order):
            ranks[idx] = position
        rows.append(ranks)
    return rows


def suitable_size_cap(n: int, a: float) -> int:
    """ceil(2 (log n)^2 / log a), the guaranteed size bound."""
    return math.ceil(2 * math.log(n) ** 2 / math.log(a))


def random_suitable_interval(
    n: int,
    a: float,
    b: float,
    seed: int,
    table: PrimeTable,
    *,
    retry_budget: int = RETRY_BUDGET,
) -> IntervalSuitableSet:
    """Draw and verify a suitable set for the primes in (a, b].

    The draw size is ceil(log(nL) log n / log a) for L interval primes,
    which never exceeds the cap of ceil(2 (log n)^2 / log a) since L <= n.
    Failed draws are retried with derived child seeds; after half the
    budget the draw size is doubled (then clamped back to the cap).  A
    single-prime interval needs only the one trivial permutation.
    """
    if a < 2:
        raise DomainError("a must be at least 2 so log a is positive")
    if not a < b <= n:
        raise DomainError("need a < b <= n")
    primes = table.primes_in(a, b)
    if not primes:
        raise DomainError(f"no primes in ({a}, {b}]")
    length = len(primes)
    cap = suitable_size_cap(n, a)
    if length == 1:
        d0 = 1
    else:
        d0 = min(math.ceil(math.log(n * length) * math.log(n) / math.log(a)), cap)
    last_size = d0
    for attempt in range(retry_budget):
        size = d0 if attempt < retry_budget // 2 else min(2 * d0, cap)
        last_size = size
        rows = draw_interval_perms(primes, seed, attempt, size)
        verdict = check_interval_suitability(n, primes, rows)
        if verdict:
            perms = []
            for row in rows:
                order: list[int | None] = [None] * length
                for idx, rk in enumerate(row):
                    order[rk] = primes[idx]
                perms.append(Permutation(primes, tuple(order)))
            perms = tuple(perms)
            return IntervalSuitableSet(
                n=n,
                a=a,
                b=b,
                primes=primes,
                perms=perms,
                seed=seed,
                retry_index=attempt,
                target_size=size,
            )
    raise RetryBudgetError(
        f"no suitable set found for ({a}, {b}] with n={n} in {retry_budget} "
        f"retries at draw size {last_size}"
    )


def verify_interval_suitable(s: IntervalSuitableSet) -> Verdict:
    """Independent re-check of the covering property of a stored set."""
    return check_interval_suitability(s.n, s.primes, s.rank_rows())


@dataclass(frozen=True)
class CoverFreeEmbedding:
    """Injection of interval primes into a cover-free family.

    Extends to squarefree products by unions; under the recorded
    hypotheses that map embeds the squarefree divisibility poset of the
    interval into subsets of the family's ground.
    """

    n: int
    a: float
    b: float
    r: int
    family: SetFamily
    primes: tuple[int, ...]
    assignment: tuple[int, ...]

    @property
    def ground_size(self) -> int:
        return self.family.ground_size

    def image_of_indices(self, indices: Sequence[int]) -> frozenset:
        out: frozenset = frozenset()
        for i in indices:
            out |= self.family.sets[self.assignment[i]]
        return out

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "a": self.a,
            "b": self.b,
            "r": self.r,
            "primes": list(self.primes),
            "assignment": list(self.assignment),
            "family": self.family.to_json_dict(),
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "CoverFreeEmbedding":
        return cls(
            n=int(data["n"]),
            a=data["a"],
            b=data["b"],
            r=int(data["r"]),
            family=SetFamily.from_json_dict(data["family"]),
            primes=tuple(data["primes"]),
            assignment=tuple(data["assignment"]),
        )


def _log_at_least(base: float, exponent: int, n: int) -> bool:
    """exponent * log(base) >= log(n), exactly when base is integral."""
    if float(base).is_integer():
        return int(base) ** exponent >= n
    return exponent * math.log(base) >= math.log(n)


def coverfree_embedding(
    n: int,
    a: float,
    b: float,
    family: SetFamily,
    r: int,
    table: PrimeTable,
    *,
    verify_ground_limit: int = EMBEDDING_VERIFY_GUARD,
) -> tuple[CoverFreeEmbedding, Verdict]:
    """Map the i-th prime of (a, b] to the i-th family member.

    Requires |family| >= pi(b) - pi(a) and r log a >= log n; the caller
    is responsible for the family being r-cover-free (as the polynomial
    construction guarantees).  The returned verdict reports the full
    two-sided embedding check, run when the squarefree ground is within
    the guard and marked as skipped otherwise.
    """
    primes = table.primes_in(a, b)
    if len(family) < len(primes):
        raise PreconditionError(
            f"family has {len(family)} members but the interval holds "
            f"{len(primes)} primes"
        )
    if not _log_at_least(a, r, n):
        raise PreconditionError(
            f"r log a >= log n fails: r={r}, a={a}, n={n}"
        )
    embedding = CoverFreeEmbedding(
        n=n,
        a=a,
        b=b,
        r=r,
        family=family,
        primes=primes,
        assignment=tuple(range(len(primes))),
    )
    qualifying = list(_squarefree_index_masks(primes, n))
    if len(qualifying) > verify_ground_limit:
        return embedding, Verdict(
            True,
            note=f"verification skipped: {len(qualifying)} elements exceed "
            f"guard {verify_ground_limit}",
        )
    masks = {value: mask for value, mask in qualifying}
    source = FinitePoset.from_predicate(
        sorted(masks),
        lambda x, y: masks[x] & ~masks[y] == 0,
        trusted=True,
    )

    def image(value: int) -> frozenset:
        mask = masks[value]
        out: frozenset = frozenset()
        while mask:
            i = (mask & -mask).bit_length() - 1
            mask &= mask - 1
            out |= family.sets[embedding.assignment[i]]
        return out

    phi = {value: image(value) for value in sorted(masks)}
    targets = sorted(set(phi.values()), key=sorted)
    target = FinitePoset.from_predicate(
        targets, lambda x, y: x <= y, trusted=True
    )
    return embedding, verify_embedding(source, target, phi)


@dataclass(frozen=True)
class BoostParams:
    """Concrete parameters for covering one doubling interval of primes.

    Feasibility is decided by the two numeric hypotheses alone, checked
    with exact integer arithmetic (sieve counts and integer powers); the
    asymptotic bound on k is evaluated and reported but does not veto a
    numerically sound parameter set.
    """

    n: int
    eps: float
    k: int
    d: int
    q: int
    h: int
    a: int
    b: int
    r: int
    capacity: int
    primes_needed: int | None
    capacity_ok: bool
    coverage_ok: bool
    k_bound: float
    k_within_bound: bool
    feasible: bool
    notes: tuple[str, ...]


def boost_params(n: int, eps: float, k: int, table: PrimeTable) -> BoostParams:
    """Evaluate the cover-free parameters for the k-th doubling interval."""
    if n < 16:
        raise DomainError("n must be at least 16")
    if eps <= 0:
        raise DomainError("eps must be positive")
    if k < 1:
        raise DomainError("k must be at least 1")
    ln = math.log(n)
    lln = math.log(ln)
    d = int((2 + eps) * ln / lln)
    q = greatest_prime_power((1 + eps) * d)
    h = 2**k
    a = d ** (2 ** (k - 1))
    b = d ** (2**k)
    r = (q - 1) // h
    capacity = q ** (h + 1)
    notes = []
    if b > table.limit:
        primes_needed = None
        capacity_ok = False
        notes.append(
            f"pi({b}) not tabulated (table limit {table.limit}); "
            "capacity hypothesis unverifiable, reported infeasible"
        )
    else:
        primes_needed = table.prime_count(b) - table.prime_count(a)
        capacity_ok = capacity >= primes_needed
        if not capacity_ok:
            notes.append(f"capacity {capacity} < primes needed {primes_needed}")
    coverage_ok = r >= 1 and _log_at_least(a, r, n)
    if not coverage_ok:
        notes.append(f"coverage fails: floor((q-1)/h)={r}, a={a}, n={n}")
    k_bound = math.log(eps * ln / (2 * math.log(d)))
    k_within_bound = k <= k_bound
    if not k_within_bound:
        notes.append(
            f"k={k} exceeds the guaranteed regime bound log(eps log n / 2 log d)"
            f"={k_bound:.4f}; numeric checks decide feasibility"
        )
    return BoostParams(
        n=n,
        eps=eps,
        k=k,
        d=d,
        q=q,
        h=h,
        a=a,
        b=b,
        r=r,
        capacity=capacity,
        primes_needed=primes_needed,
        capacity_ok=capacity_ok,
        coverage_ok=coverage_ok,
        k_bound=k_bound,
        k_within_bound=k_within_bound,
        feasible=capacity_ok and coverage_ok,
        notes=tuple(notes),
    )
