"""Exact signed partition numbers p(n, f).

Three independent routes:

* :func:`exact_table`       log-derivative recurrence ``n p(n) = sum_m b_m p(n-m)``;
* :func:`exact_by_product`  truncated product of ``(1 - f(n) z^n)^-1``;
* :func:`enumerate_oracle`  literal sum of ``f(pi)`` over all partitions of n.

Big integers are Python ints; the O(N^2) inner loops run through numpy
object arrays so the interpreter is not involved per term.
"""

from __future__ import annotations

import hashlib
import logging
import os
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import _kernels
from .errors import CacheError, ConsistencyError, InvalidArgument
from .numtheory import FactorSieve, SignFunction, shared_sieve, sign_values

log = logging.getLogger(__name__)

ENUMERATION_BOUND = 40
CACHE_FORMAT = "SPN-TABLE v1"


@dataclass(frozen=True)
class WeightCoefficients:
    """``b_m = m psi_m`` where ``Psi(z) = sum psi_m z^m``.

    ``b_m = sum_{d | m, m/d odd} d f(d) + sum_{d | m, m/d even} d f(d)^2``; the
    two parts are stored separately as ``odd`` (from Psi_1) and ``even``
    (from Psi_0).  Index 0 holds 0.
    """

    f: SignFunction
    N: int
    even: np.ndarray = field(repr=False)
    odd: np.ndarray = field(repr=False)

    @property
    def b(self) -> np.ndarray:
        return self.even + self.odd


def weight_coeffs(f: SignFunction, N: int, sieve: FactorSieve | None = None) -> WeightCoefficients:
    if N < 0:
        raise InvalidArgument("N must be >= 0")
    if sieve is not None and N > sieve.limit:
        raise InvalidArgument(f"N={N} exceeds sieve limit {sieve.limit}")
    fvals = sign_values(f, N, sieve)
    even, odd = _kernels.weight_coeffs_kernel(fvals, N)
    return WeightCoefficients(f, N, even, odd)


@dataclass(frozen=True)
class PartitionTable:
    f: SignFunction
    N: int
    p: tuple = field(repr=False)
    method: str = "recurrence"

    def __getitem__(self, n: int) -> int:
        return self.p[n]

    def __len__(self) -> int:
        return len(self.p)


def exact_table(f: SignFunction, N: int, sieve: FactorSieve | None = None) -> PartitionTable:
    """p(0..N, f) by the recurrence; every division by n is checked to be exact."""
    if N < 0:
        raise InvalidArgument("N must be >= 0")
    b = weight_coeffs(f, N, sieve).b.astype(object)
    p = np.zeros(N + 1, dtype=object)
    p[0] = 1
    # rev[i] = p[N - i]; filling from the right keeps p[n-1..0] contiguous and reversed
    rev = np.zeros(N + 1, dtype=object)
    rev[N] = 1
    for n in range(1, N + 1):
        s = int(np.dot(b[1 : n + 1], rev[N - n + 1 :]))
        q, rem = divmod(s, n)
        if rem:
            raise ConsistencyError(f"recurrence for {f} not divisible at n={n}")
        p[n] = q
        rev[N - n] = q
    return PartitionTable(f, N, tuple(int(v) for v in p), "recurrence")


def exact_by_product(f: SignFunction, N: int, sieve: FactorSieve | None = None) -> PartitionTable:
    """p(0..N, f) from the truncated product; factors with f(n) = 0 are skipped."""
    if N < 0:
        raise InvalidArgument("N must be >= 0")
    fvals = sign_values(f, N, sieve)
    p = np.zeros(N + 1, dtype=object)
    p[0] = 1
    for n in range(1, N + 1):
        c = int(fvals[n])
        if c == 0:
            continue
        # divide by (1 - c z^n): p[k] += c * p[k - n], blocks of length n are independent
        for start in range(n, N + 1, n):
            stop = min(start + n, N + 1)
            if c == 1:
                p[start:stop] += p[start - n : stop - n]
            else:
                p[start:stop] -= p[start - n : stop - n]
    return PartitionTable(f, N, tuple(int(v) for v in p), "product")


def _naive_f(f: SignFunction, n: int) -> int:
    # trial division, deliberately independent of the sieve
    if f.tag == "One":
        return 1
    if f.tag == "Indicator":
        return 1 if n in f.members else 0
    exps = []
    m, p = n, 2
    while p * p <= m:
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        if e:
            exps.append(e)
        p += 1
    if m > 1:
        exps.append(1)
    if f.tag == "Liouville":
        return -1 if sum(exps) % 2 else 1
    if any(e > 1 for e in exps):
        return 0
    return 1 if f.tag == "MobiusSquared" else (-1) ** len(exps)


def partitions(n: int, largest: int | None = None):
    """Yield the partitions of ``n`` as non-increasing tuples."""
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in partitions(n - first, first):
            yield (first,) + rest


def enumerate_oracle(f: SignFunction, n: int, bound: int = ENUMERATION_BOUND) -> int:
    if n < 0:
        raise InvalidArgument("n must be >= 0")
    if n > bound:
        raise InvalidArgument(f"enumeration oracle refuses n={n} > {bound}")
    fv = [0] + [_naive_f(f, k) for k in range(1, n + 1)]
    total = 0
    for part in partitions(n):
        prod = 1
        for x in part:
            prod *= fv[x]
            if prod == 0:
                break
        total += prod
    return total


def pentagonal_partition_numbers(N: int) -> list[int]:
    """Ordinary partition numbers p(0..N) by Euler's pentagonal recurrence."""
    p = [1] + [0] * N
    for n in range(1, N + 1):
        s = 0
        k = 1
        while True:
            g1 = k * (3 * k - 1) // 2
            if g1 > n:
                break
            sgn = 1 if k % 2 else -1
            s += sgn * p[n - g1]
            g2 = k * (3 * k + 1) // 2
            if g2 <= n:
                s += sgn * p[n - g2]
            k += 1
        p[n] = s
    return p


def log_abs_of_table_entry(table: PartitionTable, n: int):
    from .asymptotics import LogScaleNumber

    return LogScaleNumber.from_int(table[n])


# ---------------------------------------------------------------- cache


def cache_dir() -> Path:
    return Path(os.environ.get("SPN_CACHE", "./.spn-cache"))


def cache_path(f: SignFunction, N: int, directory: Path | None = None) -> Path:
    return (directory or cache_dir()) / f"exact_{f.descriptor}_{N}.tbl"


def _body_digest(lines) -> str:
    h = hashlib.sha256()
    for line in lines:
        h.update(line.encode())
        h.update(b"\n")
    return h.hexdigest()


def save_cache(table: PartitionTable, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    body = [str(v) for v in table.p]
    header = [
        CACHE_FORMAT,
        f"f={table.f.descriptor}",
        f"N={table.N}",
        f"method={table.method}",
        f"sha256={_body_digest(body)}",
        "---",
    ]
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(header + body) + "\n")
    os.replace(tmp, path)
    return path


def load_cache(path, f: SignFunction | None = None, N: int | None = None) -> PartitionTable:
    """Read a table, verifying format version, descriptor, length and checksum."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise CacheError(f"cannot read {path}: {exc}") from exc
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if len(lines) < 6 or lines[0] != CACHE_FORMAT or lines[5] != "---":
        raise CacheError(f"{path}: not a {CACHE_FORMAT} file")
    meta = dict(line.split("=", 1) for line in lines[1:5])
    body = lines[6:]
    if _body_digest(body) != meta.get("sha256"):
        raise CacheError(f"{path}: checksum mismatch")
    n_file = int(meta["N"])
    if len(body) != n_file + 1:
        raise CacheError(f"{path}: expected {n_file + 1} entries, found {len(body)}")
    if f is not None and meta["f"] != f.descriptor:
        raise CacheError(f"{path}: table is for f={meta['f']}, not {f.descriptor}")
    if N is not None and n_file < N:
        raise CacheError(f"{path}: table stops at N={n_file} < {N}")
    if f is None:
        raise CacheError("load_cache needs the SignFunction the table belongs to")
    values = tuple(int(v) for v in body)
    if N is not None and N < n_file:
        values = values[: N + 1]
        n_file = N
    return PartitionTable(f, n_file, values, meta["method"])


_memory: dict[tuple[SignFunction, int], PartitionTable] = {}


def cached_table(f: SignFunction, N: int, directory: Path | None = None, use_disk: bool = True) -> PartitionTable:
    """Exact table through ``N``, served from memory, then disk, else computed.

    An unwritable cache directory only produces a warning.
    """
    for (g, M), tab in _memory.items():
        if g == f and M >= N:
            return tab if M == N else PartitionTable(f, N, tab.p[: N + 1], tab.method)
    directory = directory or cache_dir()
    if use_disk and directory.is_dir():
        candidates = []
        for path in directory.glob(f"exact_{f.descriptor}_*.tbl"):
            try:
                M = int(path.stem.rsplit("_", 1)[1])
            except ValueError:
                continue
            if M >= N:
                candidates.append((M, path))
        for M, path in sorted(candidates):
            try:
                tab = load_cache(path, f, N)
            except CacheError as exc:
                log.warning("ignoring cache file: %s", exc)
                continue
            _memory[(f, N)] = tab
            return tab
    tab = exact_table(f, N, shared_sieve(max(N, 1)))
    _memory[(f, N)] = tab
    if use_disk:
        try:
            save_cache(tab, cache_path(f, N, directory))
        except OSError as exc:
            log.warning("cache directory %s not writable (%s); continuing uncached", directory, exc)
    return tab
