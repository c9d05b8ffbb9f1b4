"""Todd-Coxeter coset enumeration and the regular representation.

The strategy is HLT with row filling, in-place coincidence processing on a
union-find over cosets, and a vectorized lookahead pass that traces every
relator at every live coset.  A presentation may mark a leading block of
relators as "defining"; the defining block drives coset definitions and the
lookahead pass enforces the full relator list, merging any cosets a
non-defining relator identifies.  The returned table is therefore always
closed under *all* relators at *all* cosets, independent of the hint.

Definitions use the first undefined entry in row-major order, so identical
inputs give identical tables and stats.
"""

from __future__ import annotations

import os
import time
from dataclasses import dataclass

import numpy as np

from .errors import (BudgetExceeded, CapExceeded, IncompleteTable,
                     InternalInconsistency)
from .groups import GROUP_ORDER_CAP, RealizedGroup, _table_dtype
from .words import Presentation, Word

DEFAULT_MAX_COSETS = 2_000_000


@dataclass(frozen=True)
class EnumerationBudget:
    max_cosets: int = DEFAULT_MAX_COSETS
    max_time_ms: int | None = None

    def __post_init__(self):
        if self.max_cosets <= 0:
            raise ValueError("max_cosets must be positive")
        if self.max_time_ms is not None and self.max_time_ms <= 0:
            raise ValueError("max_time_ms must be positive")


def default_budget() -> EnumerationBudget:
    """Budget from the environment; NTL_MAX_COSETS overrides the default."""
    env = os.environ.get("NTL_MAX_COSETS")
    if env:
        return EnumerationBudget(max_cosets=int(env))
    return EnumerationBudget()


@dataclass
class EnumerationStats:
    cosets_defined: int = 0
    cosets_final: int = 0
    coincidences: int = 0
    elapsed_ms: int = 0


@dataclass(frozen=True)
class CosetTable:
    """Complete coset table; row 0 is the subgroup coset, columns alternate
    generator and inverse-generator images."""

    rows: np.ndarray
    coset_count: int
    complete: bool
    presentation: Presentation

    def __post_init__(self):
        self.rows.setflags(write=False)


def word_letters(w: Word) -> tuple[int, ...]:
    """Flatten a word into column letters: 2g for g, 2g+1 for g^-1."""
    out: list[int] = []
    for g, e in w.letters:
        if e > 0:
            out.extend([2 * g] * e)
        else:
            out.extend([2 * g + 1] * (-e))
    return tuple(out)


def _dedup(seqs) -> list[tuple[int, ...]]:
    seen = set()
    out = []
    for s in seqs:
        if s and s not in seen:
            seen.add(s)
            out.append(s)
    return out


class _Enumerator:
    def __init__(self, p: Presentation, subgroup_words, budget, defining,
                 strategy: str = "hlt"):
        self.width = 2 * p.ngens
        all_letters = [word_letters(w) for w in p.relators]
        if defining is None:
            defining = len(all_letters)
        self.defining = _dedup(all_letters[:defining])
        rest = [s for s in _dedup(all_letters[defining:])
                if s not in set(self.defining)]
        self.all_relators = self.defining + rest
        self.subgroup_letters = _dedup([word_letters(w)
                                        for w in subgroup_words])
        self.budget = budget
        self.strategy = strategy
        self.t0 = time.monotonic()
        self.tab: list[list[int]] = [[-1] * self.width]
        self.uf: list[int] = [0]
        self.n_defined = 1
        self.n_alive = 1
        self.n_coincidences = 0

    # -- low-level ----------------------------------------------------------

    def _find(self, c: int) -> int:
        uf = self.uf
        r = c
        while uf[r] != r:
            r = uf[r]
        while uf[c] != r:
            uf[c], c = r, uf[c]
        return r

    def _check_budget(self):
        if self.n_defined > self.budget.max_cosets:
            raise BudgetExceeded(
                f"coset budget {self.budget.max_cosets} exhausted "
                "(possible infinite group or undersized budget)",
                stats=self._stats())
        limit = self.budget.max_time_ms
        if limit is not None and self.n_defined % 1024 == 0:
            if (time.monotonic() - self.t0) * 1000 > limit:
                raise BudgetExceeded(
                    f"time budget {limit} ms exhausted", stats=self._stats())

    def _define(self, alpha: int, x: int) -> int:
        beta = len(self.tab)
        row = [-1] * self.width
        row[x ^ 1] = alpha
        self.tab.append(row)
        self.uf.append(beta)
        self.tab[alpha][x] = beta
        self.n_defined += 1
        self.n_alive += 1
        self._check_budget()
        return beta

    def _merge(self, a: int, b: int, queue: list[int]):
        fa, fb = self._find(a), self._find(b)
        if fa == fb:
            return
        if fa > fb:
            fa, fb = fb, fa
        self.uf[fb] = fa
        queue.append(fb)
        self.n_alive -= 1
        self.n_coincidences += 1

    def _coincidence(self, a: int, b: int):
        queue: list[int] = []
        self._merge(a, b, queue)
        tab = self.tab
        qi = 0
        while qi < len(queue):
            gamma = queue[qi]
            qi += 1
            row = tab[gamma]
            for x in range(self.width):
                delta = row[x]
                if delta < 0:
                    continue
                tab[delta][x ^ 1] = -1
                mu = self._find(gamma)
                nu = self._find(delta)
                if tab[mu][x] >= 0:
                    self._merge(nu, tab[mu][x], queue)
                elif tab[nu][x ^ 1] >= 0:
                    self._merge(mu, tab[nu][x ^ 1], queue)
                else:
                    tab[mu][x] = nu
                    tab[nu][x ^ 1] = mu

    def _scan_and_fill(self, alpha: int, w: tuple[int, ...]):
        tab = self.tab
        i, j = 0, len(w) - 1
        f = b = alpha
        while True:
            while i <= j:
                d = tab[f][w[i]]
                if d < 0:
                    break
                f = d
                i += 1
            if i > j:
                if f != b:
                    self._coincidence(f, b)
                return
            while j >= i:
                d = tab[b][w[j] ^ 1]
                if d < 0:
                    break
                b = d
                j -= 1
            if j < i:
                self._coincidence(f, b)
                return
            if j == i:
                tab[f][w[i]] = b
                tab[b][w[i] ^ 1] = f
                return
            self._define(f, w[i])

    def _scan_only(self, alpha: int, w: tuple[int, ...]) -> bool:
        """Scan without defining: close a length-one gap, merge on overlap.
        Returns True when the table changed."""
        tab = self.tab
        i, j = 0, len(w) - 1
        f = b = alpha
        while i <= j:
            d = tab[f][w[i]]
            if d < 0:
                break
            f = d
            i += 1
        if i > j:
            if f != b:
                self._coincidence(f, b)
                return True
            return False
        while j >= i:
            d = tab[b][w[j] ^ 1]
            if d < 0:
                break
            b = d
            j -= 1
        if j < i:
            self._coincidence(f, b)
            return True
        if j == i:
            tab[f][w[i]] = b
            tab[b][w[i] ^ 1] = f
            self._touched.append(f)
            self._touched.append(b)
            return True
        return False

    # -- phases --------------------------------------------------------------

    def _hlt_pass(self):
        uf = self.uf
        alpha = 0
        while alpha < len(self.tab):
            if uf[alpha] != alpha:
                alpha += 1
                continue
            for w in self.defining:
                self._scan_and_fill(alpha, w)
                if uf[alpha] != alpha:
                    break
            if uf[alpha] == alpha:
                row = self.tab[alpha]
                for x in range(self.width):
                    if row[x] < 0:
                        self._define(alpha, x)
            alpha += 1

    def _felsch_pass(self):
        """Deduction-driven definition order: propagate consequences of every
        new entry, and only when nothing follows define the first undefined
        entry in row-major order.  Much slower than HLT; kept as the
        cross-checking alternative."""
        self._touched = [0]
        uf = self.uf
        while True:
            while self._touched:
                alpha = self._find(self._touched.pop())
                for w in self.defining:
                    if uf[alpha] != alpha:
                        self._touched.append(self._find(alpha))
                        break
                    self._scan_only(alpha, w)
            hole = None
            for alpha in range(len(self.tab)):
                if uf[alpha] != alpha:
                    continue
                row = self.tab[alpha]
                for x in range(self.width):
                    if row[x] < 0:
                        hole = (alpha, x)
                        break
                if hole:
                    break
            if hole is None:
                return
            alpha, x = hole
            beta = self._define(alpha, x)
            self._touched.append(alpha)
            self._touched.append(beta)

    def _compress(self):
        total = len(self.tab)
        uf = self.uf
        live = np.fromiter((c for c in range(total) if uf[c] == c),
                           dtype=np.int64)
        n = live.size
        renum = np.full(total, -1, dtype=np.int64)
        renum[live] = np.arange(n)
        raw = np.array([self.tab[int(c)] for c in live], dtype=np.int64)
        if raw.size and raw.min() < 0:
            raise InternalInconsistency("incomplete row after HLT pass")
        cols = renum[raw].T.copy() if raw.size else np.zeros(
            (self.width, n), dtype=np.int64)
        if cols.size and cols.min() < 0:
            raise InternalInconsistency("live row references a dead coset")
        return live, cols

    def _find_violation(self, cols, n):
        for w in self.subgroup_letters:
            c = 0
            for letter in w:
                c = int(cols[letter][c])
            if c != 0:
                return np.array([0]), np.array([c])
        ar = np.arange(n)
        for w in self.all_relators:
            v = ar
            for letter in w:
                v = cols[letter][v]
            bad = np.nonzero(v != ar)[0]
            if bad.size:
                return bad, v[bad]
        return None

    def run(self):
        for w in self.subgroup_letters:
            self._scan_and_fill(0, w)
        fill = self._felsch_pass if self.strategy == "felsch" \
            else self._hlt_pass
        while True:
            fill()
            live, cols = self._compress()
            hit = self._find_violation(cols, live.size)
            if hit is None:
                break
            src, dst = hit
            for a, b in zip(src.tolist(), dst.tolist()):
                self._coincidence(self._find(int(live[a])),
                                  self._find(int(live[b])))
        n = live.size
        rows = cols.T.astype(np.int32).copy()
        return rows, n, self._stats(final=n)

    def _stats(self, final: int | None = None) -> EnumerationStats:
        return EnumerationStats(
            cosets_defined=self.n_defined,
            cosets_final=self.n_alive if final is None else final,
            coincidences=self.n_coincidences,
            elapsed_ms=int((time.monotonic() - self.t0) * 1000))


def enumerate_cosets(p: Presentation,
                     subgroup_words: tuple[Word, ...] = (),
                     budget: EnumerationBudget | None = None,
                     defining_count: int | None = None,
                     strategy: str = "hlt",
                     ) -> tuple[CosetTable, EnumerationStats]:
    """Enumerate cosets of <subgroup_words> in the presented group.

    `defining_count` marks how many leading relators drive definitions; all
    relators are enforced regardless.  `strategy` picks the definition
    order: "hlt" (default) or the slower deduction-driven "felsch" used for
    cross-checking.  Raises BudgetExceeded rather than ever returning a
    truncated table.
    """
    if budget is None:
        budget = default_budget()
    if strategy not in ("hlt", "felsch"):
        raise ValueError(f"unknown enumeration strategy {strategy!r}")
    for w in subgroup_words:
        if w.max_generator() >= p.ngens:
            raise InternalInconsistency("subgroup word out of range")
    try:
        rows, n, stats = _Enumerator(p, subgroup_words, budget,
                                     defining_count, strategy).run()
    except BudgetExceeded:
        if defining_count is None or defining_count >= len(p.relators):
            raise
        # The defining hint may present a larger (even infinite) group;
        # retry once with every relator driving definitions.
        rows, n, stats = _Enumerator(p, subgroup_words, budget, None,
                                     strategy).run()
    table = CosetTable(rows=rows, coset_count=n, complete=True,
                       presentation=p)
    return table, stats


def regular_representation(t: CosetTable, p: Presentation) -> RealizedGroup:
    """Turn the coset table of the trivial subgroup into a realized group."""
    if not t.complete:
        raise IncompleteTable("cannot realize a partial coset table")
    n = t.coset_count
    if n > GROUP_ORDER_CAP:
        raise CapExceeded(f"group order {n} exceeds cap {GROUP_ORDER_CAP}")
    ngens = p.ngens
    cols = t.rows
    for w in p.relators:
        c = 0
        for letter in word_letters(w):
            c = int(cols[c, letter])
        if c != 0:
            raise InternalInconsistency("relator open at the identity coset")
    if n == 1:
        return RealizedGroup(p.name, np.zeros((1, 1), dtype=np.int16),
                             [0] * ngens, source_presentation=p)
    # Breadth-first spanning tree over positive generator columns.
    parent = np.full(n, -1, dtype=np.int64)
    letter = np.full(n, -1, dtype=np.int64)
    visited = np.zeros(n, dtype=bool)
    visited[0] = True
    discovery = [0]
    frontier = np.array([0], dtype=np.int64)
    while frontier.size:
        batches = []
        for g in range(ngens):
            tcol = cols[frontier, 2 * g].astype(np.int64)
            fresh = ~visited[tcol]
            if not fresh.any():
                continue
            tt, ff = tcol[fresh], frontier[fresh]
            uniq, first = np.unique(tt, return_index=True)
            visited[uniq] = True
            parent[uniq] = ff[first]
            letter[uniq] = g
            batches.append(uniq)
        frontier = (np.concatenate(batches) if batches
                    else np.array([], dtype=np.int64))
        discovery.extend(int(x) for x in frontier)
    if not visited.all():
        raise InternalInconsistency("coset table is not transitive")
    # Left-multiplication rows for generators, then for all elements:
    # an element a = parent * g satisfies (a.d) = (parent.(g.d)).
    dtype = _table_dtype(n)
    gen_rows = np.empty((ngens, n), dtype=np.int64)
    for g in range(ngens):
        row = gen_rows[g]
        row[0] = cols[0, 2 * g]
        for d in discovery[1:]:
            row[d] = cols[row[parent[d]], 2 * letter[d]]
    table = np.empty((n, n), dtype=dtype)
    table[0] = np.arange(n)
    for a in discovery[1:]:
        table[a] = table[parent[a]][gen_rows[letter[a]]]
    images = [int(cols[0, 2 * g]) for g in range(ngens)]
    return RealizedGroup(p.name, table, images, source_presentation=p)


def realize_presentation(p: Presentation,
                         budget: EnumerationBudget | None = None,
                         defining_count: int | None = None,
                         ) -> tuple[RealizedGroup, EnumerationStats]:
    """Enumerate the trivial-subgroup table and realize the group."""
    table, stats = enumerate_cosets(p, (), budget, defining_count)
    return regular_representation(table, p), stats
