"""Nerves of monoids, groups, groupoids, and free groups.

Level k of a nerve is the set of k-tuples of elements (composable paths
in the groupoid case).  An index map acts entrywise by window products:
entry i of the result is the product of the entries from f(i-1)+1
through f(i), with empty windows giving the identity.  Descending
windows contribute inverted factors in reverse order, which is what
makes the flip act by (g1, g2) -> (g2^-1, g1^-1).
"""

from __future__ import annotations

from itertools import product

from .algebra import (
    FinGroup,
    FinGroupoid,
    FinMonoid,
    FreeWord,
    empty_word,
    word_invert,
    word_multiply,
)
from .errors import PreconditionError, WordBoundError
from .index_categories import DELTA, IDELTA, DecoratedCategory
from .presheaves import TruncatedDiagram


def _window_entries(values, j):
    """Index pairs (a, b) for the windows of a map with the given value tuple."""
    return [(values[i - 1], values[i]) for i in range(1, j + 1)]


def nerve(M: FinMonoid, N: int) -> TruncatedDiagram:
    """The nerve of a finite monoid over Delta^op, truncated at N."""
    if isinstance(M, FinGroup):
        M = M.monoid
    levels = {k: tuple(product(range(M.order), repeat=k)) for k in range(N + 1)}

    def rule(f):
        j = f.source_rank
        windows = _window_entries(f.values, j)
        out = {}
        for x in levels[f.target_rank]:
            out[x] = tuple(M.mul_all(x[a:b]) for a, b in windows)
        return out

    return TruncatedDiagram(DELTA, N, levels, rule, True,
                            f"nerve({M.name or M.order})")


def _signed_window(group: FinGroup, entries, a, b):
    if a <= b:
        return group.monoid.mul_all(entries[a:b])
    out = group.identity
    for t in range(a, b, -1):
        out = group.mul(out, group.inv(entries[t - 1]))
    return out


def inerve(G, N: int) -> TruncatedDiagram:
    """The invertible nerve over IDelta^op (decorated for groupoids)."""
    if isinstance(G, FinGroupoid):
        return _inerve_groupoid(G, N)
    if isinstance(G, FinMonoid):
        G = FinGroup.from_monoid(G)  # raises if inverses are missing
    if not isinstance(G, FinGroup):
        raise PreconditionError("inerve needs a group or groupoid")
    levels = {k: tuple(product(range(G.order), repeat=k)) for k in range(N + 1)}

    def rule(f):
        j = f.source_rank
        windows = _window_entries(f.values, j)
        out = {}
        for x in levels[f.target_rank]:
            out[x] = tuple(_signed_window(G, x, a, b) for a, b in windows)
        return out

    return TruncatedDiagram(IDELTA, N, levels, rule, True,
                            f"inerve({G.name or G.order})")


def _inerve_groupoid(G: FinGroupoid, N: int) -> TruncatedDiagram:
    category = DecoratedCategory(IDELTA, G.objects)
    levels = {}
    for key in category.objects_upto(N):
        k, decoration = key
        paths = [()]
        for i in range(k):
            paths = [p + (m,) for p in paths
                     for m in G.hom(decoration[i], decoration[i + 1])]
        levels[key] = tuple(paths)

    def signed_path(path, decoration, a, b):
        if a <= b:
            out = G.identity(decoration[a])
            for t in range(a + 1, b + 1):
                out = G.compose(path[t - 1], out)
        else:
            out = G.identity(decoration[a])
            for t in range(a, b, -1):
                out = G.compose(G.inv(path[t - 1]), out)
        return out

    def rule(f):
        theta = f.underlying
        j = theta.source_rank
        decoration = f.target_objects
        out = {}
        for x in levels[(theta.target_rank, decoration)]:
            out[x] = tuple(
                signed_path(x, decoration, theta.values[i - 1], theta.values[i])
                for i in range(1, j + 1))
        return out

    return TruncatedDiagram(category, N, levels, rule, True, "inerve(groupoid)")


# ---------------------------------------------------------------------------
# free nerves, bounded by total word length


def reduced_words(n: int, max_len: int) -> list:
    """All reduced words over n generators of length <= max_len, stable order."""
    letters = [(g, s) for g in range(n) for s in (1, -1)]
    layers = [[empty_word(n)]]
    for _ in range(max_len):
        layer = []
        for w in layers[-1]:
            for g, s in letters:
                if w.letters and w.letters[-1] == (g, -s):
                    continue
                layer.append(FreeWord(n, w.letters + ((g, s),)))
        layers.append(layer)
    out = [w for layer in layers for w in layer]
    return sorted(out, key=lambda w: (w.length, w.letters))


def _word_tuples(words: list, j: int, budget: int) -> list:
    if j == 0:
        return [()]
    out = []
    for w in words:
        if w.length > budget:
            continue
        for rest in _word_tuples(words, j - 1, budget - w.length):
            out.append((w,) + rest)
    return out


def total_length(element: tuple) -> int:
    return sum(w.length for w in element)


def _free_levels(n: int, N: int, K: int) -> dict:
    words = reduced_words(n, K)
    return {j: tuple(_word_tuples(words, j, K)) for j in range(N + 1)}


def _free_rule(n, levels, K):
    def rule(f):
        j = f.source_rank
        windows = _window_entries(f.values, j)
        out = {}
        for x in levels[f.target_rank]:
            entries = []
            for a, b in windows:
                w = empty_word(n)
                if a <= b:
                    for t in range(a + 1, b + 1):
                        w = word_multiply(w, x[t - 1])
                else:
                    for t in range(a, b, -1):
                        w = word_multiply(w, word_invert(x[t - 1]))
                entries.append(w)
            result = tuple(entries)
            if total_length(result) > K:
                raise WordBoundError(
                    f"action output exceeds word bound {K}", morphism=f, element=x)
            out[x] = result
        return out

    return rule


def nerve_free(n: int, N: int, K: int) -> TruncatedDiagram:
    """Truncation of nerve(F_n) over Delta^op: tuples of total length <= K."""
    if n < 1 or K < 1:
        raise PreconditionError("need n >= 1 and K >= 1")
    levels = _free_levels(n, N, K)
    return TruncatedDiagram(DELTA, N, levels, _free_rule(n, levels, K), True,
                            f"nerve(F{n})<={K}")


def inerve_free(n: int, N: int, K: int) -> TruncatedDiagram:
    """Truncation of Inerve(F_n) over IDelta^op: tuples of total length <= K."""
    if n < 1 or K < 1:
        raise PreconditionError("need n >= 1 and K >= 1")
    levels = _free_levels(n, N, K)
    return TruncatedDiagram(IDELTA, N, levels, _free_rule(n, levels, K), True,
                            f"Inerve(F{n})<={K}")
