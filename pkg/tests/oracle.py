"""Independent brute-force reference computations.

Nothing here imports the package.  Groups are handled with plain tuples:
free-group words as tuples of nonzero ints (negative = inverse letter),
permutations of {0, 1, 2} as image tuples composed right to left.
"""
from __future__ import annotations

import itertools
from collections import deque
from fractions import Fraction


# --- free groups -----------------------------------------------------------


def free_reduce(word):
    out = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def free_letters(rank):
    return [s for i in range(1, rank + 1) for s in (i, -i)]


def free_sphere(rank, n):
    letters = free_letters(rank)
    return [w for w in itertools.product(letters, repeat=n) if free_reduce(w) == w]


def free_ratio_reduced(rank, gamma, n):
    words = free_sphere(rank, n)
    total = sum((len(free_reduce(gamma + k)) - n) ** 2 for k in words)
    return Fraction(total, len(words))


def free_ratio_junction(rank, gamma, n):
    """Seam-only cancellation; the formal word keeps its length n."""
    letters = free_letters(rank)
    total = 0
    count = 0
    for k in itertools.product(letters, repeat=n):
        g, w = list(gamma), list(k)
        while g and w and g[-1] == -w[0]:
            g.pop()
            w.pop(0)
        total += (len(g) + len(w) - n) ** 2
        count += 1
    return Fraction(total, count)


def free_ratio_walk(rank, gamma, n):
    letters = free_letters(rank)
    total = 0
    count = 0
    for k in itertools.product(letters, repeat=n):
        red = free_reduce(k)
        total += (len(free_reduce(gamma + red)) - len(red)) ** 2
        count += 1
    return Fraction(total, count)


# --- S3 ---------------------------------------------------------------------


def compose(g, h):
    """(g o h)(x) = g(h(x))."""
    return tuple(g[h[x]] for x in range(len(h)))


def perm_inverse(g):
    out = [0] * len(g)
    for i, x in enumerate(g):
        out[x] = i
    return tuple(out)


S3 = list(itertools.permutations(range(3)))
E3 = (0, 1, 2)
TRANS_12 = (1, 0, 2)
TRANS_23 = (0, 2, 1)
CYCLE_123 = (1, 2, 0)  # 0->1->2->0, i.e. (1 2 3) on {1,2,3}


def word_lengths(gens, identity, mul):
    dist = {identity: 0}
    queue = deque([identity])
    while queue:
        g = queue.popleft()
        for s in gens:
            h = mul(g, s)
            if h not in dist:
                dist[h] = dist[g] + 1
                queue.append(h)
    return dist


def s3_lengths(kind):
    if kind == "transpositions":
        gens = [TRANS_12, TRANS_23]
    else:
        gens = [TRANS_12, CYCLE_123, perm_inverse(CYCLE_123)]
    return word_lengths(gens, E3, compose)


def finite_coefficient(lengths, mul, gamma):
    elems = list(lengths)
    total = sum((lengths[mul(gamma, k)] - lengths[k]) ** 2 for k in elems)
    return Fraction(total, len(elems))


def s3_coefficients(kind):
    lengths = s3_lengths(kind)
    return {g: finite_coefficient(lengths, compose, g) for g in S3}, lengths


# --- cyclic -------------------------------------------------------------------


def cyclic_lengths(n, gens):
    return word_lengths(gens, 0, lambda a, b: (a + b) % n)


def cyclic_sphere_sizes(n, gens):
    lengths = cyclic_lengths(n, gens)
    top = max(lengths.values())
    return [sum(1 for v in lengths.values() if v == k) for k in range(top + 1)]


# --- free abelian -------------------------------------------------------------


def freeabelian_length(v):
    return sum(abs(x) for x in v)


def t_coefficient_freeabelian(g, h, a):
    add = lambda x, y: tuple(p + q for p, q in zip(x, y))
    L = freeabelian_length
    return L(add(h, a)) - L(a) - L(add(add(h, a), g)) + L(add(a, g))


def t_coefficient_free(g, h, a):
    L = lambda w: len(free_reduce(w))
    return L(h + a) - L(a) - L(h + a + g) + L(a + g)
