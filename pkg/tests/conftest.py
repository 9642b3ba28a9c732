"""Shared fixtures: small rings and seeded random element generators."""

import itertools
import random

import pytest

from reesfiber import polyring as pr


@pytest.fixture
def Rxy():
    return pr.ring(32003, [("x", ("x", "y"), (1, 0))])


@pytest.fixture
def Rxyz():
    return pr.ring(32003, [("x", ("x", "y", "z"), (1, 0))])


@pytest.fixture
def S35():
    return pr.ring(
        32003,
        [
            ("x", ("x1", "x2", "x3"), (1, 0)),
            ("T", ("T1", "T2", "T3", "T4", "T5"), (0, 1)),
        ],
    )


def rand_poly(ring, rng, max_deg=3, max_terms=4, nonzero=False):
    """Random sparse polynomial with exponents bounded per variable."""
    n = ring.nvars
    pairs = []
    for _ in range(rng.randrange(0, max_terms + 1)):
        exps = [0] * n
        budget = rng.randrange(0, max_deg + 1)
        for _ in range(budget):
            exps[rng.randrange(n)] += 1
        pairs.append((ring.monomial(exps), rng.randrange(ring.char)))
    p = ring.from_terms(pairs)
    if nonzero and p.is_zero():
        return ring.from_terms([(ring.monomial([1] + [0] * (n - 1)), 1)])
    return p


def rand_monomial_ideal(ring, rng, count=4, max_deg=4):
    gens = []
    n = ring.nvars
    for _ in range(count):
        exps = [0] * n
        for _ in range(rng.randrange(1, max_deg + 1)):
            exps[rng.randrange(n)] += 1
        if any(exps):
            gens.append(ring.term(1, exps))
    return gens


def seeded(seed):
    return random.Random(seed)


def perm_sign(perm):
    """Sign of a permutation given as a tuple of images."""
    seen = [False] * len(perm)
    sign = 1
    for i in range(len(perm)):
        if seen[i]:
            continue
        j = i
        length = 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def leibniz_det(M):
    """Determinant by the full permutation sum; independent of the
    library's cofactor expansion."""
    n = M.rows
    acc = M.ring.zero()
    for perm in itertools.permutations(range(n)):
        term = M.ring.const(1)
        for i in range(n):
            term = term * M.entries[i][perm[i]]
            if term.is_zero():
                break
        if term.is_zero():
            continue
        acc = acc + (term if perm_sign(perm) > 0 else -term)
    return acc


def matching_pfaffian(M):
    """Pfaffian by summing over perfect matchings with the permutation
    sign; independent of the library's first-row expansion."""
    n = M.rows
    if n % 2:
        return M.ring.zero()

    def matchings(items):
        if not items:
            yield ()
            return
        first = items[0]
        for k in range(1, len(items)):
            rest = items[1:k] + items[k + 1 :]
            for sub in matchings(rest):
                yield ((first, items[k]),) + sub

    acc = M.ring.zero()
    for match in matchings(tuple(range(n))):
        flat = tuple(v for pair in match for v in pair)
        sign = perm_sign(flat)
        term = M.ring.const(1)
        for i, j in match:
            term = term * M.entries[i][j]
            if term.is_zero():
                break
        if term.is_zero():
            continue
        acc = acc + (term if sign > 0 else -term)
    return acc
