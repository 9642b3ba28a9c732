"""Buchberger engine and the ideal-theoretic toolbox built on it:
normal forms, elimination, intersection, colon, saturation, radical
membership, dimension/height, Hilbert series, ideal equality.

Pair selection uses the normal strategy refined by sugar degree, with
Gebauer-Moeller pair elimination.  All iteration orders are fixed, so
identical inputs produce identical reduced bases.  Resource use is
controlled by an explicit Budget (pair and term ceilings) raising
BudgetExceeded, which callers surface as a timeout outcome.
"""

from __future__ import annotations

import bisect
import heapq
import itertools
from dataclasses import dataclass
from math import comb

from .polyring import (
    FIELD_BITS,
    FIELD_MASK,
    GREVLEX,
    Elim,
    Polynomial,
    RingMismatch,
    exact_div,
)


class BudgetExceeded(RuntimeError):
    """A Groebner computation hit its pair or term ceiling."""

    def __init__(self, what, pairs, terms):
        super().__init__(f"budget exceeded ({what}): pairs={pairs} terms={terms}")
        self.what = what
        self.pairs = pairs
        self.terms = terms


class Budget:
    """Mutable pair/term counters shared across the sub-computations of
    one logical operation."""

    __slots__ = ("max_pairs", "max_terms", "pairs", "terms")

    def __init__(self, max_pairs=None, max_terms=None):
        self.max_pairs = max_pairs
        self.max_terms = max_terms
        self.pairs = 0
        self.terms = 0

    def charge_pair(self):
        self.pairs += 1
        if self.max_pairs is not None and self.pairs > self.max_pairs:
            raise BudgetExceeded("pairs", self.pairs, self.terms)

    def charge_terms(self, n):
        self.terms += n
        if self.max_terms is not None and self.terms > self.max_terms:
            raise BudgetExceeded("terms", self.pairs, self.terms)


_NO_BUDGET = Budget()

# When true, every basis returned by the engine is re-checked: all
# S-polynomials must reduce to zero.  Enabled by the test suite.
CHECK_BASES = False


def set_check_mode(on):
    global CHECK_BASES
    CHECK_BASES = bool(on)


class GroebnerData:
    """A reduced Groebner basis in raw engine form: parallel lists of
    term tuples, leading monomials, and leading keys, ascending by key."""

    __slots__ = ("ring", "order", "keyf", "rows", "lms", "lks", "_polys")

    def __init__(self, ring, order, keyf, rows):
        self.ring = ring
        self.order = order
        self.keyf = keyf
        self.rows = rows
        self.lms = [r[0][1] for r in rows]
        self.lks = [r[0][0] for r in rows]
        self._polys = None

    def polys(self):
        if self._polys is None:
            self._polys = tuple(_to_poly(self.ring, r) for r in self.rows)
        return self._polys

    def is_trivial(self):
        return len(self.rows) == 1 and self.rows[0][0][1] == 0


def _to_poly(ring, row):
    key = ring.key
    terms = sorted(((key(m), m, c) for _, m, c in row), key=lambda t: t[0], reverse=True)
    return Polynomial(ring, tuple(terms))


def _to_rows(polys, keyf):
    rows = []
    for p in polys:
        if p.is_zero():
            continue
        row = sorted(((keyf(m), m, c) for _, m, c in p.terms), key=lambda t: t[0], reverse=True)
        rows.append(row)
    return rows


def _reduce(work, reducers, guard, p, budget):
    """Full normal form of a raw term list against `reducers`, a list of
    (lk, lm, terms) ascending by lk with monic terms.  Returns a new
    descending term list."""
    out = []
    ws = 0
    steps = 0
    while ws < len(work):
        k0, m0, c0 = work[ws]
        hit = None
        for lk, lm, gt in reducers:
            if lk > k0:
                break
            d = m0 - lm
            if d >= 0 and not (d & guard):
                hit = gt
                dm = d
                dk = k0 - lk
                break
        if hit is None:
            out.append(work[ws])
            ws += 1
            continue
        nxt = []
        i, j = ws + 1, 1
        lw, lg = len(work), len(hit)
        while i < lw and j < lg:
            ta = work[i]
            tb = hit[j]
            kb = tb[0] + dk
            if ta[0] > kb:
                nxt.append(ta)
                i += 1
            elif ta[0] < kb:
                nxt.append((kb, tb[1] + dm, (-c0 * tb[2]) % p))
                j += 1
            else:
                c = (ta[2] - c0 * tb[2]) % p
                if c:
                    nxt.append((ta[0], ta[1], c))
                i += 1
                j += 1
        if i < lw:
            nxt.extend(work[i:])
        while j < lg:
            tb = hit[j]
            nxt.append((tb[0] + dk, tb[1] + dm, (-c0 * tb[2]) % p))
            j += 1
        work = nxt
        ws = 0
        steps += lg
        if steps > 4096:
            budget.charge_terms(steps)
            steps = 0
    budget.charge_terms(steps)
    return out


def _monic(row, p):
    c = row[0][2]
    if c == 1:
        return row
    inv = pow(c, p - 2, p)
    return [(k, m, (inv * cc) % p) for k, m, cc in row]


def _buchberger(ring, rows, keyf, budget):
    """Compute a reduced Groebner basis of the raw rows; returns rows
    ascending by leading key."""
    p = ring.char
    guard = ring._guard
    tshift = ring._tshift
    divides = ring.m_divides
    lcm = ring.m_lcm

    rows = sorted((_monic(r, p) for r in rows if r), key=lambda r: (r[0][0], len(r)))
    G = []  # entries [lk, lm, terms, sugar]
    P = {}  # (i, j) -> (sugar, lcm_key, lcm_mono)
    heap = []
    reducers = []  # (lk, lm, terms) ascending by lk
    rkeys = []

    def add(row, sugar):
        t = len(G)
        lk, lm = row[0][0], row[0][1]
        # Gebauer-Moeller: prune existing pairs made redundant by lm
        for ij in list(P):
            L = P[ij][2]
            if divides(lm, L):
                i, j = ij
                if lcm(G[i][1], lm) != L and lcm(G[j][1], lm) != L:
                    del P[ij]
        cand = {}
        for i in range(t):
            L = lcm(G[i][1], lm)
            cand.setdefault(L, []).append(i)
        kept = []
        for L in sorted(cand, key=keyf):
            if not any(divides(Lp, L) for Lp in kept):
                kept.append(L)
        G.append([lk, lm, row, sugar])
        pos = bisect.bisect_right(rkeys, lk)
        rkeys.insert(pos, lk)
        reducers.insert(pos, (lk, lm, row))
        budget.charge_terms(len(row))
        for L in kept:
            members = cand[L]
            if any(lcm(G[i][1], lm) == G[i][1] + lm for i in members):
                continue  # coprime leading terms: S-poly reduces to zero
            i = min(members)
            kL = keyf(L)
            sug = max(
                G[i][3] + ((L - G[i][1]) >> tshift),
                sugar + ((L - lm) >> tshift),
            )
            P[(i, t)] = (sug, kL, L)
            heapq.heappush(heap, (sug, kL, i, t))

    for row in rows:
        if reducers:
            row = _reduce(row, reducers, guard, p, budget)
            if not row:
                continue
            row = _monic(row, p)
        add(row, max(m >> tshift for _, m, _ in row))

    while heap:
        sug, kL, i, j = heapq.heappop(heap)
        ent = P.pop((i, j), None)
        if ent is None:
            continue
        budget.charge_pair()
        L = ent[2]
        gi, gj = G[i], G[j]
        # S-polynomial: the shifted heads cancel
        dki, dmi = kL - gi[0], L - gi[1]
        dkj, dmj = kL - gj[0], L - gj[1]
        a = gi[2]
        b = gj[2]
        s = []
        ii, jj = 1, 1
        la, lb = len(a), len(b)
        while ii < la and jj < lb:
            ka = a[ii][0] + dki
            kb = b[jj][0] + dkj
            if ka > kb:
                ta = a[ii]
                s.append((ka, ta[1] + dmi, ta[2]))
                ii += 1
            elif ka < kb:
                tb = b[jj]
                s.append((kb, tb[1] + dmj, (p - tb[2]) % p))
                jj += 1
            else:
                c = (a[ii][2] - b[jj][2]) % p
                if c:
                    s.append((ka, a[ii][1] + dmi, c))
                ii += 1
                jj += 1
        while ii < la:
            ta = a[ii]
            s.append((ta[0] + dki, ta[1] + dmi, ta[2]))
            ii += 1
        while jj < lb:
            tb = b[jj]
            s.append((tb[0] + dkj, tb[1] + dmj, (p - tb[2]) % p))
            jj += 1
        r = _reduce(s, reducers, guard, p, budget)
        if r:
            add(_monic(r, p), sug)

    # minimalize: drop rows whose leading monomial is divisible by another's
    order = sorted(range(len(G)), key=lambda i: G[i][0])
    kept = []
    for i in order:
        lm = G[i][1]
        if not any(divides(G[j][1], lm) for j in kept):
            kept.append(i)
    # interreduce tails against the other kept rows
    final = []
    for i in kept:
        others = [(G[j][0], G[j][1], G[j][2]) for j in kept if j != i]
        row = _reduce(G[i][2], others, guard, p, budget)
        final.append(_monic(row, p))
    final.sort(key=lambda r: r[0][0])
    if CHECK_BASES and final:
        _assert_groebner_rows(ring, final, keyf, budget)
    return final


def _assert_groebner_rows(ring, rows, keyf, budget):
    p = ring.char
    guard = ring._guard
    lcm = ring.m_lcm
    reducers = sorted(((r[0][0], r[0][1], r) for r in rows), key=lambda e: e[0])
    for a, b in itertools.combinations(rows, 2):
        L = lcm(a[0][1], b[0][1])
        kL = keyf(L)
        sa = [(k + kL - a[0][0], m + L - a[0][1], c) for k, m, c in a]
        sb = [(k + kL - b[0][0], m + L - b[0][1], c) for k, m, c in b]
        s = [
            (k, m, c)
            for k, m, c in _merge_raw(sa, sb, p)
        ]
        if _reduce(s, reducers, guard, p, budget):
            raise AssertionError("S-polynomial does not reduce to zero")


def _merge_raw(a, b, p):
    out = []
    i = j = 0
    while i < len(a) and j < len(b):
        if a[i][0] > b[j][0]:
            out.append(a[i])
            i += 1
        elif a[i][0] < b[j][0]:
            out.append((b[j][0], b[j][1], (p - b[j][2]) % p))
            j += 1
        else:
            c = (a[i][2] - b[j][2]) % p
            if c:
                out.append((a[i][0], a[i][1], c))
            i += 1
            j += 1
    out.extend(a[i:])
    out.extend((k, m, (p - c) % p) for k, m, c in b[j:])
    return out


class IdealHandle:
    """Generators in a named ring plus cached reduced Groebner bases,
    one per monomial order."""

    __slots__ = ("ring", "gens", "_gb")

    def __init__(self, ring, gens):
        gens = tuple(g for g in gens if not g.is_zero())
        for g in gens:
            if g.ring is not ring:
                raise RingMismatch("generator from a different ring")
        self.ring = ring
        self.gens = gens
        self._gb = {}

    def groebner(self, order=GREVLEX, budget=None):
        data = self._gb.get(order)
        if data is None:
            keyf = self.ring.key_fn(order)
            rows = _buchberger(
                self.ring, _to_rows(self.gens, keyf), keyf, budget or _NO_BUDGET
            )
            data = GroebnerData(self.ring, order, keyf, rows)
            self._gb[order] = data
        return data

    def seed_cache(self, order, rows):
        keyf = self.ring.key_fn(order)
        self._gb[order] = GroebnerData(self.ring, order, keyf, rows)

    def basis(self, order=GREVLEX, budget=None):
        return self.groebner(order, budget).polys()

    def nf(self, p, order=GREVLEX, budget=None):
        return normal_form(p, self, order, budget)

    def contains(self, p, budget=None):
        return normal_form(p, self, GREVLEX, budget).is_zero()

    def is_zero_ideal(self):
        return not self.gens

    def __repr__(self):
        return f"IdealHandle({len(self.gens)} gens in {self.ring!r})"


def ideal(ring, gens):
    return IdealHandle(ring, tuple(gens))


# -- spec'd operations ---------------------------------------------------------


def groebner_basis(I, order=GREVLEX, budget=None):
    """Reduced Groebner basis of I under `order`, ascending leading terms."""
    return I.basis(order, budget)


def normal_form(p, I, order=GREVLEX, budget=None):
    """Remainder of full division of p by the reduced basis of I."""
    if p.ring is not I.ring:
        raise RingMismatch("polynomial not in the ideal's ring")
    data = I.groebner(order, budget)
    if not data.rows:
        return p
    keyf = data.keyf
    work = sorted(
        ((keyf(m), m, c) for _, m, c in p.terms), key=lambda t: t[0], reverse=True
    )
    reducers = list(zip(data.lks, data.lms, data.rows))
    out = _reduce(work, reducers, I.ring._guard, I.ring.char, budget or _NO_BUDGET)
    return _to_poly(I.ring, out) if out else I.ring.zero()


def eliminate(I, blocks, budget=None):
    """Generators of I intersected with the subring omitting `blocks`
    (a name or list of block names), as an ideal of that subring."""
    if isinstance(blocks, str):
        blocks = (blocks,)
    blocks = tuple(blocks)
    if not blocks:
        return I
    ring = I.ring
    sub = ring.dropped(blocks)
    data = I.groebner(Elim(blocks), budget)
    mask = 0
    for b in blocks:
        mask |= ring.block_expmask(b)
    kept = [row for row, lm in zip(data.rows, data.lms) if not (lm & mask)]
    mapped = [_to_poly(ring, row).map_to(sub) for row in kept]
    mapped.sort(key=lambda q: q.terms[0][0])
    out = IdealHandle(sub, tuple(mapped))
    # The elimination order restricted to front-free monomials agrees
    # with the subring's grevlex, so the kept rows are already a reduced
    # basis of the elimination ideal.
    out.seed_cache(GREVLEX, [list(q.terms) for q in mapped])
    return out


def intersect(I, J, budget=None):
    """I intersected with J via one auxiliary variable: w*I + (1-w)*J,
    eliminate w."""
    if I.ring is not J.ring:
        raise RingMismatch("ideals in different rings")
    ring = I.ring
    rw = ring.extended("w")
    w = rw.var("w")
    one = rw.one()
    gens = [w * f.map_to(rw) for f in I.gens]
    gens += [(one - w) * g.map_to(rw) for g in J.gens]
    K = IdealHandle(rw, tuple(gens))
    E = eliminate(K, "w", budget)
    out = IdealHandle(ring, tuple(p.map_to(ring) for p in E.gens))
    return out


def quotient_by_poly(I, f, budget=None):
    """I : (f) via intersection with (f) followed by exact division."""
    if f.is_zero():
        raise ZeroDivisionError("colon by the zero polynomial")
    if f.degree() == 0:
        return I
    J = intersect(I, IdealHandle(I.ring, (f,)), budget)
    return IdealHandle(I.ring, tuple(exact_div(g, f) for g in J.gens))


def ideal_quotient(I, J, budget=None):
    """I : J as the intersection of the single-generator colons."""
    if I.ring is not J.ring:
        raise RingMismatch("ideals in different rings")
    if not J.gens:
        raise ValueError("colon by the zero ideal")
    out = None
    seen = set()
    for f in J.gens:
        if f.terms in seen:
            continue
        seen.add(f.terms)
        Q = quotient_by_poly(I, f, budget)
        out = Q if out is None else intersect(out, Q, budget)
    return out


def saturate(I, f, budget=None):
    """I : f^infinity via the Rabinowitsch trick: adjoin w, add w*f - 1,
    eliminate w."""
    if f.is_zero():
        raise ZeroDivisionError("saturation by zero")
    ring = I.ring
    rw = ring.extended("w")
    w = rw.var("w")
    gens = [g.map_to(rw) for g in I.gens]
    gens.append(w * f.map_to(rw) - rw.one())
    K = IdealHandle(rw, tuple(gens))
    E = eliminate(K, "w", budget)
    return IdealHandle(ring, tuple(p.map_to(ring) for p in E.gens))


def radical_membership(f, I, budget=None):
    """True iff f lies in the radical of I (Rabinowitsch membership)."""
    if f.is_zero():
        raise ValueError("radical membership of the zero polynomial")
    if I.gens and normal_form(f, I, GREVLEX, budget).is_zero():
        return True
    ring = I.ring
    rw = ring.extended("w")
    w = rw.var("w")
    gens = [g.map_to(rw) for g in I.gens]
    gens.append(w * f.map_to(rw) - rw.one())
    data = IdealHandle(rw, tuple(gens)).groebner(GREVLEX, budget)
    return data.is_trivial()


def dim_height(I, budget=None):
    """(Krull dimension of ring/I, height of I) via maximal independent
    variable sets of the leading-term ideal."""
    ring = I.ring
    n = ring.nvars
    if not I.gens:
        return (n, 0)
    data = I.groebner(GREVLEX, budget)
    if data.is_trivial():
        raise ValueError("dim_height requires a proper ideal")
    supports = []
    for lm in data.lms:
        s = 0
        for i in range(n):
            if (lm >> (FIELD_BITS * i)) & FIELD_MASK:
                s |= 1 << i
        supports.append(s)
    # minimal supports only
    supports = sorted(set(supports), key=lambda s: bin(s).count("1"))
    minimal = []
    for s in supports:
        if not any(t & s == t for t in minimal):
            minimal.append(s)
    for size in range(n, -1, -1):
        for combo in itertools.combinations(range(n), size):
            u = 0
            for i in combo:
                u |= 1 << i
            if all(s & ~u for s in minimal):
                return (size, n - size)
    return (0, n)


@dataclass
class HilbertData:
    """Hilbert series of a quotient ring, as numerator/(1-z)^dim with
    numerator(1) != 0; multiplicity is numerator(1)."""

    numerator: tuple
    dim: int
    multiplicity: int

    def series(self, upto):
        """Coefficients of the Hilbert series power series up to degree
        `upto` inclusive."""
        out = [0] * (upto + 1)
        if self.dim == 0:
            for e, c in enumerate(self.numerator):
                if e <= upto:
                    out[e] += c
            return out
        d = self.dim
        for e, c in enumerate(self.numerator):
            if not c:
                continue
            for k in range(0, upto - e + 1):
                out[e + k] += c * comb(k + d - 1, d - 1)
        return out


class NonHomogeneous(ValueError):
    """hilbert() needs generators homogeneous in total degree."""


def hilbert(I, budget=None):
    """HilbertData of ring/I for a homogeneous ideal I (standard
    grading).  Computed from the leading-term ideal via pivot-variable
    recursion."""
    ring = I.ring
    for g in I.gens:
        if g.homogeneous_degree() is None:
            raise NonHomogeneous(f"generator {g} is not homogeneous")
    n = ring.nvars
    data = I.groebner(GREVLEX, budget)
    if data.is_trivial():
        raise ValueError("hilbert requires a proper ideal")
    gens = [ring.exponents(lm) for lm in data.lms]
    gens = _minimalize_monomials(gens)
    num0 = _hilbert_numerator(tuple(sorted(gens)), n, {})
    # reduce by (1 - z) until numerator(1) != 0
    coeffs = list(num0)
    dim = n
    while coeffs and sum(coeffs) == 0:
        acc = 0
        quot = []
        for c in coeffs[:-1]:
            acc += c
            quot.append(acc)
        coeffs = quot
        dim -= 1
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
    if not coeffs:
        raise ValueError("hilbert of the zero ring")
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return HilbertData(tuple(coeffs), dim, sum(coeffs))


def _minimalize_monomials(gens):
    gens = sorted(set(gens), key=sum)
    out = []
    for g in gens:
        if not any(all(a <= b for a, b in zip(h, g)) for h in out):
            out.append(g)
    return out


def _hilbert_numerator(gens, n, memo):
    """First Hilbert numerator of a monomial ideal: series of R/I equals
    numerator/(1-z)^n.  Uses the exact sequence splitting off a pivot
    variable; pairwise-coprime generators form the Koszul base case."""
    if not gens:
        return (1,)
    cached = memo.get(gens)
    if cached is not None:
        return cached
    coprime = True
    for a, b in itertools.combinations(gens, 2):
        if any(x and y for x, y in zip(a, b)):
            coprime = False
            break
    if coprime:
        out = (1,)
        for g in gens:
            out = _poly_mul_1mz(out, sum(g))
    else:
        counts = [0] * n
        for g in gens:
            for i, e in enumerate(g):
                if e:
                    counts[i] += 1
        piv = max(range(n), key=lambda i: counts[i])
        # I + (x_piv)
        plus = [g for g in gens if not g[piv]]
        e = [0] * n
        e[piv] = 1
        plus.append(tuple(e))
        plus = _minimalize_monomials(plus)
        # I : x_piv
        colon = []
        for g in gens:
            if g[piv]:
                h = list(g)
                h[piv] -= 1
                colon.append(tuple(h))
            else:
                colon.append(g)
        colon = _minimalize_monomials(colon)
        a = _hilbert_numerator(tuple(sorted(plus)), n, memo)
        b = _hilbert_numerator(tuple(sorted(colon)), n, memo)
        out = list(a) + [0] * max(0, len(b) + 1 - len(a))
        for i, c in enumerate(b):
            out[i + 1] += c
        out = tuple(out)
    memo[gens] = out
    return out


def _poly_mul_1mz(coeffs, d):
    """Multiply an integer coefficient list by (1 - z^d)."""
    out = list(coeffs) + [0] * d
    for i, c in enumerate(coeffs):
        out[i + d] -= c
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def ideal_equal(I, J, budget=None):
    """True iff the reduced grevlex bases coincide."""
    if I.ring is not J.ring:
        raise RingMismatch("ideals in different rings")
    a = I.groebner(GREVLEX, budget).rows
    b = J.groebner(GREVLEX, budget).rows
    return a == b


def ideal_contains(I, J, budget=None):
    """True iff J is a subset of I (every generator reduces to zero)."""
    return all(normal_form(g, I, GREVLEX, budget).is_zero() for g in J.gens)


def assert_groebner(I, order=GREVLEX, budget=None):
    """Re-verify the Buchberger criterion on the cached basis of I."""
    data = I.groebner(order, budget)
    if data.rows:
        _assert_groebner_rows(I.ring, data.rows, data.keyf, budget or _NO_BUDGET)
    return True
