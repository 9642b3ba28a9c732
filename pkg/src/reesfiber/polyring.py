"""Sparse exact multivariate polynomials over a prime field GF(p).

Monomials are packed into single Python integers: one 16-bit field per
variable, one per-block degree field, and a total-degree field on top.
With this packing, monomial multiplication is integer addition and
divisibility is a subtract-and-mask test.  Every monomial order used
here (grevlex, lex, block elimination) compiles to an integer key that
is linear in the exponent vector, so keys of products are sums of keys;
the Groebner engine leans on that.

A polynomial is an immutable list of (key, monomial, coefficient)
triples, strictly descending by key, with coefficients in [1, p).
"""

from __future__ import annotations

FIELD_BITS = 16
FIELD_MASK = (1 << FIELD_BITS) - 1
MAX_EXP = (1 << (FIELD_BITS - 1)) - 1


class RingMismatch(ValueError):
    """Operands live in different rings."""


class NotDivisible(ArithmeticError):
    """Exact polynomial division left a nonzero remainder."""


class ParseError(ValueError):
    """Malformed polynomial text."""


def _is_prime(p):
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


class Block:
    """A named, contiguous group of ring variables with a common bidegree."""

    __slots__ = ("name", "vars", "lo", "hi", "bidegree")

    def __init__(self, name, vars, lo, bidegree):
        self.name = name
        self.vars = tuple(vars)
        self.lo = lo
        self.hi = lo + len(self.vars)
        self.bidegree = tuple(bidegree)


class MonomialOrder:
    """Base for hashable, value-comparable order descriptors."""

    def key_fn(self, ring):
        raise NotImplementedError

    def __eq__(self, other):
        return type(self) is type(other) and self._ident() == other._ident()

    def __hash__(self):
        return hash((type(self).__name__, self._ident()))

    def _ident(self):
        return ()


class Grevlex(MonomialOrder):
    """Graded reverse lexicographic order over all variables."""

    def key_fn(self, ring):
        tshift = ring._tshift
        ln = FIELD_BITS * ring.nvars
        lowmask = ring._lowmask

        def key(m):
            return ((m >> tshift) << ln) - (m & lowmask)

        return key

    def __repr__(self):
        return "Grevlex()"


class Lex(MonomialOrder):
    """Pure lexicographic order, first ring variable largest."""

    def key_fn(self, ring):
        n = ring.nvars
        shifts = tuple(FIELD_BITS * i for i in range(n))
        out_shifts = tuple(FIELD_BITS * (n - 1 - i) for i in range(n))

        def key(m):
            k = 0
            for s, o in zip(shifts, out_shifts):
                k += ((m >> s) & FIELD_MASK) << o
            return k

        return key

    def __repr__(self):
        return "Lex()"


class Elim(MonomialOrder):
    """Block elimination order: grevlex on the front blocks, then grevlex
    on the rest.  Front blocks must be a union of ring blocks; they are
    eliminated first."""

    def __init__(self, front):
        if isinstance(front, str):
            front = (front,)
        self.front = tuple(front)
        if not self.front:
            raise ValueError("Elim needs at least one front block")

    def _ident(self):
        return self.front

    def key_fn(self, ring):
        idx = sorted(ring.block_index(b) for b in self.front)
        if idx == list(range(len(ring.blocks))):
            return Grevlex().key_fn(ring)
        if idx != list(range(idx[0], idx[-1] + 1)):
            return self._generic_key(ring, idx)
        blocks = ring.blocks
        lo, hi = blocks[idx[0]].lo, blocks[idx[-1]].hi
        B = FIELD_BITS
        nvars = ring.nvars
        nf, nb = hi - lo, nvars - (hi - lo)
        fshift = B * lo
        fmask = (1 << (B * nf)) - 1
        fdeg_shifts = tuple(ring._bshift[j] for j in idx)
        tshift = ring._tshift
        lowmask_lo = (1 << (B * lo)) - 1
        hishift = B * hi
        himask = (1 << (B * (nvars - hi))) - 1
        back_span = B * (nb + 1)

        def key(m):
            fd = 0
            for s in fdeg_shifts:
                fd += (m >> s) & FIELD_MASK
            flow = (m >> fshift) & fmask
            bd = (m >> tshift) - fd
            blow = (((m >> hishift) & himask) << fshift) | (m & lowmask_lo)
            return (((fd << (B * nf)) - flow) << back_span) + ((bd << (B * nb)) - blow)

        return key

    def _generic_key(self, ring, idx):
        # Non-contiguous front blocks: build the key from unpacked
        # exponents.  Correct for any block set, slower per call.
        front_vars = []
        back_vars = []
        fset = set(idx)
        for j, blk in enumerate(ring.blocks):
            target = front_vars if j in fset else back_vars
            target.extend(range(blk.lo, blk.hi))
        B = FIELD_BITS

        def group_key(exps, vs):
            d = sum(exps[i] for i in vs)
            k = d << (B * len(vs))
            for pos, i in enumerate(vs):
                k -= exps[i] << (B * pos)
            return k

        nb = len(back_vars)

        def key(m):
            exps = ring.exponents(m)
            return (group_key(exps, front_vars) << (B * (nb + 1))) + group_key(
                exps, back_vars
            )

        return key

    def __repr__(self):
        return f"Elim({self.front!r})"


GREVLEX = Grevlex()
LEX = Lex()

_RING_CACHE = {}


def ring(char, blocks):
    """Create (or fetch the cached) polynomial ring over GF(char).

    `blocks` is a sequence of (name, variable-names, bidegree) triples;
    variable names must be globally distinct.
    """
    spec = tuple((name, tuple(vs), tuple(bd)) for name, vs, bd in blocks)
    sig = (char, spec)
    r = _RING_CACHE.get(sig)
    if r is None:
        r = Ring(char, spec)
        _RING_CACHE[sig] = r
    return r


class Ring:
    """Immutable ring descriptor: prime characteristic, variable blocks,
    bidegrees, and the packed-monomial layout tables."""

    __slots__ = (
        "char",
        "blocks",
        "names",
        "nvars",
        "_bshift",
        "_tshift",
        "_lowmask",
        "_guard",
        "_index",
        "_blockof",
        "key",
        "_key_cache",
        "_derived",
        "_gens",
        "_sig",
    )

    def __init__(self, char, spec):
        if not _is_prime(char):
            raise ValueError(f"characteristic {char} is not prime")
        if char.bit_length() > 62:
            raise ValueError("characteristic must fit in a machine word")
        self.char = char
        self._sig = (char, spec)
        blocks = []
        names = []
        for name, vs, bd in spec:
            blocks.append(Block(name, vs, len(names), bd))
            names.extend(vs)
        if len(set(names)) != len(names):
            raise ValueError("variable names must be distinct")
        if len({b.name for b in blocks}) != len(blocks):
            raise ValueError("block names must be distinct")
        self.blocks = tuple(blocks)
        self.names = tuple(names)
        self.nvars = len(names)
        n, k = self.nvars, len(blocks)
        self._bshift = tuple(FIELD_BITS * (n + j) for j in range(k))
        self._tshift = FIELD_BITS * (n + k)
        self._lowmask = (1 << (FIELD_BITS * n)) - 1
        guard = 0
        for f in range(n + k + 1):
            guard |= 1 << (FIELD_BITS * f + FIELD_BITS - 1)
        self._guard = guard
        self._index = {v: i for i, v in enumerate(names)}
        blockof = {}
        for j, b in enumerate(blocks):
            for v in b.vars:
                blockof[v] = j
        self._blockof = blockof
        self.key = GREVLEX.key_fn(self)
        self._key_cache = {GREVLEX: self.key}
        self._derived = {}
        self._gens = None

    # -- monomial plumbing -------------------------------------------------

    def monomial(self, exps):
        """Pack an exponent vector (sequence or {name: exp} dict)."""
        if isinstance(exps, dict):
            vec = [0] * self.nvars
            for name, e in exps.items():
                vec[self._index[name]] = e
            exps = vec
        if len(exps) != self.nvars:
            raise ValueError("exponent vector has wrong length")
        m = 0
        bdeg = [0] * len(self.blocks)
        for i, e in enumerate(exps):
            if not 0 <= e <= MAX_EXP:
                raise ValueError(f"exponent {e} out of range")
            m |= e << (FIELD_BITS * i)
            bdeg[self._blockof[self.names[i]]] += e
        tot = 0
        for j, d in enumerate(bdeg):
            m |= d << self._bshift[j]
            tot += d
        return m | (tot << self._tshift)

    def exponents(self, m):
        return tuple((m >> (FIELD_BITS * i)) & FIELD_MASK for i in range(self.nvars))

    def deg(self, m):
        return m >> self._tshift

    def block_deg(self, m, block_name):
        return (m >> self._bshift[self.block_index(block_name)]) & FIELD_MASK

    def mono_bidegree(self, m):
        dx = dy = 0
        for j, b in enumerate(self.blocks):
            d = (m >> self._bshift[j]) & FIELD_MASK
            dx += d * b.bidegree[0]
            dy += d * b.bidegree[1]
        return (dx, dy)

    def m_divides(self, a, b):
        """True iff monomial a divides b."""
        d = b - a
        return d >= 0 and not (d & self._guard)

    def m_lcm(self, a, b):
        if a == b:
            return a
        ea, eb = self.exponents(a), self.exponents(b)
        return self.monomial([x if x > y else y for x, y in zip(ea, eb)])

    def block_index(self, name):
        for j, b in enumerate(self.blocks):
            if b.name == name:
                return j
        raise KeyError(f"no block {name!r} in ring")

    def block_expmask(self, name):
        b = self.blocks[self.block_index(name)]
        return ((1 << (FIELD_BITS * (b.hi - b.lo))) - 1) << (FIELD_BITS * b.lo)

    def key_fn(self, order):
        fn = self._key_cache.get(order)
        if fn is None:
            fn = order.key_fn(self)
            self._key_cache[order] = fn
        return fn

    # -- element construction ----------------------------------------------

    def from_terms(self, pairs):
        """Build a polynomial from (monomial, coefficient) pairs, merging
        duplicates and dropping zeros."""
        p = self.char
        acc = {}
        for m, c in pairs:
            acc[m] = (acc.get(m, 0) + c) % p
        key = self.key
        terms = sorted(
            ((key(m), m, c) for m, c in acc.items() if c), key=lambda t: t[0], reverse=True
        )
        return Polynomial(self, tuple(terms))

    def zero(self):
        return Polynomial(self, ())

    def one(self):
        return self.const(1)

    def const(self, c):
        c %= self.char
        if not c:
            return self.zero()
        return Polynomial(self, ((0, 0, c),))

    def var(self, name):
        i = self._index[name]
        vec = [0] * self.nvars
        vec[i] = 1
        m = self.monomial(vec)
        return Polynomial(self, ((self.key(m), m, 1),))

    def gens(self):
        if self._gens is None:
            self._gens = tuple(self.var(v) for v in self.names)
        return self._gens

    def block_gens(self, block_name):
        b = self.blocks[self.block_index(block_name)]
        return tuple(self.var(v) for v in b.vars)

    def term(self, c, exps):
        c %= self.char
        if not c:
            return self.zero()
        m = self.monomial(exps)
        return Polynomial(self, ((self.key(m), m, c),))

    # -- derived rings -------------------------------------------------------

    def extended(self, name, vars=None, bidegree=(0, 0)):
        """Ring with one extra block appended (e.g. an elimination
        variable).  Cached so repeated requests return the same object."""
        key = ("ext", name, tuple(vars) if vars else None, tuple(bidegree))
        r = self._derived.get(key)
        if r is None:
            vs = tuple(vars) if vars else (name,)
            spec = [(b.name, b.vars, b.bidegree) for b in self.blocks]
            spec.append((name, vs, tuple(bidegree)))
            r = ring(self.char, spec)
            self._derived[key] = r
        return r

    def dropped(self, block_names):
        """Ring with the named blocks removed."""
        drop = set(block_names)
        key = ("drop", tuple(sorted(drop)))
        r = self._derived.get(key)
        if r is None:
            spec = [
                (b.name, b.vars, b.bidegree) for b in self.blocks if b.name not in drop
            ]
            if len(spec) == len(self.blocks):
                return self
            r = ring(self.char, spec)
            self._derived[key] = r
        return r

    # -- text form -----------------------------------------------------------

    def mono_str(self, m):
        if m == 0:
            return "1"
        parts = []
        for i, v in enumerate(self.names):
            e = (m >> (FIELD_BITS * i)) & FIELD_MASK
            if e == 1:
                parts.append(v)
            elif e:
                parts.append(f"{v}^{e}")
        return "*".join(parts)

    def parse(self, text):
        return parse_poly(self, text)

    def __repr__(self):
        bs = ",".join(f"{b.name}[{len(b.vars)}]" for b in self.blocks)
        return f"Ring(GF({self.char}), {bs})"


class Polynomial:
    """Immutable sparse polynomial; `terms` is a tuple of
    (key, monomial, coefficient) strictly descending by key."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring, terms):
        self.ring = ring
        self.terms = terms

    # -- queries -------------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def lm(self):
        """Leading monomial (packed int)."""
        return self.terms[0][1]

    def lc(self):
        return self.terms[0][2]

    def nterms(self):
        return len(self.terms)

    def degree(self):
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        r = self.ring
        return max(r.deg(t[1]) for t in self.terms)

    def homogeneous_degree(self):
        """Common total degree of all terms, or None."""
        if not self.terms:
            return None
        r = self.ring
        degs = {r.deg(t[1]) for t in self.terms}
        return degs.pop() if len(degs) == 1 else None

    def bidegree(self):
        return bidegree_of(self)

    def coeff(self, m):
        """Coefficient of packed monomial m."""
        for _, mm, c in self.terms:
            if mm == m:
                return c
        return 0

    # -- arithmetic ----------------------------------------------------------

    def _check(self, other):
        if self.ring is not other.ring:
            raise RingMismatch("polynomials from different rings")

    def __add__(self, other):
        self._check(other)
        return Polynomial(self.ring, _merge(self.terms, other.terms, 1, self.ring.char))

    def __sub__(self, other):
        self._check(other)
        return Polynomial(self.ring, _merge(self.terms, other.terms, -1, self.ring.char))

    def __neg__(self):
        p = self.ring.char
        return Polynomial(self.ring, tuple((k, m, p - c) for k, m, c in self.terms))

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        self._check(other)
        a, b = self.terms, other.terms
        if not a or not b:
            return self.ring.zero()
        if len(a) < len(b):
            a, b = b, a
        p = self.ring.char
        acc = {}
        get = acc.get
        for kb, mb, cb in b:
            for ka, ma, ca in a:
                m = ma + mb
                e = get(m)
                if e is None:
                    acc[m] = [ka + kb, ca * cb]
                else:
                    e[1] += ca * cb
        terms = []
        for m, (k, c) in acc.items():
            c %= p
            if c:
                terms.append((k, m, c))
        terms.sort(key=lambda t: t[0], reverse=True)
        return Polynomial(self.ring, tuple(terms))

    __rmul__ = __mul__

    def scale(self, c):
        c %= self.ring.char
        if not c:
            return self.ring.zero()
        if c == 1:
            return self
        p = self.ring.char
        return Polynomial(self.ring, tuple((k, m, (c * cc) % p) for k, m, cc in self.terms))

    def mul_term(self, c, mono):
        """Multiply by the single term c * x^mono."""
        p = self.ring.char
        c %= p
        if not c:
            return self.ring.zero()
        dk = self.ring.key(mono)
        return Polynomial(
            self.ring, tuple((k + dk, m + mono, (c * cc) % p) for k, m, cc in self.terms)
        )

    def monic(self):
        if not self.terms:
            return self
        c = self.terms[0][2]
        if c == 1:
            return self
        return self.scale(pow(c, self.ring.char - 2, self.ring.char))

    def __pow__(self, e):
        if e < 0:
            raise ValueError("negative power")
        out = self.ring.one()
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base if e > 1 else base
            e >>= 1
        return out

    # -- conversions -----------------------------------------------------------

    def map_to(self, dst):
        """Re-express this polynomial in ring `dst`, matching variables by
        name.  Fails if a variable with nonzero exponent has no image."""
        if dst is self.ring:
            return self
        src = self.ring
        if dst.char != src.char:
            raise RingMismatch("different characteristics")
        idx = []
        for i, v in enumerate(src.names):
            idx.append(dst._index.get(v, -1))
        pairs = []
        for _, m, c in self.terms:
            vec = [0] * dst.nvars
            for i in range(src.nvars):
                e = (m >> (FIELD_BITS * i)) & FIELD_MASK
                if e:
                    j = idx[i]
                    if j < 0:
                        raise RingMismatch(
                            f"variable {src.names[i]} has no image in {dst!r}"
                        )
                    vec[j] = e
            pairs.append((dst.monomial(vec), c))
        return dst.from_terms(pairs)

    # -- equality / text ---------------------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, Polynomial)
            and self.ring is other.ring
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((id(self.ring), self.terms))

    def __str__(self):
        if not self.terms:
            return "0"
        r = self.ring
        parts = []
        for _, m, c in self.terms:
            if m == 0:
                parts.append(str(c))
            elif c == 1:
                parts.append(r.mono_str(m))
            else:
                parts.append(f"{c}*{r.mono_str(m)}")
        return " + ".join(parts)

    def __repr__(self):
        return f"<{self}>"


def _merge(a, b, sign, p):
    """Merge two descending term tuples; sign applies to b."""
    out = []
    i = j = 0
    la, lb = len(a), len(b)
    while i < la and j < lb:
        ta, tb = a[i], b[j]
        if ta[0] > tb[0]:
            out.append(ta)
            i += 1
        elif ta[0] < tb[0]:
            out.append(tb if sign == 1 else (tb[0], tb[1], p - tb[2]))
            j += 1
        else:
            c = (ta[2] + sign * tb[2]) % p
            if c:
                out.append((ta[0], ta[1], c))
            i += 1
            j += 1
    if i < la:
        out.extend(a[i:])
    while j < lb:
        tb = b[j]
        out.append(tb if sign == 1 else (tb[0], tb[1], p - tb[2]))
        j += 1
    return tuple(out)


# -- spec'd operations ---------------------------------------------------------


def order_cmp(ring_, a, b, order=GREVLEX):
    """Compare packed monomials under `order`: -1, 0 or 1."""
    key = ring_.key_fn(order)
    ka, kb = key(a), key(b)
    return (ka > kb) - (ka < kb)


def exact_div(p, q):
    """Exact division p / q; raises NotDivisible if q does not divide p."""
    if q.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if p.is_zero():
        return p
    if p.ring is not q.ring:
        raise RingMismatch("polynomials from different rings")
    ringo = p.ring
    pp = ringo.char
    qk, qm, qc = q.terms[0]
    qinv = pow(qc, pp - 2, pp)
    qterms = q.terms
    guard = ringo._guard
    quot = []
    rem = list(p.terms)
    while rem:
        k0, m0, c0 = rem[0]
        d = m0 - qm
        if d < 0 or (d & guard):
            raise NotDivisible(f"{q} does not divide {p}")
        c = (c0 * qinv) % pp
        dk = k0 - qk
        quot.append((dk, d, c))
        # rem -= c * x^d * q ; heads cancel by construction
        out = []
        i, j = 1, 1
        lr, lq = len(rem), len(qterms)
        while i < lr and j < lq:
            ta = rem[i]
            kb = qterms[j][0] + dk
            if ta[0] > kb:
                out.append(ta)
                i += 1
            elif ta[0] < kb:
                tq = qterms[j]
                out.append((kb, tq[1] + d, (-c * tq[2]) % pp))
                j += 1
            else:
                cc = (ta[2] - c * qterms[j][2]) % pp
                if cc:
                    out.append((ta[0], ta[1], cc))
                i += 1
                j += 1
        while i < lr:
            out.append(rem[i])
            i += 1
        while j < lq:
            tq = qterms[j]
            out.append((tq[0] + dk, tq[1] + d, (-c * tq[2]) % pp))
            j += 1
        rem = out
    return Polynomial(ringo, tuple(quot))


def bidegree_of(p):
    """Common bidegree of all terms of p, or None if not bihomogeneous."""
    if p.is_zero():
        return None
    r = p.ring
    seen = {r.mono_bidegree(t[1]) for t in p.terms}
    return seen.pop() if len(seen) == 1 else None


def content_in_T(p, block="T"):
    """Coefficients of p regrouped as polynomials in the named block.

    Returns a list of (outer-monomial, inner-polynomial) pairs, outer
    monomials descending, where the outer monomial collects every
    variable outside `block`.  Summing outer * inner recovers p.
    """
    r = p.ring
    bi = r.block_index(block)
    bmask = r.block_expmask(block)
    bdshift = r._bshift[bi]
    groups = {}
    for _, m, c in p.terms:
        inner_low = m & bmask
        bdeg = (m >> bdshift) & FIELD_MASK
        inner = inner_low | (bdeg << bdshift) | (bdeg << r._tshift)
        outer = m - inner
        groups.setdefault(outer, []).append((inner, c))
    key = r.key
    out = []
    for outer in sorted(groups, key=key, reverse=True):
        terms = sorted(
            ((key(m), m, c) for m, c in groups[outer]), key=lambda t: t[0], reverse=True
        )
        out.append((outer, Polynomial(r, tuple(terms))))
    return out


# -- parsing ---------------------------------------------------------------------


def parse_poly(ring_, text):
    """Parse the canonical text form, e.g. '3*x1^2*T2 + 1'.

    Accepts '+' and '-' separators and arbitrary whitespace; round-trips
    the printer's output exactly.
    """
    s = text.strip()
    if not s:
        raise ParseError("empty polynomial text")
    if s == "0":
        return ring_.zero()
    pairs = []
    i, n = 0, len(s)
    sign = 1
    if s[0] in "+-":
        sign = -1 if s[0] == "-" else 1
        i = 1
    while i <= n:
        j = i
        while j < n and s[j] not in "+-":
            j += 1
        term = s[i:j].strip()
        if not term:
            raise ParseError(f"empty term in {text!r}")
        coeff = 1
        exps = {}
        for factor in term.split("*"):
            f = factor.strip()
            if not f:
                raise ParseError(f"empty factor in {term!r}")
            if f[0].isdigit():
                try:
                    coeff *= int(f)
                except ValueError as exc:
                    raise ParseError(f"bad coefficient {f!r}") from exc
            else:
                name, caret, e = f.partition("^")
                name = name.strip()
                if name not in ring_._index:
                    raise ParseError(f"unknown variable {name!r}")
                if caret and not e.strip():
                    raise ParseError(f"missing exponent in {f!r}")
                try:
                    ee = int(e) if e else 1
                except ValueError as exc:
                    raise ParseError(f"bad exponent in {f!r}") from exc
                if ee < 0:
                    raise ParseError("negative exponent")
                exps[name] = exps.get(name, 0) + ee
        pairs.append((ring_.monomial(exps), sign * coeff))
        if j >= n:
            break
        sign = -1 if s[j] == "-" else 1
        i = j + 1
    return ring_.from_terms(pairs)
