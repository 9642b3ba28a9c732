"""Construction of blowup-algebra data from an alternating matrix of
linear forms: Buchsbaum-Eisenbud generators, the Jacobian dual, the
bordered alternating matrix, its signed submaximal Pfaffians with their
common factor, the content ideal (computed three ways), the
symmetric-algebra ideal, and the candidate Rees and fiber ideals.

Every structural identity the construction relies on is re-verified
symbolically at build time; a violation raises InvariantViolation.
"""

from __future__ import annotations

import itertools
import json

from . import groebner as gb
from . import polyring as pr
from .pfaffian import (
    PolyMatrix,
    delta_J,
    maximal_minors,
    mat_vec,
    pfaffian_of_complement,
    signed_submax_pfaffians,
    vec_mat,
)

DEFAULT_CHAR = 32003


class DegenerateInstance(RuntimeError):
    """A random draw failed the height-three or G_d genericity check."""


class InvariantViolation(RuntimeError):
    """A construction identity that must hold symbolically failed."""


class ValidationError(ValueError):
    """Malformed instance JSON."""


class _SplitMix64:
    """Tiny deterministic PRNG, stable across Python versions."""

    def __init__(self, seed):
        self.state = seed & 0xFFFFFFFFFFFFFFFF

    def next64(self):
        self.state = (self.state + 0x9E3779B97F4A7C15) & 0xFFFFFFFFFFFFFFFF
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & 0xFFFFFFFFFFFFFFFF
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & 0xFFFFFFFFFFFFFFFF
        return z ^ (z >> 31)

    def modn(self, n):
        return self.next64() % n


def base_ring(d, characteristic=DEFAULT_CHAR):
    xs = tuple(f"x{i+1}" for i in range(d))
    return pr.ring(characteristic, [("x", xs, (1, 0))])


def fiber_ring(n, characteristic=DEFAULT_CHAR):
    Ts = tuple(f"T{i+1}" for i in range(n))
    return pr.ring(characteristic, [("T", Ts, (0, 1))])


def ambient_ring(d, n, characteristic=DEFAULT_CHAR):
    xs = tuple(f"x{i+1}" for i in range(d))
    Ts = tuple(f"T{i+1}" for i in range(n))
    return pr.ring(characteristic, [("x", xs, (1, 0)), ("T", Ts, (0, 1))])


class AlternatingPresentation:
    """An n x n alternating matrix of linear forms in d variables, with
    reproducibility metadata."""

    __slots__ = ("d", "n", "characteristic", "seed", "resamples", "phi", "ring")

    def __init__(self, d, n, characteristic, phi, seed=None, resamples=0):
        if n % 2 == 0:
            raise ValueError("n must be odd")
        if d < 3 or n < 3:
            raise ValueError("need d >= 3 and n >= 3")
        if phi.rows != n or phi.cols != n:
            raise ValueError("phi has the wrong shape")
        if not phi.is_alternating():
            raise ValidationError("phi is not alternating")
        for row in phi.entries:
            for e in row:
                if not e.is_zero() and e.homogeneous_degree() != 1:
                    raise ValidationError("phi entry is not a linear form")
        self.d = d
        self.n = n
        self.characteristic = characteristic
        self.seed = seed
        self.resamples = resamples
        self.phi = phi
        self.ring = phi.ring

    @property
    def generator_degree(self):
        return (self.n - 1) // 2


def random_presentation(d, n, characteristic=DEFAULT_CHAR, seed=0, attempt=0):
    """Seeded alternating matrix with uniformly random linear entries
    above the diagonal.  `attempt` is the resample counter mixed into
    the stream so redraws are reproducible."""
    if n % 2 == 0:
        raise ValueError("n must be odd")
    if d < 3 or n < 3:
        raise ValueError("need d >= 3 and n >= 3")
    R = base_ring(d, characteristic)
    rng = _SplitMix64((seed << 20) ^ attempt ^ 0xA5A5)
    xs = R.gens()
    zero = R.zero()
    rows = [[zero] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            e = zero
            for k in range(d):
                c = rng.modn(characteristic)
                if c:
                    e = e + xs[k].scale(c)
            rows[i][j] = e
            rows[j][i] = -e
    phi = PolyMatrix(R, rows)
    return AlternatingPresentation(d, n, characteristic, phi, seed, attempt)


def be_generators(pres):
    """Signed submaximal Pfaffians g of phi with phi * g^t = 0 verified;
    raises DegenerateInstance if (g) has height != 3."""
    phi = pres.phi
    g = signed_submax_pfaffians(phi)
    if all(p.is_zero() for p in g):
        raise DegenerateInstance("all submaximal Pfaffians vanish")
    for entry in mat_vec(phi, g):
        if not entry.is_zero():
            raise InvariantViolation("phi * g^t != 0: sign convention broken")
    ht = gb.dim_height(gb.ideal(pres.ring, g))[1]
    if ht != 3:
        raise DegenerateInstance(f"generator ideal has height {ht}, need 3")
    return g


def jacobian_dual(phi, T_ring):
    """The unique d x n matrix B over the T-variables with
    row-vector identity (T_1..T_n) * phi = (x_1..x_d) * B, obtained by
    matching coefficients of x_j."""
    R = phi.ring
    n = phi.rows
    d = len(R.blocks[R.block_index("x")].vars)
    Tvars = T_ring.block_gens("T")
    if len(Tvars) != n:
        raise ValueError("T ring size does not match phi")
    xmonos = [R.monomial({f"x{j+1}": 1}) for j in range(d)]
    out = [[T_ring.zero() for _ in range(n)] for _ in range(d)]
    for c in range(n):
        for i in range(n):
            e = phi.entries[i][c]
            if e.is_zero():
                continue
            if e.homogeneous_degree() != 1:
                raise ValueError("phi entry is not linear in x")
            for j in range(d):
                coef = e.coeff(xmonos[j])
                if coef:
                    out[j][c] = out[j][c] + Tvars[i].scale(coef)
    return PolyMatrix(T_ring, out)


def bordered_matrix(phi_S, B_S):
    """The (n+d) x (n+d) alternating matrix [[phi, -B^t], [B, 0]]."""
    n = phi_S.rows
    d = B_S.rows
    if B_S.cols != n:
        raise ValueError("shape mismatch between phi and B")
    ring = phi_S.ring
    zero = ring.zero()
    Bt = B_S.transpose()
    rows = []
    for i in range(n):
        rows.append(list(phi_S.entries[i]) + [-Bt.entries[i][j] for j in range(d)])
    for i in range(d):
        rows.append(list(B_S.entries[i]) + [zero] * d)
    M = PolyMatrix(ring, rows)
    if not M.is_alternating():
        raise InvariantViolation("bordered matrix is not alternating")
    return M


class BlowupInstance:
    """All derived data of one presentation.  Fields follow the
    construction: g (generators), B (Jacobian dual), bordered matrix,
    F (signed submaximal Pfaffians of the bordered matrix), common
    factor h, content ideal Cphi in the T-ring, symmetric-algebra ideal
    L in the ambient ring, and the candidate Rees/fiber ideals."""

    __slots__ = (
        "presentation",
        "R",
        "T",
        "S",
        "phi_S",
        "g",
        "B",
        "B_S",
        "bordered",
        "F",
        "h",
        "Cphi",
        "L",
        "minors_B",
        "candidate_rees",
        "candidate_fiber",
    )

    @property
    def d(self):
        return self.presentation.d

    @property
    def n(self):
        return self.presentation.n

    @property
    def characteristic(self):
        return self.presentation.characteristic

    @property
    def seed(self):
        return self.presentation.seed


def f_vector(bordered, d, n):
    """Signed submaximal Pfaffians F of the bordered matrix and the
    common factor h with (F_1..F_{n+d}) = h * (T_1..T_n, -x_1..-x_d).

    For n + d even all F_i and h vanish identically."""
    S = bordered.ring
    m = n + d
    if m % 2 == 0:
        return [S.zero()] * m, S.zero()
    F = signed_submax_pfaffians(bordered)
    if all(p.is_zero() for p in F):
        return F, S.zero()
    xd = S.var(f"x{d}")
    h = -pr.exact_div(F[m - 1], xd)
    Tvars = S.block_gens("T")
    xvars = S.block_gens("x")
    for i in range(n):
        if F[i] != h * Tvars[i]:
            raise InvariantViolation("F_i != h*T_i: factorization broken")
    for j in range(d):
        if F[n + j] != -(h * xvars[j]):
            raise InvariantViolation("F_{n+j} != -h*x_j: factorization broken")
    if h:
        bd = h.bidegree()
        want = ((n - d - 1) // 2, d - 1)
        if bd != want:
            raise InvariantViolation(f"h has bidegree {bd}, expected {want}")
    return F, h


def build_instance(d, n, characteristic=DEFAULT_CHAR, seed=0, max_resamples=32, require_gd=True):
    """Draw presentations until one passes the height-3 (and optionally
    G_d) genericity checks, then derive the full instance."""
    attempt = 0
    while True:
        pres = random_presentation(d, n, characteristic, seed, attempt)
        try:
            g = be_generators(pres)
        except DegenerateInstance:
            attempt += 1
            if attempt > max_resamples:
                raise
            continue
        if require_gd and not satisfies_gd(pres)[0]:
            attempt += 1
            if attempt > max_resamples:
                raise DegenerateInstance("G_d kept failing across resamples")
            continue
        return derive_instance(pres, g)


def instance_from_presentation(pres):
    """Derive the full instance from an explicit presentation (raises
    DegenerateInstance rather than resampling)."""
    return derive_instance(pres, be_generators(pres))


def derive_instance(pres, g):
    d, n, p = pres.d, pres.n, pres.characteristic
    inst = BlowupInstance()
    inst.presentation = pres
    inst.R = pres.ring
    inst.T = fiber_ring(n, p)
    inst.S = ambient_ring(d, n, p)
    inst.g = g
    S = inst.S
    inst.phi_S = pres.phi.map_to(S)
    inst.B = jacobian_dual(pres.phi, inst.T)
    inst.B_S = inst.B.map_to(S)

    Tvars = S.block_gens("T")
    xvars = S.block_gens("x")
    lhs = vec_mat(list(Tvars), inst.phi_S)
    rhs = vec_mat(list(xvars), inst.B_S)
    if lhs != rhs:
        raise InvariantViolation("T*phi != x*B: Jacobian dual broken")
    for e in mat_vec(inst.B_S, list(Tvars)):
        if not e.is_zero():
            raise InvariantViolation("B*T^t != 0")

    inst.bordered = bordered_matrix(inst.phi_S, inst.B_S)
    row = vec_mat(list(Tvars) + [-x for x in xvars], inst.bordered)
    if any(not e.is_zero() for e in row):
        raise InvariantViolation("(T,-x) does not annihilate the bordered matrix")

    inst.F, inst.h = f_vector(inst.bordered, d, n)

    cgens = content_generators(inst, "content")
    inst.Cphi = gb.ideal(inst.T, cgens)
    expected_zero = n <= d or (n + d) % 2 == 0
    if expected_zero != inst.Cphi.is_zero_ideal():
        raise InvariantViolation("content ideal (non)vanishing contradicts n,d parity")
    for q in inst.Cphi.gens:
        if q.homogeneous_degree() != d - 1:
            raise InvariantViolation("content generator not of degree d-1")

    inst.L = symmetric_ideal(inst)
    inst.minors_B = [q for q in maximal_minors(inst.B) if q] if d <= n else []
    inst.candidate_rees, inst.candidate_fiber = candidates(inst)
    return inst


def symmetric_ideal(inst):
    """Ideal of the ambient ring generated by the entries of T * phi
    (equivalently x * B); each generator is bihomogeneous of bidegree
    (1, 1)."""
    S = inst.S
    ent = vec_mat(list(S.block_gens("T")), inst.phi_S)
    gens = [e for e in ent if e]
    for e in gens:
        if e.bidegree() != (1, 1):
            raise InvariantViolation("symmetric-algebra generator not of bidegree (1,1)")
    return gb.ideal(S, gens)


def candidates(inst):
    """(candidate Rees ideal in S, candidate fiber ideal in T): the
    symmetric-algebra ideal plus the fiber candidate extended to S, and
    the d x d minors of B plus the content ideal."""
    T, S = inst.T, inst.S
    fiber = gb.ideal(T, list(inst.minors_B) + list(inst.Cphi.gens))
    rees = gb.ideal(S, list(inst.L.gens) + [q.map_to(S) for q in fiber.gens])
    return rees, fiber


def content_ideal(inst, method="content", index=1):
    """The content ideal as an IdealHandle in the T-ring, by any of the
    three generator constructions."""
    return gb.ideal(inst.T, content_generators(inst, method, index))


def satisfies_gd(pres):
    """Fitting-ideal height test: (True, certificate) iff
    ht I_{n-i}(phi) >= i + 1 for every 1 <= i <= d - 1."""
    from .pfaffian import minors

    d, n = pres.d, pres.n
    R = pres.ring
    cert = []
    ok = True
    for i in range(1, d):
        r = n - i
        mm = [q for q in minors(pres.phi, r) if q]
        if not mm:
            ht = 0
        else:
            ht = gb.dim_height(gb.ideal(R, mm))[1]
        cert.append({"i": i, "minor_size": r, "height": ht, "required": i + 1})
        if ht < i + 1:
            ok = False
    return ok, cert


# -- the content ideal, three ways -----------------------------------------------


def content_generators(inst, method="content", index=1):
    """Generators of the content ideal in the T-ring.

    method 'content': group the last Pfaffian F_{n+d} by its monomials
    in the x-variables.  method 'fM': coefficient-extraction formula
    against Pf_J(phi_i) and the d x d minors of B, divided exactly by
    T_index.  method 'hM': the analogous row-dropped formula against
    Pf_J(phi) and the (d-1) x (d-1) minors of B missing row `index`,
    with no division.
    """
    d, n = inst.d, inst.n
    T = inst.T
    if method == "content":
        if inst.h.is_zero():
            return []
        last = inst.F[n + d - 1]
        return [q.map_to(T) for _, q in pr.content_in_T(last)]
    if (n + d) % 2 == 0 or n <= d:
        return []
    if method == "fM":
        return _fm_generators(inst, index)
    if method == "hM":
        return _hm_generators(inst, index)
    raise ValueError(f"unknown content method {method!r}")


def _x_coeff(poly, mono):
    """Coefficient of the given x-monomial in a polynomial of the base
    ring (contraction by the matching dual monomial)."""
    return poly.coeff(mono)


def _fm_generators(inst, index):
    """f_M over all monomials M of degree (n-d-1)/2 in d slots:
    f_M = (1/T_i) * sum_J (-1)^{|J|} (coeff of x^M in Pf_J(phi_i)) * Delta_J(B),
    J running over the d-subsets of {1..n} minus {i}, |J| the sum of the
    1-based members of J minus d plus the count of members below i."""
    d, n = inst.d, inst.n
    if not 1 <= index <= n:
        raise ValueError("fM index out of range")
    T = inst.T
    R = inst.R
    phi = inst.presentation.phi
    i0 = index - 1
    Ti = T.var(f"T{index}")
    deg = (n - d - 1) // 2
    others = [j for j in range(n) if j != i0]
    pf_memo = {}
    terms = []  # (sign, Pf poly, Delta poly) per J
    for J in itertools.combinations(others, d):
        s = sum(1 for j in J if j < i0)
        weight = sum(j + 1 for j in J) - d + s
        pf = pfaffian_of_complement(phi, (i0,) + J, pf_memo)
        if pf.is_zero():
            continue
        delta = delta_J(inst.B, J)
        if delta.is_zero():
            continue
        terms.append((-1 if weight % 2 else 1, pf, delta))
    out = []
    for M in monomials_of_degree(R, "x", deg):
        acc = T.zero()
        for sign, pf, delta in terms:
            c = _x_coeff(pf, M)
            if c:
                acc = acc + delta.scale(sign * c)
        if acc:
            out.append(pr.exact_div(acc, Ti))
    return out


def _hm_generators(inst, index):
    """h_M over all monomials M of degree (n-d+1)/2 in d slots divisible
    by slot `index`:
    h_M = sum_J (-1)^{||J||} (coeff of x^M in Pf_J(phi)) * Delta_J(B_j),
    J running over the (d-1)-subsets of {1..n}, ||J|| the sum of the
    1-based members, Delta taken with row `index` of B removed."""
    d, n = inst.d, inst.n
    if not 1 <= index <= d:
        raise ValueError("hM index out of range")
    T = inst.T
    R = inst.R
    phi = inst.presentation.phi
    j0 = index - 1
    deg = (n - d + 1) // 2
    pf_memo = {}
    terms = []
    for J in itertools.combinations(range(n), d - 1):
        weight = sum(j + 1 for j in J)
        pf = pfaffian_of_complement(phi, J, pf_memo)
        if pf.is_zero():
            continue
        delta = delta_J(inst.B, J, drop_row=j0)
        if delta.is_zero():
            continue
        terms.append((-1 if weight % 2 else 1, pf, delta))
    out = []
    for M in monomials_of_degree(R, "x", deg):
        if not (M >> (pr.FIELD_BITS * j0)) & pr.FIELD_MASK:
            continue  # M must be divisible by the index-th slot
        acc = T.zero()
        for sign, pf, delta in terms:
            c = _x_coeff(pf, M)
            if c:
                acc = acc + delta.scale(sign * c)
        if acc:
            out.append(acc)
    return out


def monomials_of_degree(ring, block, deg):
    """Packed monomials of the given total degree in one block,
    deterministic order."""
    b = ring.blocks[ring.block_index(block)]
    k = len(b.vars)
    out = []
    for combo in itertools.combinations_with_replacement(range(k), deg):
        vec = {}
        for c in combo:
            name = b.vars[c]
            vec[name] = vec.get(name, 0) + 1
        out.append(ring.monomial(vec))
    return out


# -- instance JSON ---------------------------------------------------------------


def instance_to_json(inst_or_pres):
    """Canonical JSON text: characteristic, shape, seed, and the upper
    triangle of phi as coefficient vectors (row-major)."""
    pres = getattr(inst_or_pres, "presentation", inst_or_pres)
    d, n, p = pres.d, pres.n, pres.characteristic
    R = pres.ring
    xmonos = [R.monomial({f"x{j+1}": 1}) for j in range(d)]
    tri = []
    for i in range(n - 1):
        row = []
        for j in range(i + 1, n):
            e = pres.phi.entries[i][j]
            row.append([e.coeff(m) for m in xmonos])
        tri.append(row)
    doc = {
        "format": 1,
        "char": p,
        "d": d,
        "n": n,
        "seed": pres.seed,
        "resamples": pres.resamples,
        "phi": tri,
    }
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def presentation_from_json(text):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"not valid JSON: {exc}") from exc
    for field in ("format", "char", "d", "n", "phi"):
        if field not in doc:
            raise ValidationError(f"missing field {field!r}")
    if doc["format"] != 1:
        raise ValidationError(f"unsupported format {doc['format']!r}")
    d, n, p = doc["d"], doc["n"], doc["char"]
    if not (isinstance(d, int) and isinstance(n, int) and isinstance(p, int)):
        raise ValidationError("d, n, char must be integers")
    if n % 2 == 0:
        raise ValidationError("n must be odd")
    tri = doc["phi"]
    if len(tri) != n - 1 or any(len(tri[i]) != n - 1 - i for i in range(n - 1)):
        raise ValidationError("phi upper triangle has the wrong shape")
    R = base_ring(d, p)
    xs = R.gens()
    zero = R.zero()
    rows = [[zero] * n for _ in range(n)]
    for i in range(n - 1):
        for k, coeffs in enumerate(tri[i]):
            j = i + 1 + k
            if len(coeffs) != d:
                raise ValidationError("coefficient vector has the wrong length")
            e = zero
            for a, c in enumerate(coeffs):
                if not isinstance(c, int) or not 0 <= c < p:
                    raise ValidationError("coefficient out of range")
                if c:
                    e = e + xs[a].scale(c)
            rows[i][j] = e
            rows[j][i] = -e
    phi = PolyMatrix(R, rows)
    return AlternatingPresentation(
        d, n, p, phi, doc.get("seed"), doc.get("resamples", 0)
    )
