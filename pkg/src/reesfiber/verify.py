"""Independent ground-truth computations and the theorem-by-theorem
verification suite.

Ground truth for the Rees ideal is always elimination (never the
candidate), and the fiber ideal is its intersection with the T-ring;
the candidates from the blowup module are computed by disjoint code, so
every equality below is a genuine cross-check.  Closed-form expected
values (multiplicity, Hilbert series, annihilator exponents) are
evaluated by their own small evaluators.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from math import comb

from . import groebner as gb
from .blowup import _SplitMix64, monomials_of_degree, satisfies_gd
from .groebner import Budget, BudgetExceeded


class AllTrialsDegenerate(RuntimeError):
    """Every random draw of general linear combinations failed the
    generality height test."""


CHECK_ORDER = (
    "gd",
    "main_rees",
    "main_fiber",
    "main_rees_socle",
    "main_fiber_socle",
    "multiplicity",
    "hilbert_series",
    "annihilator",
    "radical_form",
    "residual_multiplicity",
)

# selector keyword -> record names
CHECK_GROUPS = {
    "gd": ("gd",),
    "main": ("main_rees", "main_fiber", "main_rees_socle", "main_fiber_socle"),
    "multiplicity": ("multiplicity",),
    "hilbert": ("hilbert_series",),
    "annihilator": ("annihilator",),
    "radical": ("radical_form",),
    "residual": ("residual_multiplicity",),
}


@dataclass
class CheckRecord:
    name: str
    status: str  # pass | fail | timeout | skipped
    certificate: dict = field(default_factory=dict)
    seconds: float = 0.0

    def as_dict(self):
        return {
            "name": self.name,
            "status": self.status,
            "certificate": self.certificate,
            "seconds": round(self.seconds, 3),
        }


@dataclass
class VerificationReport:
    instance: dict
    records: list

    def as_dict(self):
        return {
            "format": 1,
            "instance": self.instance,
            "checks": [r.as_dict() for r in self.records],
            "all_pass": self.all_pass(),
        }

    def to_json(self):
        return json.dumps(self.as_dict(), indent=1, sort_keys=True) + "\n"

    def all_pass(self):
        return all(r.status != "fail" for r in self.records)

    def failed(self):
        return [r for r in self.records if r.status == "fail"]


# -- closed-form expected values ---------------------------------------------------


def expected_multiplicity(d, n):
    """Binomial-sum degree of the image variety: sum of C(n-2-2i, d-2)
    over 0 <= i <= floor((n-d)/2)."""
    if d > n:
        raise ValueError("needs d <= n")
    return sum(comb(n - 2 - 2 * i, d - 2) for i in range((n - d) // 2 + 1))


def multiplicity_by_monomial_count(d, n):
    """The same number counted directly: monomials in d-1 variables of
    degree at most n-d, of even degree when d is odd and odd degree
    when d is even."""
    want_parity = 0 if d % 2 == 1 else 1
    total = 0
    for deg in range(0, n - d + 1):
        if deg % 2 == want_parity:
            total += comb(deg + d - 2, d - 2)
    return total


def annihilator_exponent_bound(d, n):
    """Smallest proven exponent N with m^N * (Rees ideal) inside the
    symmetric-algebra ideal: 1 for d odd, (n-d+1)/2 for d even."""
    return 1 if d % 2 == 1 else (n - d + 1) // 2


def fiber_series_closed_form(d, n, upto):
    """Power-series coefficients (degrees 0..upto) of the closed-form
    Hilbert series of the fiber candidate ring for d < n:

        [ sum_{l=0}^{d-2} C(l+n-d-1, n-d-1) z^l
          + sum_{l=0}^{n-d-2} (-1)^{l+d+1} C(l+d-1, d-1) z^{l+2d-n} ]
        / (1-z)^d
        + (-1)^d sum_{j=0}^{ceil((n-d-3)/2)} C(j+d-1, d-1) z^{2j+2d-n}

    The lower bound j = 0 of the correction sum is validated against
    the Groebner series by the hilbert_series check.  Monomials of
    negative degree appear transiently when 2d < n and must cancel;
    a ValueError reports any surviving negative-degree term.
    """
    if not 3 <= d < n:
        raise ValueError("closed form needs 3 <= d < n")
    series = {}

    def bump(e, c):
        series[e] = series.get(e, 0) + c

    numer = {}
    for ell in range(0, d - 1):
        numer[ell] = numer.get(ell, 0) + comb(ell + n - d - 1, n - d - 1)
    for ell in range(0, n - d - 1):
        sign = -1 if (ell + d + 1) % 2 else 1
        e = ell + 2 * d - n
        numer[e] = numer.get(e, 0) + sign * comb(ell + d - 1, d - 1)
    for e, c in numer.items():
        if not c:
            continue
        for k in range(0, upto - e + 1):
            bump(e + k, c * comb(k + d - 1, d - 1))
    jmax = -((-(n - d - 3)) // 2)  # ceil((n-d-3)/2)
    sign = 1 if d % 2 == 0 else -1
    for j in range(0, jmax + 1):
        bump(2 * j + 2 * d - n, sign * comb(j + d - 1, d - 1))
    bad = {e: c for e, c in series.items() if e < 0 and c}
    if bad:
        raise ValueError(f"negative-degree terms survive in the closed form: {bad}")
    return [series.get(e, 0) for e in range(0, upto + 1)]


# -- ground truth -------------------------------------------------------------------


def rees_by_elimination(inst, budget=None):
    """The Rees ideal: kernel of T_i -> g_i t, computed as
    (T_1 - g_1 t, ..., T_n - g_n t) intersected with the ambient ring by
    eliminating t."""
    S = inst.S
    delta = inst.presentation.generator_degree
    St = S.extended("t", bidegree=(-delta, 1))
    t = St.var("t")
    gens = [
        St.var(f"T{i+1}") - inst.g[i].map_to(St) * t for i in range(inst.n)
    ]
    return gb.eliminate(gb.ideal(St, gens), "t", budget)


def fiber_ideal(J, budget=None):
    """Defining ideal of the image variety: the Rees ideal intersected
    with the T-ring by eliminating the x-block."""
    return gb.eliminate(J, "x", budget)


# -- verification context -----------------------------------------------------------


class VerificationContext:
    """Shared lazily-computed artifacts for one instance.  Whatever
    check triggers a computation pays for it from its budget."""

    def __init__(self, inst, budget_pairs=None, budget_terms=None):
        self.inst = inst
        self.budget_pairs = budget_pairs
        self.budget_terms = budget_terms
        self.budget = None  # budget of the check currently running
        self._J = None
        self._IX = None
        self._expected = None

    def new_budget(self):
        return Budget(self.budget_pairs, self.budget_terms)

    @property
    def J(self):
        if self._J is None:
            self._J = rees_by_elimination(self.inst, self.budget)
        return self._J

    @property
    def IX(self):
        if self._IX is None:
            self._IX = fiber_ideal(self.J, self.budget)
        return self._IX

    @property
    def expected_form_ideal(self):
        """L + I_d(B)S: the expected equations, without the content part."""
        if self._expected is None:
            inst = self.inst
            S = inst.S
            self._expected = gb.ideal(
                S, list(inst.L.gens) + [q.map_to(S) for q in inst.minors_B]
            )
        return self._expected


def _witness(name, poly):
    return {name: str(poly) if poly.nterms() <= 12 else f"{poly.nterms()} terms"}


def _containment(big, small, budget):
    """None if every generator of `small` reduces to zero in `big`,
    else the first offending generator."""
    for g in small.gens:
        if not gb.normal_form(g, big, budget=budget).is_zero():
            return g
    return None


def check_gd(ctx):
    ok, cert = satisfies_gd(ctx.inst.presentation)
    return CheckRecord("gd", "pass" if ok else "fail", {"fitting_heights": cert})


def check_main_rees(ctx):
    inst = ctx.inst
    J = ctx.J
    cert = {}
    # soundness first: the candidate must sit inside the Rees ideal
    bad = _containment(J, inst.candidate_rees, ctx.budget)
    if bad is not None:
        cert.update(_witness("candidate_generator_outside_rees_ideal", bad))
        return CheckRecord("main_rees", "fail", cert)
    cert["candidate_inside_rees_ideal"] = True
    equal = gb.ideal_equal(J, inst.candidate_rees, ctx.budget)
    if not equal:
        for g in J.gens:
            if not gb.normal_form(g, inst.candidate_rees, budget=ctx.budget).is_zero():
                cert.update(_witness("rees_generator_outside_candidate", g))
                break
    cert["equal"] = equal
    cert["expected_form"] = not inst.Cphi.gens
    return CheckRecord("main_rees", "pass" if equal else "fail", cert)


def check_main_fiber(ctx):
    inst = ctx.inst
    IX = ctx.IX
    cert = {}
    bad = _containment(IX, inst.candidate_fiber, ctx.budget)
    if bad is not None:
        cert.update(_witness("candidate_generator_outside_fiber_ideal", bad))
        return CheckRecord("main_fiber", "fail", cert)
    cert["candidate_inside_fiber_ideal"] = True
    equal = gb.ideal_equal(IX, inst.candidate_fiber, ctx.budget)
    cert["equal"] = equal
    # fiber-type identity, tested independently of the candidate:
    # the Rees ideal is the symmetric-algebra ideal plus the fiber ideal
    S = inst.S
    recon = gb.ideal(
        S, list(inst.L.gens) + [q.map_to(S) for q in IX.gens]
    )
    fiber_type = gb.ideal_equal(ctx.J, recon, ctx.budget)
    cert["fiber_type_identity"] = fiber_type
    ok = equal and fiber_type
    return CheckRecord("main_fiber", "pass" if ok else "fail", cert)


def check_main_rees_socle(ctx):
    """The Rees ideal as an iterated socle: L : (x-block) : (T-block).

    Also asserts the Cramer inclusion ladder
    L + I_d(B)S inside L : m inside the Rees ideal
    (the content part of the candidate need not lie in the single
    colon, only in the iterated one)."""
    inst = ctx.inst
    S = inst.S
    cert = {}
    Q1 = gb.ideal_quotient(inst.L, gb.ideal(S, S.block_gens("x")), ctx.budget)
    bad = _containment(Q1, ctx.expected_form_ideal, ctx.budget)
    cert["expected_equations_inside_L_colon_m"] = bad is None
    bad2 = _containment(ctx.J, Q1, ctx.budget)
    cert["L_colon_m_inside_rees_ideal"] = bad2 is None
    Q2 = gb.ideal_quotient(Q1, gb.ideal(S, S.block_gens("T")), ctx.budget)
    equal = gb.ideal_equal(Q2, ctx.J, ctx.budget)
    cert["equal"] = equal
    ok = equal and bad is None and bad2 is None
    return CheckRecord("main_rees_socle", "pass" if ok else "fail", cert)


def check_main_fiber_socle(ctx):
    """The fiber ideal as a socle: I_d(B) : (T-block)."""
    inst = ctx.inst
    T = inst.T
    cert = {}
    IdB = gb.ideal(T, inst.minors_B)
    QT = gb.ideal_quotient(IdB, gb.ideal(T, T.block_gens("T")), ctx.budget)
    bad = _containment(QT, inst.candidate_fiber, ctx.budget)
    cert["candidate_inside_minor_socle"] = bad is None
    bad2 = _containment(ctx.IX, QT, ctx.budget)
    cert["minor_socle_inside_fiber_ideal"] = bad2 is None
    equal = gb.ideal_equal(QT, ctx.IX, ctx.budget)
    cert["equal"] = equal
    ok = equal and bad is None and bad2 is None
    return CheckRecord("main_fiber_socle", "pass" if ok else "fail", cert)


def check_multiplicity(ctx):
    inst = ctx.inst
    d, n = inst.d, inst.n
    if d > n:
        return CheckRecord("multiplicity", "skipped", {"reason": "needs d <= n"})
    hd = gb.hilbert(ctx.IX, ctx.budget)
    want = expected_multiplicity(d, n)
    count = multiplicity_by_monomial_count(d, n)
    ht_minors = (
        gb.dim_height(gb.ideal(inst.T, inst.minors_B), ctx.budget)[1]
        if inst.minors_B
        else 0
    )
    cert = {
        "dim": hd.dim,
        "expected_dim": d,
        "multiplicity": hd.multiplicity,
        "expected_multiplicity": want,
        "monomial_count": count,
        "height_of_minors": ht_minors,
        "n_minus_dim": n - hd.dim,
    }
    ok = (
        hd.dim == d
        and hd.multiplicity == want
        and want == count
        and ht_minors == n - hd.dim
    )
    return CheckRecord("multiplicity", "pass" if ok else "fail", cert)


def check_hilbert_series(ctx):
    inst = ctx.inst
    d, n = inst.d, inst.n
    if not d < n:
        return CheckRecord("hilbert_series", "skipped", {"reason": "needs d < n"})
    upto = 2 * d
    hd = gb.hilbert(inst.candidate_fiber, ctx.budget)
    got = hd.series(upto)
    want = fiber_series_closed_form(d, n, upto)
    ht = gb.dim_height(gb.ideal(inst.T, inst.minors_B), ctx.budget)[1]
    cert = {
        "series_groebner": got,
        "series_closed_form": want,
        "multiplicity": hd.multiplicity,
        "expected_multiplicity": expected_multiplicity(d, n),
        "height_of_minors": ht,
        "expected_height": n - d,
        "dim": hd.dim,
    }
    ok = (
        got == want
        and hd.multiplicity == expected_multiplicity(d, n)
        and ht == n - hd.dim
        and ht == n - d
    )
    return CheckRecord("hilbert_series", "pass" if ok else "fail", cert)


def check_annihilator(ctx):
    """Minimal N with m^N * (Rees ideal) inside the symmetric-algebra
    ideal, compared against the proven bound (1 for d odd,
    (n-d+1)/2 for d even)."""
    inst = ctx.inst
    d, n = inst.d, inst.n
    S = inst.S
    bound = annihilator_exponent_bound(d, n)
    found = None
    for N in range(0, bound + 1):
        ok = True
        for mono in monomials_of_degree(S, "x", N):
            mu = S.from_terms([(mono, 1)])
            for q in ctx.J.gens:
                if not gb.normal_form(mu * q, inst.L, budget=ctx.budget).is_zero():
                    ok = False
                    break
            if not ok:
                break
        if ok:
            found = N
            break
    cert = {"minimal_exponent": found, "bound": bound}
    return CheckRecord("annihilator", "pass" if found is not None else "fail", cert)


def check_radical_form(ctx):
    """Up to radical, the minors of B already define everything: the
    fiber ideal is the radical of I_d(B) and the Rees ideal is the
    radical of L + I_d(B)S."""
    inst = ctx.inst
    T = inst.T
    cert = {}
    IdB = gb.ideal(T, inst.minors_B)
    bad = _containment(ctx.IX, IdB, ctx.budget)
    cert["minors_inside_fiber_ideal"] = bad is None
    fiber_rad = all(
        gb.radical_membership(g, IdB, ctx.budget) for g in ctx.IX.gens
    )
    cert["fiber_generators_in_radical_of_minors"] = fiber_rad
    LB = ctx.expected_form_ideal
    bad2 = _containment(ctx.J, LB, ctx.budget)
    cert["expected_equations_inside_rees_ideal"] = bad2 is None
    rees_rad = all(gb.radical_membership(g, LB, ctx.budget) for g in ctx.J.gens)
    cert["rees_generators_in_radical_of_expected"] = rees_rad
    ok = bad is None and bad2 is None and fiber_rad and rees_rad
    return CheckRecord("radical_form", "pass" if ok else "fail", cert)


def check_residual_multiplicity(ctx, trial_count=5):
    """Multiplicity of R / ((f_1..f_{d-1}) : I) for general linear
    combinations f of the generators: must be a 1-dimensional ring of
    the same multiplicity as the image variety.  Draws failing the
    height-(d-1) generality test are redrawn."""
    inst = ctx.inst
    d, n, p = inst.d, inst.n, inst.characteristic
    if d > n:
        return CheckRecord(
            "residual_multiplicity", "skipped", {"reason": "needs d <= n"}
        )
    R = inst.R
    I = gb.ideal(R, inst.g)
    rng = _SplitMix64(((inst.seed or 0) << 24) ^ 0x5E51D)
    want = expected_multiplicity(d, n)
    tried = 0
    for trial in range(trial_count):
        tried += 1
        fs = []
        for _ in range(d - 1):
            f = R.zero()
            for q in inst.g:
                c = rng.modn(p)
                if c:
                    f = f + q.scale(c)
            fs.append(f)
        if any(f.is_zero() for f in fs):
            continue
        Jp = gb.ideal_quotient(gb.ideal(R, fs), I, ctx.budget)
        dim, ht = gb.dim_height(Jp, ctx.budget)
        if ht != d - 1:
            continue
        hd = gb.hilbert(Jp, ctx.budget)
        cert = {
            "trials": tried,
            "dim": hd.dim,
            "height": ht,
            "multiplicity": hd.multiplicity,
            "expected_multiplicity": want,
        }
        ok = hd.dim == 1 and hd.multiplicity == want
        return CheckRecord(
            "residual_multiplicity", "pass" if ok else "fail", cert
        )
    raise AllTrialsDegenerate(f"no general draw in {tried} trials")


_CHECK_FUNCS = {
    "gd": check_gd,
    "main_rees": check_main_rees,
    "main_fiber": check_main_fiber,
    "main_rees_socle": check_main_rees_socle,
    "main_fiber_socle": check_main_fiber_socle,
    "multiplicity": check_multiplicity,
    "hilbert_series": check_hilbert_series,
    "annihilator": check_annihilator,
    "radical_form": check_radical_form,
    "residual_multiplicity": check_residual_multiplicity,
}


def select_checks(selection=None):
    """Record names for a selection of group keywords, in canonical
    dependency order."""
    if not selection:
        return CHECK_ORDER
    names = set()
    for key in selection:
        group = CHECK_GROUPS.get(key)
        if group is None:
            raise ValueError(
                f"unknown check {key!r}; choose from {sorted(CHECK_GROUPS)}"
            )
        names.update(group)
    return tuple(name for name in CHECK_ORDER if name in names)


def run_checks(inst, selection=None, budget_pairs=None, budget_terms=None):
    """Run the selected checks in dependency order and return the
    report.  A failing genericity check skips everything downstream; a
    budget overrun marks that check `timeout` and continues."""
    names = select_checks(selection)
    ctx = VerificationContext(inst, budget_pairs, budget_terms)
    records = []
    gd_failed = False
    for name in names:
        if gd_failed and name != "gd":
            records.append(
                CheckRecord(name, "skipped", {"reason": "genericity check failed"})
            )
            continue
        ctx.budget = ctx.new_budget()
        start = time.perf_counter()
        try:
            rec = _CHECK_FUNCS[name](ctx)
        except BudgetExceeded as exc:
            rec = CheckRecord(
                name,
                "timeout",
                {"what": exc.what, "pairs": exc.pairs, "terms": exc.terms},
            )
        except AllTrialsDegenerate as exc:
            rec = CheckRecord(name, "fail", {"reason": str(exc)})
        rec.seconds = time.perf_counter() - start
        records.append(rec)
        if name == "gd" and rec.status == "fail":
            gd_failed = True
    meta = {
        "d": inst.d,
        "n": inst.n,
        "char": inst.characteristic,
        "seed": inst.seed,
        "resamples": inst.presentation.resamples,
    }
    return VerificationReport(meta, records)
