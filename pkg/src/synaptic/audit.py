"""Randomized and exhaustive law checks behind ``synaptic axiom-audit``.

Each law is a function ``(rng, config) -> (ok, detail)`` run on ``cases``
independent seeded instances; the extremal-state law instead scans a
rational grid exhaustively. Case streams are derived from
``(seed, law name, case id)`` so that a reported witness can be replayed in
isolation, and reports contain no timings, so identical configurations give
byte-identical output.
"""
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional

import numpy as np

from . import commutative_model as cm
from . import generators as gen
from .commutative_model import DiscreteSpace, FnElement
from .errors import DiagnosticError, InputError
from .funcalc import BUILTINS, func_calc_eigen, func_calc_rs
from .loomis_sikorski import QuotientMorphism, audit_morphism
from .matrix_model import (
    Projection,
    SymMatrix,
    carrier,
    commutes,
    invert,
    jordan_product,
    leq,
    maxabs,
    order_unit_norm,
    quadratic_map,
    spectral_resolution,
    spectrum,
    sqrt_psd,
)
from .projection_lattice import complement, join, meet, proj_leq
from .states import State, evaluate, expectation, is_extremal_commutative

INJECTIONS = ("corrupt-projection",)
MAX_WITNESSES = 3


@dataclass(frozen=True)
class AuditConfig:
    seed: int = 0
    dim_max: int = 6
    cases: int = 500
    tol: float = 1e-10
    inject: Optional[str] = None

    def __post_init__(self):
        if self.dim_max < 1:
            raise InputError("dim_max must be at least 1")
        if self.cases < 1:
            raise InputError("cases must be at least 1")
        if self.tol <= 0:
            raise InputError("tol must be positive")
        if self.inject is not None and self.inject not in INJECTIONS:
            raise InputError(f"unknown injection {self.inject!r}; choose from {INJECTIONS}")


def _dim(rng, cfg):
    return int(rng.integers(1, cfg.dim_max + 1))


def _scale(*ms):
    return max([1.0] + [order_unit_norm(m) for m in ms])


def _lt(cfg, s=1.0):
    # law tolerance: generous multiple of the working tolerance, scaled
    return 10.0 * cfg.tol * s


# ---------------------------------------------------------- SA1 to SA7


def law_sa1_order_unit(rng, cfg):
    a = gen.random_symmetric(rng, _dim(rng, cfg))
    n = order_unit_norm(a)
    eye = SymMatrix.identity(a.dim)
    lt = _lt(cfg, _scale(a))
    ok = leq(-n * eye, a, lt) and leq(a, n * eye, lt) and abs(n - spectrum(a).norm) <= lt
    return ok, {"a": a.entries, "norm": n}


def law_sa2_squares_positive(rng, cfg):
    a = gen.random_symmetric(rng, _dim(rng, cfg))
    sq = jordan_product(a, a)
    lo = float(sq.eigensystem().eigenvalues[0])
    return lo >= -_lt(cfg, _scale(a) ** 2), {"a": a.entries, "min_eig_a2": lo}


def law_sa3_quadratic_positive(rng, cfg):
    dim = _dim(rng, cfg)
    a, b = gen.random_symmetric(rng, dim), gen.random_psd(rng, dim)
    q = quadratic_map(a, b)
    lo = float(q.eigensystem().eigenvalues[0])
    direct = maxabs(q.entries - a.entries @ b.entries @ a.entries)
    s = _scale(a) ** 2 * _scale(b)
    return lo >= -_lt(cfg, s) and direct <= _lt(cfg, s), {"a": a.entries, "b": b.entries, "min_eig": lo}


def law_sa4_aba_zero(rng, cfg):
    dim = _dim(rng, cfg)
    q = gen.random_orthogonal(rng, dim)
    k = int(rng.integers(0, dim + 1))
    # a vanishes on the first k basis vectors, b >= 0 lives there
    a_vals = np.concatenate([np.zeros(k), rng.uniform(0.5, 3.0, dim - k) * rng.choice([-1, 1], dim - k)])
    b_vals = np.concatenate([rng.uniform(0.0, 2.0, k), np.zeros(dim - k)])
    a = SymMatrix._wrap((q * a_vals) @ q.T)
    b = SymMatrix._wrap((q * b_vals) @ q.T)
    aba = maxabs(quadratic_map(a, b).entries)
    ab = maxabs(a.entries @ b.entries)
    s = _scale(a) ** 2 * _scale(b)
    ok = aba <= _lt(cfg, s) and ab <= 10 * _lt(cfg, s)
    return ok, {"a": a.entries, "b": b.entries, "max|aba|": aba, "max|ab|": ab}


def law_sa5_square_root(rng, cfg):
    dim = _dim(rng, cfg)
    b = gen.random_psd(rng, dim)
    r = sqrt_psd(b)
    lt = _lt(cfg, _scale(b))
    sq_ok = maxabs(r.entries @ r.entries - b.entries) <= lt
    pos_ok = float(r.eigensystem().eigenvalues[0]) >= -lt
    # a member of C(b): a polynomial in b plus anything on b's eigenspaces
    c = SymMatrix._wrap(b.entries @ b.entries - 2.0 * b.entries)
    cc_ok = commutes(r, c, lt) and commutes(r, b, lt)
    return sq_ok and pos_ok and cc_ok, {"b": b.entries, "square": sq_ok, "positive": pos_ok, "commutant": cc_ok}


def law_sa6_carrier(rng, cfg):
    dim = _dim(rng, cfg)
    a = gen.random_symmetric(rng, dim, kind="clustered")
    p = carrier(a)
    if rng.random() < 0.5:
        # b supported on the kernel of a, so ab = 0
        k = complement(p)
        x = rng.standard_normal((dim, dim))
        b = SymMatrix._wrap(k.entries @ ((x + x.T) / 2) @ k.entries)
    else:
        b = gen.random_symmetric(rng, dim)
    s = _scale(a) * _scale(b)
    lt = _lt(cfg, s)
    ab_zero = maxabs(a.entries @ b.entries) <= lt
    pb_zero = maxabs(p.entries @ b.entries) <= 10 * lt
    idem = p.idempotence_defect() <= cfg.tol * 10
    return ab_zero == pb_zero and idem, {"a": a.entries, "b": b.entries, "ab=0": ab_zero, "pb=0": pb_zero}


def law_sa7_inverse(rng, cfg):
    dim = _dim(rng, cfg)
    a = SymMatrix.identity(dim) + gen.random_psd(rng, dim)
    inv = invert(a)
    lt = _lt(cfg, _scale(a))
    eye = np.eye(dim)
    ok = maxabs(a.entries @ inv.entries - eye) <= lt and maxabs(inv.entries @ a.entries - eye) <= lt
    return ok, {"a": a.entries}


def law_cv_finite(rng, cfg):
    """Ascending commuting sequence converging to ``a``, all in ``C(b)``."""
    dim = _dim(rng, cfg)
    q = gen.random_orthogonal(rng, dim)
    vals = rng.uniform(-2.0, 2.0, dim)
    a = SymMatrix._wrap((q * vals) @ q.T)
    b = SymMatrix._wrap((q * rng.uniform(-2.0, 2.0, dim)) @ q.T)
    seq = [SymMatrix._wrap((q * (vals - 2.0 ** -n)) @ q.T) for n in range(1, 12)]
    lt = _lt(cfg, 4.0)
    ascending = all(leq(x, y, lt) for x, y in zip(seq, seq[1:]))
    in_cb = all(commutes(x, b, lt) for x in seq)
    gaps = [order_unit_norm(a - x) for x in seq]
    converges = all(g2 <= g1 for g1, g2 in zip(gaps, gaps[1:])) and gaps[-1] <= 2.0 ** -10
    ok = ascending and in_cb and converges and commutes(a, b, lt)
    return ok, {"a": a.entries, "b": b.entries, "last_gap": gaps[-1]}


def law_resolution_reconstruction(rng, cfg):
    a = gen.random_symmetric(rng, _dim(rng, cfg))
    res = spectral_resolution(a)
    err = order_unit_norm(a - res.reconstruct())
    return err <= 1e-8 * max(1.0, order_unit_norm(a)), {"a": a.entries, "error": err}


# -------------------------------------------------------------- lattice


def _idem_input(rng, cfg, case_injected):
    p = gen.generic_projection(rng, max(2, _dim(rng, cfg)))
    arr = p.entries
    if case_injected:
        e = np.zeros_like(arr)
        e[0, 0] = e[1, 1] = 1e-3
        e[0, 1] = e[1, 0] = 5e-4
        arr = arr + e  # symmetric but no longer idempotent
    return arr


def law_projection_idempotent(rng, cfg, case=0):
    arr = _idem_input(rng, cfg, cfg.inject == "corrupt-projection" and case == 0)
    defect = maxabs(arr @ arr - arr)
    return defect <= cfg.tol, {"p": arr, "max|p^2-p|": defect}


def law_oml_orthomodular(rng, cfg):
    p, q = gen.comparable_projections(rng, _dim(rng, cfg))
    rebuilt = join(p, meet(q, complement(p)))
    err = maxabs(rebuilt.entries - q.entries)
    return err <= 1e-8, {"p": p.entries, "q": q.entries, "error": err}


def law_oml_commuting(rng, cfg):
    p, q = gen.commuting_projections(rng, _dim(rng, cfg))
    pq = p.entries @ q.entries
    tol = 1e-9
    i = maxabs(pq @ pq - pq) <= tol and maxabs(pq - pq.T) <= tol
    pq_m = SymMatrix._wrap((pq + pq.T) / 2)
    ii = leq(pq_m, p.matrix, tol) and leq(pq_m, q.matrix, tol)
    iii = proj_leq(p, q, tol) == (maxabs(p.entries - pq) <= tol)
    iv = maxabs(meet(p, q).entries - pq) <= tol
    return i and ii and iii and iv, {"p": p.entries, "q": q.entries, "i": i, "ii": ii, "iii": iii, "iv": iv}


def law_oml_de_morgan(rng, cfg):
    dim = _dim(rng, cfg)
    p, q = gen.generic_projection(rng, dim), gen.generic_projection(rng, dim)
    lhs = complement(join(p, q))
    rhs = meet(complement(p), complement(q))
    err = maxabs(lhs.entries - rhs.entries)
    return err <= 1e-8, {"p": p.entries, "q": q.entries, "error": err}


# ---------------------------------------------------- commutative model


def law_mv_laws(rng, cfg):
    space = gen.random_space(rng, max(cfg.dim_max, 2))
    f, g, h = (gen.random_fn(rng, space) for _ in range(3))
    e1, e2, e3 = (gen.random_effect(rng, space) for _ in range(3))
    eps = abs(gen.random_rational(rng))
    meet_cf, join_cf = cm.abs_closed_form(f, g)
    s, i = cm.lattice_ops(f, g)
    checks = {
        "dedekind": cm.dedekind(f, g),
        "closed_form": meet_cf == i and join_cf == s,
        "distributive": cm.distributive(f, g, h),
        "norm_bound": cm.norm_bound_equivalence(f, eps),
        "truncated_assoc": cm.mv_truncated_sum(cm.mv_truncated_sum(e1, e2), e3)
        == cm.mv_truncated_sum(e1, cm.mv_truncated_sum(e2, e3)),
        "truncated_comm": cm.mv_truncated_sum(e1, e2) == cm.mv_truncated_sum(e2, e1),
        "complement_involution": cm.mv_complement(cm.mv_complement(e1)) == e1,
        # Lukasiewicz: (e' (+) f)' (+) f is symmetric in e, f (it is e v f)
        "mv_join": cm.mv_truncated_sum(cm.mv_complement(cm.mv_truncated_sum(cm.mv_complement(e1), e2)), e2)
        == e1.sup(e2),
    }
    ps = cm.mv_oplus(e1, e2)
    checks["oplus_partial"] = (ps is None) == (not (e1 + e2).leq(FnElement.constant(space, 1)))
    k = gen.random_subset(rng, len(space))
    l_ = gen.random_subset(rng, len(space))
    ck = FnElement.indicator(space, [space.labels[j] for j in k])
    cl = FnElement.indicator(space, [space.labels[j] for j in l_])
    checks["char_product_is_meet"] = ck * cl == ck.inf(cl)
    checks["recompose"] = cm.recompose(cm.simple_decompose(f), space) == f
    return all(checks.values()), {"f": f.as_dict(), "g": g.as_dict(), "checks": checks}


def law_ls_morphism(rng, cfg):
    ground = gen.random_ground(rng)
    m = QuotientMorphism.over(ground)
    pairs = [(gen.random_fn(rng, ground.space), gen.random_fn(rng, ground.space)) for _ in range(5)]
    laws = audit_morphism(m, pairs)
    failed = {k: v for k, v in laws.items() if v[1]}
    return not failed, {"ground": {"atoms": ground.atoms, "null": ground.null_part}, "failed": failed}


# ---------------------------------------------------- states, observables


def law_observable_resolution(rng, cfg):
    from .states import BorelSetExpr, measure_apply, observable_of

    a = gen.random_symmetric(rng, _dim(rng, cfg))
    res = spectral_resolution(a)
    xi = observable_of(a)
    brk = list(res.breakpoints)
    probes = brk + [(x + y) / 2 for x, y in zip(brk, brk[1:])] + [brk[0] - 1.0, brk[-1] + 1.0]
    err = max(maxabs(measure_apply(xi, BorelSetExpr.half_line(t)).entries - res.at(t).entries) for t in probes)
    return err <= 1e-9, {"a": a.entries, "error": err}


def law_expectation(rng, cfg):
    dim = _dim(rng, cfg)
    a = gen.random_symmetric(rng, dim)
    rho = State.trace(gen.random_density(rng, dim))
    gap = abs(expectation(rho, a) - evaluate(rho, a))
    return gap <= 1e-9 * _scale(a), {"a": a.entries, "w": rho.w.entries, "gap": gap}


def law_funcalc_agreement(rng, cfg):
    a = gen.random_symmetric(rng, _dim(rng, cfg))
    es = a.eigensystem()
    lo, hi = float(es.eigenvalues[0]), float(es.eigenvalues[-1])
    width = 1e-3
    worst = {}
    ok = True
    for name in ("abs", "exp", "square"):
        f = BUILTINS[name]
        gap = order_unit_norm(func_calc_rs(a, f, width) - func_calc_eigen(a, f))
        bound = f.lipschitz_on(lo - width, hi) * width
        worst[name] = gap
        ok = ok and gap <= bound * (1 + 1e-9) + 1e-12 * max(1.0, bound)
    sq_gap = maxabs(func_calc_eigen(a, BUILTINS["square"]).entries - jordan_product(a, a).entries)
    ok = ok and sq_gap <= _lt(cfg, _scale(a) ** 2) * 100
    return ok, {"a": a.entries, "rs_gaps": worst, "square_gap": sq_gap}


# ---------------------------------------------------------- exhaustive


def scan_extremal(max_points, max_den=8):
    """Exhaustive four-way extremality scan on the rational grid.

    Returns ``(checked, exceptions, extremal_count)``; an exception is any
    state on which the criteria disagree or the common verdict differs from
    "is a point mass".
    """
    checked, exceptions, extremal = 0, [], 0
    for n in range(1, max_points + 1):
        space = DiscreteSpace.of_size(n)
        for p in gen.grid_states(n, max_den):
            checked += 1
            rho = State.weights(space, p)
            try:
                verdict, _ = is_extremal_commutative(rho)
            except DiagnosticError as exc:
                exceptions.append({"p": list(p), "diagnostic": exc.witness})
                continue
            point_mass = sum(1 for v in p if v != 0) == 1
            if verdict != point_mass:
                exceptions.append({"p": list(p), "verdict": verdict})
            extremal += verdict
    return checked, exceptions, extremal


LAWS: Dict[str, Callable] = {
    "SA1_order_unit": law_sa1_order_unit,
    "SA2_squares_positive": law_sa2_squares_positive,
    "SA3_quadratic_positive": law_sa3_quadratic_positive,
    "SA4_aba_zero": law_sa4_aba_zero,
    "SA5_square_root": law_sa5_square_root,
    "SA6_carrier": law_sa6_carrier,
    "SA7_inverse": law_sa7_inverse,
    "CV_finite_scale": law_cv_finite,
    "resolution_reconstruction": law_resolution_reconstruction,
    "projection_idempotent": law_projection_idempotent,
    "OML_orthomodular": law_oml_orthomodular,
    "OML_commuting_pCq": law_oml_commuting,
    "OML_de_morgan": law_oml_de_morgan,
    "MV_laws": law_mv_laws,
    "LS_morphism": law_ls_morphism,
    "observable_resolution": law_observable_resolution,
    "expectation": law_expectation,
    "funcalc_agreement": law_funcalc_agreement,
}


def run_law(name, cfg: AuditConfig, case: int):
    """Run one case; exceptions from the library count as failures."""
    rng = gen.case_rng(cfg.seed, name, case)
    fn = LAWS[name]
    try:
        if fn is law_projection_idempotent:
            return fn(rng, cfg, case)
        return fn(rng, cfg)
    except DiagnosticError as exc:
        return False, {"diagnostic": str(exc), "witness": exc.witness}


def run_axiom_audit(cfg: AuditConfig, laws: Optional[List[str]] = None) -> dict:
    names = sorted(LAWS) if laws is None else sorted(n for n in laws if n != "extremal_states")
    unknown = [n for n in names if n not in LAWS]
    if unknown:
        raise InputError(f"unknown law(s): {unknown}")
    results = {}
    for name in names:
        passed, failed, witnesses = 0, 0, []
        for case in range(cfg.cases):
            ok, detail = run_law(name, cfg, case)
            if ok:
                passed += 1
            else:
                failed += 1
                if len(witnesses) < MAX_WITNESSES:
                    witnesses.append({"law": name, "case": case, "seed": cfg.seed, "detail": detail})
        results[name] = {"cases": cfg.cases, "passed": passed, "failed": failed, "witnesses": witnesses}

    if laws is None or "extremal_states" in (laws or []):
        n_points = min(cfg.dim_max, 6)
        checked, exceptions, extremal = scan_extremal(n_points)
        results["extremal_states"] = {
            "cases": checked,
            "passed": checked - len(exceptions),
            "failed": len(exceptions),
            "extremal": extremal,
            "witnesses": [{"law": "extremal_states", "detail": e} for e in exceptions[:MAX_WITNESSES]],
        }
    results = dict(sorted(results.items()))
    failed_laws = [k for k, v in results.items() if v["failed"]]
    return {
        "command": "axiom-audit",
        "config": asdict(cfg),
        "laws": results,
        "failed_laws": failed_laws,
        "status": "fail" if failed_laws else "pass",
    }
