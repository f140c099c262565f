"""Acceptance suite: one test per criterion, each printing a PASS/FAIL
line.  Exhaustive sweeps run at full size; stated runtime bounds are
asserted."""

import random
import time
from contextlib import contextmanager
from itertools import product

from isodet.fields import field_create
from isodet.forms_orbits import (
    BilinearForm,
    OrbitParams,
    SpaceConfig,
    classify,
    closure_leq,
    codimension,
    facts,
    hyperbolic_swap,
    random_isometry,
    random_orbit_point,
    representative,
    solve_congruence,
    split_config,
    tangent_dimension,
    valid_params,
)
from isodet.equations import (
    GeneratorSet,
    component_generators,
    minor_polynomial,
    rank_condition_generators,
)
from isodet.linalg import Matrix, random_invertible, random_matrix
from isodet.verify import (
    check_closure_order,
    check_dimensions,
    check_equation_cut,
    classification_table,
    exhaustive_census,
    point_count_dimension_estimate,
    _all_vanish_prime,
    _compile_for_prime,
)

F3 = field_create("prime", 3)
F5 = field_create("prime", 5)
F7 = field_create("prime", 7)
F11 = field_create("prime", 11)
F49 = field_create("quadratic-extension", 7)
Q = field_create("rationals")


@contextmanager
def criterion(number, name):
    try:
        yield
    except BaseException:
        print(f"ACCEPTANCE {number} {name}: FAIL")
        raise
    print(f"ACCEPTANCE {number} {name}: PASS")


def test_criterion_1_dimension_formulas():
    with criterion(1, "dimension-formulas"):
        t0 = time.perf_counter()
        for kind, fs in (("alternating", (4, 6)), ("symmetric", (3, 4, 5, 6))):
            for e in (1, 2, 3):
                for f in fs:
                    cfg = split_config(e, f, kind, Q)
                    for p in valid_params(cfg):
                        rep = representative(p, cfg)
                        assert tangent_dimension(rep, cfg) == e * f - codimension(p, cfg), (
                            kind, e, f, str(p),
                        )
        assert time.perf_counter() - t0 < 10.0


def test_criterion_2_orbit_exhaustion():
    with criterion(2, "orbit-exhaustion"):
        t0 = time.perf_counter()
        alt = split_config(2, 4, "alternating", F3)
        rep = exhaustive_census(alt)
        assert rep.status == "pass"
        assert rep.tallies["total"] == 6561
        assert set(rep.tallies) - {"total"} == {"(0,0)", "(1,0)", "(2,0)", "(2,2)"}

        sym = split_config(2, 4, "symmetric", F5)
        rep = exhaustive_census(sym)
        assert rep.status == "pass"
        assert rep.tallies["total"] == 390625
        assert rep.tallies["(2,0,+)"] == rep.tallies["(2,0,-)"] > 0
        assert time.perf_counter() - t0 < 60.0


def test_criterion_3_equation_cuts():
    with criterion(3, "set-theoretic-defining-equations"):
        t0 = time.perf_counter()
        for kind in ("alternating", "symmetric"):
            cfg = split_config(2, 4, kind, F5)
            for p in valid_params(cfg):
                if p.sign is not None:
                    continue
                rep = check_equation_cut(p, cfg)
                assert rep.mode["kind"] == "exhaustive"
                assert rep.status == "pass" and rep.tallies["mismatches"] == 0, (
                    kind, str(p), rep.witness,
                )
        assert time.perf_counter() - t0 < 300.0


def _exceptional_cut_identities(cfg):
    """Union of the two component zero sets is the (2,0) rank locus and
    their intersection is the (1,0) locus, checked on every matrix."""
    p5 = cfg.field.p
    classes, codes = classification_table(cfg)
    in_rank20 = [c.r1 <= 2 and c.r2 <= 0 for c in classes]
    in_rank10 = [c.r1 <= 1 and c.r2 <= 0 for c in classes]
    gens_plus = _compile_for_prime(component_generators("+", cfg), p5)
    gens_minus = _compile_for_prime(component_generators("-", cfg), p5)
    n = cfg.e * cfg.f
    for pos, entries in enumerate(product(range(p5), repeat=n)):
        vp = _all_vanish_prime(gens_plus, entries, p5)
        vm = _all_vanish_prime(gens_minus, entries, p5)
        code = codes[pos]
        assert (vp or vm) == in_rank20[code], ("union", pos)
        assert (vp and vm) == in_rank10[code], ("intersection", pos)


def _component_span_contains(cfg, gens, target):
    field = cfg.field
    polys = [g.poly for g in gens if g.label[0] == "component"]
    monomials = sorted({e for p in polys for e in p.terms} | set(target.terms))
    rows = [[p.terms.get(e, field.zero) for e in monomials] for p in polys]
    base = Matrix(field, rows, len(rows), len(monomials))
    trow = Matrix(field, [[target.terms.get(e, field.zero) for e in monomials]], 1, len(monomials))
    return base.vstack(trow).rank() == base.rank()


def test_criterion_4_exceptional_components():
    with criterion(4, "exceptional-component-equations"):
        split = split_config(2, 4, "symmetric", F5)
        ortho = SpaceConfig(2, 4, F5, BilinearForm("symmetric", Matrix.identity(F5, 4)))
        for cfg in (split, ortho):
            _exceptional_cut_identities(cfg)
            # per-component cuts agree with the signed closures
            for sign in "+-":
                rep = check_equation_cut(OrbitParams(2, 0, sign), cfg)
                assert rep.status == "pass" and rep.tallies["mismatches"] == 0

        # in orthonormal coordinates the component spans carry
        # det(X) + det(Y) and det(X) - det(Y), one each
        det_x = minor_polynomial(ortho, (0, 1), (0, 1))
        det_y = minor_polynomial(ortho, (0, 1), (2, 3))
        plus = component_generators("+", ortho)
        minus = component_generators("-", ortho)
        hits = {}
        for name, target in (("sum", det_x + det_y), ("diff", det_x - det_y)):
            hits[name] = {
                s for s, gens in (("+", plus), ("-", minus))
                if _component_span_contains(ortho, gens, target)
            }
        assert hits["sum"] and hits["diff"]
        assert hits["sum"].isdisjoint(hits["diff"])
        assert hits["sum"] | hits["diff"] == {"+", "-"}


def test_criterion_5_constructive_congruence():
    with criterion(5, "constructive-congruence"):
        rng = random.Random(55)
        for field in (F7, F11, Q):
            for kind in ("alternating", "symmetric"):
                f = 4 if kind == "alternating" else 5
                frm = BilinearForm.split(field, kind, f)
                for _ in range(500):
                    a = rng.randrange(1, 4)
                    while True:
                        A = random_matrix(field, a, f, rng)
                        if A.rank() == a:
                            break
                    S = random_matrix(field, a, a, rng)
                    S = S + S.T if kind == "symmetric" else S - S.T
                    B = solve_congruence(S, A, frm)
                    residual = A @ frm.gram @ B.T + B @ frm.gram @ A.T - S
                    assert residual == Matrix.zeros(field, a, a)


def test_criterion_6_pfaffian():
    with criterion(6, "pfaffian-correctness"):
        for field in (F7, F11, F49, Q):
            rng = random.Random(66)
            for n in (2, 4, 6, 8):
                for _ in range(200):
                    grid = [[field.zero] * n for _ in range(n)]
                    for i in range(n):
                        for j in range(i + 1, n):
                            v = field.random(rng)
                            grid[i][j] = v
                            grid[j][i] = field.neg(v)
                    m = Matrix(field, grid)
                    pf = m.pfaffian()
                    assert field.mul(pf, pf) == m.det()
            j_std = BilinearForm.split(field, "alternating", 6).gram
            assert j_std.pfaffian() == field.one


def test_criterion_7_invariance():
    with criterion(7, "classification-invariance"):
        rng = random.Random(77)
        for kind in ("alternating", "symmetric"):
            cfg = split_config(2, 4, kind, F7)
            for p in valid_params(cfg):
                rep = representative(p, cfg)
                for _ in range(200):
                    a = random_invertible(F7, 2, rng)
                    b = random_isometry(cfg.form, rng=rng)
                    assert classify(a @ rep @ b.T, cfg) == p, (kind, str(p))
        sym = split_config(2, 4, "symmetric", F7)
        swap = hyperbolic_swap(sym.form)
        assert swap.det() == F7.neg(F7.one)
        for sign in "+-":
            for i in range(200):
                pt = random_orbit_point(OrbitParams(2, 0, sign), sym, seed=f"c7:{sign}:{i}")
                flipped = classify(pt @ swap.T, sym)
                assert (flipped.r1, flipped.r2) == (2, 0)
                assert flipped.sign != sign


# twelve rows transcribed from the tabulated classification facts
FACTS_ROWS = [
    ("alternating", 2, 4, OrbitParams(1, 0),
     {"normal": True, "rational_singularities_char0": True, "strongly_f_regular": "yes",
      "cohen_macaulay": "yes"}),
    ("alternating", 2, 4, OrbitParams(2, 0),
     {"normal": True, "strongly_f_regular": "yes", "cohen_macaulay": "yes",
      "gorenstein": "yes"}),
    ("alternating", 3, 6, OrbitParams(3, 0),
     {"normal": True, "gorenstein": "yes", "strongly_f_regular": "yes",
      "cohen_macaulay": "yes"}),
    ("alternating", 3, 4, OrbitParams(2, 2),
     {"normal": True, "rational_singularities_char0": True,
      "cohen_macaulay": "yes-if-char0", "gorenstein": "unknown",
      "strongly_f_regular": "unknown"}),
    ("symmetric", 3, 4, OrbitParams(3, 2),
     {"normal": False, "cohen_macaulay": "yes", "rational_singularities_char0": False}),
    ("symmetric", 5, 4, OrbitParams(3, 2),
     {"normal": False, "cohen_macaulay": "no"}),
    ("symmetric", 2, 4, OrbitParams(2, 0, "+"),
     {"normal": True, "strongly_f_regular": "yes", "cohen_macaulay": "yes",
      "gorenstein": "unknown"}),
    ("symmetric", 2, 5, OrbitParams(2, 1),
     {"normal": True, "gorenstein": "yes", "cohen_macaulay": "yes",
      "rational_singularities_char0": True}),
    ("symmetric", 3, 6, OrbitParams(3, 1),
     {"normal": True, "gorenstein": "no", "cohen_macaulay": "yes"}),
    ("symmetric", 3, 4, OrbitParams(2, 2),
     {"normal": True, "rational_singularities_char0": True,
      "cohen_macaulay": "yes-if-char0"}),
    ("symmetric", 2, 4, OrbitParams(1, 0),
     {"normal": True, "strongly_f_regular": "yes", "cohen_macaulay": "yes"}),
    ("symmetric", 3, 3, OrbitParams(2, 2),
     {"normal": True, "rational_singularities_char0": True,
      "cohen_macaulay": "yes-if-char0", "gorenstein": "unknown",
      "strongly_f_regular": "unknown"}),
]


def test_criterion_8_facts_table():
    with criterion(8, "facts-table-fidelity"):
        assert len(FACTS_ROWS) == 12
        for kind, e, f, params, expected in FACTS_ROWS:
            cfg = split_config(e, f, kind, F7)
            fx = facts(params, cfg)
            got = fx.to_json()
            for key, value in expected.items():
                assert got[key] == value, (kind, e, f, str(params), key, got[key], value)


def test_criterion_9_mutation_sanity():
    with criterion(9, "mutation-sanity"):
        alt3 = split_config(2, 4, "alternating", F3)

        crippled = [p for p in valid_params(alt3) if p != OrbitParams(2, 0)]
        rep = exhaustive_census(alt3, valid_params_override=crippled)
        assert rep.status == "fail" and rep.witness is not None

        gens = list(rank_condition_generators(OrbitParams(1, 0), alt3))
        dropped = GeneratorSet(alt3, [g for g in gens if g.label != ("minor", (0, 1), (0, 2))])
        rep = check_equation_cut(OrbitParams(1, 0), alt3, generators_override=dropped)
        assert rep.status == "fail" and rep.witness is not None

        def bumped(params, config):
            return codimension(params, config) + 1

        rep = check_dimensions(alt3, codim_override=bumped)
        assert rep.status == "fail" and rep.witness is not None

        def flipped(p, q, config):
            return not closure_leq(p, q, config)

        rep = check_closure_order(alt3, samples=5, seed=1, order_override=flipped)
        assert rep.status == "fail" and rep.witness is not None

        def wrong_dim(params, config):
            return 1

        rep = point_count_dimension_estimate(
            OrbitParams(2, 0), alt3, primes=(3, 5), dim_override=wrong_dim
        )
        assert rep.status == "warn" and rep.witness is not None
