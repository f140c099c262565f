"""Verification harness: exhaustive finite-field sweeps and seeded
sampling that tie every formula in the library back to an independent
check, emitting machine-readable reports.

Sweeps enumerate matrices in odometer order over the entries (row-major,
last entry fastest), so shards split cleanly by prefix and merges are
deterministic.  Classification of a full enumeration space is cached per
configuration; prime fields additionally get a flat-integer fast path
(the same formulas on raw residues) that the test suite cross-checks
against the generic classifier.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field as dc_field
from itertools import product

from .equations import GeneratorSet, component_generators, rank_condition_generators
from .errors import BudgetExceeded, SignUndefinedForForm
from .forms_orbits import (
    SYMMETRIC,
    OrbitParams,
    SpaceConfig,
    classify,
    closure_leq,
    codimension,
    dimension,
    random_orbit_point,
    representative,
    split_config,
    tangent_dimension,
    valid_params,
)
from .fields import field_create
from .linalg import Matrix

DEFAULT_BUDGET = 10_000_000


@dataclass
class VerificationReport:
    """One check's outcome; failures always carry a concrete witness."""

    name: str
    config: dict
    mode: dict
    status: str                       # pass | fail | warn
    witness: dict | None = None
    tallies: dict = dc_field(default_factory=dict)
    warnings: list = dc_field(default_factory=list)
    wall_time_ms: float = 0.0

    @property
    def ok(self) -> bool:
        return self.status != "fail"

    def to_json(self, include_timing: bool = False) -> dict:
        obj = {
            "check": self.name,
            "config": self.config,
            "mode": self.mode,
            "status": self.status,
            "witness": self.witness,
            "tallies": self.tallies,
            "warnings": self.warnings,
        }
        if include_timing:
            obj["wall_time_ms"] = round(self.wall_time_ms, 3)
        return obj


# --------------------------------------------------------------------------
# exhaustive classification of a full matrix space, cached per config

_CLASS_CACHE: dict = {}


def _config_key(config: SpaceConfig):
    return (
        config.kind,
        config.e,
        config.f,
        tuple(sorted(config.field.descriptor().items())),
        config.form.gram.data,
    )


def _space_size(config: SpaceConfig) -> int:
    if config.field.order is None:
        raise BudgetExceeded("exhaustive enumeration needs a finite field")
    return config.field.order ** (config.e * config.f)


def enumeration_space(config: SpaceConfig, budget: int = DEFAULT_BUDGET) -> int:
    total = _space_size(config)
    if total > budget:
        raise BudgetExceeded(
            f"{total} matrices exceed the budget of {budget}; raise --budget to override"
        )
    return total


def decode_matrix(config: SpaceConfig, index: int) -> Matrix:
    """Matrix at a given odometer position (mixed-radix decode)."""
    elems = list(config.field.elements())
    q = len(elems)
    n = config.e * config.f
    digits = []
    for _ in range(n):
        digits.append(elems[index % q])
        index //= q
    digits.reverse()
    f = config.f
    return Matrix(config.field, [digits[i * f : (i + 1) * f] for i in range(config.e)])


def classification_table(config: SpaceConfig, budget: int = DEFAULT_BUDGET):
    """(classes, codes): stratum labels and, for every matrix in odometer
    order, the index of its stratum in ``classes``."""
    key = _config_key(config)
    cached = _CLASS_CACHE.get(key)
    if cached is not None:
        return cached
    total = enumeration_space(config, budget)
    classes = list(valid_params(config))
    index = {p: i for i, p in enumerate(classes)}
    if config.field.kind == "prime":
        codes = _classify_space_prime(config, total, classes, index)
    else:
        codes = _classify_space_generic(config, total, classes, index)
    result = (classes, codes)
    _CLASS_CACHE[key] = result
    return result


def _classify_space_generic(config, total, classes, index):
    codes = bytearray(total)
    f = config.f
    e = config.e
    elems = list(config.field.elements())
    for pos, entries in enumerate(product(elems, repeat=e * f)):
        phi = Matrix(config.field, [entries[i * f : (i + 1) * f] for i in range(e)], e, f)
        p = classify(phi, config)
        code = index.get(p)
        if code is None:  # defensive: record unexpected strata
            index[p] = code = len(classes)
            classes.append(p)
        codes[pos] = code
    return bytes(codes)


def _rank_mod(rows, p, inv_table):
    """Rank of a small list-of-lists of residues; destroys its input."""
    m = len(rows)
    n = len(rows[0]) if m else 0
    r = 0
    for c in range(n):
        pivot = None
        for i in range(r, m):
            if rows[i][c]:
                pivot = i
                break
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        prow = rows[r]
        pinv = inv_table[prow[c]]
        for i in range(r + 1, m):
            v = rows[i][c]
            if v:
                factor = v * pinv % p
                irow = rows[i]
                for j in range(c, n):
                    irow[j] = (irow[j] - factor * prow[j]) % p
        r += 1
        if r == m:
            break
    return r


def _classify_space_prime(config, total, classes, index):
    """Flat-integer sweep: same rank / Gram-rank / sign formulas on raw
    residues, avoiding per-matrix object overhead."""
    p = config.field.p
    e, f = config.e, config.f
    K = [[int(v) for v in row] for row in config.form.gram.data]
    inv_table = [0] + [pow(i, p - 2, p) for i in range(1, p)]
    signed = config.kind == SYMMETRIC and f % 2 == 0 and f // 2 <= e
    half = f // 2
    ref_rows = None
    if signed:
        try:
            ref_rows = [list(r) for r in config.form.reference_isotropic().data]
        except SignUndefinedForForm:
            ref_rows = None
    codes = bytearray(total)
    kcols = list(zip(*K))
    for pos, entries in enumerate(product(range(p), repeat=e * f)):
        rows = [list(entries[i * f : (i + 1) * f]) for i in range(e)]
        # Gram image: (row_i . K) . row_j
        kv = [
            [sum(r[k] * col[k] for k in range(f)) % p for col in kcols]
            for r in rows
        ]
        G = [[sum(kv[i][k] * rows[j][k] for k in range(f)) % p for j in range(e)] for i in range(e)]
        r2 = _rank_mod(G, p, inv_table)
        r1 = _rank_mod(rows, p, inv_table)
        sign = None
        if signed and r1 == half and r2 == 0:
            if ref_rows is None:
                raise SignUndefinedForForm(
                    "form has no reference maximal isotropic subspace over this field"
                )
            stack = [list(entries[i * f : (i + 1) * f]) for i in range(e)]
            stack += [list(r) for r in ref_rows]
            inter = r1 + half - _rank_mod(stack, p, inv_table)
            sign = "+" if (half - inter) % 2 == 0 else "-"
        params = OrbitParams(r1, r2, sign)
        code = index.get(params)
        if code is None:
            index[params] = code = len(classes)
            classes.append(params)
        codes[pos] = code
    return bytes(codes)


def _compile_for_prime(gens: GeneratorSet, p: int):
    return [
        [(int(c), idxs) for c, idxs in g.poly.compiled()] for g in gens
    ]


def _all_vanish_prime(compiled, vals, p) -> bool:
    for poly in compiled:
        total = 0
        for c, idxs in poly:
            acc = c
            for i in idxs:
                acc = acc * vals[i] % p
            total += acc
        if total % p:
            return False
    return True


# --------------------------------------------------------------------------
# checks

def _report(name, config, mode, status, witness, tallies, warnings, t0):
    return VerificationReport(
        name=name,
        config=config.to_json(),
        mode=mode,
        status=status,
        witness=witness,
        tallies=tallies,
        warnings=warnings,
        wall_time_ms=(time.perf_counter() - t0) * 1000.0,
    )


def exhaustive_census(
    config: SpaceConfig,
    budget: int = DEFAULT_BUDGET,
    valid_params_override=None,
) -> VerificationReport:
    """Classify every matrix of the space and tally per stratum; every
    matrix must land in an admissible stratum and tallies must sum to the
    space size."""
    t0 = time.perf_counter()
    total = enumeration_space(config, budget)
    classes, codes = classification_table(config, budget)
    counts = [0] * len(classes)
    for code in codes:
        counts[code] += 1
    expected = set(valid_params_override if valid_params_override is not None else valid_params(config))
    tallies = {str(classes[i]): counts[i] for i in range(len(classes)) if counts[i]}
    witness = None
    status = "pass"
    for i, cnt in enumerate(counts):
        if cnt and classes[i] not in expected:
            first = codes.index(i)
            witness = {
                "reason": "matrix classified outside the admissible strata",
                "params": str(classes[i]),
                "matrix": decode_matrix(config, first).to_json()["rows"],
            }
            status = "fail"
            break
    if status == "pass" and sum(counts) != total:
        status = "fail"
        witness = {"reason": "tallies do not sum to the space size", "sum": sum(counts)}
    tallies["total"] = sum(counts)
    return _report(
        "census", config, {"kind": "exhaustive", "space": total}, status, witness, tallies, [], t0
    )


def _generators_for(params: OrbitParams, config: SpaceConfig) -> GeneratorSet:
    if params.sign is not None:
        return component_generators(params.sign, config)
    return rank_condition_generators(params, config)


def check_equation_cut(
    params: OrbitParams,
    config: SpaceConfig,
    budget: int = DEFAULT_BUDGET,
    samples: int = 2000,
    seed: int = 0,
    generators_override: GeneratorSet | None = None,
) -> VerificationReport:
    """Set-theoretic check that the stratum's generators cut exactly the
    rank-condition locus.  Exhaustive within budget; otherwise falls back
    to seeded sampling (uniform matrices plus points of every stratum)
    with a warning."""
    t0 = time.perf_counter()
    gens = generators_override if generators_override is not None else _generators_for(params, config)
    warnings = []
    mismatches = 0
    witness = None
    n_locus = n_vanish = n_seen = 0

    def record(phi_or_index, member, vanish):
        nonlocal mismatches, witness, n_locus, n_vanish, n_seen
        n_seen += 1
        if member:
            n_locus += 1
        if vanish:
            n_vanish += 1
        if member != vanish and witness is None:
            if isinstance(phi_or_index, int):
                rows = decode_matrix(config, phi_or_index).to_json()["rows"]
            else:
                rows = phi_or_index.to_json()["rows"]
            witness = {
                "reason": "zero set disagrees with the rank-condition locus",
                "in_locus": member,
                "generators_vanish": vanish,
                "matrix": rows,
            }
        if member != vanish:
            mismatches += 1

    exhaustive = True
    try:
        enumeration_space(config, budget)
    except BudgetExceeded as exc:
        exhaustive = False
        warnings.append(f"{exc}; falling back to sampled mode")

    if exhaustive:
        classes, codes = classification_table(config, budget)
        member_of = [closure_leq(c, params, config) for c in classes]
        if config.field.kind == "prime":
            p = config.field.p
            compiled = _compile_for_prime(gens, p)
            e, f = config.e, config.f
            for pos, entries in enumerate(product(range(p), repeat=e * f)):
                record(pos, member_of[codes[pos]], _all_vanish_prime(compiled, entries, p))
        else:
            elems = list(config.field.elements())
            e, f = config.e, config.f
            for pos, entries in enumerate(product(elems, repeat=e * f)):
                phi = Matrix(config.field, [entries[i * f : (i + 1) * f] for i in range(e)], e, f)
                record(pos, member_of[codes[pos]], gens.all_vanish(phi))
        mode = {"kind": "exhaustive", "space": len(codes)}
    else:
        rng = random.Random(seed)
        e, f = config.e, config.f
        from .linalg import random_matrix

        for _ in range(samples):
            phi = random_matrix(config.field, e, f, rng)
            cls = classify(phi, config)
            record(phi, closure_leq(cls, params, config), gens.all_vanish(phi))
        per_class = max(1, samples // 20)
        for cls in valid_params(config):
            for i in range(per_class):
                phi = random_orbit_point(cls, config, seed=f"{seed}:{cls}:{i}")
                record(phi, closure_leq(cls, params, config), gens.all_vanish(phi))
        mode = {"kind": "sampled", "n": n_seen, "seed": seed}

    status = "pass" if mismatches == 0 else "fail"
    tallies = {
        "params": str(params),
        "generators": len(gens),
        "locus": n_locus,
        "vanishing": n_vanish,
        "mismatches": mismatches,
    }
    return _report("equation-cut", config, mode, status, witness, tallies, warnings, t0)


def check_dimensions(config: SpaceConfig, codim_override=None) -> VerificationReport:
    """Tangent-space oracle for the codimension formula: for every
    stratum, the rank of the linearized action at the representative must
    equal e*f - codim, exactly."""
    t0 = time.perf_counter()
    codim_fn = codim_override if codim_override is not None else codimension
    witness = None
    checked = 0
    for params in valid_params(config):
        rep = representative(params, config)
        tangent = tangent_dimension(rep, config)
        expected = config.e * config.f - codim_fn(params, config)
        checked += 1
        if tangent != expected:
            witness = {
                "reason": "tangent dimension disagrees with the codimension formula",
                "params": str(params),
                "tangent": tangent,
                "expected": expected,
            }
            break
    status = "pass" if witness is None else "fail"
    return _report(
        "dimensions", config, {"kind": "exhaustive", "strata": checked}, status, witness,
        {"strata": checked}, [], t0,
    )


def check_closure_order(
    config: SpaceConfig,
    samples: int = 100,
    seed: int = 0,
    generators_override=None,
    order_override=None,
) -> VerificationReport:
    """Sampled points of each stratum vanish on another stratum's
    generators exactly when the closure order says they should."""
    t0 = time.perf_counter()
    order_fn = order_override if order_override is not None else closure_leq
    classes = valid_params(config)
    gens = {
        q: (generators_override(q, config) if generators_override is not None else _generators_for(q, config))
        for q in classes
    }
    points = {
        p: [random_orbit_point(p, config, seed=f"{seed}:{p}:{i}") for i in range(samples)]
        for p in classes
    }
    witness = None
    pairs = 0
    for p in classes:
        for q in classes:
            pairs += 1
            expected = order_fn(p, q, config)
            for phi in points[p]:
                if gens[q].all_vanish(phi) != expected:
                    witness = {
                        "reason": "sampled vanishing disagrees with the closure order",
                        "lower": str(p),
                        "upper": str(q),
                        "expected": expected,
                        "matrix": phi.to_json()["rows"],
                    }
                    break
            if witness:
                break
        if witness:
            break
    status = "pass" if witness is None else "fail"
    return _report(
        "closure-order", config,
        {"kind": "sampled", "n": samples, "seed": seed},
        status, witness, {"pairs": pairs, "samples_per_stratum": samples}, [], t0,
    )


def point_count_dimension_estimate(
    params: OrbitParams,
    config: SpaceConfig,
    primes=(3, 5),
    budget: int = DEFAULT_BUDGET,
    dim_override=None,
) -> VerificationReport:
    """Heuristic dimension cross-check: the locus point count over F_q
    should grow like q^dim.  Deviations beyond 1 are WARN only; the hard
    dimension check is the tangent-space one.  Counts always use the
    split form over each prime."""
    t0 = time.perf_counter()
    admissible = []
    for q in primes:
        try:
            cfg_q = split_config(config.e, config.f, config.kind, field_create("prime", q))
            enumeration_space(cfg_q, budget)
            admissible.append((q, cfg_q))
        except BudgetExceeded:
            continue
    if len(admissible) < 2:
        raise BudgetExceeded("need at least two admissible primes within budget")
    counts = {}
    for q, cfg_q in admissible:
        classes, codes = classification_table(cfg_q, budget)
        member_of = [closure_leq(c, params, cfg_q) for c in classes]
        counts[q] = sum(1 for code in codes if member_of[code])
    dim_fn = dim_override if dim_override is not None else dimension
    dim = dim_fn(params, config)
    qs = [q for q, _ in admissible]
    estimates = []
    for (q1, q2) in zip(qs, qs[1:]):
        n1, n2 = counts[q1], counts[q2]
        est = round(math.log(n2 / n1) / math.log(q2 / q1)) if n1 and n2 else 0
        estimates.append(est)
    deviates = any(abs(est - dim) > 1 for est in estimates)
    status = "warn" if deviates else "pass"
    witness = None
    if deviates:
        witness = {
            "reason": "point-count growth deviates from the expected dimension",
            "params": str(params),
            "estimates": estimates,
            "dim": dim,
        }
    tallies = {
        "params": str(params),
        "counts": {str(q): counts[q] for q in qs},
        "estimates": estimates,
        "dim": dim,
    }
    return _report(
        "point-count", config, {"kind": "exhaustive", "primes": qs}, status, witness, tallies, [], t0
    )


def run_all(
    config: SpaceConfig,
    budget: int = DEFAULT_BUDGET,
    samples: int = 100,
    seed: int = 0,
    primes=(3, 5),
) -> list[VerificationReport]:
    """Census, dimension, closure, per-stratum equation cuts and
    per-stratum point counts; checks that cannot run (budget, infinite
    field) degrade to warnings instead of aborting the batch."""
    reports: list[VerificationReport] = []
    t0 = time.perf_counter()
    try:
        reports.append(exhaustive_census(config, budget))
    except BudgetExceeded as exc:
        reports.append(
            _report("census", config, {"kind": "skipped"}, "warn", None, {}, [str(exc)], t0)
        )
    reports.append(check_dimensions(config))
    reports.append(check_closure_order(config, samples=samples, seed=seed))
    for params in valid_params(config):
        reports.append(check_equation_cut(params, config, budget=budget, seed=seed))
    for params in valid_params(config):
        try:
            reports.append(point_count_dimension_estimate(params, config, primes, budget))
        except BudgetExceeded as exc:
            reports.append(
                _report("point-count", config, {"kind": "skipped"}, "warn", None,
                        {"params": str(params)}, [str(exc)], time.perf_counter())
            )
    return reports
