"""Sparse exact polynomials in the e*f matrix coordinates x_ij and the
defining-equation generators of the rank strata:

* minors of the generic matrix for the rank condition,
* minors (symmetric) or principal sub-Pfaffians (alternating) of its
  generic Gram image for the isotropic-rank condition,
* for the two-component stratum of even orthogonal spaces, the quadratic
  invariants together with one eigen-half of the maximal minors under
  the half-form involution of the middle exterior power.

Polynomials are stored fully expanded; at desk scale that keeps both
generation and evaluation trivial and bit-for-bit reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .errors import (
    DimensionMismatch,
    EigenvalueNotInField,
    ExceptionalNeedsSign,
    InvalidParams,
    OddDimension,
    WrongKind,
)
from .fields import Field
from .forms_orbits import (
    SYMMETRIC,
    BilinearForm,
    OrbitParams,
    SpaceConfig,
    params_valid,
    representative,
)
from .linalg import Matrix


class Polynomial:
    """Multivariate polynomial with exact coefficients, stored as a map
    from exponent vectors (length = number of variables) to non-zero
    coefficient payloads."""

    __slots__ = ("field", "nvars", "terms", "_compiled")

    def __init__(self, field: Field, nvars: int, terms: dict | None = None):
        clean = {}
        if terms:
            zero = field.zero
            for exps, c in terms.items():
                if c != zero:
                    clean[tuple(exps)] = c
        self.field = field
        self.nvars = nvars
        self.terms = clean
        self._compiled = None

    # ------------------------------------------------------------ builders

    @classmethod
    def zero(cls, field: Field, nvars: int) -> "Polynomial":
        return cls(field, nvars)

    @classmethod
    def constant(cls, field: Field, nvars: int, c) -> "Polynomial":
        return cls(field, nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, field: Field, nvars: int, i: int) -> "Polynomial":
        exps = [0] * nvars
        exps[i] = 1
        return cls(field, nvars, {tuple(exps): field.one})

    # ------------------------------------------------------------ algebra

    def _check(self, other: "Polynomial"):
        if self.nvars != other.nvars or self.field != other.field:
            raise DimensionMismatch("polynomials live in different rings")

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        F = self.field
        out = dict(self.terms)
        for exps, c in other.terms.items():
            got = out.get(exps)
            out[exps] = c if got is None else F.add(got, c)
        return Polynomial(F, self.nvars, out)

    def __neg__(self) -> "Polynomial":
        neg = self.field.neg
        return Polynomial(self.field, self.nvars, {e: neg(c) for e, c in self.terms.items()})

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        F = self.field
        add, mul = F.add, F.mul
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                c = mul(c1, c2)
                key = tuple(a + b for a, b in zip(e1, e2))
                got = out.get(key)
                out[key] = c if got is None else add(got, c)
        return Polynomial(F, self.nvars, out)

    def scale(self, c) -> "Polynomial":
        mul = self.field.mul
        return Polynomial(self.field, self.nvars, {e: mul(c, v) for e, v in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Total degree; the zero polynomial reports -1."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def is_homogeneous(self) -> bool:
        degrees = {sum(e) for e in self.terms}
        return len(degrees) <= 1

    def __eq__(self, other):
        return (
            isinstance(other, Polynomial)
            and self.field == other.field
            and self.nvars == other.nvars
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    # ------------------------------------------------------------ evaluation

    def sorted_terms(self):
        """Terms in graded-lex descending order (the canonical order used
        for rendering, export and compilation)."""
        return sorted(self.terms.items(), key=lambda kv: (sum(kv[0]), kv[0]), reverse=True)

    def compiled(self):
        """Flattened monomials: (coefficient, variable indices with
        multiplicity), in canonical order."""
        if self._compiled is None:
            flat = []
            for exps, c in self.sorted_terms():
                idxs = []
                for i, k in enumerate(exps):
                    idxs.extend([i] * k)
                flat.append((c, tuple(idxs)))
            self._compiled = tuple(flat)
        return self._compiled

    def evaluate(self, values):
        """Exact substitution x_i -> values[i]."""
        if len(values) != self.nvars:
            raise DimensionMismatch("wrong number of values for substitution")
        F = self.field
        add, mul = F.add, F.mul
        total = F.zero
        for c, idxs in self.compiled():
            acc = c
            for i in idxs:
                acc = mul(acc, values[i])
            total = add(total, acc)
        return total

    # ------------------------------------------------------------ rendering

    def _var_name(self, i: int, ncols: int) -> str:
        r, c = i // ncols + 1, i % ncols + 1
        if ncols > 9 or self.nvars > 9 * ncols:
            return f"x{r}_{c}"
        return f"x{r}{c}"

    def to_text(self, ncols: int) -> str:
        if not self.terms:
            return "0"
        F = self.field
        one = F.one
        rational = F.kind == "rationals"
        out = ""
        for exps, c in self.sorted_terms():
            negative = rational and c < 0
            mag = F.neg(c) if negative else c
            factors = []
            for i, k in enumerate(exps):
                if k == 0:
                    continue
                name = self._var_name(i, ncols)
                factors.append(name if k == 1 else f"{name}^{k}")
            mono = "*".join(factors)
            if not mono:
                piece = F.render(mag)
            elif mag == one:
                piece = mono
            else:
                piece = f"{F.render(mag)}*{mono}"
            if not out:
                out = ("-" if negative else "") + piece
            else:
                out += (" - " if negative else " + ") + piece
        return out

    def to_json(self) -> dict:
        render = self.field.render
        return {
            "degree": self.degree(),
            "terms": [
                {"exps": list(exps), "coeff": render(c)} for exps, c in self.sorted_terms()
            ],
        }


# --------------------------------------------------------------------------
# generic matrices and their invariants

def generic_matrix(field: Field, e: int, f: int):
    """e-by-f grid of coordinate variables x_ij (index i*f + j)."""
    n = e * f
    return [[Polynomial.variable(field, n, i * f + j) for j in range(f)] for i in range(e)]


def poly_det(grid) -> Polynomial:
    """Determinant of a square grid of polynomials (cofactor expansion)."""
    n = len(grid)
    if n == 0:
        raise DimensionMismatch("empty grid has no well-defined ring")
    field = grid[0][0].field
    nvars = grid[0][0].nvars

    def rec(rows, cols):
        if not rows:
            return Polynomial.constant(field, nvars, field.one)
        r0 = rows[0]
        rest = rows[1:]
        acc = Polynomial.zero(field, nvars)
        for k, c in enumerate(cols):
            entry = grid[r0][c]
            if entry.is_zero():
                continue
            sub = rec(rest, cols[:k] + cols[k + 1 :])
            term = entry * sub
            acc = acc + (term if k % 2 == 0 else -term)
        return acc

    idx = tuple(range(n))
    return rec(idx, idx)


def poly_pfaffian(grid) -> Polynomial:
    """Pfaffian of a skew grid of polynomials, expanded along the first
    remaining row; the empty grid gives 1."""
    n = len(grid)
    if n % 2 != 0:
        raise OddDimension("Pfaffian needs even size")
    if n == 0:
        raise DimensionMismatch("empty grid has no well-defined ring")
    field = grid[0][0].field
    nvars = grid[0][0].nvars

    def rec(idx):
        if not idx:
            return Polynomial.constant(field, nvars, field.one)
        i0 = idx[0]
        rest = idx[1:]
        acc = Polynomial.zero(field, nvars)
        for k, j in enumerate(rest):
            entry = grid[i0][j]
            if entry.is_zero():
                continue
            term = entry * rec(rest[:k] + rest[k + 1 :])
            acc = acc + (term if k % 2 == 0 else -term)
        return acc

    return rec(tuple(range(n)))


def generic_gram_map(config: SpaceConfig):
    """Entries of X K X^t for the generic e-by-f matrix X: an e-by-e grid
    of quadratics, symmetric for symmetric forms and skew with zero
    diagonal for alternating ones."""
    F = config.field
    e, f = config.e, config.f
    n = e * f
    K = config.form.gram.data
    zero = F.zero
    add, mul = F.add, F.mul
    grid = []
    for i in range(e):
        row = []
        for j in range(e):
            terms: dict = {}
            for k in range(f):
                for l in range(f):
                    c = K[k][l]
                    if c == zero:
                        continue
                    exps = [0] * n
                    exps[i * f + k] += 1
                    exps[j * f + l] += 1
                    key = tuple(exps)
                    got = terms.get(key)
                    terms[key] = c if got is None else add(got, c)
            row.append(Polynomial(F, n, terms))
        grid.append(row)
    return grid


def minor_polynomial(config: SpaceConfig, rowset, colset) -> Polynomial:
    """The (|rowset| x |colset|) minor of the generic matrix as a
    polynomial."""
    X = generic_matrix(config.field, config.e, config.f)
    sub = [[X[i][j] for j in colset] for i in rowset]
    return poly_det(sub)


# --------------------------------------------------------------------------
# labelled generator sets

@dataclass(frozen=True)
class Generator:
    label: tuple
    poly: Polynomial

    def label_text(self) -> str:
        tag = self.label[0]
        parts = []
        for item in self.label[1:]:
            if isinstance(item, tuple):
                parts.append("[" + ",".join(str(x) for x in item) + "]")
            else:
                parts.append(str(item))
        return f"{tag}({','.join(parts)})"


class GeneratorSet:
    """A labelled, reproducible family of polynomials; labels determine
    each polynomial bit-for-bit via :func:`rebuild_generator`."""

    def __init__(self, config: SpaceConfig, generators):
        self.config = config
        self.generators = list(generators)

    def __iter__(self):
        return iter(self.generators)

    def __len__(self):
        return len(self.generators)

    @property
    def polys(self):
        return [g.poly for g in self.generators]

    def all_vanish(self, phi: Matrix) -> bool:
        if phi.rows != self.config.e or phi.cols != self.config.f:
            raise DimensionMismatch("matrix shape disagrees with the generator ring")
        vals = phi.flat()
        zero = self.config.field.zero
        for g in self.generators:
            if g.poly.evaluate(vals) != zero:
                return False
        return True

    def to_json(self) -> list:
        return [
            {"label": g.label_text(), **g.poly.to_json()} for g in self.generators
        ]

    def to_text(self) -> str:
        f = self.config.f
        lines = [f"{g.label_text()}: {g.poly.to_text(f)}" for g in self.generators]
        return "\n".join(lines)


def evaluate(obj, phi: Matrix):
    """Substitute a matrix into a polynomial (returning a scalar payload)
    or into a generator set (returning whether every member vanishes)."""
    if isinstance(obj, GeneratorSet):
        return obj.all_vanish(phi)
    return obj.evaluate(phi.flat())


# --------------------------------------------------------------------------
# rank-condition generators

def rank_condition_generators(params: OrbitParams, config: SpaceConfig) -> GeneratorSet:
    """All (r1+1)-minors of the generic matrix plus the isotropic-rank
    conditions on its Gram image: (r2+1)-minors for symmetric forms (one
    of each transpose-pair), principal (r2+2)-sub-Pfaffians for
    alternating ones.  Each family is empty once its size outgrows the
    matrix, so dense strata get the empty set."""
    if not params_valid(params, config):
        raise InvalidParams(f"{params} is not admissible here")
    if params.sign is not None:
        raise ExceptionalNeedsSign(
            "the two-component stratum needs component_generators(sign, config)"
        )
    e, f = config.e, config.f
    gens: list[Generator] = []
    n1 = params.r1 + 1
    if n1 <= min(e, f):
        for T in combinations(range(e), n1):
            for S in combinations(range(f), n1):
                gens.append(Generator(("minor", T, S), minor_polynomial(config, T, S)))
    G = generic_gram_map(config)
    if config.kind == SYMMETRIC:
        n2 = params.r2 + 1
        if n2 <= e:
            for T in combinations(range(e), n2):
                for S in combinations(range(e), n2):
                    if S < T:
                        continue  # minor(T,S) = minor(S,T) on a symmetric grid
                    sub = [[G[i][j] for j in S] for i in T]
                    gens.append(Generator(("gram-minor", T, S), poly_det(sub)))
    else:
        n2 = params.r2 + 2
        if n2 <= e:
            for S in combinations(range(e), n2):
                sub = [[G[i][j] for j in S] for i in S]
                gens.append(Generator(("gram-pfaffian", S), poly_pfaffian(sub)))
    return GeneratorSet(config, gens)


# --------------------------------------------------------------------------
# the half-form involution and component generators

@dataclass
class StarOperator:
    """The involution (up to scalar) on the middle exterior power of F
    induced by the form: on the basis {e_S} of f/2-subsets it satisfies
    matrix^2 = (-1)^{f/2} det(K) * identity = mu^2 * identity, and its two
    eigenspaces are the halves that split the maximal minors."""

    field: Field
    f: int
    subsets: tuple
    matrix: Matrix
    mu: object  # scalar payload with matrix^2 = mu^2 * id

    def projector(self, eigenvalue) -> Matrix:
        """(identity + eigenvalue^{-1} * matrix) / 2 projects onto the
        eigenvalue's eigenspace."""
        F = self.field
        n = len(self.subsets)
        ident = Matrix.identity(F, n)
        half = F.inv(F.from_int(2))
        return (ident + self.matrix.scale(F.inv(eigenvalue))).scale(half)


def _shuffle_sign(field: Field, subset, f: int):
    """Sign of the permutation (subset, complement), both ascending."""
    comp = [i for i in range(f) if i not in subset]
    seq = list(subset) + comp
    inversions = sum(
        1 for i in range(len(seq)) for j in range(i + 1, len(seq)) if seq[i] > seq[j]
    )
    return field.one if inversions % 2 == 0 else field.neg(field.one), tuple(comp)


def star_operator(form: BilinearForm) -> StarOperator:
    """Build the half-form involution for an even-dimensional symmetric
    form.  Needs mu = sqrt((-1)^{f/2} det K) in the field; otherwise
    raises with the remedy of passing a quadratic-extension field."""
    if form.kind != SYMMETRIC:
        raise WrongKind("the half-form involution needs a symmetric form")
    f = form.f
    if f % 2 != 0:
        raise OddDimension("the half-form involution needs f even")
    F = form.field
    m = f // 2
    subsets = tuple(combinations(range(f), m))
    n = len(subsets)
    index = {S: i for i, S in enumerate(subsets)}
    # Gram matrix of the induced pairing on the middle exterior power
    G = Matrix(F, [[form.gram.minor(U, T) for T in subsets] for U in subsets], n, n)
    P = [[F.zero] * n for _ in range(n)]
    for S in subsets:
        sgn, comp = _shuffle_sign(F, S, f)
        P[index[comp]][index[S]] = sgn
    star = G.inverse() @ Matrix(F, P, n, n)
    detk = form.gram.det()
    mu_sq = detk if m % 2 == 0 else F.neg(detk)
    # involution check: star^2 = mu^2 * id holds by construction
    assert star @ star == Matrix.identity(F, n).scale(mu_sq)
    mu = F.sqrt(mu_sq)
    if mu is None:
        raise EigenvalueNotInField(
            "the involution eigenvalue is not in this field; "
            "retry with a quadratic-extension field descriptor"
        )
    return StarOperator(F, f, subsets, star, mu)


def _reference_eigenvalue(star: StarOperator, config: SpaceConfig):
    """Involution eigenvalue of the decomposable vector spanned by the
    plus representative's row space; pins which eigenspace belongs to
    which component."""
    m = star.f // 2
    rep = representative(OrbitParams(m, 0, "+"), config)
    T0 = tuple(range(m))
    v0 = [rep.minor(T0, S) for S in star.subsets]
    col = Matrix(config.field, [[x] for x in v0], len(v0), 1)
    image = star.matrix @ col
    F = config.field
    i0 = next(i for i, x in enumerate(v0) if x != F.zero)
    lam = F.div(image.data[i0][0], v0[i0])
    assert lam in (star.mu, F.neg(star.mu))
    assert image == col.scale(lam)
    return lam


def component_generators(sign: str, config: SpaceConfig) -> GeneratorSet:
    """Generators of one component of the (f/2, 0) stratum of an even
    orthogonal space: the quadratic invariants W (entries of the generic
    Gram image) together with the projection of every maximal-minor
    vector onto the eigenspace opposite to the component's own family.

    The labelling is pinned so that component_generators('+') vanishes on
    representative((f/2, 0, '+'))."""
    if sign not in ("+", "-"):
        raise InvalidParams(f"sign must be '+' or '-', got {sign!r}")
    e, f = config.e, config.f
    if config.kind != SYMMETRIC:
        raise WrongKind("component generators need a symmetric form")
    if f % 2 != 0:
        raise OddDimension("component generators need f even")
    m = f // 2
    if m > e:
        raise InvalidParams("stratum (f/2, 0) is empty when f/2 > e")
    F = config.field
    star = star_operator(config.form)
    lam = _reference_eigenvalue(star, config)
    # vanishing on the sign component means projecting onto the OTHER family
    target = F.neg(lam) if sign == "+" else lam
    proj = star.projector(target)

    gens: list[Generator] = []
    G = generic_gram_map(config)
    for i in range(e):
        for j in range(i, e):
            gens.append(Generator(("quadratic-invariant", i, j), G[i][j]))

    n = len(star.subsets)
    nvars = e * f
    for T in combinations(range(e), m):
        w = [minor_polynomial(config, T, S) for S in star.subsets]
        for u in range(n):
            acc = Polynomial.zero(F, nvars)
            prow = proj.data[u]
            for s in range(n):
                c = prow[s]
                if c != F.zero and not w[s].is_zero():
                    acc = acc + w[s].scale(c)
            if not acc.is_zero():
                gens.append(Generator(("component", sign, T, u), acc))
    return GeneratorSet(config, gens)


# --------------------------------------------------------------------------
# label-driven regeneration (reproducibility contract)

def rebuild_generator(label: tuple, config: SpaceConfig) -> Generator:
    """Rebuild the polynomial a label denotes; regenerating from labels is
    bit-for-bit deterministic."""
    tag = label[0]
    if tag == "minor":
        _, T, S = label
        return Generator(label, minor_polynomial(config, T, S))
    G = generic_gram_map(config)
    if tag == "gram-minor":
        _, T, S = label
        sub = [[G[i][j] for j in S] for i in T]
        return Generator(label, poly_det(sub))
    if tag == "gram-pfaffian":
        _, S = label
        sub = [[G[i][j] for j in S] for i in S]
        return Generator(label, poly_pfaffian(sub))
    if tag == "quadratic-invariant":
        _, i, j = label
        return Generator(label, G[i][j])
    if tag == "component":
        _, sign, T, u = label
        for g in component_generators(sign, config):
            if g.label == label:
                return g
        raise InvalidParams(f"label {label} denotes a vanishing component row")
    raise InvalidParams(f"unknown generator label {label!r}")
