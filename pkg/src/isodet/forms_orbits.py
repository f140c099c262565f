"""Bilinear forms on F and the orbit stratification of e-by-f matrix
spaces under GL(E) x Sp(F) (alternating form) and GL(E) x SO(F)
(symmetric form).

Conventions, fixed once and used everywhere:

* an element of E (x) F is stored as the e-by-f matrix Phi whose rows are
  indexed by a basis of E, so the image subspace is the row space of Phi;
* the group acts by Phi |-> A Phi B^t with A in GL(E) and B an isometry
  of the form (B^t K B = K);
* the induced Gram matrix of the image is gram_map(Phi) = Phi K Phi^t,
  which is symmetric for symmetric forms and skew with zero diagonal for
  alternating ones, and transforms as A gram_map(Phi) A^t.

A stratum is labelled by the pair (r1, r2) = (rank, rank of gram_map),
subject to 0 <= r2 <= r1 <= e and 2*r1 - r2 <= f, with r2 even for
alternating forms.  For symmetric forms with f even the stratum
(f/2, 0) -- full-Witt totally isotropic image -- splits into two classes
distinguished by a sign: maximal isotropic subspaces fall into two
families according to the parity of their intersection dimension with a
reference member, and special isometries preserve the family while
improper ones swap it.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from math import comb

from .errors import (
    ConfigMismatch,
    DimensionMismatch,
    InsufficientWittIndex,
    InvalidForm,
    InvalidParams,
    RankDeficient,
    SignUndefinedForForm,
    SymmetryMismatch,
)
from .fields import Field
from .linalg import Matrix, random_invertible

SYMMETRIC = "symmetric"
ALTERNATING = "alternating"


# --------------------------------------------------------------------------
# vector helpers (tuples of payloads)

def _vec_add(field, u, v):
    add = field.add
    return tuple(add(a, b) for a, b in zip(u, v))

def _vec_sub(field, u, v):
    sub = field.sub
    return tuple(sub(a, b) for a, b in zip(u, v))

def _vec_scale(field, c, u):
    mul = field.mul
    return tuple(mul(c, a) for a in u)

def _unit(field, n, i):
    return tuple(field.one if j == i else field.zero for j in range(n))


@dataclass(frozen=True)
class OrbitParams:
    """Stratum label: rank bound r1, Gram-rank bound r2 and, for the
    two-component symmetric stratum (f/2, 0), a sign."""

    r1: int
    r2: int
    sign: str | None = None

    def __str__(self):
        if self.sign is None:
            return f"({self.r1},{self.r2})"
        return f"({self.r1},{self.r2},{self.sign})"

    def to_json(self) -> dict:
        obj = {"r1": self.r1, "r2": self.r2}
        if self.sign is not None:
            obj["sign"] = self.sign
        return obj

    @classmethod
    def from_json(cls, obj: dict) -> "OrbitParams":
        return cls(obj["r1"], obj["r2"], obj.get("sign"))


@dataclass(frozen=True)
class HyperbolicBasis:
    """Hyperbolic pairs (a_i, b_i) with beta(a_i, b_j) = delta_ij and both
    vectors isotropic, plus a pairwise-orthogonal anisotropic remainder."""

    pairs: tuple
    anisotropic: tuple

    @property
    def witt(self) -> int:
        return len(self.pairs)


class BilinearForm:
    """A non-degenerate symmetric or alternating form given by its Gram
    matrix K, i.e. beta(u, v) = u K v^t on row vectors."""

    def __init__(self, kind: str, gram: Matrix):
        if kind not in (SYMMETRIC, ALTERNATING):
            raise InvalidForm(f"unknown form kind {kind!r}")
        if gram.rows != gram.cols:
            raise InvalidForm("Gram matrix must be square")
        if gram.field.is_zero(gram.det()):
            raise InvalidForm("Gram matrix is degenerate")
        if kind == SYMMETRIC and not gram.is_symmetric():
            raise InvalidForm("symmetric form needs a symmetric Gram matrix")
        if kind == ALTERNATING:
            if gram.rows % 2 != 0:
                raise InvalidForm("alternating form needs even dimension")
            if not gram.is_skew():
                raise InvalidForm("alternating form needs a skew Gram matrix with zero diagonal")
        self.kind = kind
        self.gram = gram
        self._hyperbolic: HyperbolicBasis | None = None
        self._lie: list[Matrix] | None = None

    @property
    def f(self) -> int:
        return self.gram.rows

    @property
    def field(self) -> Field:
        return self.gram.field

    @classmethod
    def split(cls, field: Field, kind: str, f: int) -> "BilinearForm":
        """The maximal-Witt-index standard form: antidiagonal ones for
        symmetric (middle 1 when f is odd), block-diagonal [[0,1],[-1,0]]
        for alternating."""
        z, o = field.zero, field.one
        grid = [[z] * f for _ in range(f)]
        if kind == SYMMETRIC:
            for i in range(f):
                grid[i][f - 1 - i] = o
        else:
            for i in range(0, f - 1, 2):
                grid[i][i + 1] = o
                grid[i + 1][i] = field.neg(o)
        return cls(kind, Matrix(field, grid, f, f))

    def is_split_standard(self) -> bool:
        return self.gram == BilinearForm.split(self.field, self.kind, self.f).gram

    def to_json(self) -> dict:
        if self.is_split_standard():
            return {"kind": self.kind, "gram": "split"}
        return {"kind": self.kind, "gram": {"rows": self.gram.to_json()["rows"]}}

    @classmethod
    def from_json(cls, field: Field, obj: dict, f: int | None = None) -> "BilinearForm":
        gram = obj.get("gram", "split")
        if gram == "split":
            if f is None:
                raise InvalidForm("split form needs the dimension f")
            return cls.split(field, obj["kind"], f)
        if gram == "identity":
            if f is None:
                raise InvalidForm("identity form needs the dimension f")
            return cls(obj["kind"], Matrix.identity(field, f))
        rows = [[field.parse(s) for s in row] for row in gram["rows"]]
        return cls(obj["kind"], Matrix(field, rows))

    def __eq__(self, other):
        return isinstance(other, BilinearForm) and self.kind == other.kind and self.gram == other.gram

    def __hash__(self):
        return hash((self.kind, self.gram))

    # ------------------------------------------------------------ geometry

    def beta(self, u, v):
        """beta(u, v) = u K v^t for row vectors (tuples of payloads)."""
        F = self.field
        add, mul, zero = F.add, F.mul, F.zero
        acc = zero
        for i, ui in enumerate(u):
            if ui == zero:
                continue
            krow = self.gram.data[i]
            row_acc = zero
            for j, vj in enumerate(v):
                kij = krow[j]
                if kij != zero and vj != zero:
                    row_acc = add(row_acc, mul(kij, vj))
            acc = add(acc, mul(ui, row_acc))
        return acc

    def hyperbolic_basis(self) -> HyperbolicBasis:
        if self._hyperbolic is None:
            if self.is_split_standard():
                self._hyperbolic = _split_hyperbolic(self)
            elif self.kind == ALTERNATING:
                self._hyperbolic = _alternating_hyperbolic(self)
            else:
                self._hyperbolic = _symmetric_hyperbolic(self)
        return self._hyperbolic

    def reference_isotropic(self) -> Matrix:
        """Rows spanning the reference maximal isotropic subspace (the
        a-vectors); only defined when the Witt index is f/2."""
        hb = self.hyperbolic_basis()
        if self.f % 2 != 0 or hb.witt != self.f // 2:
            raise SignUndefinedForForm(
                "form has no maximal isotropic subspace of dimension f/2 over this field"
            )
        return Matrix(self.field, [a for a, _ in hb.pairs], hb.witt, self.f)

    def lie_basis(self) -> list[Matrix]:
        """Basis of the infinitesimal isometries {b : b^t K + K b = 0};
        dimension f(f+1)/2 for alternating forms, f(f-1)/2 for symmetric."""
        if self._lie is None:
            self._lie = _lie_basis(self)
        return self._lie


def _split_hyperbolic(form: BilinearForm) -> HyperbolicBasis:
    F, f = form.field, form.f
    if form.kind == ALTERNATING:
        pairs = tuple((_unit(F, f, 2 * i), _unit(F, f, 2 * i + 1)) for i in range(f // 2))
        return HyperbolicBasis(pairs, ())
    pairs = tuple((_unit(F, f, i), _unit(F, f, f - 1 - i)) for i in range(f // 2))
    anis = (_unit(F, f, f // 2),) if f % 2 else ()
    return HyperbolicBasis(pairs, anis)


def _independent_subset(field: Field, vectors, dim: int):
    """First (in order) linearly independent subset of the given size."""
    zero, mul, sub, inv = field.zero, field.mul, field.sub, field.inv
    reduced: list[tuple[int, list]] = []
    out = []
    for v in vectors:
        w = list(v)
        for pc, prow in reduced:
            c = w[pc]
            if c == zero:
                continue
            for j in range(len(w)):
                w[j] = sub(w[j], mul(c, prow[j]))
        pc = next((j for j in range(len(w)) if w[j] != zero), None)
        if pc is None:
            continue
        pinv = inv(w[pc])
        reduced.append((pc, [mul(pinv, x) for x in w]))
        out.append(v)
        if len(out) == dim:
            break
    return out


def _perp_within(form: BilinearForm, span, plane):
    """Basis of the subspace of ``span`` orthogonal to every vector in
    ``plane`` (computed inside the span's coordinates)."""
    F = form.field
    rows = [[form.beta(p, s) for s in span] for p in plane]
    coeffs = Matrix(F, rows, len(plane), len(span)).kernel_basis()
    out = []
    for y in coeffs:
        vec = tuple(F.zero for _ in range(form.f))
        for c, s in zip(y, span):
            if c != F.zero:
                vec = _vec_add(F, vec, _vec_scale(F, c, s))
        out.append(vec)
    return _independent_subset(F, out, len(span) - len(plane))


def _diagonalize_restriction(form: BilinearForm, span):
    """Pairwise beta-orthogonal vectors spanning ``span``, each of non-zero
    norm; valid whenever the restriction of the form is non-degenerate
    (char != 2)."""
    F = form.field
    vs = list(span)
    out = []
    while vs:
        v = next((x for x in vs if not F.is_zero(form.beta(x, x))), None)
        if v is None:
            # all basis norms vanish; some cross pairing is non-zero by
            # non-degeneracy, and v_i + v_j then has norm 2*beta != 0
            found = None
            for i in range(len(vs)):
                for j in range(i + 1, len(vs)):
                    if not F.is_zero(form.beta(vs[i], vs[j])):
                        found = _vec_add(F, vs[i], vs[j])
                        break
                if found is not None:
                    break
            if found is None:
                raise AssertionError("degenerate restriction in diagonalization")
            v = found
        out.append(v)
        nv = form.beta(v, v)
        projected = [
            _vec_sub(F, w, _vec_scale(F, F.div(form.beta(w, v), nv), v)) for w in vs
        ]
        vs = _independent_subset(F, projected, len(vs) - 1)
    return out


def _find_isotropic(form: BilinearForm, diag):
    """Non-zero isotropic vector in the span of a beta-orthogonal family,
    or None.  Complete over finite fields; over the rationals only
    two-term combinations are tried."""
    F = form.field
    norms = [form.beta(v, v) for v in diag]
    n = len(diag)
    for i in range(n):
        for j in range(i + 1, n):
            s = F.sqrt(F.neg(F.div(norms[j], norms[i])))
            if s is not None:
                return _vec_add(F, _vec_scale(F, s, diag[i]), diag[j])
    if F.order is None:
        return None
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                for t in F.elements():
                    # d_i s^2 + d_j t^2 + d_k = 0 solved for s
                    rhs = F.neg(F.div(F.add(F.mul(norms[j], F.mul(t, t)), norms[k]), norms[i]))
                    s = F.sqrt(rhs)
                    if s is not None:
                        return _vec_add(
                            F,
                            _vec_add(F, _vec_scale(F, s, diag[i]), _vec_scale(F, t, diag[j])),
                            diag[k],
                        )
    return None


def _symmetric_hyperbolic(form: BilinearForm) -> HyperbolicBasis:
    F = form.field
    two = F.add(F.one, F.one)
    span = [_unit(F, form.f, i) for i in range(form.f)]
    pairs = []
    while len(span) >= 2:
        diag = _diagonalize_restriction(form, span)
        v = _find_isotropic(form, diag)
        if v is None:
            break
        u = next(w for w in span if not F.is_zero(form.beta(v, w)))
        u = _vec_scale(F, F.inv(form.beta(v, u)), u)
        u = _vec_sub(F, u, _vec_scale(F, F.div(form.beta(u, u), two), v))
        pairs.append((v, u))
        span = _perp_within(form, span, (v, u))
    anis = tuple(_diagonalize_restriction(form, span)) if span else ()
    return HyperbolicBasis(tuple(pairs), anis)


def _alternating_hyperbolic(form: BilinearForm) -> HyperbolicBasis:
    F = form.field
    span = [_unit(F, form.f, i) for i in range(form.f)]
    pairs = []
    while span:
        v = span[0]
        u = next(w for w in span if not F.is_zero(form.beta(v, w)))
        u = _vec_scale(F, F.inv(form.beta(v, u)), u)
        pairs.append((v, u))
        span = _perp_within(form, span, (v, u))
    return HyperbolicBasis(tuple(pairs), ())


def _lie_basis(form: BilinearForm) -> list[Matrix]:
    F, f = form.field, form.f
    K = form.gram.data
    add, zero = F.add, F.zero
    rows = []
    for r in range(f):
        for s in range(f):
            row = [zero] * (f * f)
            for t in range(f):
                # (b^t K)_{rs} contributes K_{ts} to b_{tr},
                # (K b)_{rs} contributes K_{rt} to b_{ts}
                row[t * f + r] = add(row[t * f + r], K[t][s])
                row[t * f + s] = add(row[t * f + s], K[r][t])
            rows.append(row)
    kernel = Matrix(F, rows, f * f, f * f).kernel_basis()
    return [
        Matrix(F, [vec[i * f : (i + 1) * f] for i in range(f)], f, f) for vec in kernel
    ]


@dataclass(frozen=True)
class SpaceConfig:
    """The ambient problem: dim E = e >= 1, dim F = f >= 3, a scalar field
    and a non-degenerate form on F."""

    e: int
    f: int
    field: Field
    form: BilinearForm

    def __post_init__(self):
        if self.e < 1:
            raise InvalidForm("e must be at least 1")
        if self.f < 3:
            raise InvalidForm("f must be at least 3")
        if self.form.f != self.f:
            raise InvalidForm("form dimension disagrees with f")
        if self.form.field != self.field:
            raise InvalidForm("form field disagrees with the configured field")

    @property
    def kind(self) -> str:
        return self.form.kind

    def to_json(self) -> dict:
        return {
            "e": self.e,
            "f": self.f,
            "kind": self.kind,
            "field": self.field.descriptor(),
            "form": self.form.to_json(),
        }


def split_config(e: int, f: int, kind: str, field: Field) -> SpaceConfig:
    """Convenience constructor with the standard split form."""
    return SpaceConfig(e, f, field, BilinearForm.split(field, kind, f))


# --------------------------------------------------------------------------
# the invariant map and classification

def gram_map(phi: Matrix, form: BilinearForm) -> Matrix:
    """Gram matrix Phi K Phi^t of the rows of Phi under the form."""
    if phi.cols != form.f or phi.field != form.field:
        raise DimensionMismatch("matrix does not live in the form's space")
    return phi @ form.gram @ phi.T


def isotropic_rank(phi: Matrix, form: BilinearForm) -> int:
    return gram_map(phi, form).rank()


def valid_params(config: SpaceConfig) -> list[OrbitParams]:
    """All admissible (r1, r2) labels, in lexicographic order, with the
    two-component symmetric stratum emitted as (f/2, 0, +) then
    (f/2, 0, -)."""
    out = []
    alternating = config.kind == ALTERNATING
    exceptional = config.kind == SYMMETRIC and config.f % 2 == 0
    for r1 in range(config.e + 1):
        for r2 in range(r1 + 1):
            if 2 * r1 - r2 > config.f:
                continue
            if alternating and r2 % 2 != 0:
                continue
            if exceptional and (r1, r2) == (config.f // 2, 0):
                out.append(OrbitParams(r1, r2, "+"))
                out.append(OrbitParams(r1, r2, "-"))
            else:
                out.append(OrbitParams(r1, r2))
    return out


def params_valid(params: OrbitParams, config: SpaceConfig) -> bool:
    r1, r2 = params.r1, params.r2
    if not (0 <= r2 <= r1 <= config.e) or 2 * r1 - r2 > config.f:
        return False
    if config.kind == ALTERNATING and r2 % 2 != 0:
        return False
    signed = config.kind == SYMMETRIC and config.f % 2 == 0 and (r1, r2) == (config.f // 2, 0)
    if signed:
        return params.sign in ("+", "-")
    return params.sign is None


def _require_valid(params: OrbitParams, config: SpaceConfig):
    if not params_valid(params, config):
        raise InvalidParams(f"{params} is not admissible for e={config.e}, f={config.f}, {config.kind}")


def classify(phi: Matrix, config: SpaceConfig) -> OrbitParams:
    """The stratum of phi: (rank, Gram rank) plus, for the two-component
    symmetric stratum, the family sign of the (maximal isotropic) image.

    The sign is + exactly when f/2 - dim(rowspace intersect L0) is even,
    where L0 is the reference maximal isotropic subspace.
    """
    if phi.rows != config.e or phi.cols != config.f or phi.field != config.field:
        raise DimensionMismatch("matrix shape or field disagrees with the configuration")
    r1 = phi.rank()
    r2 = isotropic_rank(phi, config.form)
    sign = None
    if config.kind == SYMMETRIC and config.f % 2 == 0 and (r1, r2) == (config.f // 2, 0):
        half = config.f // 2
        ref = config.form.reference_isotropic()
        inter = r1 + half - phi.vstack(ref).rank()
        sign = "+" if (half - inter) % 2 == 0 else "-"
    return OrbitParams(r1, r2, sign)


def representative(params: OrbitParams, config: SpaceConfig) -> Matrix:
    """Canonical point of the stratum, built from a hyperbolic basis.

    First k = r1 - r2 rows span an isotropic subspace; the next r2 rows
    are pairwise-orthogonal vectors of non-zero norm (symmetric) or
    hyperbolic pairs (alternating); remaining rows are zero.  For the
    signed stratum the minus representative swaps the last a-vector for
    its hyperbolic partner, moving the row space to the other family.
    """
    _require_valid(params, config)
    F = config.field
    hb = config.form.hyperbolic_basis()
    k = params.r1 - params.r2
    if k > hb.witt:
        raise InsufficientWittIndex(f"need {k} hyperbolic pairs, form has {hb.witt}")
    rows = [hb.pairs[i][0] for i in range(k)]
    if params.sign is not None:
        if params.sign == "-":
            rows[-1] = hb.pairs[k - 1][1]
    elif config.kind == ALTERNATING:
        npairs = params.r2 // 2
        if k + npairs > hb.witt:
            raise InsufficientWittIndex(
                f"need {k + npairs} hyperbolic pairs, form has {hb.witt}"
            )
        for j in range(k, k + npairs):
            rows.append(hb.pairs[j][0])
            rows.append(hb.pairs[j][1])
    else:
        pool = []
        for a, b in hb.pairs[k:]:
            pool.append(_vec_add(F, a, b))
            pool.append(_vec_sub(F, a, b))
        pool.extend(hb.anisotropic)
        if params.r2 > len(pool):
            raise InsufficientWittIndex(
                f"form supports at most {len(pool)} orthogonal anisotropic rows"
            )
        rows.extend(pool[: params.r2])
    zero_row = tuple(F.zero for _ in range(config.f))
    while len(rows) < config.e:
        rows.append(zero_row)
    return Matrix(F, rows, config.e, config.f)


# --------------------------------------------------------------------------
# dimensions and closure order

def codimension(params: OrbitParams, config: SpaceConfig) -> int:
    """(e-r1)(f-r1) + C(r1-r2, 2) for alternating forms and
    (e-r1)(f-r1) + C(r1-r2+1, 2) for symmetric ones."""
    _require_valid(params, config)
    base = (config.e - params.r1) * (config.f - params.r1)
    gap = params.r1 - params.r2
    if config.kind == ALTERNATING:
        return base + comb(gap, 2)
    return base + comb(gap + 1, 2)


def dimension(params: OrbitParams, config: SpaceConfig) -> int:
    return config.e * config.f - codimension(params, config)


def closure_leq(p: OrbitParams, q: OrbitParams, config: SpaceConfig) -> bool:
    """Whether the closure of the q-stratum contains the p-stratum:
    componentwise r1/r2 comparison, with equal signs required when both
    labels are the signed stratum."""
    if not params_valid(p, config) or not params_valid(q, config):
        raise ConfigMismatch("parameters are not admissible for this configuration")
    if p.sign is not None and q.sign is not None and p.sign != q.sign:
        return False
    return p.r1 <= q.r1 and p.r2 <= q.r2


# --------------------------------------------------------------------------
# tabulated classification facts

YES = "yes"
NO = "no"
YES_CHAR0 = "yes-if-char0"
UNKNOWN = "unknown"


@dataclass(frozen=True)
class OrbitFacts:
    """Read-only singularity flags for a stratum closure, tabulated from
    the known classification of these varieties.  Flags that the
    classification leaves open are reported as unknown, never guessed."""

    dim: int
    codim: int
    normal: bool
    cohen_macaulay: str          # yes | no | yes-if-char0 | unknown
    rational_singularities_char0: bool
    gorenstein: str              # yes | no | unknown
    strongly_f_regular: str      # yes | unknown

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "codim": self.codim,
            "normal": self.normal,
            "cohen_macaulay": self.cohen_macaulay,
            "rational_singularities_char0": self.rational_singularities_char0,
            "gorenstein": self.gorenstein,
            "strongly_f_regular": self.strongly_f_regular,
        }


def facts(params: OrbitParams, config: SpaceConfig) -> OrbitFacts:
    _require_valid(params, config)
    e, f = config.e, config.f
    r1, r2 = params.r1, params.r2
    cd = codimension(params, config)
    alternating = config.kind == ALTERNATING

    if cd == 0:
        # the closure is the whole matrix space, which is smooth
        return OrbitFacts(e * f, 0, True, YES, True, YES, YES)

    if alternating:
        normal = True
    else:
        normal = (r2 != 2 * r1 - f) or r2 == 0 or r2 == r1

    sfr = UNKNOWN
    if r2 == 0 or (alternating and r1 == e and f >= 2 * e):
        sfr = YES

    # r1 = e (and then necessarily e < f here): the full-rank closures are
    # Cohen-Macaulay in every characteristic; for alternating forms they
    # are Gorenstein, for symmetric ones Gorenstein iff e - r2 is odd or
    # r2 in {0, e}.  The two-component stratum is excluded from the
    # Gorenstein table.
    if alternating:
        if r1 == e:
            cm = YES
            gor = YES
        else:
            cm = YES if sfr == YES else YES_CHAR0
            gor = UNKNOWN
        rs = True
    else:
        if not normal:
            cm = YES if r1 == e else NO
            rs = False
            gor = UNKNOWN
            if r1 == e and params.sign is None:
                gor = YES if ((e - r2) % 2 == 1 or r2 in (0, e)) else NO
        else:
            rs = True
            if r1 == e:
                cm = YES
                if params.sign is None:
                    gor = YES if ((e - r2) % 2 == 1 or r2 in (0, e)) else NO
                else:
                    gor = UNKNOWN
            else:
                cm = YES if sfr == YES else YES_CHAR0
                gor = UNKNOWN

    return OrbitFacts(e * f - cd, cd, normal, cm, rs, gor, sfr)


# --------------------------------------------------------------------------
# constructive congruence solving

def solve_congruence(S: Matrix, A: Matrix, form: BilinearForm) -> Matrix:
    """Solve A K B^t + B K A^t = S for B, where K is the form's Gram
    matrix, A has full row rank, and S matches the form's symmetry
    (skew for alternating, symmetric for symmetric).

    Construction: with Y a left inverse of K A^t,
      alternating: write S = X - X^t with X the strict upper triangle of
                   S, then B = X Y;
      symmetric:   B = (1/2) S Y.
    """
    F = form.field
    if A.cols != form.f or A.field != F or S.field != F:
        raise DimensionMismatch("operands do not live in the form's space")
    if S.rows != S.cols or S.rows != A.rows:
        raise DimensionMismatch("S must be square of size rows(A)")
    if form.kind == ALTERNATING:
        if not S.is_skew():
            raise SymmetryMismatch("alternating congruence needs skew S")
    else:
        if not S.is_symmetric():
            raise SymmetryMismatch("symmetric congruence needs symmetric S")
    Y = (form.gram @ A.T).left_inverse()  # RankDeficient when A drops rank
    if form.kind == ALTERNATING:
        z = F.zero
        X = Matrix(
            F,
            [
                [S.data[i][j] if j > i else z for j in range(S.cols)]
                for i in range(S.rows)
            ],
            S.rows,
            S.cols,
        )
        return X @ Y
    half = F.inv(F.from_int(2))
    return (S @ Y).scale(half)


# --------------------------------------------------------------------------
# tangent spaces and sampling

def tangent_dimension(phi: Matrix, config: SpaceConfig) -> int:
    """Dimension of the orbit through phi: rank of the linearized action
    (a, b) |-> a Phi + Phi b^t over gl(E) + the form's isometry algebra."""
    if phi.rows != config.e or phi.cols != config.f or phi.field != config.field:
        raise DimensionMismatch("matrix shape or field disagrees with the configuration")
    F = config.field
    e, f = config.e, config.f
    zero = F.zero
    rows = []
    for u in range(e):
        for v in range(e):
            # E_uv Phi places row v of Phi into row u
            flat = [zero] * (e * f)
            flat[u * f : (u + 1) * f] = list(phi.data[v])
            rows.append(flat)
    for b in config.form.lie_basis():
        rows.append(list((phi @ b.T).flat()))
    n = len(rows)
    return Matrix(F, rows, n, e * f).rank()


def random_isometry(form: BilinearForm, seed=None, *, rng=None, stats: dict | None = None) -> Matrix:
    """Random special isometry B (B^t K B = K, det B = 1) via the Cayley
    transform B = (I - M)(I + M)^{-1} of a random infinitesimal isometry
    M, retrying while I + M is singular.  Falls back to the identity
    after 64 failed draws; ``stats`` (when given) records the attempt
    count and whether the fallback fired."""
    if rng is None:
        rng = random.Random(seed)
    F = form.field
    basis = form.lie_basis()
    ident = Matrix.identity(F, form.f)
    attempts = 0
    for _ in range(64):
        attempts += 1
        M = Matrix.zeros(F, form.f, form.f)
        for b in basis:
            c = F.random(rng)
            if not F.is_zero(c):
                M = M + b.scale(c)
        try:
            inv = (ident + M).inverse()
        except RankDeficient:
            continue
        if stats is not None:
            stats["attempts"] = attempts
            stats["fallback"] = False
        return (ident - M) @ inv
    if stats is not None:
        stats["attempts"] = attempts
        stats["fallback"] = True
    return ident


def hyperbolic_swap(form: BilinearForm) -> Matrix:
    """The improper isometry exchanging the first hyperbolic pair
    (a1 <-> b1) and fixing its orthogonal complement; determinant -1.
    Only symmetric forms admit improper isometries."""
    if form.kind != SYMMETRIC:
        raise InvalidForm("only symmetric forms have improper isometries")
    F, f = form.field, form.f
    hb = form.hyperbolic_basis()
    if not hb.pairs:
        raise InsufficientWittIndex("form has no hyperbolic pair to swap")
    basis_vecs = []
    images = []
    a1, b1 = hb.pairs[0]
    basis_vecs += [a1, b1]
    images += [b1, a1]
    for a, b in hb.pairs[1:]:
        basis_vecs += [a, b]
        images += [a, b]
    for c in hb.anisotropic:
        basis_vecs.append(c)
        images.append(c)
    Q = Matrix(F, basis_vecs, f, f).T        # columns are basis vectors
    Tc = Matrix(F, images, f, f).T           # columns are their images
    return Tc @ Q.inverse()


def random_orbit_point(params: OrbitParams, config: SpaceConfig, seed=None) -> Matrix:
    """A Phi B^t for the stratum representative Phi, random invertible A
    and random special isometry B; deterministic per seed."""
    _require_valid(params, config)
    rng = random.Random(seed)
    rep = representative(params, config)
    A = random_invertible(config.field, config.e, rng)
    B = random_isometry(config.form, rng=rng)
    return A @ rep @ B.T
