"""Exact arithmetic for finite Z/m-modules.

A finite module is stored in invariant-factor form ``Z/d_1 + ... + Z/d_k``
with ``d_1 | d_2 | ... | d_k``. Elements are tuples of residues. Maps act on
column vectors: column ``i`` of a map's matrix is the image of the ``i``-th
canonical generator.

Subgroups are handled through their preimage lattice in ``Z^k``. That lattice
always contains ``diag(d) Z^k``, so it has full rank, and its row Hermite
normal form is a canonical generating matrix: two subgroups are equal exactly
when their forms are equal.

Everything here is pure-integer Python. Matrices are tuples of row tuples.
"""

from dataclasses import dataclass
from functools import lru_cache, reduce
from itertools import product
from math import gcd, prod

from .config import require_within
from .errors import PreconditionError


# ---------------------------------------------------------------------------
# integer matrix kernels


def _identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _xgcd(a, b):
    """Return (g, s, t) with s*a + t*b = g = gcd(a, b) >= 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a - (a // b) * b
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        return -a, -s0, -t0
    return a, s0, t0


def matmul(A, B):
    """Integer product of two matrices given as row sequences."""
    if not A:
        return []
    inner = len(B)
    cols = len(B[0]) if B else 0
    return [[sum(A[i][t] * B[t][j] for t in range(inner)) for j in range(cols)]
            for i in range(len(A))]


def smith_normal_form(M):
    """Smith normal form over the integers.

    Returns ``(U, S, V)`` with ``U @ M @ V == S``, ``S`` diagonal with
    non-negative entries ``s_1 | s_2 | ...`` and ``U``, ``V`` unimodular.
    A matrix already in Smith form is returned with identity transforms.
    """
    U, S, V, _ = _snf(M)
    return U, S, V


def _snf(M):
    # Also returns V^{-1}; callers building isomorphisms need both directions.
    A = [list(row) for row in M]
    n = len(A)
    k = len(A[0]) if n else 0
    U, V, Vi = _identity(n), _identity(k), _identity(k)

    def row_add(dst, src, q):  # row_dst += q * row_src
        if q:
            A[dst] = [x + q * y for x, y in zip(A[dst], A[src])]
            U[dst] = [x + q * y for x, y in zip(U[dst], U[src])]

    def col_add(dst, src, q):  # col_dst += q * col_src
        if q:
            for row in A:
                row[dst] += q * row[src]
            for row in V:
                row[dst] += q * row[src]
            Vi[src] = [x - q * y for x, y in zip(Vi[src], Vi[dst])]

    def row_swap(i, j):
        if i != j:
            A[i], A[j] = A[j], A[i]
            U[i], U[j] = U[j], U[i]

    def col_swap(i, j):
        if i != j:
            for row in A:
                row[i], row[j] = row[j], row[i]
            for row in V:
                row[i], row[j] = row[j], row[i]
            Vi[i], Vi[j] = Vi[j], Vi[i]

    def smallest(t):
        best, size = None, 0
        for i in range(t, n):
            row = A[i]
            for j in range(t, k):
                v = abs(row[j])
                if v and (best is None or v < size):
                    best, size = (i, j), v
                    if v == 1:
                        return best
        return best

    t = 0
    while t < min(n, k):
        pos = smallest(t)
        if pos is None:
            break
        row_swap(t, pos[0])
        col_swap(t, pos[1])
        while True:
            p = A[t][t]
            for i in range(t + 1, n):
                row_add(i, t, -(A[i][t] // p))
            for j in range(t + 1, k):
                col_add(j, t, -(A[t][j] // p))
            pos = None
            for i in range(t + 1, n):
                if A[i][t] and (pos is None or abs(A[i][t]) < abs(A[pos[0]][pos[1]])):
                    pos = (i, t)
            for j in range(t + 1, k):
                if A[t][j] and (pos is None or abs(A[t][j]) < abs(A[pos[0]][pos[1]])):
                    pos = (t, j)
            if pos is not None:
                row_swap(t, pos[0])
                col_swap(t, pos[1])
                continue
            bad = None
            if abs(p) != 1:
                bad = next(((i, j) for i in range(t + 1, n) for j in range(t + 1, k)
                            if A[i][j] % p), None)
            if bad is None:
                break
            row_add(t, bad[0], 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return U, A, V, Vi


def integer_left_kernel(R, ncols):
    """Rows spanning ``{y in Z^n : y R = 0}`` for an ``n x ncols`` matrix."""
    if not R:
        return []
    U, S, _, _ = _snf(R)
    rank = sum(1 for i in range(min(len(S), ncols)) if S[i][i])
    return [U[i] for i in range(rank, len(R))]


def solve_congruences(A, b, moduli):
    """Find an integer x with ``A x = b (mod moduli)`` row by row, or None."""
    rows = len(A)
    if rows == 0:
        return [0] * (len(A[0]) if A else 0)
    ncols = len(A[0])
    U, S, V = _congruence_snf(tuple(map(tuple, A)), tuple(moduli))
    c = [sum(U[i][j] * b[j] for j in range(rows)) for i in range(rows)]
    w = [0] * (ncols + rows)
    for i in range(rows):
        s = S[i][i] if i < ncols + rows else 0
        if s == 0:
            if c[i]:
                return None
        else:
            if c[i] % s:
                return None
            w[i] = c[i] // s
    z = [sum(V[i][j] * w[j] for j in range(ncols + rows)) for i in range(ncols + rows)]
    return z[:ncols]


@lru_cache(maxsize=1024)
def _congruence_snf(A, moduli):
    # one factorization serves every right-hand side of the same system
    rows = len(A)
    aug = [list(A[i]) + [moduli[i] if j == i else 0 for j in range(rows)] for i in range(rows)]
    U, S, V, _ = _snf(aug)
    return U, S, V


def lattice_hnf(gens, orders):
    """Row Hermite normal form of the lattice spanned by ``gens`` and ``diag(orders)``.

    The result is a ``k x k`` upper triangular matrix with positive diagonal
    entries ``h_c`` dividing ``orders[c]`` and entries above the diagonal
    reduced into ``[0, h_c)``.
    """
    k = len(orders)
    pool = [[x % orders[j] for j, x in enumerate(g)] for g in gens]
    pool = [row for row in pool if any(row)]
    basis = []
    for c in range(k):
        # d_c e_c lies in the lattice, so it may be injected at any time; doing
        # it per column lets every row be reduced modulo the orders.
        pool.append([orders[c] if j == c else 0 for j in range(k)])
        piv = None
        rest = []
        for row in pool:
            if row[c] == 0:
                rest.append(row)
            elif piv is None:
                piv = row
            else:
                a, b = piv[c], row[c]
                g, s, t = _xgcd(a, b)
                new_piv = [s * x + t * y for x, y in zip(piv, row)]
                other = [(b // g) * x - (a // g) * y for x, y in zip(piv, row)]
                piv = new_piv
                rest.append(other)
        if piv[c] < 0:
            piv = [-x for x in piv]
        for row in [piv] + rest:
            for j in range(c + 1, k):
                row[j] %= orders[j]
        basis.append(piv)
        pool = [row for row in rest if any(row)]
    for c in range(k):
        h = basis[c][c]
        for i in range(c):
            q = basis[i][c] // h
            if q:
                basis[i] = [x - q * y for x, y in zip(basis[i], basis[c])]
    return tuple(tuple(row) for row in basis)


def _cokernel(R, k):
    """Invariant-factor form of ``Z^k / rowspan(R)`` (assumed finite).

    Returns ``(orders, forward, backward)``: ``x -> x @ forward`` maps a row
    vector of ``Z^k`` to coordinates modulo ``orders``, and
    ``y -> y @ backward`` lifts coordinates back to ``Z^k``.
    """
    if k == 0:
        return (), [], []
    _, S, V, Vi = _snf([list(r) for r in R])
    diag = [S[i][i] if i < len(S) else 0 for i in range(k)]
    if 0 in diag:
        raise PreconditionError("cokernel is infinite")
    keep = [i for i in range(k) if diag[i] > 1]
    orders = tuple(diag[i] for i in keep)
    forward = [[V[r][i] for i in keep] for r in range(k)]
    backward = [list(Vi[i]) for i in keep]
    return orders, forward, backward


def _triangular_coords(B, x):
    """Solve ``c @ B == x`` exactly for upper triangular ``B``."""
    k = len(B)
    c = [0] * k
    rem = list(x)
    for j in range(k):
        q, r = divmod(rem[j], B[j][j])
        if r:
            raise PreconditionError("vector is not in the lattice")
        c[j] = q
        if q:
            rem = [a - q * b for a, b in zip(rem, B[j])]
    return c


# ---------------------------------------------------------------------------
# modules and maps


@dataclass(frozen=True)
class FinModule:
    """``Z/d_1 + ... + Z/d_k`` over ``Z/modulus`` with ``d_1 | ... | d_k | modulus``."""

    modulus: int
    factors: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(int(d) for d in self.factors))
        if self.modulus < 2:
            raise PreconditionError(f"modulus must be >= 2, got {self.modulus}")
        prev = 1
        for d in self.factors:
            if d <= 1:
                raise PreconditionError(f"invariant factors must exceed 1, got {self.factors}")
            if d % prev:
                raise PreconditionError(f"invariant factors must form a divisibility chain: {self.factors}")
            if self.modulus % d:
                raise PreconditionError(f"factor {d} does not divide modulus {self.modulus}")
            prev = d

    @classmethod
    def cyclic(cls, modulus, order=None):
        order = modulus if order is None else order
        return cls(modulus, (order,) if order > 1 else ())

    @classmethod
    def from_orders(cls, modulus, orders):
        """Normalize ``Z/o_1 + ... + Z/o_n`` (any orders).

        Returns ``(module, to_module, from_module)``: integer matrices acting on
        column vectors that realize the isomorphism and its inverse.
        """
        return _normalize(modulus, tuple(orders))

    @property
    def rank(self):
        return len(self.factors)

    def __len__(self):
        return prod(self.factors)

    @property
    def order(self):
        return prod(self.factors)

    def zero(self):
        return (0,) * self.rank

    def gen(self, i):
        return tuple(int(i == j) for j in range(self.rank))

    def gens(self):
        return [self.gen(i) for i in range(self.rank)]

    def reduce(self, x):
        return tuple(v % d for v, d in zip(x, self.factors))

    def add(self, x, y):
        return tuple((a + b) % d for a, b, d in zip(x, y, self.factors))

    def sub(self, x, y):
        return tuple((a - b) % d for a, b, d in zip(x, y, self.factors))

    def scale(self, c, x):
        return tuple((c * a) % d for a, d in zip(x, self.factors))

    def elements(self):
        return [tuple(x) for x in product(*(range(d) for d in self.factors))]

    def whole(self):
        return Submodule(self, tuple(tuple(int(i == j) for j in range(self.rank))
                                     for i in range(self.rank)))

    def zero_submodule(self):
        return Submodule(self, tuple(tuple(d if i == j else 0 for j in range(self.rank))
                                     for i, d in enumerate(self.factors)))

    def identity(self):
        return ModuleMap(self, self, tuple(tuple(int(i == j) for j in range(self.rank))
                                           for i in range(self.rank)))

    def __str__(self):
        if not self.factors:
            return "0"
        return " + ".join(f"Z/{d}" for d in self.factors)


@lru_cache(maxsize=None)
def _normalize(modulus, orders):
    orders_kept, fwd, bwd = _cokernel([[o if i == j else 0 for j in range(len(orders))]
                                      for i, o in enumerate(orders)], len(orders))
    module = FinModule(modulus, orders_kept)
    to_module = tuple(tuple(fwd[i][t] for i in range(len(orders))) for t in range(module.rank))
    from_module = tuple(tuple(bwd[t][i] for t in range(module.rank)) for i in range(len(orders)))
    return module, to_module, from_module


def apply_matrix(H, x, orders):
    """``H x`` reduced modulo ``orders`` (one per row of ``H``)."""
    return tuple(sum(h * v for h, v in zip(row, x)) % o for row, o in zip(H, orders))


@dataclass(frozen=True)
class ModuleMap:
    """Additive map between finite modules, stored as a column-image matrix."""

    domain: FinModule
    codomain: FinModule
    matrix: tuple

    def __post_init__(self):
        k, l = self.domain.rank, self.codomain.rank
        rows = tuple(tuple(int(v) % o for v in row)
                     for row, o in zip(self.matrix, self.codomain.factors))
        if len(rows) != l or any(len(r) != k for r in rows) or len(self.matrix) != l:
            raise PreconditionError(f"matrix shape must be {l}x{k}")
        object.__setattr__(self, "matrix", rows)

    @classmethod
    def from_columns(cls, domain, codomain, columns):
        columns = list(columns)
        return cls(domain, codomain, tuple(tuple(col[j] for col in columns)
                                           for j in range(codomain.rank)))

    @classmethod
    def zero(cls, domain, codomain):
        return cls(domain, codomain, tuple((0,) * domain.rank for _ in range(codomain.rank)))

    def __call__(self, x):
        return apply_matrix(self.matrix, x, self.codomain.factors)

    def column(self, i):
        return tuple(row[i] for row in self.matrix)

    def is_well_defined(self):
        return all(self.codomain.scale(d, self.column(i)) == self.codomain.zero()
                   for i, d in enumerate(self.domain.factors))

    def then(self, other):
        """``other o self``."""
        if other.domain != self.codomain:
            raise PreconditionError("maps are not composable")
        return ModuleMap(self.domain, other.codomain, tuple(map(tuple, matmul(other.matrix, self.matrix)))
                         if other.matrix and self.matrix else
                         tuple((0,) * self.domain.rank for _ in range(other.codomain.rank)))

    def __matmul__(self, other):
        return other.then(self)

    def __add__(self, other):
        self._same_type(other)
        return ModuleMap(self.domain, self.codomain,
                         tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.matrix, other.matrix)))

    def __sub__(self, other):
        self._same_type(other)
        return ModuleMap(self.domain, self.codomain,
                         tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.matrix, other.matrix)))

    def __neg__(self):
        return ModuleMap(self.domain, self.codomain, tuple(tuple(-a for a in r) for r in self.matrix))

    def scaled(self, c):
        return ModuleMap(self.domain, self.codomain, tuple(tuple(c * a for a in r) for r in self.matrix))

    def _same_type(self, other):
        if (self.domain, self.codomain) != (other.domain, other.codomain):
            raise PreconditionError("maps have different domain or codomain")

    def is_zero(self):
        return not any(any(r) for r in self.matrix)

    def kernel(self):
        return kernel(self)

    def image(self):
        return image(self)

    def preimage(self, S):
        return preimage(self, S)


@dataclass(frozen=True)
class Submodule:
    """Subgroup of ``ambient`` in canonical (Hermite) form.

    ``hnf`` is the row Hermite normal form of the preimage lattice in
    ``Z^rank``. Build instances with :meth:`span`; the raw constructor
    trusts its input.
    """

    ambient: FinModule
    hnf: tuple

    @classmethod
    def span(cls, ambient, gens):
        return cls(ambient, lattice_hnf([tuple(g) for g in gens], ambient.factors))

    @property
    def diagonal(self):
        return tuple(self.hnf[c][c] for c in range(self.ambient.rank))

    def __len__(self):
        return prod(d // h for d, h in zip(self.ambient.factors, self.diagonal))

    @property
    def order(self):
        return len(self)

    def gens(self):
        out = []
        for row in self.hnf:
            g = self.ambient.reduce(row)
            if any(g):
                out.append(g)
        return out

    def __contains__(self, x):
        orders = self.ambient.factors
        x = [v % o for v, o in zip(x, orders)]
        for c, row in enumerate(self.hnf):
            h = row[c]
            if x[c] % h:
                return False
            q = x[c] // h
            if q:
                x = [(a - q * b) % o for a, b, o in zip(x, row, orders)]
        return True

    def elements(self):
        orders = self.ambient.factors
        ranges = [range(d // h) for d, h in zip(orders, self.diagonal)]
        out = []
        for coeffs in product(*ranges):
            x = [0] * len(orders)
            for c, row in zip(coeffs, self.hnf):
                if c:
                    x = [a + c * b for a, b in zip(x, row)]
            out.append(tuple(a % o for a, o in zip(x, orders)))
        return out

    def is_zero(self):
        return len(self) == 1

    def is_whole(self):
        return len(self) == self.ambient.order

    def __le__(self, other):
        _check_same_ambient(self, other)
        return all(g in other for g in self.gens())

    def __lt__(self, other):
        return self <= other and self != other

    def __ge__(self, other):
        return other <= self

    def __gt__(self, other):
        return other < self

    def __add__(self, other):
        return submodule_sum(self, other)

    def __and__(self, other):
        return intersect(self, other)

    def sort_key(self):
        return (len(self), self.hnf)

    def to_module(self):
        """Realize the subgroup as a module in invariant-factor form."""
        return _realize(self)

    def __str__(self):
        gens = self.gens()
        if not gens:
            return "0"
        return "<" + ", ".join("(" + ",".join(map(str, g)) + ")" for g in gens) + ">"


def _check_same_ambient(S1, S2):
    if S1.ambient != S2.ambient:
        raise PreconditionError("submodules live in different ambient modules")


@dataclass(frozen=True)
class Realization:
    """A submodule presented as an abstract module plus its inclusion."""

    submodule: Submodule
    module: FinModule
    inclusion: ModuleMap
    _coord_matrix: tuple

    def coords(self, x):
        """Coordinates in ``module`` of an element of the submodule."""
        if x not in self.submodule:
            raise PreconditionError(f"{x} is not in the submodule")
        B = self.submodule.hnf
        lift = [v % o for v, o in zip(x, self.submodule.ambient.factors)]
        c = _triangular_coords(B, lift)
        return apply_matrix(self._coord_matrix, c, self.module.factors)

    def coords_map(self, f):
        """Corestrict ``f`` (whose image lies in the submodule) to ``module``."""
        return ModuleMap.from_columns(f.domain, self.module,
                                      [self.coords(f(g)) for g in f.domain.gens()])


@lru_cache(maxsize=None)
def _realize(S):
    M = S.ambient
    B = [list(r) for r in S.hnf]
    k = M.rank
    C = [_triangular_coords(B, [d if j == i else 0 for j in range(k)])
         for i, d in enumerate(M.factors)]
    orders, fwd, bwd = _cokernel(C, k)
    module = FinModule(M.modulus, orders)
    cols = []
    for t in range(module.rank):
        v = [sum(bwd[t][i] * B[i][j] for i in range(k)) for j in range(k)]
        cols.append(M.reduce(v))
    inclusion = ModuleMap.from_columns(module, M, cols)
    coord_matrix = tuple(tuple(fwd[i][t] for i in range(k)) for t in range(module.rank))
    return Realization(S, module, inclusion, coord_matrix)


# ---------------------------------------------------------------------------
# lattice operations


def kernel(f):
    """Kernel of ``f`` as a submodule of its domain."""
    return solution_kernel(f.domain, f.matrix, f.codomain.factors)


def solution_kernel(domain, matrix, orders):
    """``{x in domain : matrix x = 0 (mod orders)}``; ``orders`` need not be a chain."""
    k = domain.rank
    if k == 0 or not orders:
        return domain.whole()
    R = [[row[i] for row in matrix] for i in range(k)]
    R += [[o if i == j else 0 for j in range(len(orders))] for i, o in enumerate(orders)]
    return Submodule.span(domain, [y[:k] for y in integer_left_kernel(R, len(orders))])


def image(f):
    return Submodule.span(f.codomain, [f.column(i) for i in range(f.domain.rank)])


def preimage(f, S):
    if S.ambient != f.codomain:
        raise PreconditionError("submodule does not lie in the codomain of the map")
    k = f.domain.rank
    if k == 0 or f.codomain.rank == 0:
        return f.domain.whole()
    R = [list(col) for col in zip(*f.matrix)]
    R += [list(row) for row in S.hnf]
    return Submodule.span(f.domain, [y[:k] for y in integer_left_kernel(R, f.codomain.rank)])


def submodule_sum(S1, S2):
    _check_same_ambient(S1, S2)
    return Submodule.span(S1.ambient, S1.gens() + S2.gens())


def intersect(S1, S2):
    _check_same_ambient(S1, S2)
    k = S1.ambient.rank
    if k == 0:
        return S1
    R = [list(r) for r in S1.hnf] + [list(r) for r in S2.hnf]
    gens = []
    for y in integer_left_kernel(R, k):
        gens.append([sum(y[i] * S1.hnf[i][j] for i in range(k)) for j in range(k)])
    return Submodule.span(S1.ambient, gens)


def quotient(M, S):
    """``M / S`` in invariant-factor form with the projection and a set-section."""
    if S.ambient != M:
        raise PreconditionError("submodule does not lie in the module")
    orders, fwd, bwd = _cokernel(S.hnf, M.rank)
    Q = FinModule(M.modulus, orders)
    proj = ModuleMap(M, Q, tuple(tuple(fwd[i][t] for i in range(M.rank)) for t in range(Q.rank)))
    section = ModuleMap.from_columns(Q, M, [M.reduce(bwd[t]) for t in range(Q.rank)])
    return Q, proj, section


# ---------------------------------------------------------------------------
# Hom groups


@dataclass(frozen=True)
class HomGroup:
    """All additive maps ``source -> target``, indexed by a finite module.

    ``Hom(+Z/d_i, +Z/e_j)`` splits as ``+ Z/gcd(d_i, e_j)``; the summand for
    ``(i, j)`` is generated by the map sending generator ``i`` to
    ``e_j/gcd`` in slot ``j``. ``module`` is that sum in invariant-factor form.
    """

    source: FinModule
    target: FinModule
    module: FinModule
    _slots: tuple
    _to: tuple
    _from: tuple

    def to_map(self, h):
        c = apply_matrix(self._from, h, [g for _, _, g in self._slots])
        H = [[0] * self.source.rank for _ in range(self.target.rank)]
        for (i, j, g), v in zip(self._slots, c):
            H[j][i] = v * (self.target.factors[j] // g)
        return ModuleMap(self.source, self.target, tuple(map(tuple, H)))

    def index(self, f):
        if (f.domain, f.codomain) != (self.source, self.target):
            raise PreconditionError("map does not belong to this Hom group")
        c = []
        for i, j, g in self._slots:
            step = self.target.factors[j] // g
            v = f.matrix[j][i]
            if v % step:
                raise PreconditionError("map is not well defined")
            c.append(v // step)
        return apply_matrix(self._to, c, self.module.factors)

    def maps(self):
        require_within("elements", self.module.order)
        return [self.to_map(h) for h in self.module.elements()]

    def __len__(self):
        return self.module.order


@lru_cache(maxsize=None)
def hom_group(M, N):
    """The group of additive maps ``M -> N``."""
    if M.modulus != N.modulus:
        raise PreconditionError("modules have different moduli")
    slots = []
    for i, d in enumerate(M.factors):
        for j, e in enumerate(N.factors):
            g = gcd(d, e)
            if g > 1:
                slots.append((i, j, g))
    module, to_m, from_m = FinModule.from_orders(M.modulus, [g for _, _, g in slots])
    return HomGroup(M, N, module, tuple(slots), to_m, from_m)


# ---------------------------------------------------------------------------
# enumeration


def enumerate_elements(M):
    require_within("elements", M.order)
    return M.elements()


def enumerate_closed_submodules(M, closure=None):
    """All subgroups of ``M`` stable under ``closure`` (canonically sorted).

    ``closure`` maps a :class:`Submodule` to the smallest admissible
    submodule containing it; ``None`` means plain subgroups. Admissible
    submodules must be closed under sums, so each one is a sum of closures
    of single elements and the search only adds those.
    """
    require_within("subgroups", M.order)
    close = closure or (lambda S: S)
    cyclic = sorted({close(Submodule.span(M, [x])) for x in M.elements()}, key=Submodule.sort_key)
    start = close(M.zero_submodule())
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for S in frontier:
            for C in cyclic:
                if C <= S:
                    continue
                T = S + C
                if T not in seen:
                    seen.add(T)
                    nxt.append(T)
        frontier = nxt
    return sorted(seen, key=Submodule.sort_key)


def enumerate_subgroups(M):
    return enumerate_closed_submodules(M)


def direct_sum_orders(*modules):
    return tuple(d for M in modules for d in M.factors)


def lcm(*values):
    return reduce(lambda a, b: a * b // gcd(a, b), values, 1)
