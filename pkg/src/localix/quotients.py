"""Modules of quotients and the extension of derivations to them.

A finite Gabriel filter is closed under intersection, so it has a smallest
member ``I_min`` and the directed colimit of ``Hom_EM(I, M/M_tau)`` over the
filter is attained at ``I_min``. The working carrier is therefore
``Hom_EM(I_min, M/M_tau)`` with ``(a.f)(x) = f(x a)``. The colimit itself is
still built (:func:`colimit_hom`), only as an oracle: every quotient module is
checked to be isomorphic to it.
"""

from dataclasses import dataclass, field
from functools import lru_cache

from .config import current_bounds
from .errors import ConsistencyError, InvalidDerivationError, PreconditionError
from .finmod import ModuleMap, image, intersect, kernel
from .monad import (
    EMModule,
    LawReport,
    ModuleDerivation,
    check_em_module,
    check_em_morphism,
    check_module_derivation,
    count_module_derivations,
    em_hom_group,
    em_quotient,
    em_submodule,
    enumerate_module_derivations,
    regular_module,
)
from .torsion import (
    TorsionTheory,
    check_differential,
    delta_invariant_J,
    ideal_quotient,
    is_torsion,
    torsion_radical,
)


def _filter_of(L):
    return L.filter if isinstance(L, TorsionTheory) else L


def min_ideal(L):
    """The smallest member of a Gabriel filter (the intersection of all members)."""
    L = _filter_of(L)
    I = L.ideals[0]
    for J in L.ideals[1:]:
        I = intersect(I, J)
    if I not in L:
        raise ConsistencyError("filter is not closed under intersection")
    return I


@lru_cache(maxsize=None)
def _ideal_module(A, I):
    return em_submodule(regular_module(A), I)


@lru_cache(maxsize=None)
def _ideal_inclusion(A, K, I):
    """Inclusion ``K -> I`` between filter ideals, in their own coordinates."""
    _, real_K = _ideal_module(A, K)
    _, real_I = _ideal_module(A, I)
    return ModuleMap.from_columns(real_K.module, real_I.module,
                                  [real_I.coords(real_K.inclusion(x)) for x in real_K.module.gens()])


def _restrict(A, f, K, I):
    """``f: I -> N`` restricted to ``K``."""
    return _ideal_inclusion(A, K, I).then(f)


def _right_action(A, I, a):
    """``x -> x a`` on the ideal ``I`` (which must be stable under it)."""
    _, real = _ideal_module(A, I)
    cols = []
    for x in real.module.gens():
        y = A.mul(real.inclusion(x), a)
        if y not in I:
            raise ConsistencyError(f"ideal {I} is not stable under right multiplication by {a}")
        cols.append(real.coords(y))
    return ModuleMap.from_columns(real.module, real.module, cols)


# ---------------------------------------------------------------------------
# the raw colimit


@dataclass
class RawColimit:
    """Classes of pairs ``(I, f: I -> N)`` for ``I`` in the filter.

    Two pairs are identified when they agree on some filter member inside
    both domains.
    """

    filter: object
    target: EMModule
    entries: list
    class_of: list
    key_index: dict

    @property
    def algebra(self):
        return self.target.algebra

    def lookup(self, I, f):
        return self.class_of[self.key_index[(I, f.matrix)]]

    def classes(self):
        out = {}
        for pos, c in enumerate(self.class_of):
            out.setdefault(c, []).append(pos)
        return out

    def __len__(self):
        return len(set(self.class_of))


def colimit_hom(L, N):
    """The colimit of ``Hom_EM(I, N)`` over the filter, glued by restriction."""
    L = _filter_of(L)
    A = N.algebra
    entries = []
    for I in L:
        mod, _ = _ideal_module(A, I)
        for f in em_hom_group(mod, N).maps():
            entries.append((I, f))
    parent = list(range(len(entries)))

    def find(p):
        while parent[p] != p:
            parent[p] = parent[parent[p]]
            p = parent[p]
        return p

    for K in L:
        first = {}
        for pos, (I, f) in enumerate(entries):
            if not K <= I:
                continue
            key = _restrict(A, f, K, I).matrix
            if key in first:
                a, b = find(first[key]), find(pos)
                if a != b:
                    parent[max(a, b)] = min(a, b)
            else:
                first[key] = pos
    roots = {}
    class_of = []
    for pos in range(len(entries)):
        r = find(pos)
        class_of.append(roots.setdefault(r, len(roots)))
    key_index = {(I, f.matrix): pos for pos, (I, f) in enumerate(entries)}
    return RawColimit(L, N, entries, class_of, key_index)


# ---------------------------------------------------------------------------
# module of quotients


@dataclass
class QuotientModule:
    """``H_tau(M)`` realized on ``Hom_EM(I_min, M/M_tau)``."""

    source: EMModule
    filter: object
    torsion: object
    reduced: EMModule
    projection: ModuleMap
    section: ModuleMap
    min_ideal: object
    homs: object
    carrier: EMModule
    phi: ModuleMap
    raw: RawColimit = None
    checks: list = field(default_factory=list)

    @property
    def algebra(self):
        return self.source.algebra

    def to_map(self, y):
        """The morphism ``I_min -> M/M_tau`` represented by a carrier element."""
        return self.homs.to_map(y)

    def index(self, f):
        return self.homs.index(f)

    def class_of(self, I, f):
        """Carrier element of the colimit class of ``f: I -> M/M_tau``."""
        return self.index(_restrict(self.algebra, f, self.min_ideal, I))


def module_of_quotients(M, L, verify=True):
    """Build ``H_tau(M)``, ``Phi_M`` and, with ``verify``, check every invariant."""
    return _module_of_quotients(M, _filter_of(L), verify)


@lru_cache(maxsize=None)
def _module_of_quotients(M, L, verify):
    A = M.algebra
    sigma = torsion_radical(M, L, literal=verify)
    N, p, section = em_quotient(M, sigma)
    Imin = min_ideal(L)
    I_mod, I_real = _ideal_module(A, Imin)
    homs = em_hom_group(I_mod, N)
    H = homs.module
    acts = []
    for i in range(A.rank):
        R = _right_action(A, Imin, A.basis(i))
        cols = [homs.index(R.then(homs.to_map(y))) for y in H.gens()]
        acts.append(ModuleMap.from_columns(H, H, cols).matrix)
    carrier = EMModule(A, H, tuple(acts))
    phi_cols = []
    for m in M.carrier.gens():
        orbit = ModuleMap.from_columns(I_mod.carrier, N.carrier,
                                       [p(M.apply(I_real.inclusion(x), m)) for x in I_mod.carrier.gens()])
        phi_cols.append(homs.index(orbit))
    phi = ModuleMap.from_columns(M.carrier, H, phi_cols)
    Q = QuotientModule(M, L, sigma, N, p, section, Imin, homs, carrier, phi)
    if verify:
        Q.raw = colimit_hom(L, N)
        _verify(Q)
    return Q


def _verify(Q):
    A, M, L = Q.algebra, Q.source, Q.filter

    def record(check, ok, **witness):
        Q.checks.append(LawReport(check, ok, witness or None))
        if not ok:
            raise ConsistencyError(f"{check} fails: {witness}")

    record("module-of-quotients", bool(check_em_module(Q.carrier)), what="carrier is an EM-module")
    record("phi", bool(check_em_morphism(Q.phi, M, Q.carrier)), what="Phi_M is an EM-morphism")
    _verify_colimit(Q, record)
    ker = kernel(Q.phi)
    ker_mod, _ = em_submodule(M, ker)
    record("phi", bool(is_torsion(ker_mod, L)), what="Ker(Phi_M) is torsion")
    coker, _, _ = em_quotient(Q.carrier, image(Q.phi))
    record("phi", bool(is_torsion(coker, L)), what="Coker(Phi_M) is torsion")
    if Q.torsion.is_whole():
        record("module-of-quotients", Q.carrier.carrier.order == 1, what="H(torsion) = 0")
    if Q.torsion.is_zero():
        record("phi", ker.is_zero(), what="Phi_M injective on torsion-free M")
    record("module-of-quotients", torsion_radical(Q.carrier, L, literal=False).is_zero(), what="H(M) torsion-free")


def _verify_colimit(Q, record):
    A, raw = Q.algebra, Q.raw
    classes = raw.classes()
    image_of = {}
    for c, members in classes.items():
        targets = {Q.class_of(*raw.entries[pos]) for pos in members}
        record("colimit", len(targets) == 1, what="class restricts to one map on I_min", cls=c)
        image_of[c] = targets.pop()
    record("colimit", len(set(image_of.values())) == len(image_of), what="injective")
    record("colimit", len(image_of) == Q.carrier.carrier.order, what="surjective",
           classes=len(image_of), carrier=Q.carrier.carrier.order)
    reps = {c: raw.entries[members[0]] for c, members in classes.items()}
    H = Q.carrier.carrier
    # additivity against preimages of carrier generators suffices: the classes
    # c2 with psi(c1 + c2) = psi(c1) + psi(c2) for all c1 form a submonoid of
    # a finite group, hence a subgroup, and psi is a bijection
    preimage_of = {v: c for c, v in image_of.items()}
    generator_classes = [preimage_of[g] for g in H.gens()]
    for c1, (I, f) in reps.items():
        for c2 in generator_classes:
            J, g = reps[c2]
            K = intersect(I, J)
            s = _restrict(A, f, K, I) + _restrict(A, g, K, J)
            got = image_of[raw.lookup(K, s)]
            record("colimit", got == H.add(image_of[c1], image_of[c2]), what="additive")
        for i in range(A.rank):
            a = A.basis(i)
            P = ideal_quotient(A, I, a)
            _, real_P = _ideal_module(A, P)
            _, real_I = _ideal_module(A, I)
            shifted = ModuleMap.from_columns(real_P.module, real_I.module,
                                             [real_I.coords(A.mul(real_P.inclusion(x), a))
                                              for x in real_P.module.gens()]).then(f)
            got = image_of[raw.lookup(P, shifted)]
            want = Q.carrier.apply(a, image_of[c1])
            record("colimit", got == want, what="action", basis=i)


# ---------------------------------------------------------------------------
# extending derivations


def _reduced_derivation(Q, D):
    """``D`` transported to ``M/M_tau`` (requires ``D(M_tau) <= M_tau``)."""
    N, p, s = Q.reduced, Q.projection, Q.section
    return ModuleMap.from_columns(N.carrier, N.carrier, [p(D(s(y))) for y in N.carrier.gens()])


def extend_class(Q, D, I, f, J):
    """Apply the extension formula to the representative ``f: I -> N`` using ``J``.

    ``J`` must be a filter member with ``d(J) <= I``. The formula
    ``x -> D(f(x)) - f(d(x))`` is evaluated on ``K = I & J`` and the result is
    returned as a carrier element (restriction to ``I_min``).
    """
    A, L, d = Q.algebra, Q.filter, D.delta
    if J not in L or I not in L:
        raise PreconditionError("ideals must belong to the filter")
    D_N = _reduced_derivation(Q, D)
    K = intersect(I, J)
    K_mod, real_K = _ideal_module(A, K)
    _, real_I = _ideal_module(A, I)
    incl = _ideal_inclusion(A, K, I)
    cols = []
    for x in K_mod.carrier.gens():
        dx = d(real_K.inclusion(x))
        if dx not in I:
            raise PreconditionError(f"d(J) is not contained in I: d{real_K.inclusion(x)} = {dx}")
        v = Q.reduced.carrier.sub(D_N(f(incl(x))), f(real_I.coords(dx)))
        cols.append(v)
    Dbar_f = ModuleMap.from_columns(K_mod.carrier, Q.reduced.carrier, cols)
    if not check_em_morphism(Dbar_f, K_mod, Q.reduced):
        raise ConsistencyError("extension formula did not produce an EM-morphism")
    return Q.class_of(K, Dbar_f)


def extend_derivation(Q, D):
    """The delta-derivation ``D_bar`` of ``H_tau(M)`` induced by ``D`` (torsion-free ``M``)."""
    if D.module != Q.source:
        raise PreconditionError("derivation acts on a different module")
    if not Q.torsion.is_zero():
        raise PreconditionError("source is not torsion-free; use extend_derivation_general")
    rep = check_module_derivation(D)
    if not rep:
        raise InvalidDerivationError(f"not a delta-derivation: {rep.witness}", rep)
    A, d = Q.algebra, D.delta
    I = Q.min_ideal
    J = delta_invariant_J(A, I, d, Q.filter)
    cols = [extend_class(Q, D, I, Q.to_map(y), J) for y in Q.carrier.carrier.gens()]
    Dbar = ModuleDerivation(Q.carrier, ModuleMap.from_columns(Q.carrier.carrier, Q.carrier.carrier, cols).matrix, d)
    rep = check_module_derivation(Dbar)
    if not rep:
        raise ConsistencyError(f"extension is not a delta-derivation: {rep.witness}")
    return Dbar


def check_lift(Q, D, Dbar, through=None):
    """``D_bar . Phi = Phi . D`` on every element of the source.

    ``through`` replaces ``Phi`` (for example by ``Phi_{M/M_tau} . p``).
    """
    phi = through or Q.phi
    for m in D.module.carrier.elements():
        lhs = Dbar(phi(m))
        rhs = phi(D(m))
        if lhs != rhs:
            return LawReport("lift", False, {"element": m, "lhs": lhs, "rhs": rhs})
    return LawReport("lift", True)


@dataclass(frozen=True)
class LiftCount:
    """Number of delta-derivations of the quotient module lifting ``D``."""

    count: int
    lifts: tuple

    def __int__(self):
        return self.count


def verify_unique_lift(Q, D, Dbar=None, through=None):
    """Count delta-derivations ``E`` of ``H_tau(M)`` with ``E . Phi = Phi . D``.

    The lift condition on generators of the source is appended to the linear
    system for derivations, so the count is the size of a solution set. When
    the carrier has few enough derivations they are also enumerated and
    filtered by comparing ``E . Phi`` with ``Phi . D`` as maps; the two
    counts must agree.
    """
    phi = through or Q.phi
    d = D.delta
    extra = tuple((phi(m), phi(D(m))) for m in D.module.carrier.gens())
    count = count_module_derivations(Q.carrier, d, extra)
    lifts = ()
    if count_module_derivations(Q.carrier, d) <= current_bounds().elements:
        target = D.as_map().then(phi)
        lifts = tuple(E for E in enumerate_module_derivations(Q.carrier, d)
                      if phi.then(E.as_map()) == target)
        if len(lifts) != count:
            raise ConsistencyError(f"lift counts disagree: {count} by solving, {len(lifts)} by enumeration")
    elif count <= 16:
        lifts = tuple(enumerate_module_derivations(Q.carrier, d, extra))
    if Dbar is not None and (count != 1 or lifts not in ((Dbar,), ())):
        raise ConsistencyError(f"constructed extension is not the unique lift ({count} lifts)")
    return LiftCount(count, lifts)


def j_invariance(Q, D, Dbar):
    """Recompute ``D_bar`` from every colimit representative and every valid ``J``.

    Returns the number of (representative, J) combinations checked; raises
    :class:`ConsistencyError` on the first disagreement.
    """
    A, L, d = Q.algebra, Q.filter, D.delta
    raw = Q.raw or colimit_hom(L, Q.reduced)
    dmap = d.as_map()
    checked = 0
    for I, f in raw.entries:
        want = Dbar(Q.class_of(I, f))
        for J in L:
            real = _ideal_module(A, J)[1]
            if not all(dmap(real.inclusion(x)) in I for x in real.module.gens()):
                continue
            got = extend_class(Q, D, I, f, J)
            if got != want:
                raise ConsistencyError(f"extension depends on J: {J} gives {got}, expected {want}")
            checked += 1
    return checked


@dataclass
class GeneralExtension:
    quotient: QuotientModule
    reduced_quotient: QuotientModule
    induced: ModuleDerivation
    extension: ModuleDerivation
    lift: LawReport
    lifts: LiftCount

    @property
    def composite(self):
        """``Phi_{M/M_tau} . p``."""
        return self.quotient.projection.then(self.reduced_quotient.phi)


def extend_derivation_general(M, D, L, count_lifts=True):
    """Lift ``D`` to ``H_tau(M)`` by passing through the torsion-free quotient."""
    L = _filter_of(L)
    verdict = check_differential(L, M, D)
    if not verdict:
        raise ConsistencyError(f"torsion theory is not differential at this module: {verdict.witness}")
    Q = module_of_quotients(M, L)
    induced = ModuleDerivation(Q.reduced, _reduced_derivation(Q, D).matrix, D.delta)
    rep = check_module_derivation(induced)
    if not rep:
        raise ConsistencyError(f"induced map on M/M_tau is not a delta-derivation: {rep.witness}")
    QN = module_of_quotients(Q.reduced, L)
    if QN.carrier != Q.carrier or Q.projection.then(QN.phi) != Q.phi:
        raise ConsistencyError("H(M) and H(M/M_tau) are not identified")
    Dbar = extend_derivation(QN, induced)
    composite = Q.projection.then(QN.phi)
    lift = check_lift(Q, D, Dbar, through=composite)
    lifts = verify_unique_lift(QN, D, Dbar, through=composite) if count_lifts else None
    return GeneralExtension(Q, QN, induced, Dbar, lift, lifts)


# ---------------------------------------------------------------------------
# functoriality and left exactness


def induced_map(h, QX, QY):
    """``H_tau(h): H_tau(X) -> H_tau(Y)`` for an EM-morphism ``h: X -> Y``."""
    NX, NY = QX.reduced, QY.reduced
    if not all(h(x) in QY.torsion for x in QX.torsion.gens()):
        raise ConsistencyError("morphism does not preserve torsion")
    hbar = ModuleMap.from_columns(NX.carrier, NY.carrier,
                                  [QY.projection(h(QX.section(y))) for y in NX.carrier.gens()])
    cols = [QY.index(QX.to_map(y).then(hbar)) for y in QX.carrier.carrier.gens()]
    return ModuleMap.from_columns(QX.carrier.carrier, QY.carrier.carrier, cols)


@dataclass(frozen=True)
class ShortExactSequence:
    """``0 -> left -f-> middle -g-> right -> 0``."""

    left: EMModule
    middle: EMModule
    right: EMModule
    f: ModuleMap
    g: ModuleMap
    name: str = ""

    def is_exact(self):
        return (bool(check_em_morphism(self.f, self.left, self.middle))
                and bool(check_em_morphism(self.g, self.middle, self.right))
                and kernel(self.f).is_zero()
                and kernel(self.g) == image(self.f)
                and image(self.g).is_whole())


def check_H_left_exact(ses, L):
    """``0 -> H(left) -> H(middle) -> H(right)`` is exact and ``Phi`` is natural."""
    if not ses.is_exact():
        raise PreconditionError("sequence is not short exact")
    L = _filter_of(L)
    Q1, Q2, Q3 = (module_of_quotients(X, L) for X in (ses.left, ses.middle, ses.right))
    Hf, Hg = induced_map(ses.f, Q1, Q2), induced_map(ses.g, Q2, Q3)
    for h, (X, Y), (QX, QY) in ((ses.f, (ses.left, ses.middle), (Q1, Q2)),
                                (ses.g, (ses.middle, ses.right), (Q2, Q3))):
        Hh = induced_map(h, QX, QY)
        if not check_em_morphism(Hh, QX.carrier, QY.carrier):
            return LawReport("left-exact", False, {"reason": "induced map not an EM-morphism"})
        if QX.phi.then(Hh) != h.then(QY.phi):
            return LawReport("left-exact", False, {"reason": "Phi not natural"})
    if not kernel(Hf).is_zero():
        return LawReport("left-exact", False, {"reason": "H(f) not injective"})
    if kernel(Hg) != image(Hf):
        return LawReport("left-exact", False, {"reason": "ker H(g) != im H(f)",
                                               "kernel": str(kernel(Hg)), "image": str(image(Hf))})
    return LawReport("left-exact", True, details={"sizes": (Q1.carrier.order, Q2.carrier.order,
                                                            Q3.carrier.order)})
