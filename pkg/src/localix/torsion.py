"""Left ideals, Gabriel filters and the torsion theories they define.

With the single generator ``k`` of the base category, ``UG = A`` and a
Gabriel filter is a set of left ideals of ``A``. EM-morphisms ``A -> A`` are
right multiplications ``a -> a c``, so the pullback axiom quantifies over
``c in A`` and the saturation axiom over ``c in J``.

Wherever a quick formula replaces a sum over subobjects (annihilator form
of the radical, largest-ideal form of the delta-invariant ideal), the
literal sum is computed as well and the two are required to agree.
"""

from dataclasses import dataclass, field
from functools import lru_cache

from .config import require_within
from .errors import ConsistencyError, InvalidDerivationError, PreconditionError
from .finmod import ModuleMap, Submodule, image, intersect, kernel, preimage
from .monad import (
    LawReport,
    check_module_derivation,
    em_hom_group,
    em_quotient,
    em_span,
    em_submodule,
    enumerate_em_submodules,
    regular_module,
)


# ---------------------------------------------------------------------------
# left ideals


def is_left_ideal(A, S):
    if S.ambient != A.carrier:
        return False
    return all(A.mul(A.basis(i), x) in S for i in range(A.rank) for x in S.gens())


def enumerate_left_ideals(A):
    """Every left ideal of ``A``, smallest first."""
    require_within("subgroups", A.carrier.order)
    return list(_left_ideals(A))


@lru_cache(maxsize=None)
def _left_ideals(A):
    R = regular_module(A)
    ideals = enumerate_em_submodules(R)
    for I in ideals:
        if not is_left_ideal(A, I):
            raise ConsistencyError(f"enumerated submodule {I} is not a left ideal")
    return tuple(ideals)


def ideal_quotient(A, I, c):
    """``(I : c) = {a : a c in I}``, the pullback of ``I`` along ``a -> a c``."""
    return preimage(A.right_matrix(c), I)


def right_multiplications(A):
    """EM-endomorphisms of the regular module, one per algebra element."""
    return [A.right_matrix(c) for c in A.elements()]


# ---------------------------------------------------------------------------
# Gabriel filters


@dataclass(frozen=True)
class GabrielFilter:
    """A set of left ideals of ``algebra``, stored canonically sorted."""

    algebra: object
    ideals: tuple

    def __post_init__(self):
        object.__setattr__(self, "ideals", tuple(sorted(set(self.ideals), key=Submodule.sort_key)))

    def __contains__(self, I):
        return I in self.ideals

    def __iter__(self):
        return iter(self.ideals)

    def __len__(self):
        return len(self.ideals)

    def describe(self):
        return "{" + ", ".join(str(I) for I in self.ideals) + "}"


@dataclass(frozen=True)
class FilterVerdict:
    passed: bool
    axiom: str = None
    witness: dict = None

    def __bool__(self):
        return self.passed


def is_gabriel_filter(A, L):
    """Check the four filter axioms; report the first failing one with a witness."""
    ideals = enumerate_left_ideals(A)
    members = set(L)
    for I in members:
        if not is_left_ideal(A, I):
            return FilterVerdict(False, "left ideal", {"ideal": str(I)})
    whole = A.carrier.whole()
    if whole not in members:
        return FilterVerdict(False, "(1)", {"missing": str(whole)})
    for I in sorted(members, key=Submodule.sort_key):
        for J in ideals:
            if J not in members and I <= J:
                return FilterVerdict(False, "(2)", {"member": str(I), "superset": str(J)})
    elements = A.elements()
    for I in sorted(members, key=Submodule.sort_key):
        for c in elements:
            P = ideal_quotient(A, I, c)
            if P not in members:
                return FilterVerdict(False, "(3)", {"ideal": str(I), "c": c, "pullback": str(P)})
    for J in sorted(members, key=Submodule.sort_key):
        J_elements = J.elements()
        for I in ideals:
            if I in members or not I <= J:
                continue
            if all(ideal_quotient(A, I, c) in members for c in J_elements):
                return FilterVerdict(False, "(4)", {"I": str(I), "J": str(J)})
    return FilterVerdict(True)


def _upsets(ideals):
    """All upward-closed subfamilies containing the largest ideal."""
    order = sorted(ideals, key=Submodule.sort_key, reverse=True)
    supersets = {I: [J for J in ideals if J != I and I <= J] for I in ideals}
    out = []

    def walk(pos, chosen):
        if pos == len(order):
            out.append(frozenset(chosen))
            return
        I = order[pos]
        if pos == 0:
            walk(pos + 1, chosen | {I})
            return
        walk(pos + 1, chosen)
        if all(J in chosen for J in supersets[I]):
            walk(pos + 1, chosen | {I})

    walk(0, frozenset())
    return out


def enumerate_gabriel_filters(A):
    """Every Gabriel filter on ``A``: upward-closed candidates tested against the axioms."""
    ideals = enumerate_left_ideals(A)
    require_within("lattice", len(ideals))
    return list(_gabriel_filters(A))


@lru_cache(maxsize=None)
def _gabriel_filters(A):
    ideals = enumerate_left_ideals(A)
    found = [GabrielFilter(A, tuple(c)) for c in _upsets(ideals) if is_gabriel_filter(A, c)]
    return tuple(sorted(found, key=lambda L: (len(L), [I.sort_key() for I in L.ideals])))


def brute_force_gabriel_filters(A):
    """Oracle: every subset of the ideal lattice, filtered by the axioms alone."""
    ideals = enumerate_left_ideals(A)
    require_within("lattice", len(ideals))
    found = []
    for mask in range(1 << len(ideals)):
        cand = [I for b, I in enumerate(ideals) if mask >> b & 1]
        if is_gabriel_filter(A, cand):
            found.append(GabrielFilter(A, tuple(cand)))
    return sorted(found, key=lambda L: (len(L), [I.sort_key() for I in L.ideals]))


def trivial_filter(A):
    return GabrielFilter(A, (A.carrier.whole(),))


def improper_filter(A):
    return GabrielFilter(A, tuple(enumerate_left_ideals(A)))


# ---------------------------------------------------------------------------
# torsion


def annihilator(M, x):
    """``Ann(x)``: the kernel of the orbit map ``a -> a x``."""
    A = M.algebra
    orbit = ModuleMap.from_columns(A.carrier, M.carrier, [M.apply(A.basis(i), x) for i in range(A.rank)])
    return kernel(orbit)


@dataclass(frozen=True)
class TorsionVerdict:
    passed: bool
    witness: dict = None

    def __bool__(self):
        return self.passed


def is_torsion(M, L):
    """Every EM-morphism ``A -> M`` has kernel in ``L``.

    Checked once through annihilators of elements and once by enumerating
    the EM-morphisms directly; the two must agree.
    """
    require_within("elements", M.carrier.order)
    by_ann = None
    for x in M.carrier.elements():
        if annihilator(M, x) not in L:
            by_ann = {"element": x, "annihilator": str(annihilator(M, x))}
            break
    by_hom = None
    for f in em_hom_group(regular_module(M.algebra), M).maps():
        K = kernel(f)
        if K not in L:
            by_hom = {"morphism": f.matrix, "kernel": str(K)}
            break
    if (by_ann is None) != (by_hom is None):
        raise ConsistencyError(f"torsion routes disagree: {by_ann} vs {by_hom}")
    return TorsionVerdict(by_ann is None, by_ann)


def torsion_radical(M, L, literal=True):
    """``M_tau``, the largest torsion EM-submodule of ``M``.

    The quick route collects ``{x : Ann(x) in L}``; ``literal`` also sums
    every torsion EM-submodule and insists on agreement.
    """
    require_within("elements", M.carrier.order)
    return _radical(M, L, literal)


@lru_cache(maxsize=None)
def _radical(M, L, literal):
    fast_set = [x for x in M.carrier.elements() if annihilator(M, x) in L]
    fast = Submodule.span(M.carrier, fast_set)
    if len(fast) != len(fast_set) or not all(M.apply(M.algebra.basis(i), x) in fast
                                             for i in range(M.algebra.rank) for x in fast.gens()):
        raise ConsistencyError("elements with annihilator in the filter do not form a submodule")
    if literal:
        total = M.carrier.zero_submodule()
        for N in enumerate_em_submodules(M):
            sub, _ = em_submodule(M, N)
            if is_torsion(sub, L):
                total = total + N
        if total != fast:
            raise ConsistencyError(f"radical routes disagree: literal {total} vs annihilator {fast}")
    return fast


def radical_of(L, literal=False):
    """The idempotent kernel functor of ``L`` as a callable."""
    return lambda M: torsion_radical(M, L, literal=literal)


@dataclass
class TorsionTheory:
    """A Gabriel filter with its radical and a classified corpus.

    ``classes`` maps each corpus name to ``"T"``, ``"F"``, ``"T+F"`` (zero
    module) or ``"mixed"``.
    """

    algebra: object
    filter: GabrielFilter
    classes: dict = field(default_factory=dict)
    radicals: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)

    def radical(self, M):
        return torsion_radical(M, self.filter, literal=False)

    def is_torsion(self, M):
        return self.radical(M).is_whole()

    def is_torsion_free(self, M):
        return self.radical(M).is_zero()


def classify(sigma):
    if sigma.is_whole() and sigma.is_zero():
        return "T+F"
    if sigma.is_whole():
        return "T"
    if sigma.is_zero():
        return "F"
    return "mixed"


def check_radical_invariants(M, L):
    """Radical laws at ``M``: idempotence (with a torsion-free quotient) and hereditarity.

    Returns a list of :class:`LawReport`.
    """
    sigma = torsion_radical(M, L)
    reports = []
    sub, real = em_submodule(M, sigma)
    if torsion_radical(sub, L).is_whole():
        reports.append(LawReport("radical-idempotent", True))
    else:
        reports.append(LawReport("radical-idempotent", False, {"radical": str(sigma)}))
    Q, _, _ = em_quotient(M, sigma)
    if torsion_radical(Q, L).is_zero():
        reports.append(LawReport("radical-idempotent", True, details={"quotient": "torsion-free"}))
    else:
        reports.append(LawReport("radical-idempotent", False, {"quotient": "has torsion"}))
    bad = None
    for N in enumerate_em_submodules(M):
        subN, realN = em_submodule(M, N)
        sigmaN = torsion_radical(subN, L, literal=False)
        embedded = _restrict_image(realN, sigmaN)
        if embedded != intersect(N, sigma):
            bad = {"submodule": str(N), "sigma(N)": str(embedded), "N & sigma(M)": str(intersect(N, sigma))}
            break
    reports.append(LawReport("radical-hereditary", bad is None, bad))
    return reports


def _restrict_image(real, S):
    """Image in the ambient of a submodule ``S`` of ``real.module``."""
    return Submodule.span(real.submodule.ambient, [real.inclusion(x) for x in S.gens()])


def torsion_theory(A, L, corpus):
    """Classify ``corpus`` (a mapping name -> EMModule) and verify the radical laws."""
    theory = TorsionTheory(A, L)
    for name, M in corpus.items():
        sigma = torsion_radical(M, L)
        theory.radicals[name] = sigma
        theory.classes[name] = classify(sigma)
        for rep in check_radical_invariants(M, L):
            theory.checks.append((name, rep))
            if not rep:
                raise ConsistencyError(f"{rep.check} fails for {name}: {rep.witness}")
        torsion = is_torsion(M, L).passed
        if torsion != sigma.is_whole():
            raise ConsistencyError(f"{name}: torsion class and radical disagree")
    return theory


def gabriel_filter_of_radical(A, sigma):
    """``{I : A/I is torsion}`` for a radical given as a callable."""
    R = regular_module(A)
    members = []
    for I in enumerate_left_ideals(A):
        Q, _, _ = em_quotient(R, I)
        if sigma(Q).is_whole():
            members.append(I)
    return GabrielFilter(A, tuple(members))


def filter_is_intersection_closed(L):
    for I in L:
        for J in L:
            if intersect(I, J) not in L:
                return False
    return True


# ---------------------------------------------------------------------------
# delta-invariance


def delta_invariant_J(A, I, d, L):
    """The largest left ideal ``J`` inside ``I`` with ``d(J)`` contained in ``I``.

    Computed as the literal sum over sub-ideals ``P`` of ``I`` with
    ``d(P) <= I`` and as the largest left ideal contained in
    ``{x in I : d(x) in I}``; the two must coincide.
    """
    if I not in L:
        raise PreconditionError(f"ideal {I} is not in the filter")
    dmap = d.as_map()
    literal = A.carrier.zero_submodule()
    for P in enumerate_left_ideals(A):
        if P <= I and image(_restrict(dmap, P)) <= I:
            literal = literal + P
    S = intersect(I, preimage(dmap, I))
    fast = S
    for i in range(A.rank):
        fast = intersect(fast, preimage(A.left_matrix(A.basis(i)), S))
    if fast != literal:
        raise ConsistencyError(f"delta-invariant ideal routes disagree: {literal} vs {fast}")
    return fast


def _restrict(f, S):
    real = S.to_module()
    return real.inclusion.then(f)


@dataclass(frozen=True)
class InvarianceVerdict:
    passed: bool
    witness: dict = None
    pairs: tuple = ()

    def __bool__(self):
        return self.passed


def check_delta_invariance(A, d, L):
    """For each ``I`` in ``L`` the ideal ``J`` lies in ``L`` and ``d(J) <= I``."""
    pairs = []
    dmap = d.as_map()
    for I in L:
        J = delta_invariant_J(A, I, d, L)
        pairs.append((I, J))
        if J not in L:
            return InvarianceVerdict(False, {"I": str(I), "J": str(J), "reason": "J not in filter"}, tuple(pairs))
        if not image(_restrict(dmap, J)) <= I:
            return InvarianceVerdict(False, {"I": str(I), "J": str(J), "reason": "d(J) not in I"}, tuple(pairs))
    return InvarianceVerdict(True, None, tuple(pairs))


def check_differential(L, M, D):
    """``D(M_tau) <= M_tau`` for a delta-derivation ``D`` of ``M``."""
    if isinstance(L, TorsionTheory):
        L = L.filter
    rep = check_module_derivation(D)
    if not rep:
        raise InvalidDerivationError(f"not a delta-derivation: {rep.witness}", rep)
    sigma = torsion_radical(M, L, literal=False)
    for x in sigma.gens():
        if D(x) not in sigma:
            return TorsionVerdict(False, {"element": x, "image": D(x), "radical": str(sigma)})
    return TorsionVerdict(True)
