"""Commands that run grids of checks over a scenario and collect a report.

Each command walks (filter, module, derivation) cells in canonical order and
records one result per check and cell. A :class:`ConsistencyError` inside a
cell becomes a failed record with the error as witness; bound violations
propagate so the caller can stop.
"""

import time
from contextlib import contextmanager

from .config import current_bounds, using_bounds
from .errors import ConsistencyError, InvalidDerivationError
from .finmod import FinModule, enumerate_subgroups, hom_group
from .monad import (
    LawReport,
    ModuleDerivation,
    adjunction_bijection,
    brute_force_module_derivations,
    check_em_module,
    check_functor_exact,
    check_generator_instance,
    check_module_derivation,
    derivation_system,
    em_quotient,
    em_submodule,
    enumerate_em_submodules,
    enumerate_module_derivations,
    free,
)
from .quotients import (
    ShortExactSequence,
    check_H_left_exact,
    extend_derivation_general,
    j_invariance,
    module_of_quotients,
    verify_unique_lift,
)
from .report import Report
from .scenario import ideal_name
from .torsion import (
    brute_force_gabriel_filters,
    check_delta_invariance,
    check_differential,
    check_radical_invariants,
    enumerate_gabriel_filters,
    enumerate_left_ideals,
    filter_is_intersection_closed,
    gabriel_filter_of_radical,
    is_gabriel_filter,
    is_left_ideal,
    is_torsion,
    radical_of,
    classify,
    torsion_radical,
)

COMMANDS = ("validate", "ideals", "filters", "torsion", "localize", "extend", "verify-all")

# grid limits; the acceptance criteria are stated for these sizes
ADJUNCTION_MAX_ORDER = 64
EXHAUSTIVE_ADJUNCTION = 1024
BRUTE_FORCE_DERIVATIONS = 4096
BRUTE_FORCE_FILTER_IDEALS = 12
ALL_DERIVATIONS_UP_TO = 4096
J_INVARIANCE_MAX_IDEALS = 8
SEQUENCES_PER_MODULE = 3


class _Grid:
    def __init__(self, scenario, report, timings):
        self.sc = scenario
        self.A = scenario.algebra
        self.d = scenario.derivation
        self.report = report
        self.timings = timings
        self._filters = None

    @contextmanager
    def cell(self, check, subject):
        """Run a check body; a ConsistencyError becomes a failed record."""
        start = time.perf_counter()
        box = {}
        try:
            yield box
        except (ConsistencyError, InvalidDerivationError) as exc:
            box.clear()
            box["passed"] = False
            box["witness"] = {"error": str(exc)}
        elapsed = time.perf_counter() - start if self.timings else None
        if "law" in box:
            self.report.add_law(subject, box["law"], elapsed)
        else:
            self.report.add(check, subject, box.get("passed", False), box.get("witness"),
                            box.get("details"), elapsed)

    # -- shared corpus pieces ------------------------------------------------

    def filters(self):
        if self._filters is None:
            if self.sc.filter is not None:
                self._filters = [("L", self.sc.filter)]
            else:
                found = enumerate_gabriel_filters(self.A)
                self._filters = [(f"L{i + 1}", L) for i, L in enumerate(found)]
        return self._filters

    def describe(self, L):
        return [ideal_name(self.A, I) for I in L]

    def base_objects(self):
        """Underlying groups of the corpus plus ``k``, without repeats."""
        seen = {FinModule.cyclic(self.A.modulus): "k"}
        for name, M in self.sc.modules.items():
            seen.setdefault(M.carrier, f"|{name}|")
        return [(label, M0) for M0, label in seen.items()]

    def sequences(self):
        """Short exact sequences drawn from the corpus, in canonical order."""
        A = self.A
        out = []
        regular = [(n, M) for n, M in self.sc.modules.items() if self.sc.kinds[n] == "regular"]
        for rname, R in regular[:1]:
            for I in enumerate_left_ideals(A):
                if I.is_zero() or I.is_whole():
                    continue
                out.append(_sequence(R, I, f"0 -> {ideal_name(A, I)} -> {rname} -> {rname}/{ideal_name(A, I)} -> 0"))
        for name, M in self.sc.modules.items():
            if self.sc.kinds[name] not in ("sum", "explicit"):
                continue
            subs = [S for S in enumerate_em_submodules(M) if not S.is_zero() and not S.is_whole()]
            for S in subs[:SEQUENCES_PER_MODULE]:
                out.append(_sequence(M, S, f"0 -> {S} -> {name} -> {name}/{S} -> 0"))
        return out

    def derivations(self, M):
        """Derivations of ``M`` used for the extension grid, and which route chose them.

        Up to ``ALL_DERIVATIONS_UP_TO`` solutions every one is used; beyond
        that, a particular solution and its translates by generators of the
        solution kernel, which span the whole affine family.
        """
        E, base, K = derivation_system(M, self.d)
        if base is None:
            return [], "none"
        if len(K) <= ALL_DERIVATIONS_UP_TO:
            return enumerate_module_derivations(M, self.d), "all"
        chosen = [base] + [E.module.add(base, k) for k in K.gens()]
        return [ModuleDerivation(M, E.to_map(v).matrix, self.d) for v in chosen], "generators"

    # -- commands ------------------------------------------------------------

    def validate(self):
        A, rep = self.A, self.report
        for subject, law in self.sc.checks:
            rep.add_law(subject, law)
        if not self.sc.valid:
            rep.invalid = True
            return
        for label, M0 in self.base_objects():
            with self.cell("free-module", f"U({label})") as box:
                box["law"] = LawReport("free-module", bool(check_em_module(free(A, M0).module)),
                                       None, {"order": free(A, M0).module.order})
        for label, M0 in self.base_objects():
            if M0.order > ADJUNCTION_MAX_ORDER:
                continue
            for name, N in self.sc.modules.items():
                if N.order > ADJUNCTION_MAX_ORDER:
                    continue
                with self.cell("adjunction", f"EM(U{label}, {name}) = C({label}, |{name}|)") as box:
                    table = adjunction_bijection(A, M0, N, EXHAUSTIVE_ADJUNCTION)
                    box.update(passed=True, details={"size": len(table), "route": table.route})
        for name, M in self.sc.modules.items():
            with self.cell("generator", name) as box:
                subs = [S for S in enumerate_em_submodules(M) if not S.is_whole()]
                for S in subs:
                    check_generator_instance(A, M, S)
                box.update(passed=True, details={"proper_submodules": len(subs)})
        for title, ses in self.sequences():
            with self.cell("functor-exact", title) as box:
                box["law"] = check_functor_exact(A, ses.f, ses.g)

    def ideals(self):
        A = self.A
        with self.cell("left-ideals", "A") as box:
            found = enumerate_left_ideals(A)
            oracle = [S for S in enumerate_subgroups(A.carrier) if is_left_ideal(A, S)]
            box.update(passed=found == oracle,
                       witness={"enumerated": len(found), "oracle": len(oracle)},
                       details={"count": len(found)})
        self.report.results["ideals"] = [ideal_name(A, I) for I in enumerate_left_ideals(A)]

    def filters_cmd(self):
        A = self.A
        n_ideals = len(enumerate_left_ideals(A))
        if self.sc.filter is None:
            with self.cell("filter-enumeration", "A") as box:
                found = enumerate_gabriel_filters(A)
                details = {"count": len(found), "left_ideals": n_ideals}
                if n_ideals <= BRUTE_FORCE_FILTER_IDEALS:
                    oracle = brute_force_gabriel_filters(A)
                    details["oracle"] = len(oracle)
                    box.update(passed=found == oracle, details=details,
                               witness={"enumerated": len(found), "oracle": len(oracle)})
                else:
                    details["oracle"] = "not run (lattice too large)"
                    box.update(passed=True, details=details)
        for fname, L in self.filters():
            with self.cell("gabriel-filter", fname) as box:
                verdict = is_gabriel_filter(A, L)
                box.update(passed=verdict.passed, details={"ideals": self.describe(L)},
                           witness={"axiom": verdict.axiom, **(verdict.witness or {})})
            with self.cell("filter-intersection", fname) as box:
                box["passed"] = filter_is_intersection_closed(L)
        self.report.results["filters"] = {fname: self.describe(L) for fname, L in self.filters()}

    def torsion(self):
        A, d = self.A, self.d
        classes = {}
        for fname, L in self.filters():
            with self.cell("delta-invariance", fname) as box:
                verdict = check_delta_invariance(A, d, L)
                box.update(passed=verdict.passed, witness=verdict.witness,
                           details={"pairs": [[ideal_name(A, I), ideal_name(A, J)] for I, J in verdict.pairs]})
            with self.cell("filter-of-radical", fname) as box:
                back = gabriel_filter_of_radical(A, radical_of(L))
                box.update(passed=back == L, witness={"recovered": self.describe(back)})
            classes[fname] = {}
            for name, M in self.sc.modules.items():
                subject = f"{fname} / {name}"
                with self.cell("torsion-radical", subject) as box:
                    sigma = torsion_radical(M, L)
                    classes[fname][name] = {"radical": str(sigma), "order": len(sigma),
                                            "class": classify(sigma)}
                    box.update(passed=True, details={"radical_order": len(sigma)})
                with self.cell("torsion-class", subject) as box:
                    verdict = is_torsion(M, L)
                    box.update(passed=verdict.passed == sigma.is_whole(),
                               witness={"torsion": verdict.passed, "radical_whole": sigma.is_whole()})
                for law in check_radical_invariants(M, L):
                    with self.cell(law.check, subject) as box:
                        box["law"] = law
                self._differential(fname, L, name, M)
        self.report.results["torsion"] = classes

    def _differential(self, fname, L, name, M):
        with self.cell("differential", f"{fname} / {name}") as box:
            derivations = enumerate_module_derivations(M, self.d)
            bad = None
            for D in derivations:
                verdict = check_differential(L, M, D)
                if not verdict:
                    bad = {"derivation": D.matrix, **verdict.witness}
                    break
            box.update(passed=bad is None, witness=bad, details={"derivations": len(derivations)})

    def derivation_enumeration(self):
        for name, M in self.sc.modules.items():
            with self.cell("derivation-enumeration", name) as box:
                found = enumerate_module_derivations(M, self.d)
                details = {"count": len(found)}
                E_order = _end_order(M)
                if E_order <= BRUTE_FORCE_DERIVATIONS:
                    oracle = brute_force_module_derivations(M, self.d)
                    details["oracle"] = len(oracle)
                    box.update(passed=found == oracle, details=details,
                               witness={"enumerated": len(found), "oracle": len(oracle)})
                else:
                    details["oracle"] = f"not run (|End| = {E_order})"
                    box.update(passed=True, details=details)

    def localize(self):
        out = {}
        for fname, L in self.filters():
            out[fname] = {}
            for name, M in self.sc.modules.items():
                subject = f"{fname} / {name}"
                with self.cell("module-of-quotients", subject) as box:
                    Q = module_of_quotients(M, L)
                    bijective = Q.phi.kernel().is_zero() and Q.phi.image().is_whole()
                    out[fname][name] = {"order": Q.carrier.order, "torsion_order": len(Q.torsion),
                                        "min_ideal": ideal_name(self.A, Q.min_ideal),
                                        "phi_bijective": bijective}
                    box.update(passed=True, details=out[fname][name])
                for check in ("colimit", "phi"):
                    with self.cell(check, subject) as box:
                        laws = [c for c in Q.checks if c.check == check]
                        box.update(passed=all(laws), details={"checks": len(laws)})
        self.report.results["localize"] = out

    def extend(self):
        A = self.A
        small = len(enumerate_left_ideals(A)) <= J_INVARIANCE_MAX_IDEALS
        checks = ["general-extension", "extension-derivation", "lift", "unique-lift"]
        if small:
            checks.append("j-invariance")
        for fname, L in self.filters():
            if not check_delta_invariance(A, self.d, L):
                continue
            for name, M in self.sc.modules.items():
                subject = f"{fname} / {name}"
                start = time.perf_counter()
                derivations, route = self.derivations(M)
                first = dict.fromkeys(checks)
                j_pairs = 0
                for D in derivations:
                    tag = {"derivation": D.matrix}
                    try:
                        g = extend_derivation_general(M, D, L, count_lifts=False)
                    except (ConsistencyError, InvalidDerivationError) as exc:
                        first["general-extension"] = first["general-extension"] or {**tag, "error": str(exc)}
                        continue
                    law = check_module_derivation(g.extension)
                    if not law:
                        first["extension-derivation"] = first["extension-derivation"] or {**tag, **law.witness}
                    if not g.lift:
                        first["lift"] = first["lift"] or {**tag, **g.lift.witness}
                    lifts = verify_unique_lift(g.reduced_quotient, D, through=g.composite)
                    if lifts.count != 1 or lifts.lifts != (g.extension,):
                        first["unique-lift"] = first["unique-lift"] or {**tag, "lifts": lifts.count}
                    if small:
                        try:
                            j_pairs += j_invariance(g.reduced_quotient, g.induced, g.extension)
                        except ConsistencyError as exc:
                            first["j-invariance"] = first["j-invariance"] or {**tag, "error": str(exc)}
                elapsed = time.perf_counter() - start if self.timings else None
                for check in checks:
                    details = {"derivations": len(derivations), "route": route}
                    if check == "j-invariance":
                        details["pairs"] = j_pairs
                    self.report.add(check, subject, first[check] is None, first[check], details, elapsed)

    def left_exact(self):
        for fname, L in self.filters():
            for title, ses in self.sequences():
                with self.cell("left-exact", f"{fname} / {title}") as box:
                    box["law"] = check_H_left_exact(ses, L)


def _sequence(M, S, title):
    sub, real = em_submodule(M, S)
    Q, proj, _ = em_quotient(M, S)
    return title, ShortExactSequence(sub, M, Q, real.inclusion, proj, title)


def _end_order(M):
    return len(hom_group(M.carrier, M.carrier))


def run(command, scenario, timings=False):
    """Run ``command`` on a loaded scenario and return its :class:`Report`."""
    if command not in COMMANDS:
        raise ValueError(f"unknown command '{command}'")
    report = Report(command, scenario.name, list(scenario.modules))
    grid = _Grid(scenario, report, timings)
    with using_bounds(**scenario.bounds):
        if not scenario.valid:
            grid.validate()
            return report
        steps = {
            "validate": [grid.validate],
            "ideals": [grid.ideals],
            "filters": [grid.filters_cmd],
            "torsion": [grid.derivation_enumeration, grid.torsion],
            "localize": [grid.localize],
            "extend": [grid.extend],
            "verify-all": [grid.validate, grid.ideals, grid.filters_cmd, grid.derivation_enumeration,
                           grid.torsion, grid.localize, grid.extend, grid.left_exact],
        }[command]
        for step in steps:
            step()
        report.results["bounds"] = vars(current_bounds()).copy()
    return report
