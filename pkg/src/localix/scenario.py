"""Scenario files: an algebra, an optional derivation, a module corpus and an optional filter.

The format is YAML; see the README for the schema. Loading runs every
load-time law check and keeps the reports on the scenario. :func:`parse_scenario` raises on the first failed
law; :func:`load_scenario` keeps going so ``validate`` can list them all.
"""

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import yaml

from .errors import PreconditionError, ScenarioError, ValidationError
from .finmod import FinModule
from .monad import (
    Algebra,
    AlgebraDerivation,
    EMModule,
    LawReport,
    check_derivation,
    check_em_module,
    check_monad_laws,
    direct_sum,
    em_quotient,
    em_span,
    regular_module,
)
from .torsion import GabrielFilter, enumerate_left_ideals, is_gabriel_filter

SCHEMA_VERSION = 1
BUILTIN_PREFIX = "builtin:"
BUILTINS = ("dual-numbers", "upper-triangular", "z4", "f2xf2")
MUTATIONS = ("broken-associativity", "broken-unit", "broken-leibniz")


@dataclass
class Scenario:
    name: str
    algebra: Algebra
    derivation: AlgebraDerivation
    modules: dict
    filter: GabrielFilter = None
    bounds: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)
    source: str = ""
    kinds: dict = field(default_factory=dict)

    @property
    def valid(self):
        return all(rep for _, rep in self.checks)

    def failures(self):
        return [(subject, rep) for subject, rep in self.checks if not rep]


# ---------------------------------------------------------------------------
# locating errors


class _Doc:
    """Parsed data plus the source position of every node, keyed by path."""

    def __init__(self, text, source):
        self.source = source
        try:
            self.data = yaml.safe_load(text)
            root = yaml.compose(text)
        except yaml.YAMLError as exc:
            mark = getattr(exc, "problem_mark", None)
            problem = getattr(exc, "problem", None) or str(exc)
            if mark is None:
                raise ScenarioError(f"{source}: {problem}") from None
            raise ScenarioError(f"{source}: {problem}", mark.line + 1, mark.column + 1) from None
        if root is None or self.data is None:
            raise ScenarioError(f"{source}: empty scenario", 1, 1)
        self.marks = {}
        self._walk(root, ())

    def _walk(self, node, path):
        self.marks[path] = node.start_mark
        if isinstance(node, yaml.MappingNode):
            for key, value in node.value:
                self._walk(value, path + (str(key.value),))
        elif isinstance(node, yaml.SequenceNode):
            for i, value in enumerate(node.value):
                self._walk(value, path + (str(i),))

    def error(self, path, message):
        path = tuple(str(p) for p in path)
        while path not in self.marks and path:
            path = path[:-1]
        mark = self.marks.get(path)
        label = ".".join(path) or "<root>"
        if mark is None:
            return ScenarioError(f"{self.source}: {label}: {message}")
        return ScenarioError(f"{self.source}: {label}: {message}", mark.line + 1, mark.column + 1)


def _get(doc, data, path, key, kind, required=True):
    if not isinstance(data, dict):
        raise doc.error(path, "expected a mapping")
    if key not in data:
        if required:
            raise doc.error(path, f"missing field '{key}'")
        return None
    value = data[key]
    if not _is_kind(value, kind):
        raise doc.error(path + (key,), f"expected {kind}")
    return value


def _is_kind(value, kind):
    if kind == "int":
        return isinstance(value, int) and not isinstance(value, bool)
    if kind == "str":
        return isinstance(value, (str, int)) and not isinstance(value, bool)
    if kind == "list":
        return isinstance(value, list)
    if kind == "mapping":
        return isinstance(value, dict)
    if kind == "any":
        return True
    raise AssertionError(kind)


def _int_matrix(doc, value, path, rows=None, cols=None):
    if not isinstance(value, list) or (rows is not None and len(value) != rows):
        raise doc.error(path, f"expected a list of {rows} rows" if rows is not None else "expected a list")
    for i, row in enumerate(value):
        if not isinstance(row, list) or (cols is not None and len(row) != cols):
            raise doc.error(path + (i,), f"expected a row of {cols} integers")
        for j, v in enumerate(row):
            if not _is_kind(v, "int"):
                raise doc.error(path + (i, j), "expected an integer")
    return tuple(tuple(row) for row in value)


def _int_vector(doc, value, path, length=None):
    return _int_matrix(doc, [value] if isinstance(value, list) else value, path, 1, length)[0]


# ---------------------------------------------------------------------------
# building the scenario


def _algebra(doc, data):
    m = _get(doc, data, (), "modulus", "int")
    if m < 2:
        raise doc.error(("modulus",), "modulus must be at least 2")
    alg = _get(doc, data, (), "algebra", "mapping")
    unit = _get(doc, alg, ("algebra",), "unit", "list")
    r = len(unit)
    if r == 0:
        raise doc.error(("algebra", "unit"), "algebra rank must be at least 1")
    unit = _int_vector(doc, unit, ("algebra", "unit"), r)
    rank = _get(doc, alg, ("algebra",), "rank", "int", required=False)
    if rank is not None and rank != r:
        raise doc.error(("algebra", "rank"), f"rank {rank} does not match unit length {r}")
    raw = _get(doc, alg, ("algebra",), "products", "list")
    if len(raw) != r:
        raise doc.error(("algebra", "products"), f"expected {r} rows of products")
    products = []
    for i, row in enumerate(raw):
        if not isinstance(row, list) or len(row) != r:
            raise doc.error(("algebra", "products", i), f"expected {r} products")
        products.append(tuple(_int_vector(doc, e, ("algebra", "products", i, j), r) for j, e in enumerate(row)))
    labels = _get(doc, alg, ("algebra",), "labels", "list", required=False)
    if labels is not None:
        if len(labels) != r:
            raise doc.error(("algebra", "labels"), f"expected {r} labels")
        labels = tuple(str(v) for v in labels)
    return Algebra(m, unit, tuple(products), labels)


def _derivation(doc, data, A):
    if "derivation" not in data or data["derivation"] is None:
        return AlgebraDerivation.zero(A)
    value = data["derivation"]
    if isinstance(value, dict):
        c = _get(doc, value, ("derivation",), "inner", "list")
        return AlgebraDerivation.inner(A, _int_vector(doc, c, ("derivation", "inner"), A.rank))
    return AlgebraDerivation(A, _int_matrix(doc, value, ("derivation",), A.rank, A.rank))


def ideal_name(A, I):
    """An ideal written through its generators, such as ``(x)``; ``A`` and ``0`` for the extremes."""
    if I.is_whole():
        return "A"
    if I.is_zero():
        return "0"
    gens = ", ".join(A.format(g) for g in I.gens())
    return f"({gens})"


def _modules(doc, data, A):
    entries = _get(doc, data, (), "modules", "list")
    modules, kinds = {}, {}

    def add(name, M, path, kind):
        if name in modules:
            raise doc.error(path, f"duplicate module name '{name}'")
        modules[name] = M
        kinds[name] = kind

    def lookup(name, path):
        if str(name) not in modules:
            raise doc.error(path, f"unknown module '{name}' (modules must be defined before use)")
        return modules[str(name)]

    for t, entry in enumerate(entries):
        path = ("modules", t)
        if not isinstance(entry, dict):
            raise doc.error(path, "expected a mapping")
        if "regular" in entry:
            add(str(entry["regular"]), regular_module(A), path, "regular")
        elif "quotients" in entry:
            base = str(entry["quotients"])
            R = lookup(base, path + ("quotients",))
            if R != regular_module(A):
                raise doc.error(path + ("quotients",), f"'{base}' is not the regular module")
            for I in enumerate_left_ideals(A):
                if I.is_zero():
                    continue
                Q, _, _ = em_quotient(R, I)
                add(f"{base}/{ideal_name(A, I)}", Q, path, "quotient")
        elif "sum" in entry:
            name = str(_get(doc, entry, path, "name", "str"))
            parts = _get(doc, entry, path, "sum", "list")
            if not parts:
                raise doc.error(path + ("sum",), "empty direct sum")
            add(name, direct_sum(*(lookup(p, path + ("sum", i)) for i, p in enumerate(parts))).module, path, "sum")
        elif "factors" in entry:
            name = str(_get(doc, entry, path, "name", "str"))
            factors = _int_vector(doc, _get(doc, entry, path, "factors", "list"), path + ("factors",))
            try:
                C = FinModule(A.modulus, factors)
            except PreconditionError as exc:
                raise doc.error(path + ("factors",), str(exc)) from None
            acts = _get(doc, entry, path, "actions", "list")
            if len(acts) != A.rank:
                raise doc.error(path + ("actions",), f"expected {A.rank} action matrices")
            matrices = tuple(_int_matrix(doc, a, path + ("actions", i), C.rank, C.rank) for i, a in enumerate(acts))
            add(name, EMModule(A, C, matrices), path, "explicit")
        else:
            raise doc.error(path, "module entry needs one of: regular, quotients, sum, factors")
    if not modules:
        raise doc.error(("modules",), "the corpus is empty")
    return modules, kinds


def _filter(doc, data, A):
    value = _get(doc, data, (), "filter", "list", required=False)
    if value is None:
        return None
    R = regular_module(A)
    ideals = []
    for i, gens in enumerate(value):
        if not isinstance(gens, list):
            raise doc.error(("filter", i), "expected a list of generators")
        vecs = [_int_vector(doc, g, ("filter", i, j), A.rank) for j, g in enumerate(gens)]
        ideals.append(em_span(R, [tuple(v % A.modulus for v in g) for g in vecs]))
    return GabrielFilter(A, tuple(ideals))


def _bounds(doc, data):
    value = _get(doc, data, (), "bounds", "mapping", required=False) or {}
    out = {}
    for key, target in (("elements", "elements"), ("subgroups", "subgroups"), ("ideals", "lattice")):
        if key in value:
            v = value[key]
            if not _is_kind(v, "int") or v < 1:
                raise doc.error(("bounds", key), "expected a positive integer")
            out[target] = v
    unknown = set(value) - {"elements", "subgroups", "ideals"}
    if unknown:
        raise doc.error(("bounds", sorted(unknown)[0]), "unknown bound")
    return out


def scenario_from_text(text, source="<string>"):
    """Parse and build a scenario, recording law checks without raising on them."""
    doc = _Doc(text, source)
    data = doc.data
    if not isinstance(data, dict):
        raise doc.error((), "expected a mapping at the top level")
    version = _get(doc, data, (), "version", "int", required=False)
    if version is not None and version != SCHEMA_VERSION:
        raise doc.error(("version",), f"unsupported scenario version {version}")
    name = str(_get(doc, data, (), "name", "str", required=False) or Path(source).stem)
    try:
        A = _algebra(doc, data)
    except PreconditionError as exc:
        raise doc.error(("algebra",), str(exc)) from None
    checks = [("algebra", check_monad_laws(A))]
    scenario = Scenario(name, A, AlgebraDerivation.zero(A), {}, None, _bounds(doc, data), checks, source)
    if not checks[0][1]:
        # nothing downstream is meaningful on a non-monad
        return scenario
    try:
        scenario.derivation = _derivation(doc, data, A)
    except PreconditionError as exc:
        raise doc.error(("derivation",), str(exc)) from None
    checks.append(("derivation", check_derivation(A, scenario.derivation)))
    try:
        scenario.modules, scenario.kinds = _modules(doc, data, A)
    except PreconditionError as exc:
        raise doc.error(("modules",), str(exc)) from None
    for mname, M in scenario.modules.items():
        checks.append((mname, check_em_module(M)))
    scenario.filter = _filter(doc, data, A)
    if scenario.filter is not None:
        verdict = is_gabriel_filter(A, scenario.filter)
        checks.append(("filter", LawReport("gabriel-filter", verdict.passed,
                                           None if verdict else {"axiom": verdict.axiom, **(verdict.witness or {})})))
    return scenario


def _read(ref):
    if ref.startswith(BUILTIN_PREFIX):
        name = ref[len(BUILTIN_PREFIX):]
        if name not in BUILTINS + MUTATIONS:
            raise ScenarioError(f"unknown builtin scenario '{name}'")
        return resources.files("localix").joinpath("fixtures", f"{name}.yaml").read_text(), ref
    path = Path(ref)
    if not path.is_file():
        raise ScenarioError(f"{ref}: no such file")
    return path.read_text(), str(path)


def load_scenario(ref):
    """Load a scenario from a path or ``builtin:NAME``; failed laws are kept, not raised."""
    text, source = _read(ref)
    return scenario_from_text(text, source)


def parse_scenario(ref):
    """Load a scenario and raise :class:`ValidationError` on the first failed law."""
    scenario = load_scenario(ref)
    for subject, rep in scenario.checks:
        if not rep:
            raise ValidationError(f"{subject}: {rep.check} ({rep.anchor}) violated: {rep.witness}", rep)
    return scenario


def builtin_fixtures():
    """The four shipped scenarios, validated."""
    return [parse_scenario(BUILTIN_PREFIX + name) for name in BUILTINS]


def mutation_fixtures():
    """Scenarios that each break one law; loaded without raising."""
    return [load_scenario(BUILTIN_PREFIX + name) for name in MUTATIONS]
