"""JSON problem files: parsing, validation and canonical rendering.

Schema (version 1)::

    {
      "schema": 1,
      "name": "example",
      "ring": {"field": "QQ", "variables": ["X", "Y"], "order": "degrevlex", "weights": [1, 1]},
      "module": {"kind": "quotient_ring", "generators": ["X*Y"]},
      "sequence": ["X", "Y"],
      "grid": {"n_max": 2},
      "filtration": [["Y"], ["1"]],
      "expected": {}
    }

``module.kind`` is ``quotient_ring`` or ``ideal_as_module`` (with
``generators``) or ``cokernel`` (with ``rank``, optional ``shifts`` and
``relations``, each relation a list of ``rank`` polynomial strings).
``filtration`` is an optional candidate chain; each member lists generators,
written as polynomial strings for cyclic modules or as component lists.
``expected`` holds oracle values used by the test-suite and is carried
through untouched.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .algebra import PolynomialRing, field_from_name
from .errors import ParseError, PreconditionError
from .groebner import FreeModule
from .modules import FPModule, SubmoduleOfModule

SCHEMA_VERSION = 1
MODULE_KINDS = ("quotient_ring", "ideal_as_module", "cokernel")


@dataclass
class Problem:
    name: str
    ring: PolynomialRing
    kind: str
    generators: list = field(default_factory=list)
    rank: int = 1
    shifts: list | None = None
    relations: list = field(default_factory=list)
    sequence: list = field(default_factory=list)
    n_max: int = 2
    filtration: list | None = None
    expected: dict = field(default_factory=dict)
    description: str = ""
    source: str = "<problem>"
    _module: FPModule | None = field(default=None, repr=False)

    def module(self) -> FPModule:
        if self._module is None:
            if self.kind == "quotient_ring":
                self._module = FPModule.quotient_ring(self.ring, self.generators)
            elif self.kind == "ideal_as_module":
                self._module = FPModule.ideal_as_module(self.ring, self.generators)
            else:
                free = FreeModule(self.ring, self.rank, self.shifts)
                self._module = FPModule.cokernel(free, [free.element(r) for r in self.relations])
            self._module.name = self.name
        return self._module

    def require_sequence(self) -> list:
        if not self.sequence:
            raise PreconditionError(f"{self.source}: this command needs a nonempty 'sequence'")
        return list(self.sequence)

    def filtration_chain(self) -> list[SubmoduleOfModule] | None:
        if self.filtration is None:
            return None
        M = self.module()
        return [M.submodule(member) for member in self.filtration]

    def to_dict(self) -> dict:
        ring = {"field": repr(self.ring.field), "variables": list(self.ring.variables),
                "order": self.ring.order, "weights": list(self.ring.weights)}
        module: dict[str, Any] = {"kind": self.kind}
        if self.kind == "cokernel":
            module["rank"] = self.rank
            if self.shifts is not None:
                module["shifts"] = list(self.shifts)
            module["relations"] = [[str(c) for c in r] for r in self.relations]
        else:
            module["generators"] = [str(g) for g in self.generators]
        out: dict[str, Any] = {"schema": SCHEMA_VERSION, "name": self.name, "ring": ring,
                               "module": module, "sequence": [str(f) for f in self.sequence],
                               "grid": {"n_max": self.n_max}}
        if self.description:
            out["description"] = self.description
        if self.filtration is not None:
            out["filtration"] = [[_render_member(m) for m in member] for member in self.filtration]
        if self.expected:
            out["expected"] = self.expected
        return out

    def digest(self) -> str:
        import hashlib
        return hashlib.sha256(render(self).encode()).hexdigest()[:16]


def _render_member(m):
    if isinstance(m, (list, tuple)):
        return [str(c) for c in m]
    return str(m)


def render(problem: Problem) -> str:
    """Canonical text: sorted keys, two-space indent, canonical polynomial strings."""
    return json.dumps(problem.to_dict(), indent=2, sort_keys=True) + "\n"


def _locate(text: str, needle: str) -> tuple[int | None, int | None]:
    """Line and column (1-based) of the JSON string literal ``needle`` in ``text``."""
    lit = json.dumps(needle)
    idx = text.find(lit)
    if idx < 0:
        return None, None
    line = text.count("\n", 0, idx) + 1
    col = idx - (text.rfind("\n", 0, idx) + 1) + 2
    return line, col


class _Loader:
    def __init__(self, text: str, source: str):
        self.text = text
        self.source = source

    def fail(self, message: str, needle: str | None = None):
        line, col = _locate(self.text, needle) if needle is not None else (None, None)
        raise ParseError(message, line, col, self.source)

    def get(self, obj: dict, key: str, kind, where: str, default=...):
        if key not in obj:
            if default is ...:
                self.fail(f"{where}: missing key {key!r}")
            return default
        value = obj[key]
        if not isinstance(value, kind):
            self.fail(f"{where}.{key}: expected {getattr(kind, '__name__', kind)}", json.dumps(key)[1:-1])
        return value

    def poly(self, ring: PolynomialRing, text, where: str):
        if isinstance(text, int) and not isinstance(text, bool):
            text = str(text)
        if not isinstance(text, str):
            self.fail(f"{where}: polynomials are written as strings")
        try:
            f = ring.parse(text)
        except ParseError as exc:
            line, col = _locate(self.text, text)
            if col is not None and exc.column is not None:
                col += exc.column - 1
            raise ParseError(f"{where}: {exc.message}", line, col, self.source) from None
        ok, _ = f.is_homogeneous()
        if not ok:
            from .errors import NotHomogeneousError
            line, col = _locate(self.text, text)
            raise NotHomogeneousError(f"{where}: {text!r} is not homogeneous", line, col, self.source)
        return f

    def load(self) -> Problem:
        try:
            data = json.loads(self.text)
        except json.JSONDecodeError as exc:
            raise ParseError(exc.msg, exc.lineno, exc.colno, self.source) from None
        if not isinstance(data, dict):
            self.fail("top level must be an object")
        schema = data.get("schema", SCHEMA_VERSION)
        if schema != SCHEMA_VERSION:
            self.fail(f"unsupported schema version {schema!r}")
        rd = self.get(data, "ring", dict, "problem")
        variables = self.get(rd, "variables", list, "ring")
        try:
            fld = field_from_name(str(rd.get("field", "QQ")))
            ring = PolynomialRing(variables, fld, rd.get("order", "degrevlex"), rd.get("weights"))
        except (ValueError, TypeError) as exc:
            self.fail(f"ring: {exc}")
        md = self.get(data, "module", dict, "problem")
        kind = self.get(md, "kind", str, "module")
        if kind not in MODULE_KINDS:
            self.fail(f"module.kind must be one of {', '.join(MODULE_KINDS)}", kind)
        prob = Problem(name=str(data.get("name", Path(self.source).stem)), ring=ring, kind=kind,
                       description=str(data.get("description", "")), source=self.source)
        if kind == "cokernel":
            prob.rank = self.get(md, "rank", int, "module")
            prob.shifts = md.get("shifts")
            rels = self.get(md, "relations", list, "module", [])
            for i, r in enumerate(rels):
                if not isinstance(r, list) or len(r) != prob.rank:
                    self.fail(f"module.relations[{i}]: expected a list of {prob.rank} polynomials")
                prob.relations.append([self.poly(ring, c, f"module.relations[{i}]") for c in r])
        else:
            gens = self.get(md, "generators", list, "module")
            prob.generators = [self.poly(ring, g, f"module.generators[{i}]") for i, g in enumerate(gens)]
        seq = self.get(data, "sequence", list, "problem", [])
        prob.sequence = [self.poly(ring, f, f"sequence[{i}]") for i, f in enumerate(seq)]
        for i, f in enumerate(prob.sequence):
            if f.degree() < 1:
                self.fail(f"sequence[{i}]: elements must have positive degree", seq[i] if isinstance(seq[i], str) else None)
        grid = self.get(data, "grid", dict, "problem", {})
        prob.n_max = int(grid.get("n_max", 2))
        if "filtration" in data:
            chain = self.get(data, "filtration", list, "problem")
            members = []
            for i, member in enumerate(chain):
                if not isinstance(member, list):
                    self.fail(f"filtration[{i}]: expected a list of generators")
                gens = []
                for g in member:
                    if isinstance(g, list):
                        gens.append([self.poly(ring, c, f"filtration[{i}]") for c in g])
                    else:
                        gens.append(self.poly(ring, g, f"filtration[{i}]"))
                members.append(gens)
            prob.filtration = members
        prob.expected = data.get("expected", {}) or {}
        return prob


def parse_problem_text(text: str, source: str = "<problem>") -> Problem:
    return _Loader(text, source).load()


def parse_problem(path) -> Problem:
    path = Path(path)
    return parse_problem_text(path.read_text(), str(path))


def fixtures_dir() -> Path:
    return Path(__file__).parent / "fixtures"


def load_fixture(name: str) -> Problem:
    """Load a bundled fixture by stem, e.g. ``"colon_gap"``."""
    return parse_problem(fixtures_dir() / f"{name}.json")


def fixture_names() -> list[str]:
    return sorted(p.stem for p in fixtures_dir().glob("*.json"))
