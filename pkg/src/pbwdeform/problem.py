"""Problem files: field order, group generators and kappa, as JSON.

A problem file looks like::

    {
      "cyclotomic_order": 1,
      "dimension": 3,
      "generator_names": ["g", "h"],
      "generators": [[["-1", "0", "0"], ...], ...],
      "basis_names": ["x", "y", "z"],
      "kappa": [
        {"pair": [0, 1], "terms": [{"group_word": "h", "constant": "0", "linear": ["0", "0", "1"]}]}
      ]
    }

Pairs are 0-based basis indices with i < j.  Group words are products of
generator names (``g*h``, ``g^2``, ``1``); the default labels g1, g2, ...
are accepted as aliases even when custom names are given.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Optional, Sequence

from .expr import ParseError, parse_with, root_orders
from .group import DEFAULT_MAX_ORDER, Group, generate_group
from .kappa import KappaParameter
from .linalg import Matrix
from .rewrite import PbwElement
from .scalar import CyclotomicContext, format_scalar, parse_scalar

_NAME_RE = re.compile(r"^[A-Za-z_][A-Za-z_0-9]*$")
RESERVED_NAMES = {"E", "t"}


class SpecError(ValueError):
    """Malformed or inconsistent problem file."""


@dataclass
class ProblemSpec:
    dimension: int
    generators: list  # list of matrices of scalar strings
    kappa: list  # list of {"pair": [i, j], "terms": [...]}
    cyclotomic_order: Optional[int] = None
    generator_names: Optional[list] = None
    basis_names: Optional[list] = None
    extra: dict = field(default_factory=dict)


@dataclass
class Problem:
    """A fully resolved problem: field, group and parameter."""

    ctx: CyclotomicContext
    group: Group
    kappa: KappaParameter
    basis_names: list
    spec: ProblemSpec

    @property
    def generator_names(self) -> list:
        return self.group.generator_names

    def symbol_aliases(self) -> dict:
        """Group element index for every accepted generator spelling."""
        out = {}
        for k, g in enumerate(self.group.generator_indices):
            out[f"g{k + 1}"] = g
        for name, g in zip(self.group.generator_names, self.group.generator_indices):
            out[name] = g
        return out


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise SpecError(message)


def spec_from_data(data: Any) -> ProblemSpec:
    _require(isinstance(data, dict), "problem file must contain a JSON object")
    known = {"cyclotomic_order", "dimension", "generators", "generator_names", "basis_names", "kappa"}
    _require("dimension" in data, "missing 'dimension'")
    n = data["dimension"]
    _require(isinstance(n, int) and not isinstance(n, bool) and n >= 1, "'dimension' must be a positive integer")
    gens = data.get("generators", [])
    _require(isinstance(gens, list), "'generators' must be a list of matrices")
    for m in gens:
        _require(
            isinstance(m, list) and len(m) == n and all(isinstance(r, list) and len(r) == n for r in m),
            f"every generator must be a {n}x{n} matrix",
        )
        _require(all(isinstance(x, (str, int)) for r in m for x in r), "matrix entries must be strings or integers")
    order = data.get("cyclotomic_order")
    _require(
        order is None or (isinstance(order, int) and not isinstance(order, bool) and order >= 1),
        "'cyclotomic_order' must be a positive integer",
    )
    gnames = data.get("generator_names")
    if gnames is not None:
        _require(isinstance(gnames, list) and len(gnames) == len(gens), "one generator name per generator")
    bnames = data.get("basis_names")
    if bnames is not None:
        _require(isinstance(bnames, list) and len(bnames) == n, f"'basis_names' must list {n} names")
    names = list(gnames or []) + list(bnames or [])
    for name in names:
        _require(isinstance(name, str) and bool(_NAME_RE.match(name)), f"invalid name {name!r}")
        _require(name not in RESERVED_NAMES, f"name {name!r} is reserved")
    _require(len(set(names)) == len(names), "generator and basis names must be distinct")
    kappa = data.get("kappa", [])
    _require(isinstance(kappa, list), "'kappa' must be a list")
    for entry in kappa:
        _require(isinstance(entry, dict) and "pair" in entry, "each kappa entry needs a 'pair'")
        pair = entry["pair"]
        _require(
            isinstance(pair, list) and len(pair) == 2 and all(isinstance(i, int) for i in pair),
            "'pair' must be two integers",
        )
        i, j = pair
        _require(0 <= i < j < n, f"pair {pair} must satisfy 0 <= i < j < {n}")
        terms = entry.get("terms", [])
        _require(isinstance(terms, list), "'terms' must be a list")
        for t in terms:
            _require(isinstance(t, dict), "each term must be an object")
            _require(isinstance(t.get("group_word", "1"), str), "'group_word' must be a string")
            lin = t.get("linear")
            if lin is not None:
                _require(isinstance(lin, list) and len(lin) == n, f"'linear' must have {n} entries")
    return ProblemSpec(
        dimension=n,
        generators=gens,
        kappa=kappa,
        cyclotomic_order=order,
        generator_names=gnames,
        basis_names=bnames,
        extra={k: v for k, v in data.items() if k not in known},
    )


def loads_spec(text: str) -> ProblemSpec:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"invalid JSON: {exc}") from exc
    return spec_from_data(data)


def _all_strings(spec: ProblemSpec) -> list[str]:
    out = [str(x) for m in spec.generators for r in m for x in r]
    for entry in spec.kappa:
        for t in entry.get("terms", []):
            out.append(str(t.get("constant", "0")))
            out.extend(str(x) for x in t.get("linear") or [])
    return out


def field_order(spec: ProblemSpec) -> int:
    """lcm of every n appearing as E(n) in the file (at least 1)."""
    orders = [n for s in _all_strings(spec) for n in root_orders(s)]
    return math.lcm(1, *orders)


class _WordAlgebra:
    """Evaluates group words to element indices."""

    def __init__(self, group: Group, names: dict, text: str):
        self.group = group
        self.names = names
        self.text = text

    def _bad(self, pos: int, what: str):
        return ParseError(f"{what} is not allowed in a group word", self.text, pos)

    def number(self, n):
        if n != 1:
            raise ParseError(f"the only number allowed in a group word is 1, got {n}", self.text, 0)
        return 0

    def root(self, n, pos):
        raise self._bad(pos, "E(n)")

    def symbol(self, name, pos):
        if name not in self.names:
            raise ParseError(f"unknown group generator {name!r}", self.text, pos)
        return self.names[name]

    def add(self, a, b):
        raise self._bad(0, "'+'")

    def sub(self, a, b):
        raise self._bad(0, "'-'")

    def mul(self, a, b):
        return self.group.cayley[a][b]

    def div(self, a, b, pos):
        raise self._bad(pos, "'/'")

    def neg(self, a):
        raise self._bad(0, "negation")

    def power(self, a, k, pos):
        if k < 0:
            a, k = self.group.inverses[a], -k
        out = 0
        for _ in range(k):
            out = self.group.cayley[out][a]
        return out


def resolve_word(text: str, group: Group, names: dict) -> int:
    return parse_with(text, _WordAlgebra(group, names, text))


def build_problem(
    spec: ProblemSpec,
    cyclotomic_order: Optional[int] = None,
    max_group_order: int = DEFAULT_MAX_ORDER,
) -> Problem:
    """Resolve the field, close the group and assemble kappa."""
    N = cyclotomic_order or spec.cyclotomic_order or field_order(spec)
    needed = field_order(spec)
    if N % needed:
        raise SpecError(f"cyclotomic order {N} is not a multiple of {needed}, the lcm of the E(n) in the file")
    ctx = CyclotomicContext(N)
    n = spec.dimension

    def scalar(text) -> Any:
        try:
            return parse_scalar(str(text), ctx)
        except (ParseError, ZeroDivisionError) as exc:
            raise SpecError(f"bad scalar {text!r}: {exc}") from exc

    gens = [Matrix(ctx, [[scalar(x) for x in row] for row in m], n) for m in spec.generators]
    gnames = spec.generator_names or [f"g{k + 1}" for k in range(len(gens))]
    try:
        group = generate_group(gens, n, max_group_order, gnames, ctx=ctx)
    except ValueError as exc:
        raise SpecError(str(exc)) from exc
    basis_names = list(spec.basis_names or [f"v{i + 1}" for i in range(n)])
    aliases = {f"g{k + 1}": g for k, g in enumerate(group.generator_indices)}
    aliases.update({name: g for name, g in zip(gnames, group.generator_indices)})
    const: dict = {}
    lin: dict = {}
    for entry in spec.kappa:
        i, j = entry["pair"]
        for t in entry.get("terms", []):
            try:
                g = resolve_word(t.get("group_word", "1"), group, aliases)
            except ParseError as exc:
                raise SpecError(f"bad group word: {exc}") from exc
            c = scalar(t.get("constant", "0"))
            if c:
                const[(g, i, j)] = const.get((g, i, j), ctx.zero) + c
            if t.get("linear") is not None:
                v = [scalar(x) for x in t["linear"]]
                old = lin.get((g, i, j))
                lin[(g, i, j)] = v if old is None else [a + b for a, b in zip(old, v)]
    kappa = KappaParameter(group, const, lin)
    return Problem(ctx, group, kappa, basis_names, spec)


def kappa_entries(kappa: KappaParameter) -> list:
    """Serialize kappa as the problem-file 'kappa' list (normal form)."""
    G = kappa.group
    keys = sorted({(i, j, g) for g, i, j in list(kappa.constant) + list(kappa.linear)})
    entries: dict = {}
    for i, j, g in keys:
        term = {
            "group_word": G.names[g],
            "constant": format_scalar(kappa.const_value(g, i, j)),
            "linear": [format_scalar(x) for x in kappa.linear_value(g, i, j)],
        }
        entries.setdefault((i, j), []).append(term)
    return [{"pair": [i, j], "terms": terms} for (i, j), terms in entries.items()]


def problem_to_data(problem: Problem) -> dict:
    G = problem.group
    data = dict(problem.spec.extra)
    data.update(
        {
            "cyclotomic_order": problem.ctx.order,
            "dimension": G.dim,
            "generator_names": list(G.generator_names),
            "generators": [[[format_scalar(x) for x in row] for row in m.entries] for m in G.generators],
            "basis_names": list(problem.basis_names),
            "kappa": kappa_entries(problem.kappa),
        }
    )
    return data


_FLAT_LIST_RE = re.compile(r"\[(\s*[^\[\]{}]*?)\]", re.S)


def dumps_data(data: Any) -> str:
    """JSON with every innermost list kept on one line."""
    text = json.dumps(data, indent=2, ensure_ascii=False)

    def collapse(m: re.Match) -> str:
        body = m.group(1).strip()
        if not body:
            return "[]"
        items = [s.strip() for s in re.split(r",\s*\n\s*", body)]
        return "[" + ", ".join(items) + "]"

    return _FLAT_LIST_RE.sub(collapse, text) + "\n"


def serialize_problem(problem: Problem) -> str:
    return dumps_data(problem_to_data(problem))


def bundled_spec_names() -> list[str]:
    root = resources.files("pbwdeform") / "specs"
    return sorted(p.name for p in root.iterdir() if p.name.endswith(".spec"))


def bundled_spec_text(name: str) -> str:
    if not name.endswith(".spec"):
        name += ".spec"
    return (resources.files("pbwdeform") / "specs" / name).read_text(encoding="utf-8")


def read_spec_text(path: str) -> str:
    """Read a problem file, falling back to a bundled spec of the same name."""
    p = Path(path)
    if p.exists():
        return p.read_text(encoding="utf-8")
    name = p.name if p.name.endswith(".spec") else p.name + ".spec"
    if name in bundled_spec_names() and len(p.parts) == 1:
        return bundled_spec_text(name)
    raise SpecError(f"no such problem file: {path}")


def load_problem(
    path_or_name: str,
    cyclotomic_order: Optional[int] = None,
    max_group_order: int = DEFAULT_MAX_ORDER,
) -> Problem:
    return build_problem(loads_spec(read_spec_text(path_or_name)), cyclotomic_order, max_group_order)


def load_bundled(name: str, **kwargs) -> Problem:
    return build_problem(loads_spec(bundled_spec_text(name)), **kwargs)


def format_kappa_summary(kappa: KappaParameter, basis_names: Sequence[str]) -> list[str]:
    """Human-readable relations [v_i, v_j] = kappa(v_i, v_j)."""
    G = kappa.group
    n = kappa.n
    ctx = kappa.ctx
    lines = []
    pairs = sorted({(i, j) for _, i, j in list(kappa.constant) + list(kappa.linear)})
    for i, j in pairs:
        terms: dict = {}
        for g in range(G.order):
            c = kappa.const_value(g, i, j)
            if c:
                terms[((0,) * n, g, 0)] = c
            for m, x in enumerate(kappa.linear_value(g, i, j)):
                if x:
                    e = [0] * n
                    e[m] = 1
                    terms[(tuple(e), g, 0)] = x
        value = PbwElement(ctx, n, terms).format(basis_names, G.names)
        lines.append(f"[{basis_names[i]}, {basis_names[j]}] = {value}")
    return lines
