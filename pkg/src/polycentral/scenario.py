"""Scenario files: a small sectioned ``key = value`` format.

Example::

    [scenario]
    name = heisenberg
    prime = 2
    cutoff = 12
    seed = 0

    [group]
    builtin = heisenberg

    [schedule]
    weights = a:1 b:1 z:3
    layers = 1 2

    [checks]
    consistency = 1000
    graded = 500

An explicit group replaces ``builtin`` with ``generators``, ``orders`` and
relation lines ``power g = word``, ``conj g h = word`` (``g^-1 h g``) and
``conjinv g h = word`` (``g h g^-1``).  Words are space-separated
``name`` or ``name^e`` letters; ``1`` is the empty word.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources

from .errors import ParseError

SECTIONS = ("scenario", "group", "schedule", "checks")
BUILTIN_GROUPS = ("Z", "Z^k", "heisenberg", "C_{p^m}", "sec9_example1", "sec9_example2")
NAMED_SCHEDULES = ("default_3powers", "lemma_7_3", "unit")

_CHECK_KEYS = {
    "consistency", "graded", "associativity", "pseudovaluation", "axioms", "routes", "theta_expansion",
    "component_law", "classify", "classify_box", "weight_table", "expect_weights", "expect_dims",
    "expect_rank", "expect_abelian", "expect_exponent_p", "expect_free_abelian", "seed",
}


@dataclass
class GroupSpec:
    builtin: str | None = None
    rank: int = 1
    m: int = 1
    generators: list = field(default_factory=list)
    orders: list = field(default_factory=list)
    relations: list = field(default_factory=list)  # (kind, names tuple, word text, line)
    line: int = 0


@dataclass
class Scenario:
    name: str
    prime: int
    cutoff: int
    seed: int
    group: GroupSpec
    schedule: dict
    checks: dict  # name -> value (int, str or bool)
    lines: dict = field(default_factory=dict)  # (section, key) -> line number


_BOOL = {"yes": True, "true": True, "1": True, "no": False, "false": False, "0": False}


def _int(value: str, line: int, key: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise ParseError(line, f"{key} must be an integer, got {value!r}") from None


def parse_scenario(text: str) -> Scenario:
    section = None
    data = {s: {} for s in SECTIONS}
    relations = []
    lines = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = re.fullmatch(r"\[(\w+)\]", line)
        if m:
            section = m.group(1).lower()
            if section not in SECTIONS:
                raise ParseError(lineno, f"unknown section [{section}]")
            continue
        if section is None:
            raise ParseError(lineno, "key outside of any section")
        if "=" not in line:
            raise ParseError(lineno, f"expected 'key = value', got {line!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        words = key.split()
        if section == "group" and words and words[0] in ("power", "conj", "conjinv"):
            expected = 2 if words[0] == "power" else 3
            if len(words) != expected:
                raise ParseError(lineno, f"malformed relation key {key!r}")
            relations.append((words[0], tuple(words[1:]), value, lineno))
            continue
        key = key.lower()
        if key in data[section]:
            raise ParseError(lineno, f"duplicate key {key!r} in [{section}]")
        data[section][key] = value
        lines[(section, key)] = lineno

    sc = data["scenario"]
    if "prime" not in sc:
        raise ParseError(0, "missing required field 'prime' in [scenario]")
    prime = _int(sc["prime"], lines[("scenario", "prime")], "prime")
    if prime < 2 or any(prime % q == 0 for q in range(2, int(prime ** 0.5) + 1)):
        raise ParseError(lines[("scenario", "prime")], f"prime must be a prime number, got {prime}")
    if "cutoff" not in sc:
        raise ParseError(0, "missing required field 'cutoff' in [scenario]")
    cutoff = _int(sc["cutoff"], lines[("scenario", "cutoff")], "cutoff")
    if cutoff < 1:
        raise ParseError(lines[("scenario", "cutoff")], "cutoff must be positive")
    seed = _int(sc.get("seed", "0"), lines.get(("scenario", "seed"), 0), "seed")
    for key in sc:
        if key not in ("name", "prime", "cutoff", "seed"):
            raise ParseError(lines[("scenario", key)], f"unknown key {key!r} in [scenario]")

    group = _parse_group(data["group"], relations, lines)
    schedule = dict(data["schedule"])
    for key in schedule:
        if key not in ("named", "weights", "layers", "k"):
            raise ParseError(lines[("schedule", key)], f"unknown key {key!r} in [schedule]")
    if "named" in schedule and schedule["named"] not in NAMED_SCHEDULES:
        raise ParseError(lines[("schedule", "named")],
                         f"unknown schedule {schedule['named']!r}; expected one of {', '.join(NAMED_SCHEDULES)}")
    checks = {}
    for key, value in data["checks"].items():
        ln = lines[("checks", key)]
        if key not in _CHECK_KEYS:
            raise ParseError(ln, f"unknown check {key!r}")
        if key.startswith("expect_") and key in ("expect_abelian", "expect_exponent_p", "expect_free_abelian"):
            if value.lower() not in _BOOL:
                raise ParseError(ln, f"{key} must be yes/no")
            checks[key] = _BOOL[value.lower()]
        elif key in ("weight_table", "expect_weights", "expect_dims"):
            checks[key] = value
        elif key == "classify":
            checks[key] = _BOOL.get(value.lower(), None)
            if checks[key] is None:
                raise ParseError(ln, "classify must be yes/no")
        else:
            checks[key] = _int(value, ln, key)
            if checks[key] < 0:
                raise ParseError(ln, f"{key} must be non-negative")
    return Scenario(sc.get("name", group.builtin or "custom"), prime, cutoff, seed, group, schedule,
                    checks, lines)


def _parse_group(g: dict, relations: list, lines: dict) -> GroupSpec:
    spec = GroupSpec()
    if "builtin" in g:
        ln = lines[("group", "builtin")]
        spec.line = ln
        name = g["builtin"]
        if relations or "generators" in g:
            raise ParseError(ln, "give either a builtin group or an explicit presentation, not both")
        if name == "Z":
            spec.builtin, spec.rank = "Z", 1
        elif re.fullmatch(r"Z\^\d+", name):
            spec.builtin, spec.rank = "Z^k", int(name[2:])
            if spec.rank < 1:
                raise ParseError(ln, "Z^k needs k >= 1")
        elif re.fullmatch(r"C_\{p\^\d+\}", name):
            spec.builtin, spec.m = "C_{p^m}", int(name[5:-1])
            if spec.m < 1:
                raise ParseError(ln, "C_{p^m} needs m >= 1")
        elif name in ("heisenberg", "sec9_example1", "sec9_example2"):
            spec.builtin = name
        else:
            raise ParseError(ln, f"unknown builtin group {name!r}; expected one of {', '.join(BUILTIN_GROUPS)}")
        for key in g:
            if key != "builtin":
                raise ParseError(lines[("group", key)], f"unexpected key {key!r} next to builtin")
        return spec
    if "generators" not in g:
        raise ParseError(0, "[group] needs 'builtin' or 'generators'")
    ln = lines[("group", "generators")]
    spec.line = ln
    spec.generators = g["generators"].split()
    if len(set(spec.generators)) != len(spec.generators) or not spec.generators:
        raise ParseError(ln, "generator names must be distinct and non-empty")
    orders = g.get("orders", " ".join(["inf"] * len(spec.generators))).split()
    oln = lines.get(("group", "orders"), ln)
    if len(orders) != len(spec.generators):
        raise ParseError(oln, "one order per generator is required")
    for o in orders:
        if o in ("inf", "infinite"):
            spec.orders.append(None)
        else:
            spec.orders.append(_int(o, oln, "order"))
    names = set(spec.generators)
    for kind, gens, word, rln in relations:
        for nm in gens:
            if nm not in names:
                raise ParseError(rln, f"unknown generator {nm!r}")
        parse_word(word, spec.generators, rln)
        spec.relations.append((kind, gens, word, rln))
    for key in g:
        if key not in ("generators", "orders"):
            raise ParseError(lines[("group", key)], f"unknown key {key!r} in [group]")
    return spec


def parse_word(text: str, names, line: int = 0) -> list:
    """``"a b^-1 z^2"`` -> ``[(0, 1), (1, -1), (2, 2)]``."""
    index = {nm: i for i, nm in enumerate(names)}
    out = []
    text = text.strip()
    if text in ("", "1"):
        return out
    for tok in text.split():
        m = re.fullmatch(r"([A-Za-z_][\w]*)(?:\^(-?\d+))?", tok)
        if not m or m.group(1) not in index:
            raise ParseError(line, f"bad letter {tok!r} in word {text!r}")
        out.append((index[m.group(1)], int(m.group(2) or 1)))
    return out


def builtin_names() -> list:
    return sorted(p.name[:-4] for p in resources.files("polycentral.scenarios").iterdir()
                  if p.name.endswith(".ini"))


def load_builtin(name: str) -> Scenario:
    path = resources.files("polycentral.scenarios") / f"{name}.ini"
    if not path.is_file():
        raise ParseError(0, f"no builtin scenario {name!r}; available: {', '.join(builtin_names())}")
    return parse_scenario(path.read_text())
