"""Run a scenario: build the group algebra, run the requested checks, assemble a report.

Randomness: every check draws from its own ``random.Random`` (Mersenne
Twister) seeded with the string ``"<seed>:<check name>"``.  Python seeds
string inputs through SHA-512, so the streams are identical on every
platform and adding or removing one check never shifts another.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field

from . import builder, groups
from .algebra import INF, check_graded_polynomial
from .errors import ExceedsCutoff, IdentityElement, ParseError, PolycentralError
from .graded_lie import bracket, classify, generate_subalgebra, hom_component, p_power
from .pcgroup import PcPresentation, check_consistency
from .pseries import PSeriesSpec, check_axioms, p_adic_valuation
from .scenario import Scenario, parse_word

CHECK_ORDER = ("consistency", "graded", "associativity", "pseudovaluation", "axioms", "theta_expansion",
               "routes", "component_law", "weight_table", "classify")
REPORT_VERSION = 1


@dataclass
class CheckResult:
    name: str
    passed: bool
    samples: int
    detail: str
    witness: str | None = None
    margin: float | None = None

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "samples": self.samples,
            "detail": self.detail,
            "witness": self.witness,
            "margin": _num(self.margin),
        }


@dataclass
class Report:
    scenario: str
    prime: int
    cutoff: int
    seed: int
    group: str
    schedule: str
    build_log: list = field(default_factory=list)
    checks: list = field(default_factory=list)
    dims: dict = field(default_factory=dict)
    classification: dict | None = None
    tables: dict = field(default_factory=dict)  # name -> list of rows (lists of strings)
    caveat: str = ""

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "version": REPORT_VERSION,
            "scenario": self.scenario,
            "prime": self.prime,
            "cutoff": self.cutoff,
            "seed": self.seed,
            "group": self.group,
            "schedule": self.schedule,
            "build_log": list(self.build_log),
            "checks": [c.to_dict() for c in self.checks],
            "dims": {str(d): n for d, n in self.dims.items()},
            "classification": self.classification,
            "tables": self.tables,
            "caveat": self.caveat,
            "passed": self.passed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def to_text(self) -> str:
        out = [f"scenario: {self.scenario}", f"prime: {self.prime}", f"cutoff: {self.cutoff}",
               f"seed: {self.seed}", f"group: {self.group}", f"schedule: {self.schedule}", "",
               "build log:"]
        out += [f"  {line}" for line in self.build_log] or ["  (no extension steps)"]
        out += ["", "checks:"]
        for c in self.checks:
            line = f"  {'PASS' if c.passed else 'FAIL'} {c.name} samples={c.samples}"
            if c.margin is not None:
                line += f" margin={_num(c.margin)}"
            out.append(f"{line}: {c.detail}")
            if c.witness:
                out.append(f"       witness: {c.witness}")
        if not self.checks:
            out.append("  (none requested)")
        for name, rows in self.tables.items():
            out += ["", f"{name}:"]
            out += ["  " + "\t".join(r) for r in rows]
        if self.dims:
            out += ["", "graded dimensions (degree: dim):"]
            out += [f"  {d}: {n}" for d, n in self.dims.items()]
        if self.classification is not None:
            c = self.classification
            out += ["", "classification:",
                    f"  abelian_up_to_D: {c['abelian_up_to_D']}",
                    f"  exponent_p_up_to_D: {c['exponent_p_up_to_D']}",
                    f"  free_abelian_up_to_D: {c['free_abelian_up_to_D']}",
                    f"  rank_estimate: {c['rank_estimate']} (hirsch number {c['hirsch_number']})"]
        out += ["", f"caveat: {self.caveat}",
                f"result: {'PASS' if self.passed else 'FAIL'} "
                f"({sum(c.passed for c in self.checks)}/{len(self.checks)} checks)"]
        return "\n".join(out) + "\n"


def _num(x):
    if x is None:
        return None
    return "inf" if x == INF else x


# ---------------------------------------------------------------- resolution

def _tower_levels(p: int, cutoff: int) -> int:
    """Fewest levels whose infinite bottom generator has weight above the cutoff."""
    levels, w = 0, 1
    while w <= cutoff:
        levels += 1
        w = p * w + 1
    return levels


def build_presentation(sc: Scenario) -> PcPresentation:
    g = sc.group
    p = sc.prime
    if g.builtin == "Z":
        return groups.free_abelian(p, 1, ["g"])
    if g.builtin == "Z^k":
        return groups.free_abelian(p, g.rank, [f"x{i + 1}" for i in range(g.rank)])
    if g.builtin == "heisenberg":
        return groups.heisenberg(p)
    if g.builtin == "C_{p^m}":
        return groups.cyclic_p_power(p, g.m)
    if g.builtin == "sec9_example1":
        return groups.cyclic_tower(p, _tower_levels(p, sc.cutoff))
    if g.builtin == "sec9_example2":
        return groups.free_abelian(p, 2, ["u", "v"])
    names = g.generators
    powers, conj, conj_inv = {}, {}, {}
    for kind, gens, word, line in g.relations:
        vec = _normal_word(word, names, line)
        idx = [names.index(x) for x in gens]
        if kind == "power":
            powers[idx[0]] = vec
        else:
            i, j = idx
            if not i < j:
                raise ParseError(line, f"{kind} relation needs the first generator above the second")
            (conj if kind == "conj" else conj_inv)[(i, j)] = vec
    try:
        return PcPresentation(p, g.orders, powers, conj, conj_inv, names)
    except PolycentralError as exc:
        raise ParseError(g.line, f"invalid presentation: {exc}") from exc


def _normal_word(text: str, names, line: int) -> tuple:
    vec = [0] * len(names)
    last = -1
    for i, e in parse_word(text, names, line):
        if i <= last:
            raise ParseError(line, f"word {text!r} is not in normal form (generators must increase)")
        vec[i] = e
        last = i
    return tuple(vec)


def _parse_weights(text: str, pres: PcPresentation, line: int) -> list:
    toks = text.split()
    if toks and all(":" in t for t in toks):
        table = {}
        for t in toks:
            nm, w = t.split(":", 1)
            if nm not in pres.names:
                raise ParseError(line, f"unknown generator {nm!r} in weights")
            table[nm] = int(w)
        missing = [nm for nm in pres.names if nm not in table]
        if missing:
            raise ParseError(line, f"no weight for {', '.join(missing)}")
        return [table[nm] for nm in pres.names]
    try:
        ws = [int(t) for t in toks]
    except ValueError:
        raise ParseError(line, f"weights must be integers or name:weight pairs: {text!r}") from None
    if len(ws) != pres.n:
        raise ParseError(line, f"{len(ws)} weights for {pres.n} generators")
    return ws


def build_schedule(sc: Scenario, pres: PcPresentation) -> builder.WeightSchedule:
    s = sc.schedule
    named = s.get("named")
    layers = None
    if "layers" in s:
        try:
            layers = tuple(int(x) for x in s["layers"].split())
        except ValueError:
            raise ParseError(sc.lines[("schedule", "layers")], "layers must be integers") from None
    if "weights" in s:
        if named:
            raise ParseError(sc.lines[("schedule", "weights")], "give either named or weights, not both")
        ws = _parse_weights(s["weights"], pres, sc.lines[("schedule", "weights")])
        return builder.WeightSchedule.from_generator_weights(ws, layers)
    if named == "unit":
        return builder.unit_schedule(pres.n)
    if named == "default_3powers":
        k = int(s.get("k", pres.n))
        return builder.default_schedule(layers or (pres.n,), k)
    return builder.recursive_p_schedule(pres)


def _describe_group(sc: Scenario, pres: PcPresentation) -> str:
    label = sc.group.builtin or "explicit"
    if sc.group.builtin == "Z^k":
        label = f"Z^{sc.group.rank}"
    elif sc.group.builtin == "C_{p^m}":
        label = f"C_{{p^{sc.group.m}}}"
    orders = " ".join("inf" if o is None else str(o) for o in pres.orders)
    return f"{label} (generators {' '.join(pres.names)}; orders {orders})"


def _describe_schedule(ga) -> str:
    alg = ga.algebra
    text = " ".join(f"{v.name}:{v.weight}" for v in alg.variables)
    if ga.schedule is not None and ga.schedule.layers:
        text += f" layers={' '.join(map(str, ga.schedule.layers))}"
    return text


def build(sc: Scenario):
    pres = build_presentation(sc)
    if sc.group.builtin == "sec9_example2":
        if sc.schedule:
            raise ParseError(sc.group.line, "sec9_example2 has a fixed one-variable algebra; drop [schedule]")
        return builder.line_embedding(pres, sc.cutoff, [{0: 1, 1: 1}, {0: 1, 1: 1, sc.prime: 1}])
    schedule = build_schedule(sc, pres)
    return builder.build_group_algebra(pres, schedule, sc.cutoff)


# ---------------------------------------------------------------- checks

def check_associativity(ga, samples: int, rng: random.Random) -> CheckResult:
    pres, alg = ga.pres, ga.algebra
    one = alg.one()
    for k in range(samples):
        x, y, z = (pres.random_element(rng) for _ in range(3))
        X, Y, Z = ga.embed(x), ga.embed(y), ga.embed(z)
        witness = f"x={pres.format(x)} y={pres.format(y)} z={pres.format(z)}"
        if (X * Y) * Z != X * (Y * Z):
            return CheckResult("associativity", False, k + 1, "(xy)z != x(yz)", witness)
        if X * ga.embed(pres.inverse(x)) != one:
            return CheckResult("associativity", False, k + 1, "embed(x) embed(x^-1) != 1", witness)
        if ga.embed(pres.multiply(x, y)) != X * Y:
            return CheckResult("associativity", False, k + 1, "embed(xy) != embed(x) embed(y)", witness)
    return CheckResult("associativity", True, samples,
                       "(xy)z = x(yz), x x^-1 = 1 and embed is multiplicative on all samples")


def check_pseudovaluation(alg, samples: int, rng: random.Random) -> CheckResult:
    """``value(x+y) >= min`` and the product law; equality only when ``gr`` is a domain."""
    D = alg.cutoff
    exact = alg.expects_domain()
    margin = INF
    for k in range(samples):
        x = alg.random_element(rng, 3, min_value=rng.randint(0, D))
        y = alg.random_element(rng, 3, min_value=rng.randint(0, D))
        vx, vy = alg.value(x), alg.value(y)
        vs, vp = alg.value(x + y), alg.value(x * y)
        s = vx + vy
        bad = None
        if vs < min(vx, vy):
            bad = f"value(x+y) = {vs} < min({vx}, {vy})"
        elif vp < s:
            bad = f"value(xy) = {vp} < {vx} + {vy}"
        elif exact and s <= D and vp != s:
            bad = f"value(xy) = {vp} != {vx} + {vy}"
        if bad:
            return CheckResult("pseudovaluation", False, k + 1, bad, f"x={x} y={y}")
        if s <= D and vp != INF:
            margin = min(margin, vp - s)
    law = "value(xy) = value(x) + value(y)" if exact else \
        "value(xy) >= value(x) + value(y) (nilpotent power rule present)"
    return CheckResult("pseudovaluation", True, samples, f"value(x+y) >= min and {law} on all samples",
                       margin=None if margin == INF else margin)


def _theta_stage(stage, samples: int, rng: random.Random, max_degree: int = 3):
    new, old = stage.algebra, stage.parent.algebra
    theta = new.var(new.n - 1)
    k = new.variables[-1].weight
    D = new.cutoff
    for s in range(samples):
        lams = []
        for i in range(max_degree + 1):
            lam = old.random_element(rng, 2) if rng.random() < 0.7 else old.zero()
            lams.append(lam)
        if not any(lams):
            lams[0] = old.one()
        expected = min(old.value(l) + k * i for i, l in enumerate(lams) if l)
        if expected > D:
            expected = INF
        right = new.zero()
        left = new.zero()
        for i, lam in enumerate(lams):
            if lam:
                L = builder._transport(lam, new)
                right = right + L * theta ** i
                left = left + theta ** i * L
        for side, x in (("right", right), ("left", left)):
            if new.value(x) != expected:
                return s + 1, (f"{side} coefficients: value = {new.value(x)} != {expected}",
                               " ; ".join(f"lambda_{i}={l}" for i, l in enumerate(lams)))
    return samples, None


def check_theta_expansion(ga, samples: int, rng: random.Random) -> CheckResult:
    """After every infinite cyclic extension, ``value(sum lambda_i theta^i) = min(value(lambda_i) + k i)``."""
    stages = []
    cur = ga
    while cur is not None and cur.parent is not None:
        if cur.log and cur.log[-1].kind == "infinite_cyclic":
            stages.append(cur)
        cur = cur.parent
    if not stages:
        return CheckResult("theta_expansion", True, 0, "no infinite cyclic extension steps")
    total = 0
    for st in reversed(stages):
        n, err = _theta_stage(st, samples, rng)
        total += n
        if err:
            return CheckResult("theta_expansion", False, total, f"after adding {st.log[-1].variable}: {err[0]}", err[1])
    names = ", ".join(st.log[-1].variable for st in reversed(stages))
    return CheckResult("theta_expansion", True, total, f"value of sum lambda_i theta^i is exactly the minimum after adding {names}")


def _nontrivial_component(g, ga):
    try:
        return hom_component(g, ga)
    except (IdentityElement, ExceedsCutoff):
        return None


def check_routes(ga, samples: int, rng: random.Random) -> CheckResult:
    pres = ga.pres
    D = ga.cutoff
    p = ga.p
    checked = 0
    attempts = 0
    while checked < samples and attempts < 20 * samples:
        attempts += 1
        x, y = pres.random_element(rng), pres.random_element(rng)
        hx, hy = _nontrivial_component(x, ga), _nontrivial_component(y, ga)
        if hx is None or hy is None:
            continue
        did = False
        if hx.degree + hy.degree <= D:
            did = True
            if bracket(hx, hy, ga, "group") != bracket(hx, hy, ga, "ring"):
                return CheckResult("routes", False, checked + 1, "bracket routes disagree",
                                   f"x={pres.format(x)} y={pres.format(y)}")
        if p * hx.degree <= D:
            did = True
            if p_power(hx, ga, "group") != p_power(hx, ga, "ring"):
                return CheckResult("routes", False, checked + 1, "[p]-map routes disagree", f"x={pres.format(x)}")
        checked += did
    return CheckResult("routes", True, checked,
                       "group and ring routes agree for bracket and [p]-map on all samples")


def component_law_table(ga, count: int) -> tuple:
    """Rows ``n, component of u^n v^-n - 1, expected``; returns (rows, ok, witness)."""
    alg = ga.algebra
    p = ga.p
    rows, ok, witness = [], True, None
    for n in range(1, count + 1):
        k = p_adic_valuation(n, p)
        n1 = n // p ** k
        deg = p ** (k + 1)
        expected = alg.monomial((deg,), -n1) if deg <= alg.cutoff else None
        h = _nontrivial_component((n, -n), ga)
        got = "above cutoff" if h is None else str(h.body)
        want = "above cutoff" if expected is None else str(expected)
        rows.append([str(n), got, want])
        if got != want and ok:
            ok, witness = False, f"u^{n} v^-{n}: got {got}, expected {want}"
    for n in range(-count, count + 1):
        for m in range(-count, count + 1):
            if (n + m) % p == 0:
                continue
            h = _nontrivial_component((n, m), ga)
            want = alg.monomial((1,), n + m)
            if h is None or h.body != want:
                if ok:
                    ok, witness = False, f"u^{n} v^{m}: got {h and h.body}, expected {want}"
    return rows, ok, witness


def _words_from(text: str, pres: PcPresentation) -> list:
    out = []
    for chunk in text.split(","):
        vec = pres.identity()
        for i, e in parse_word(chunk, pres.names):
            vec = pres.multiply(vec, pres.generator(i, e))
        out.append((chunk.strip(), vec))
    return out


def _seeds(ga, box: int | None) -> list:
    pres = ga.pres
    if box is None:
        elems = [pres.generator(i) for i in range(pres.n)]
    else:
        ranges = [range(-box, box + 1) if o is None else range(min(o, 2 * box + 1)) for o in pres.orders]
        elems = [()]
        for r in ranges:
            elems = [e + (a,) for e in elems for a in r]
    return [h for h in (_nontrivial_component(g, ga) for g in elems) if h is not None]


def run(sc: Scenario) -> Report:
    try:
        ga = build(sc)
    except PolycentralError as exc:
        raise PolycentralError(f"scenario {sc.name!r}: build failed: {exc}") from exc
    pres, alg = ga.pres, ga.algebra
    rep = Report(sc.name, sc.prime, sc.cutoff, sc.seed, _describe_group(sc, pres), _describe_schedule(ga),
                 ga.build_log())
    rep.caveat = (f"dimensions and classification are computed in degrees <= D={sc.cutoff} only "
                  f"and sampled checks are evidence, not proof")
    checks = sc.checks
    seed = checks.get("seed", sc.seed)

    def rng(name):
        return random.Random(f"{seed}:{name}")

    for name in CHECK_ORDER:
        if name == "classify":
            if checks.get("classify") is False or not ("classify" in checks or _wants_classify(checks)):
                continue
        elif name not in checks:
            continue
        n = checks.get(name)
        if name == "consistency":
            r = check_consistency(pres, n, seed=rng(name).randrange(2 ** 32), strict=False)
            rep.checks.append(CheckResult(name, r.ok, r.checked, r.message, _fmt_witness(r.witness)))
        elif name == "graded":
            r = check_graded_polynomial(alg, n, seed=rng(name).randrange(2 ** 32), strict=False)
            detail = r.message + ("" if r.domain_checked else " (domain law skipped: nilpotent power rule)")
            rep.checks.append(CheckResult(name, r.ok, r.checked, detail, _fmt_witness(r.witness),
                                          None if r.min_commutator_margin == INF else r.min_commutator_margin))
        elif name == "associativity":
            rep.checks.append(check_associativity(ga, n, rng(name)))
        elif name == "pseudovaluation":
            rep.checks.append(check_pseudovaluation(alg, n, rng(name)))
        elif name == "axioms":
            r = check_axioms(PSeriesSpec.from_algebra(ga), n, seed=rng(name).randrange(2 ** 32), strict=False)
            rep.checks.append(CheckResult(name, r.ok, r.checked, r.message, _fmt_witness(r.witness),
                                          None if r.commutator_margin == INF else r.commutator_margin))
        elif name == "theta_expansion":
            rep.checks.append(check_theta_expansion(ga, n, rng(name)))
        elif name == "routes":
            rep.checks.append(check_routes(ga, n, rng(name)))
        elif name == "component_law":
            if sc.group.builtin != "sec9_example2":
                raise ParseError(sc.lines[("checks", name)], "component_law only applies to sec9_example2")
            rows, ok, witness = component_law_table(ga, n)
            rep.tables["components of u^n v^-n - 1"] = [["n", "component", "expected"]] + rows
            rep.checks.append(CheckResult(name, ok, n, "components follow -n_1 t^(p^(k+1)) and (n+m) t"
                                          if ok else "component law violated", witness))
        elif name == "weight_table":
            _weight_check(rep, ga, sc)
        elif name == "classify":
            _classify_check(rep, ga, sc)
    return rep


def _fmt_witness(w):
    if w is None:
        return None
    return " ; ".join(str(x) for x in w) if isinstance(w, tuple) else str(w)


def _wants_classify(checks) -> bool:
    return any(k.startswith("expect_") and k != "expect_weights" for k in checks) or "classify_box" in checks


def _weight_check(rep: Report, ga, sc: Scenario) -> None:
    pres = ga.pres
    words = _words_from(sc.checks["weight_table"], pres)
    rows = [["element", "weight"]]
    got = []
    for label, g in words:
        w = ga.weight(g)
        got.append("inf" if w == INF else str(w))
        rows.append([pres.format(g), got[-1]])
    rep.tables["weights"] = rows
    if "expect_weights" in sc.checks:
        want = sc.checks["expect_weights"].split()
        ok = want == got
        rep.checks.append(CheckResult("weight_table", ok, len(words),
                                      f"weights {' '.join(got)}" + ("" if ok else f", expected {' '.join(want)}"),
                                      None if ok else "weights differ"))
    else:
        rep.checks.append(CheckResult("weight_table", True, len(words), f"weights {' '.join(got)}"))


def _classify_check(rep: Report, ga, sc: Scenario) -> None:
    checks = sc.checks
    seeds = _seeds(ga, checks.get("classify_box"))
    gb = generate_subalgebra(seeds, sc.cutoff, ga.algebra)
    cl = classify(gb)
    rep.dims = gb.dims()
    d = cl.to_dict()
    d["hirsch_number"] = ga.pres.hirsch_number()
    d["seeds"] = len(seeds)
    rep.classification = d
    problems = []
    for key, attr in (("expect_abelian", "abelian_up_to_D"), ("expect_exponent_p", "exponent_p_up_to_D"),
                      ("expect_free_abelian", "free_abelian_up_to_D")):
        if key in checks and checks[key] != d[attr]:
            problems.append(f"{attr}={d[attr]}, expected {checks[key]}")
    if "expect_rank" in checks and checks["expect_rank"] != cl.rank_estimate:
        problems.append(f"rank_estimate={cl.rank_estimate}, expected {checks['expect_rank']}")
    if "expect_dims" in checks:
        want = " ".join(checks["expect_dims"].split())
        got = " ".join(f"{k}:{v}" for k, v in rep.dims.items())
        if want != got:
            problems.append(f"dims {got}, expected {want}")
    rep.checks.append(CheckResult("classify", not problems, len(seeds),
                                  cl.summary() if not problems else "; ".join(problems),
                                  None if not problems else cl.summary()))
