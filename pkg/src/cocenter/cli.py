"""Command-line front end.

Every command writes JSON to stdout (or CSV with ``--csv``) and progress
messages to stderr.  Exit codes: 0 success, 2 configuration error,
3 unstable ball, 4 counterexample certificate emitted.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass, fields

from .affine import ROOT_DATUM_PRESETS, BasedRootDatum, ExtendedAffineWeylGroup, build_affine
from .conjugacy import (
    ConjugacyTable,
    Counterexample,
    GroupView,
    Parametrizer,
    UnstableBall,
    gp_path,
    is_elliptic_affine,
    parametrize_class,
    verify_gp,
    verify_param_bijection,
)
from .coxeter import PRESETS, CoxeterGroup, build_group
from .exactscalar import Field, FieldSpec, LaurentPoly, QQ, finite_field, make_field
from .hecke import CocenterReducer, HeckeAlgebra, NonClosedClass, verify_bl_matching

EXIT_OK, EXIT_CONFIG, EXIT_UNSTABLE, EXIT_COUNTEREXAMPLE = 0, 2, 3, 4

COMMANDS = ("classes", "minlen", "cocenter", "chartable", "ranktable", "verify")
SUITES = ("gp-finite", "gp-affine", "confluence", "bl-matching", "duality-finite", "param-bijection")


class ConfigError(ValueError):
    pass


@dataclass
class JobConfig:
    command: str
    preset: str | None = None
    datum: str | None = None
    ball: int | None = None
    field: str | None = None
    param: str | None = None
    seed: int = 0
    csv: bool = False
    out: str | None = None
    word: str | None = None
    expression: str | None = None
    suite: str | None = None
    maxlen: int | None = None
    all: bool = False
    phi: int | None = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if self.ball is not None and self.ball < 0:
            raise ConfigError("ball radius must be >= 0")
        if self.maxlen is not None and self.maxlen < 0:
            raise ConfigError("maxlen must be >= 0")
        if self.phi is not None and self.phi < 1:
            raise ConfigError("phi must be >= 1")
        if self.suite is not None and self.suite not in SUITES:
            raise ConfigError(f"unknown suite {self.suite!r}; choose from {', '.join(SUITES)}")
        if self.preset and self.preset not in PRESETS and self.preset not in ROOT_DATUM_PRESETS:
            raise ConfigError(f"unknown preset {self.preset!r}")

    @classmethod
    def from_mapping(cls, data: dict) -> "JobConfig":
        names = {f.name for f in fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        for key in ("ball", "seed", "maxlen", "phi"):
            if key in data and data[key] is not None and not isinstance(data[key], int):
                raise ConfigError(f"{key} must be an integer")
        return cls(**data)

    def to_json(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self) if getattr(self, f.name) not in (None, False)} | {
            "seed": self.seed
        }


def progress(msg: str) -> None:
    print(msg, file=sys.stderr, flush=True)


# ---------------------------------------------------------------------------
# groups, fields, parameters


def resolve_group(cfg: JobConfig):
    """A CoxeterGroup (finite preset) or an ExtendedAffineWeylGroup."""
    if cfg.datum:
        try:
            return build_affine(BasedRootDatum.from_file(cfg.datum))
        except (OSError, KeyError, ValueError) as exc:
            raise ConfigError(f"cannot read datum {cfg.datum}: {exc}") from exc
    if not cfg.preset:
        raise ConfigError("a --preset or --datum is required")
    if cfg.preset in PRESETS:
        return build_group(cfg.preset)
    return build_affine(cfg.preset)


def parse_field(text: str | None) -> Field:
    """Q, Q(zeta3), F3, F9, F3^2, or a JSON FieldSpec."""
    if text is None:
        return QQ
    t = text.strip().replace(" ", "")
    if t.startswith("{"):
        return make_field(FieldSpec.from_json(json.loads(t)))
    if t in ("Q", "QQ"):
        return QQ
    m = re.fullmatch(r"Q\(zeta_?(\d+)\)|cyclo(\d+)", t)
    if m:
        return make_field(FieldSpec(0, cyclotomic=int(m.group(1) or m.group(2))))
    m = re.fullmatch(r"F_?(\d+)(?:\^(\d+))?", t)
    if m:
        q, k = int(m.group(1)), int(m.group(2) or 1)
        for p in range(2, q + 1):
            if q % p == 0:
                e, r = 0, q
                while r % p == 0:
                    r //= p
                    e += 1
                if r != 1:
                    break
                return finite_field(p, e * k)
        raise ConfigError(f"{text!r} is not a prime power field")
    raise ConfigError(f"cannot parse field {text!r}")


_TOKEN = re.compile(r"\s*(\d+|[za]|[-+*/^()])")


def parse_scalar(text: str, F: Field):
    """Field element from an expression in integers and the generator (z or a)."""
    toks = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ConfigError(f"bad scalar {text!r}")
        toks.append(m.group(1))
        pos = m.end()
    toks.append(None)
    i = 0

    def peek():
        return toks[i]

    def take():
        nonlocal i
        i += 1
        return toks[i - 1]

    def atom():
        t = take()
        if t == "(":
            v = expr()
            if take() != ")":
                raise ConfigError(f"unbalanced parentheses in {text!r}")
            return v
        if t == "-":
            return -atom()
        if t in ("z", "a"):
            return F.gen()
        if t is not None and t.isdigit():
            return F(int(t))
        raise ConfigError(f"bad scalar {text!r}")

    def power():
        v = atom()
        if peek() == "^":
            take()
            sign = -1 if peek() == "-" else 1
            if sign < 0:
                take()
            v = v ** (sign * int(take()))
        return v

    def term():
        v = power()
        while peek() in ("*", "/"):
            op = take()
            w = power()
            v = v * w if op == "*" else v / w
        return v

    def expr():
        v = term()
        while peek() in ("+", "-"):
            op = take()
            w = term()
            v = v + w if op == "+" else v - w
        return v

    v = expr()
    if peek() is not None:
        raise ConfigError(f"trailing input in scalar {text!r}")
    return v


def parse_param(text: str | None, F: Field, variables) -> dict:
    """Assignment of q(s) values, e.g. ``q=5``, ``q_s0=1,q_s1=2`` or ``Q=z`` (Q = q^2)."""
    if not text:
        return {}
    out, squares = {}, {}
    for part in text.split(","):
        if "=" not in part:
            raise ConfigError(f"parameter assignment {part!r} lacks '='")
        k, v = (s.strip() for s in part.split("=", 1))
        if k.startswith("Q"):
            squares["q" + k[1:]] = parse_scalar(v, F)
        else:
            out[k] = parse_scalar(v, F)
    for k, Q in squares.items():
        out[k] = _square_root(Q, F)
    if set(out) == {"q"} and tuple(variables) != ("q",):
        out = {v: out["q"] for v in variables}
    missing = [v for v in variables if v not in out]
    if missing:
        raise ConfigError(f"no value for parameters {missing}")
    return out


def _square_root(Q, F: Field):
    from .polyfactor import roots

    r = roots([-Q, F.zero, F.one])
    if not r:
        raise ConfigError(f"{Q} has no square root in {F}; give q instead of Q")
    return r[0]


def hecke_algebra(group, cfg: JobConfig) -> HeckeAlgebra:
    generic = HeckeAlgebra(group)
    if not cfg.param:
        return generic
    F = parse_field(cfg.field)
    values = parse_param(cfg.param, F, generic.variables)
    return HeckeAlgebra(group, values, F)


def finite_parameters(group: CoxeterGroup, cfg: JobConfig, default_q: int = 5):
    """(field, Q per generator) for finite Hecke computations."""
    alg = HeckeAlgebra(group)
    F = parse_field(cfg.field)
    values = parse_param(cfg.param, F, alg.variables) if cfg.param else {v: F(default_q) for v in alg.variables}
    Q = [values[alg.variables[alg.var_of_generator[i]]] ** 2 for i in range(group.rank)]
    return F, Q


def _element(group, text: str):
    if isinstance(group, ExtendedAffineWeylGroup):
        return group.parse(text)
    return group.from_word(group.parse_word(text))


_TERM_SPLIT = re.compile(r"([+-])")


def parse_expression(text: str, algebra: HeckeAlgebra):
    """Sum of terms such as ``q^2*T[s1 s2]``, ``-3*T[s0]`` or ``q_s0^-1*T[e]``."""
    group = algebra.group
    pieces, depth, cur = [], 0, ""
    for ch in text:
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        if ch in "+-" and depth == 0 and cur.strip() and not cur.rstrip().endswith(("^", "*")):
            pieces.append(cur)
            cur = ch
        else:
            cur += ch
    if cur.strip():
        pieces.append(cur)
    total = algebra.zero_elem()
    for piece in pieces:
        piece = piece.strip()
        sign = 1
        if piece[0] in "+-":
            sign = -1 if piece[0] == "-" else 1
            piece = piece[1:].strip()
        m = re.fullmatch(r"(?:(.*)\*)?T\[([^\]]*)\]", piece)
        if not m:
            raise ConfigError(f"cannot parse term {piece!r}")
        coef = algebra.scalar(sign)
        if m.group(1):
            for factor in m.group(1).split("*"):
                coef = coef * _coefficient_factor(factor.strip(), algebra)
        try:
            x = _element(group, m.group(2))
        except (ValueError, KeyError) as exc:
            raise ConfigError(f"invalid word {m.group(2)!r}: {exc}") from exc
        total = total + algebra.T(x) * coef
    return total


def _coefficient_factor(text: str, algebra: HeckeAlgebra):
    if re.fullmatch(r"-?\d+", text):
        return algebra.scalar(int(text))
    m = re.fullmatch(r"(q\w*)(?:\^(-?\d+))?", text)
    if not m or m.group(1) not in algebra.variables:
        raise ConfigError(f"unknown coefficient factor {text!r}")
    k = int(m.group(2) or 1)
    if algebra.generic:
        return LaurentPoly.var(algebra.variables, m.group(1), k)
    return algebra.values[m.group(1)] ** k


# ---------------------------------------------------------------------------
# commands


def _ball(group, cfg: JobConfig, default: int = 6):
    if isinstance(group, ExtendedAffineWeylGroup):
        return cfg.ball if cfg.ball is not None else default
    return cfg.ball


def cmd_classes(cfg: JobConfig) -> dict:
    group = resolve_group(cfg)
    table = ConjugacyTable(group, _ball(group, cfg))
    view = table.view
    affine = view.affine
    param = Parametrizer(group) if affine else None
    rows = []
    for c in table.classes:
        row = {
            "index": c.index,
            "label": table.label(c),
            "min_length": c.min_length,
            "min_elements": sorted((view.fmt(x) for x in c.min_elements), key=lambda s: (len(s), s)),
            "members_in_ball": len(c.members_in_ball),
            "closed": c.closed,
        }
        if affine:
            row["invariant"] = {"kottwitz": list(c.kottwitz), "newton": [str(v) for v in c.newton]}
            if c.closed:
                J, _, x = parametrize_class(group, c, param)
                row["pair"] = {"J": [group.simple_labels[group.n_affine + j] for j in J], "C_rep": group.format(x)}
                row["elliptic"] = is_elliptic_affine(group, c, param)
            else:
                row["pair"] = None
                row["elliptic"] = None
        else:
            row["elliptic"] = group.fixed_space_trivial(c.representative)
        rows.append(row)
    return {"command": "classes", "group": _group_name(group, cfg), "ball": table.L, "classes": rows}


def _group_name(group, cfg: JobConfig) -> str:
    if cfg.preset:
        return cfg.preset
    if isinstance(group, ExtendedAffineWeylGroup):
        return group.datum.name or "datum"
    return "coxeter"


def cmd_minlen(cfg: JobConfig) -> tuple[dict, int]:
    group = resolve_group(cfg)
    view = GroupView(group)
    if cfg.all:
        L = _ball(group, cfg, 6)
        table = ConjugacyTable(group, L)
        report = verify_gp(table, cfg.maxlen)
        code = EXIT_OK if not report["failures"] else EXIT_COUNTEREXAMPLE
        return {"command": "minlen", "mode": "all", "group": _group_name(group, cfg), "ball": table.L, **report}, code
    if cfg.word is None:
        raise ConfigError("minlen needs a word (or --all)")
    try:
        w = _element(group, cfg.word)
    except (ValueError, KeyError) as exc:
        raise ConfigError(f"invalid word {cfg.word!r}: {exc}") from exc
    L = view.length(w) if view.affine else None
    if view.affine:
        L = max(L, cfg.ball or 0)
    table = ConjugacyTable(group, L)
    cls = table.class_of(w)
    try:
        path = gp_path(view, w, cls)
    except Counterexample as exc:
        return {"command": "minlen", **exc.certificate}, EXIT_COUNTEREXAMPLE
    return {"command": "minlen", "group": _group_name(group, cfg), "class": table.label(cls), **path.to_json(view)}, EXIT_OK


def cmd_cocenter(cfg: JobConfig) -> dict:
    group = resolve_group(cfg)
    if not cfg.expression:
        raise ConfigError("cocenter needs an expression such as 'T[s1 s2 s1]'")
    algebra = hecke_algebra(group, cfg)
    h = parse_expression(cfg.expression, algebra)
    L = None
    if isinstance(group, ExtendedAffineWeylGroup):
        L = max([group.length(x) for x in h.support()] + [cfg.ball or 0])
    table = ConjugacyTable(group, L)
    reduced = CocenterReducer(algebra, table).reduce(h)
    return {
        "command": "cocenter",
        "group": _group_name(group, cfg),
        "variables": list(algebra.variables),
        "expression": cfg.expression,
        "cocenter": reduced.to_json(),
    }


def cmd_chartable(cfg: JobConfig) -> dict:
    from .repmod import FiniteHeckeAlgebra, trace_pairing_matrix

    group = resolve_group(cfg)
    if not isinstance(group, CoxeterGroup):
        raise ConfigError("chartable needs a finite Coxeter preset")
    F, Q = finite_parameters(group, cfg)
    algebra = FiniteHeckeAlgebra(group, F, tuple(Q), name=cfg.preset or "")
    tp = trace_pairing_matrix(algebra, cfg.seed)
    return {
        "command": "chartable",
        "group": _group_name(group, cfg),
        "Q": [x.to_json() for x in Q],
        "classes": len(tp.rows),
        "simples": len(tp.cols),
        "well_defined": tp.well_defined(),
        **tp.to_json(),
    }


def cmd_ranktable(cfg: JobConfig) -> dict:
    from .repmod import rank_table

    group = resolve_group(cfg)
    if not isinstance(group, ExtendedAffineWeylGroup):
        raise ConfigError("ranktable needs a root datum preset")
    if not group.omega_finite:
        raise ConfigError("ranktable needs a semisimple root datum")
    progress(f"ranktable: computing 4 cells for {_group_name(group, cfg)}")
    table = rank_table(group, n=cfg.phi, seed=cfg.seed, name=_group_name(group, cfg))
    return {"command": "ranktable", **table.to_json(), "_csv": table.to_csv()}


# -- verification suites -------------------------------------------------------

SUITE_DEFAULTS = {
    "gp-finite": ["A2", "B2", "G2", "A1xA1", "A3", "B3"],
    "gp-affine": ["SL2", "PGL2", "SL3"],
    "confluence": ["A2", "B2", "SL2"],
    "bl-matching": ["SL2", "PGL2", "SL3", "PGL3"],
    "duality-finite": ["A1", "A2", "B2", "A1xA1"],
    "param-bijection": ["SL2", "PGL2"],
}


def _suite_gp(name: str, cfg: JobConfig) -> dict:
    group = build_group(name) if name in PRESETS else build_affine(name)
    L = None if name in PRESETS else (cfg.ball if cfg.ball is not None else 10)
    table = ConjugacyTable(group, L)
    report = verify_gp(table, cfg.maxlen)
    return {"group": name, "ball": table.L, "pass": not report["failures"], **report}


def _suite_confluence(name: str, cfg: JobConfig) -> dict:
    maxlen = cfg.maxlen if cfg.maxlen is not None else 6
    group = build_group(name) if name in PRESETS else build_affine(name)
    L = None if name in PRESETS else (cfg.ball if cfg.ball is not None else 10)
    table = ConjugacyTable(group, L)
    reducer = CocenterReducer(HeckeAlgebra(group), table)
    view = table.view
    checked, bad = 0, []
    for c in table.closed_classes():
        for w in sorted(c.members_in_ball, key=view.key):
            if view.length(w) > maxlen:
                continue
            checked += 1
            ok, results = reducer.confluence(w)
            if not ok:
                bad.append({"element": view.fmt(w), "results": {lab: r.to_json() for lab, r in results}})
    return {"group": name, "ball": table.L, "maxlen": maxlen, "checked": checked, "failures": bad, "pass": not bad}


def _suite_bl(name: str, cfg: JobConfig) -> dict:
    G = build_affine(name)
    L = cfg.ball if cfg.ball is not None else (8 if G.datum.semisimple_rank == 1 else 6)
    table = ConjugacyTable(G, L)
    algebra = HeckeAlgebra(G)
    param = Parametrizer(G)
    results = [verify_bl_matching(algebra, c, table, param) for c in table.closed_classes()]
    failures = [r for r in results if not r["equal"]]
    return {"group": name, "ball": L, "checked": len(results), "failures": failures, "pass": not failures}


def _suite_duality(name: str, cfg: JobConfig) -> dict:
    from .repmod import FiniteHeckeAlgebra, trace_pairing_matrix

    group = build_group(name)
    sub = JobConfig("chartable", preset=name, field=cfg.field, param=cfg.param, seed=cfg.seed)
    F, Q = finite_parameters(group, sub)
    tp = trace_pairing_matrix(FiniteHeckeAlgebra(group, F, tuple(Q)), cfg.seed)
    d = tp.determinant()
    ok = tp.square and tp.invertible and tp.well_defined()
    return {
        "group": name,
        "classes": len(tp.rows),
        "simples": len(tp.cols),
        "determinant": None if d is None else d.to_json(),
        "pass": ok,
    }


def _suite_param(name: str, cfg: JobConfig) -> dict:
    G = build_affine(name)
    L = cfg.ball if cfg.ball is not None else 8
    rep = verify_param_bijection(G, L)
    return {"group": name, "ball": L, "pass": rep["ok"], **rep}


SUITE_RUNNERS = {
    "gp-finite": _suite_gp,
    "gp-affine": _suite_gp,
    "confluence": _suite_confluence,
    "bl-matching": _suite_bl,
    "duality-finite": _suite_duality,
    "param-bijection": _suite_param,
}


def cmd_verify(cfg: JobConfig) -> tuple[dict, int]:
    if not cfg.suite:
        raise ConfigError(f"verify needs a suite: {', '.join(SUITES)}")
    names = [cfg.preset] if cfg.preset else SUITE_DEFAULTS[cfg.suite]
    items = []
    for name in names:
        progress(f"verify {cfg.suite}: {name}")
        items.append(SUITE_RUNNERS[cfg.suite](name, cfg))
    ok = all(it["pass"] for it in items)
    return {"command": "verify", "suite": cfg.suite, "pass": ok, "items": items}, EXIT_OK if ok else EXIT_COUNTEREXAMPLE


# ---------------------------------------------------------------------------
# output and entry point


def _csv_rows(result: dict) -> str:
    import csv
    import io

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    cmd = result.get("command")
    if cmd == "classes":
        writer.writerow(["index", "label", "min_length", "min_elements", "closed", "elliptic", "pair"])
        for r in result["classes"]:
            pair = r.get("pair")
            pair_txt = "" if not pair else f"J={{{','.join(pair['J'])}}};C={pair['C_rep']}"
            writer.writerow([r["index"], r["label"], r["min_length"], " | ".join(r["min_elements"]),
                             r["closed"], r["elliptic"], pair_txt])
    elif cmd == "chartable":
        writer.writerow(["class"] + result["cols"])
        for lab, row in zip(result["rows"], result["entries"]):
            writer.writerow([lab] + [json.dumps(x) for x in row])
        writer.writerow(["determinant", json.dumps(result["determinant"])])
        writer.writerow(["invertible", result["invertible"]])
    elif cmd == "ranktable":
        return result["_csv"]
    else:
        raise ConfigError(f"--csv is not available for {cmd}")
    return buf.getvalue()


def run(cfg: JobConfig) -> tuple[str, int]:
    """Execute a job; return (stdout text, exit code)."""
    code = EXIT_OK
    if cfg.command == "classes":
        result = cmd_classes(cfg)
    elif cfg.command == "minlen":
        result, code = cmd_minlen(cfg)
    elif cfg.command == "cocenter":
        result = cmd_cocenter(cfg)
    elif cfg.command == "chartable":
        result = cmd_chartable(cfg)
    elif cfg.command == "ranktable":
        result = cmd_ranktable(cfg)
    else:
        result, code = cmd_verify(cfg)
    result["config"] = cfg.to_json()
    if cfg.csv:
        text = _csv_rows(result)
    else:
        result.pop("_csv", None)
        text = json.dumps(result, indent=2) + "\n"
    return text, code


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cocenter", description="Cocenters of finite and affine Hecke algebras.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("target", nargs="?", help="word (minlen), expression (cocenter) or suite name (verify)")
    p.add_argument("--config", help="JSON file with the same keys as the flags")
    p.add_argument("--preset")
    p.add_argument("--datum", help="JSON file describing a based root datum")
    p.add_argument("--ball", type=int)
    p.add_argument("--field", help="Q, Q(zeta3), F3, F9, ...")
    p.add_argument("--param", help="parameter assignment, e.g. q=5 or Q=z")
    p.add_argument("--seed", type=int)
    p.add_argument("--maxlen", type=int)
    p.add_argument("--phi", type=int, help="ranktable: index n of the Phi_n(q) row condition")
    p.add_argument("--all", action="store_true", help="minlen: check every element")
    p.add_argument("--csv", action="store_true")
    p.add_argument("--out")
    return p


def config_from_args(args: argparse.Namespace) -> JobConfig:
    data: dict = {}
    if args.config:
        try:
            with open(args.config) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a JSON object")
    data["command"] = args.command
    for key in ("preset", "datum", "ball", "field", "param", "seed", "maxlen", "phi", "out"):
        val = getattr(args, key)
        if val is not None:
            data[key] = val
    for key in ("all", "csv"):
        if getattr(args, key):
            data[key] = True
    if args.target is not None:
        slot = {"minlen": "word", "cocenter": "expression", "verify": "suite"}.get(args.command)
        if slot is None:
            raise ConfigError(f"{args.command} takes no positional argument")
        data[slot] = args.target
    return JobConfig.from_mapping(data)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
        text, code = run(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (UnstableBall, NonClosedClass) as exc:
        print(f"UNSTABLE: {exc}", file=sys.stderr)
        return EXIT_UNSTABLE
    except Counterexample as exc:
        print(json.dumps(exc.certificate, indent=2))
        return EXIT_COUNTEREXAMPLE
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
