"""Command-line front end.

Algebra files are line-oriented::

    [algebra]
    name = heisenberg3

    [generators]
    x 0
    y 0

    [circ]
    x x -> x - y
    y x -> y

    [bracket]
    x y -> z

    [metadata]
    note = free text

Coefficients are integers or p/q.  A bracket entry whose mirror is not
listed is completed by super anti-commutativity.  Exit codes: 0 all checks
passed, 1 a violation was found, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Sequence

from . import __version__
from .confalg import check_lie_conformal, quadratic_bracket, regular_rep
from .confrep import FfrError, action_matrices, build_ffr, check_faithful, check_gc_jacobi, check_module
from .envelope import (
    Truncation,
    TruncationOverflow,
    build_novikov_envelope,
    build_pd_envelope,
    check_free_bracket_lemmas,
    speciality_kernel,
)
from .gdcore import (
    AxiomError,
    AxiomReport,
    SuperAlgebra,
    SuperBasis,
    check_gd,
    check_novikov,
    commutator_gd,
    format_vector,
    loop_oracle,
    make_tensor,
)

SECTIONS = ("algebra", "generators", "circ", "bracket", "metadata")


class AlgebraSyntaxError(ValueError):
    def __init__(self, lineno: int, msg: str):
        super().__init__(f"line {lineno}: {msg}")
        self.lineno = lineno


@dataclass
class AlgebraFile:
    name: str
    algebra: SuperAlgebra
    metadata: dict = field(default_factory=dict)


_TERM = re.compile(r"\s*([+-])?\s*(?:(\d+(?:/\d+)?)\s*\*\s*)?([A-Za-z_][\w']*)\s*|\s*([+-])?\s*(0)\s*")


def _parse_combination(text: str, names: dict, lineno: int) -> dict[int, Fraction]:
    out: dict[int, Fraction] = {}
    pos = 0
    text = text.strip()
    first = True
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos:
            raise AlgebraSyntaxError(lineno, f"cannot parse {text[pos:]!r}")
        sign = m.group(1) or m.group(4)
        if sign is None and not first:
            raise AlgebraSyntaxError(lineno, f"missing + or - before {text[pos:]!r}")
        first = False
        pos = m.end()
        if m.group(5) is not None:
            continue
        label = m.group(3)
        if label not in names:
            raise AlgebraSyntaxError(lineno, f"undeclared label {label!r}")
        c = Fraction(m.group(2)) if m.group(2) else Fraction(1)
        if sign == "-":
            c = -c
        k = names[label]
        out[k] = out.get(k, 0) + c
    return {k: v for k, v in out.items() if v}


def read_algebra(text: str) -> AlgebraFile:
    """Parse the structured-text algebra format."""
    section = None
    name = ""
    gens: list[tuple[str, int]] = []
    raw = {"circ": [], "bracket": []}
    has_bracket = False
    metadata: dict = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        m = re.fullmatch(r"\[(\w+)\]", line)
        if m:
            section = m.group(1)
            if section not in SECTIONS:
                raise AlgebraSyntaxError(lineno, f"unknown section [{section}]")
            has_bracket = has_bracket or section == "bracket"
            continue
        if section is None:
            raise AlgebraSyntaxError(lineno, "content before the first section")
        if section in ("algebra", "metadata"):
            if "=" not in line:
                raise AlgebraSyntaxError(lineno, "expected key = value")
            key, value = (s.strip() for s in line.split("=", 1))
            if section == "algebra":
                if key != "name":
                    raise AlgebraSyntaxError(lineno, f"unknown key {key!r}")
                name = value
            else:
                metadata[key] = value
        elif section == "generators":
            parts = line.split()
            if len(parts) != 2 or parts[1] not in ("0", "1"):
                raise AlgebraSyntaxError(lineno, "expected 'label parity' with parity 0 or 1")
            if not re.fullmatch(r"[A-Za-z_][\w']*", parts[0]):
                raise AlgebraSyntaxError(lineno, f"bad label {parts[0]!r}")
            if any(parts[0] == g for g, _ in gens):
                raise AlgebraSyntaxError(lineno, f"duplicate label {parts[0]!r}")
            gens.append((parts[0], int(parts[1])))
        else:
            m = re.fullmatch(r"(\S+)\s+(\S+)\s*->\s*(.+)", line)
            if not m:
                raise AlgebraSyntaxError(lineno, "expected 'a b -> combination'")
            raw[section].append((lineno, m.group(1), m.group(2), m.group(3)))

    ordered = [g for g in gens if g[1] == 0] + [g for g in gens if g[1] == 1]
    names = {g: i for i, (g, _) in enumerate(ordered)}
    parity = tuple(p for _, p in ordered)
    basis = SuperBasis(tuple(g for g, _ in ordered), parity)

    def build(entries, complete_mirror: bool):
        table: dict = {}
        for lineno, a, b, rhs in entries:
            for lab in (a, b):
                if lab not in names:
                    raise AlgebraSyntaxError(lineno, f"undeclared label {lab!r}")
            i, j = names[a], names[b]
            if (i, j) in table:
                raise AlgebraSyntaxError(lineno, f"entry {a} {b} given twice")
            vec = _parse_combination(rhs, names, lineno)
            want = (parity[i] + parity[j]) % 2
            for k in vec:
                if parity[k] != want:
                    raise AlgebraSyntaxError(
                        lineno, f"parity violation: {a} {b} has a component on {basis.names[k]}"
                    )
            table[(i, j)] = vec
        if complete_mirror:
            for (i, j), vec in list(table.items()):
                if (j, i) not in table:
                    s = -1 if parity[i] and parity[j] else 1
                    table[(j, i)] = {k: -s * c for k, c in vec.items()}
        return make_tensor(len(ordered), table)

    circ = build(raw["circ"], False)
    bracket = build(raw["bracket"], True) if has_bracket else None
    return AlgebraFile(name, SuperAlgebra(basis, circ, bracket, name), metadata)


def parse_algebra(path) -> SuperAlgebra:
    return read_algebra(Path(path).read_text()).algebra


def print_algebra(A: SuperAlgebra, metadata: dict | None = None) -> str:
    """Inverse of read_algebra (all nonzero entries written out)."""
    names = A.basis.names
    out = ["[algebra]", f"name = {A.name}", "", "[generators]"]
    out += [f"{g} {p}" for g, p in zip(names, A.basis.parity)]
    for what in ("circ", "bracket"):
        t = getattr(A, what)
        if t is None:
            continue
        out += ["", f"[{what}]"]
        for i in range(A.dim):
            for j in range(A.dim):
                if any(t[i][j]):
                    out.append(f"{names[i]} {names[j]} -> {format_vector(names, t[i][j])}")
    if metadata:
        out += ["", "[metadata]"] + [f"{k} = {v}" for k, v in sorted(metadata.items())]
    return "\n".join(out) + "\n"


def fixture_names() -> list[str]:
    root = resources.files("gdconformal") / "fixtures"
    return sorted(p.name[:-4] for p in root.iterdir() if p.name.endswith(".alg"))


def load_algebra(spec: str) -> AlgebraFile:
    """A fixture name or a path."""
    path = Path(spec)
    if path.exists():
        return read_algebra(path.read_text())
    res = resources.files("gdconformal") / "fixtures" / f"{spec}.alg"
    if res.is_file():
        return read_algebra(res.read_text())
    raise FileNotFoundError(f"no algebra file or fixture named {spec!r}")


# ---------------------------------------------------------------------------
# reports


def _residual(res, names) -> str:
    if isinstance(res, tuple):
        return format_vector(names, res)
    return str(res)


def verdict(check: str, rep: AxiomReport, names: Sequence[str] = ()) -> dict:
    return {
        "check": check,
        "passed": rep.passed,
        "checked": rep.checked,
        "skipped": rep.skipped,
        "violations": [
            {"axiom": v.axiom, "witness": list(v.witness), "residual": _residual(v.residual, names)}
            for v in rep.violations
        ],
    }


def simple_verdict(check: str, passed: bool, **extra) -> dict:
    out = {"check": check, "passed": bool(passed), "checked": 1, "skipped": 0, "violations": []}
    out.update(extra)
    return out


def _algebra(args) -> SuperAlgebra:
    A = load_algebra(args.algebra).algebra
    if getattr(args, "commutator", False):
        A = commutator_gd(A)
    return A


def _with_bracket(A: SuperAlgebra) -> SuperAlgebra:
    return A if A.bracket is not None else A.with_bracket(make_tensor(A.dim))


def _trunc(args, R: int | None = None) -> Truncation:
    return Truncation(args.diff_order, args.degree if R is None else R, args.depth)


def _frac(v) -> str:
    return str(Fraction(v))


def cmd_check_gd(args, report):
    A = _with_bracket(_algebra(args))
    report["verdicts"].append(verdict("check_gd", check_gd(A), A.basis.names))
    return A


def cmd_check_novikov(args, report):
    A = _algebra(args)
    report["verdicts"].append(verdict("check_novikov", check_novikov(A), A.basis.names))


def cmd_loop_oracle(args, report):
    A = _with_bracket(_algebra(args))
    report["inputs"]["cap"] = args.cap
    report["verdicts"].append(verdict("loop_oracle", loop_oracle(A, args.cap)))


def _quadratic(args, report):
    A = _with_bracket(_algebra(args))
    rep = check_gd(A)
    report["verdicts"].append(verdict("check_gd", rep, A.basis.names))
    if not rep.passed:
        return A, None
    T = quadratic_bracket(A, check=False)
    report["table"] = T.lines()
    return A, T


def cmd_build_conformal(args, report):
    _quadratic(args, report)


def cmd_check_conformal(args, report):
    A, T = _quadratic(args, report)
    if T is not None:
        report["verdicts"].append(verdict("check_lie_conformal", check_lie_conformal(T)))


def cmd_check_lemmas(args, report):
    parities = tuple(int(p) for p in args.parities.split(","))
    report["inputs"]["order_cap"] = args.order_cap
    report["inputs"]["parities"] = list(parities)
    report["verdicts"].append(verdict("check_free_bracket_lemmas", check_free_bracket_lemmas(args.order_cap, parities)))


def _envelope_dims(A, args, R):
    T = _trunc(args, R)
    if args.mode == "novikov":
        env = build_novikov_envelope(A, T)
        return env, {"U_-1": env.component(-1).dim, "U_0": env.component(0).dim}
    env = build_pd_envelope(A, T)
    return env, {"U_-1": env.dims[-1], "U_0": env.dims[0]}


def cmd_build_envelope(args, report):
    A = _algebra(args)
    env, dims = _envelope_dims(A, args, args.degree)
    report["dimensions"] = {f"R={args.degree}": dims}
    if args.mode == "novikov":
        for name, ok in sorted(env.checks.items()):
            report["verdicts"].append(simple_verdict(f"reduces:{name}", ok))
    else:
        report["u0_representatives"] = [env.alg.format_mono(m) for m in env.u0_reps]
        report["verdicts"].append(simple_verdict("u_minus1_dimension", dims["U_-1"] == A.dim, dimension=dims["U_-1"]))
    if args.stabilize:
        _, dims2 = _envelope_dims(A, args, args.degree + 1)
        report["dimensions"][f"R={args.degree + 1}"] = dims2
        report["verdicts"].append(simple_verdict("stabilized_u_minus1", dims2["U_-1"] == dims["U_-1"]))


def _speciality(A, T):
    res = speciality_kernel(A, T)
    comp = res.component
    return res, {"U_-1": comp.dim, "monomials": len(comp.basis), "relations": comp.relations, "dropped": comp.dropped}


def cmd_speciality(args, report):
    A = _with_bracket(_algebra(args))
    res, info = _speciality(A, _trunc(args))
    report["dimensions"] = {f"R={args.degree}": info}
    names = A.basis.names
    kernel = [format_vector(names, v) for v in res.kernel]
    report["kernel"] = kernel
    if res.exceptional:
        report["certificate"] = [f"{k} in I_V" for k in kernel]
    report["verdicts"].append(
        simple_verdict("speciality_kernel_zero", not res.exceptional, kernel_dimension=len(kernel))
    )
    if args.stabilize:
        res2, info2 = _speciality(A, _trunc(args, args.degree + 1))
        report["dimensions"][f"R={args.degree + 1}"] = info2
        report["verdicts"].append(
            simple_verdict("stabilized_kernel", len(res2.kernel) == len(res.kernel), kernel_dimension=len(res2.kernel))
        )


def cmd_build_ffr(args, report):
    A = _algebra(args)
    ffr = build_ffr(A, _trunc(args))
    report["dimensions"] = {f"R={args.degree}": dict(ffr.dims)}
    report["module_basis"] = list(ffr.action.right.names)
    report["action"] = ffr.action.lines()
    _faithfulness(report, ffr.faithfulness, A.basis.names)
    bound = A.dim ** 2
    report["verdicts"].append(verdict("check_module", ffr.module_report))
    report["verdicts"].append(simple_verdict("check_faithful", ffr.faithfulness.faithful))
    report["verdicts"].append(simple_verdict("u0q_bound", len(ffr.u0q_basis) <= bound, bound=bound))
    if args.matrices:
        report["matrices"] = action_matrices(ffr.action)


def _faithfulness(report, f, names) -> None:
    if f.faithful:
        report["faithfulness_witness"] = f.witness
    else:
        report["annihilated"] = f.combination(names)


def cmd_check_repr(args, report):
    A, T = _quadratic(args, report)
    if T is None:
        return
    rho = regular_rep(T)
    report["verdicts"].append(verdict("check_module(regular)", check_module(T, rho)))
    f = check_faithful(T, rho)
    _faithfulness(report, f, T.left.names)
    report["verdicts"].append(simple_verdict("check_faithful(regular)", f.faithful))


def cmd_check_gc(args, report):
    report["inputs"].update({"n": args.n, "m": args.m, "cap": args.cap})
    report["verdicts"].append(verdict("check_gc_jacobi", check_gc_jacobi(args.n, args.m, args.cap)))


COMMANDS = {
    "check-gd": (cmd_check_gd, "GD axioms: Novikov, Lie, compatibility"),
    "check-novikov": (cmd_check_novikov, "Novikov axioms"),
    "build-conformal": (cmd_build_conformal, "print the quadratic lambda-bracket"),
    "check-conformal": (cmd_check_conformal, "skew-symmetry and Jacobi of the quadratic lambda-bracket"),
    "loop-oracle": (cmd_loop_oracle, "Lie axioms of the loop algebra V[t, 1/t] up to a degree cap"),
    "check-lemmas": (cmd_check_lemmas, "symbolic lemmas for the free-algebra bracket"),
    "build-envelope": (cmd_build_envelope, "truncated U(V) or P_d(V) and its dimensions"),
    "speciality": (cmd_speciality, "kernel of V -> P_d(V) in a window (nonzero: exceptional)"),
    "build-ffr": (cmd_build_ffr, "finite faithful representation of L(V)"),
    "check-repr": (cmd_check_repr, "regular representation of L(V): module axioms and faithfulness"),
    "check-gc": (cmd_check_gc, "skew-symmetry and Jacobi of gc_{n|m} on matrix units"),
}

NEEDS_ALGEBRA = {c for c in COMMANDS if c not in ("check-lemmas", "check-gc")}
TRUNCATED = {"build-envelope", "speciality", "build-ffr"}


def _positive(minimum: int):
    def conv(text: str) -> int:
        v = int(text)
        if v < minimum:
            raise argparse.ArgumentTypeError(f"must be at least {minimum}")
        return v

    return conv


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gdconformal", description="GD-algebras, conformal algebras and their envelopes")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        if name in NEEDS_ALGEBRA:
            p.add_argument("--algebra", required=True, help="fixture name or path to an algebra file")
            p.add_argument("--commutator", action="store_true", help="replace the bracket by the super-commutator of o")
        if name in TRUNCATED:
            p.add_argument("--diff-order", type=_positive(1), default=2, help="max derivative order D")
            p.add_argument("--degree", type=_positive(1), default=4, help="max degree R")
            p.add_argument("--depth", type=_positive(0), default=2, help="max bracket depth B")
            p.add_argument("--stabilize", action="store_true", help="rerun at degree R+1 and compare")
        if name == "build-envelope":
            p.add_argument("--mode", choices=("pd", "novikov"), default="pd")
        if name == "build-ffr":
            p.add_argument("--matrices", action="store_true", help="include the action as matrices")
        if name == "loop-oracle":
            p.add_argument("--cap", type=_positive(1), default=3)
        if name == "check-lemmas":
            p.add_argument("--order-cap", type=_positive(1), default=4)
            p.add_argument("--parities", default="0,0,0", help="parities of the three abstract generators")
        if name == "check-gc":
            p.add_argument("--n", type=_positive(0), default=1)
            p.add_argument("--m", type=_positive(0), default=0)
            p.add_argument("--cap", type=_positive(0), default=2)
        p.add_argument("--report", help="write the JSON report to this file")
        p.add_argument("--timing", action="store_true", help="include wall-clock time in the report")
    return parser


def parse_args(argv: Sequence[str]) -> argparse.Namespace:
    """Parse and validate flags; usage errors raise SystemExit(2)."""
    parser = build_parser()
    args = parser.parse_args(list(argv))
    if args.command == "check-lemmas" and not re.fullmatch(r"[01],[01],[01]", args.parities):
        parser.error("--parities must look like 0,1,0")
    if args.command == "check-gc" and args.n + args.m == 0:
        parser.error("n + m must be positive")
    return args


def run(argv: Sequence[str]) -> tuple[int, dict]:
    """Run one command; returns (exit code, report)."""
    return execute(parse_args(argv))


def execute(args: argparse.Namespace) -> tuple[int, dict]:
    report: dict = {"command": args.command, "inputs": {}, "verdicts": []}
    if args.command in NEEDS_ALGEBRA:
        report["inputs"]["algebra"] = args.algebra
        report["inputs"]["commutator"] = args.commutator
    if args.command in TRUNCATED:
        report["truncation"] = {"D": args.diff_order, "R": args.degree, "B": args.depth}
    start = time.perf_counter()
    try:
        COMMANDS[args.command][0](args, report)
    except (AxiomError, FfrError, TruncationOverflow) as exc:
        report["verdicts"].append(simple_verdict("prerequisites", False, error=str(exc)))
    if args.timing:
        report["wall_clock_seconds"] = round(time.perf_counter() - start, 3)
    code = 0 if all(v["passed"] for v in report["verdicts"]) else 1
    report["exit_code"] = code
    return code, report


def render(report: dict) -> str:
    lines = [f"command: {report['command']}"]
    for key in ("inputs", "truncation"):
        if report.get(key):
            lines.append(f"{key}: " + ", ".join(f"{k}={v}" for k, v in sorted(report[key].items())))
    for row in report.get("table", []):
        lines.append(f"  {row}")
    for win, dims in sorted(report.get("dimensions", {}).items()):
        lines.append(f"dimensions at {win}: " + ", ".join(f"{k}={v}" for k, v in sorted(dims.items())))
    if "kernel" in report:
        lines.append("kernel: " + (", ".join(report["kernel"]) or "0"))
    for c in report.get("certificate", []):
        lines.append(f"certificate: {c}")
    if "module_basis" in report:
        lines.append("module basis: " + ", ".join(report["module_basis"]))
        for row in report["action"]:
            lines.append(f"  {row}")
    if report.get("faithfulness_witness"):
        lines.append(f"faithfulness witness: column {report['faithfulness_witness']}")
    if report.get("annihilated"):
        lines.append(f"acts as zero: {report['annihilated']}")
    for v in report["verdicts"]:
        status = "PASS" if v["passed"] else "FAIL"
        lines.append(f"{status} {v['check']} (checked {v['checked']}, skipped {v['skipped']})")
        if v.get("error"):
            lines.append(f"  error: {v['error']}")
        for viol in v["violations"][:5]:
            lines.append(f"  {viol['axiom']} at ({', '.join(map(str, viol['witness']))}): {viol['residual']}")
        if len(v["violations"]) > 5:
            lines.append(f"  ... {len(v['violations']) - 5} more")
    if "wall_clock_seconds" in report:
        lines.append(f"time: {report['wall_clock_seconds']} s")
    return "\n".join(lines)


def dump_report(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def main(argv: Sequence[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        args = parse_args(argv)
        code, report = execute(args)
    except SystemExit as exc:
        return int(exc.code or 0)
    except (AlgebraSyntaxError, FileNotFoundError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(render(report))
    if args.report:
        Path(args.report).write_text(dump_report(report))
    return code


if __name__ == "__main__":
    sys.exit(main())
