"""Command-line front end.

    pbwdeform check klein.spec
    pbwdeform reduce klein.spec "y*x"
    pbwdeform multiply sl2.spec "e" "h" --graded-t
    pbwdeform solve-linear trivial2.spec --json
    pbwdeform solve-constant sl2.spec
    pbwdeform cohomology klein.spec --p 2 --q 1

Exit codes: 0 pass, 1 condition failure, 2 input error, 3 the condition
checker and the overlap oracle disagree.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from .cohomology import representative_space
from .expr import ParseError
from .group import DEFAULT_MAX_ORDER, GroupOrderError, SingularGeneratorError
from .kappa import CONDITIONS, LieOrbifoldPreconditionError, check_conditions, check_lie_orbifold
from .problem import Problem, SpecError, format_kappa_summary, kappa_entries, load_problem
from .rewrite import FreeElement, PbwElement, Rewriter, overlap_check, parse_free
from .scalar import FieldOrderError, format_scalar
from .solver import InadmissibleLinearPart, solve_constant_part, solve_linear_part

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INPUT = 2
EXIT_DISAGREE = 3


class InputError(Exception):
    pass


def _word_text(word: Sequence[int], problem: Problem) -> str:
    names = problem.basis_names
    G = problem.group
    return "*".join(G.names[~t] if t < 0 else names[t] for t in word)


def _residue_text(problem: Problem, residual) -> str:
    G = problem.group
    g = residual.g
    if residual.condition == "i":
        g = G.conj(G.inverses[residual.h], g)
    terms = {(e, g, 0): c for e, c in residual.value.items()}
    return PbwElement(problem.ctx, G.dim, terms).format(problem.basis_names, G.names)


def check_report(problem: Problem) -> tuple[dict, int]:
    G = problem.group
    report = check_conditions(problem.kappa)
    verdict = overlap_check(problem.kappa)
    conditions = {}
    for name in CONDITIONS:
        r = report[name]
        witness = None
        if r.witness is not None:
            w = r.witness
            witness = {
                "g": G.names[w.g],
                "indices": [problem.basis_names[i] for i in w.indices],
                "h": G.names[w.h] if w.h is not None else None,
                "residue": _residue_text(problem, w),
            }
        conditions[name] = {"pass": r.passed, "failures": r.failures, "witness": witness}
    overlap_witness = None
    if verdict.witness is not None:
        amb = verdict.witness
        fmt = lambda x: x.format(problem.basis_names, G.names)  # noqa: E731
        overlap_witness = {
            "word": _word_text(amb.word, problem),
            "left": fmt(amb.left),
            "right": fmt(amb.right),
            "residue": fmt(amb.residue),
        }
    lie = None
    lie_conditions = None
    try:
        lie_report = check_lie_orbifold(problem.kappa)
        lie = lie_report.passed
        lie_conditions = {k: {"pass": ok, "witness": w} for k, (ok, w) in lie_report.results.items()}
    except LieOrbifoldPreconditionError:
        pass
    agreement = report.passed == verdict.confluent
    data = {
        "pass": report.passed,
        "conditions": conditions,
        "overlap": {
            "confluent": verdict.confluent,
            "ambiguities_checked": verdict.checked,
            "failures": len(verdict.failures),
            "witness": overlap_witness,
        },
        "agreement": agreement,
        "lie_orbifold": lie,
        "lie_orbifold_conditions": lie_conditions,
    }
    code = EXIT_DISAGREE if not agreement else (EXIT_OK if report.passed else EXIT_FAIL)
    return data, code


def _print_check(problem: Problem, data: dict) -> None:
    G = problem.group
    field = "Q" if problem.ctx.order <= 2 else f"Q(E({problem.ctx.order}))"
    print(f"group of order {G.order} acting on a {G.dim}-dimensional space over {field}")
    for line in format_kappa_summary(problem.kappa, problem.basis_names):
        print(f"  {line}")
    for name in CONDITIONS:
        c = data["conditions"][name]
        label = f"condition ({name})"
        if c["pass"]:
            print(f"{label:<18}pass")
        else:
            w = c["witness"]
            where = f"g = {w['g']}, basis ({', '.join(w['indices'])})"
            if w["h"] is not None:
                where += f", h = {w['h']}"
            print(f"{label:<18}FAIL  {where}: residue {w['residue']}")
    ov = data["overlap"]
    if ov["confluent"]:
        print(f"{'overlap oracle':<18}confluent ({ov['ambiguities_checked']} ambiguities)")
    else:
        w = ov["witness"]
        print(f"{'overlap oracle':<18}NOT confluent: {w['word']} resolves to residue {w['residue']}")
    print(f"{'agreement':<18}{'yes' if data['agreement'] else 'NO'}")
    if data["lie_orbifold"] is not None:
        print(f"{'lie orbifold':<18}{'pass' if data['lie_orbifold'] else 'FAIL'}")
        for k, v in data["lie_orbifold_conditions"].items():
            if not v["pass"]:
                print(f"  {k}: {v['witness']}")


def _symbols(problem: Problem) -> dict:
    ctx = problem.ctx
    syms = {"t": FreeElement(ctx, {((), 1): 1})}
    for name, g in problem.symbol_aliases().items():
        syms[name] = FreeElement.word(ctx, (~g,))
    for i, name in enumerate(problem.basis_names):
        syms[name] = FreeElement.word(ctx, (i,))
    return syms


def _parse_expression(problem: Problem, text: str) -> FreeElement:
    try:
        return parse_free(text, problem.ctx, _symbols(problem), problem.group)
    except (ParseError, FieldOrderError, ZeroDivisionError) as exc:
        raise InputError(str(exc)) from exc


def element_data(problem: Problem, x: PbwElement) -> dict:
    G = problem.group
    return {
        "normal_form": x.format(problem.basis_names, G.names),
        "terms": [
            {"coefficient": format_scalar(x.terms[k]), "exponents": list(k[0]), "group": G.names[k[1]], "t": k[2]}
            for k in x.sorted_keys()
        ],
    }


def _space_data(space, stage: str, linear=None) -> dict:
    basis = []
    for k, b in enumerate(space.basis):
        item = {"kappa": kappa_entries(b)}
        if stage == "linear":
            item["in_representative_space"] = space.in_representative_space[k]
        basis.append(item)
    data = {
        "stage": stage,
        "feasible": space.feasible,
        "dimension": space.dimension,
        "particular": kappa_entries(space.particular) if space.particular is not None else None,
        "basis": basis,
    }
    if linear is not None:
        data["linear_part"] = kappa_entries(linear)
    return data


def _print_space(problem: Problem, data: dict, space) -> None:
    if not data["feasible"]:
        print("no admissible constant part: the affine system is inconsistent")
        return
    print(f"{data['stage']} part: dimension {data['dimension']}")
    if data["stage"] == "constant":
        print("particular solution:")
        lines = format_kappa_summary(space.particular, problem.basis_names) or ["0"]
        for line in lines:
            print(f"  {line}")
    for k, b in enumerate(space.basis):
        tag = ""
        if data["stage"] == "linear":
            tag = " (representative)" if space.in_representative_space[k] else ""
        print(f"basis vector {k + 1}{tag}:")
        for line in format_kappa_summary(b, problem.basis_names):
            print(f"  {line}")


def cohomology_data(problem: Problem, p: int, q: int, exact_degree: bool = False) -> dict:
    G = problem.group
    space = representative_space(G, p, q, exact_degree)
    classes = []
    for cls in G.conj_classes:
        rep = cls[0]
        classes.append(
            {
                "representative": G.names[rep],
                "size": len(cls),
                "codim": G.codim(rep),
                "dimension": space.class_dimensions[rep],
                "by_degree": space.class_dimensions_by_degree[rep],
            }
        )
    total_by_degree = [sum(c["by_degree"][d] for c in classes) for d in range(q + 1)]
    return {
        "p": p,
        "q": q,
        "exact_degree": exact_degree,
        "classes": classes,
        "total": space.invariant_dimension,
        "total_by_degree": total_by_degree,
    }


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print a JSON report only")
    common.add_argument("--graded-t", action="store_true", help="track the formal deformation variable t")
    common.add_argument("--max-group-order", type=int, default=DEFAULT_MAX_ORDER, help="cap on group closure")
    common.add_argument("--cyclotomic-order", type=int, default=None, help="override the field Q(zeta_N)")

    parser = argparse.ArgumentParser(prog="pbwdeform", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("check", parents=[common], help="check the PBW conditions and the overlap oracle")
    p.add_argument("spec")
    p = sub.add_parser("reduce", parents=[common], help="normal form of an expression")
    p.add_argument("spec")
    p.add_argument("expression")
    p = sub.add_parser("multiply", parents=[common], help="product of two expressions in normal form")
    p.add_argument("spec")
    p.add_argument("left")
    p.add_argument("right")
    p = sub.add_parser("solve-linear", parents=[common], help="space of admissible linear parts")
    p.add_argument("spec")
    p = sub.add_parser("solve-constant", parents=[common], help="admissible constant parts for the problem's linear part")
    p.add_argument("spec")
    p = sub.add_parser("cohomology", parents=[common], help="dimensions of invariant representative spaces")
    p.add_argument("spec")
    p.add_argument("--p", type=int, required=True, dest="degree")
    p.add_argument("--q", type=int, required=True, dest="poly_degree")
    p.add_argument("--exact-degree", action="store_true", help="only polynomial degree exactly q")
    return parser


def _emit(data: dict, as_json: bool, printer) -> None:
    if as_json:
        print(json.dumps(data, indent=2, ensure_ascii=False))
    else:
        printer()


def run(args: argparse.Namespace) -> int:
    problem = load_problem(args.spec, args.cyclotomic_order, args.max_group_order)
    cmd = args.command
    if cmd == "check":
        data, code = check_report(problem)
        _emit(data, args.json, lambda: _print_check(problem, data))
        return code
    if cmd in ("reduce", "multiply"):
        rw = Rewriter(problem.kappa, args.graded_t)
        if cmd == "reduce":
            result = rw.normal_form(_parse_expression(problem, args.expression))
            data = {"input": args.expression, "graded_t": args.graded_t, **element_data(problem, result)}
        else:
            a = rw.normal_form(_parse_expression(problem, args.left))
            b = rw.normal_form(_parse_expression(problem, args.right))
            result = rw.multiply(a, b)
            data = {"left": args.left, "right": args.right, "graded_t": args.graded_t, **element_data(problem, result)}
        _emit(data, args.json, lambda: print(data["normal_form"]))
        return EXIT_OK
    if cmd == "solve-linear":
        space = solve_linear_part(problem.group)
        data = _space_data(space, "linear")
        _emit(data, args.json, lambda: _print_space(problem, data, space))
        return EXIT_OK
    if cmd == "solve-constant":
        try:
            space = solve_constant_part(problem.group, problem.kappa.linear_part())
        except InadmissibleLinearPart as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_FAIL
        data = _space_data(space, "constant", problem.kappa.linear_part())
        _emit(data, args.json, lambda: _print_space(problem, data, space))
        return EXIT_OK if space.feasible else EXIT_FAIL
    if cmd == "cohomology":
        if args.degree not in (0, 1, 2, 3):
            raise InputError("--p must be one of 0, 1, 2, 3")
        if args.poly_degree not in (0, 1, 2):
            raise InputError("--q must be one of 0, 1, 2")
        data = cohomology_data(problem, args.degree, args.poly_degree, args.exact_degree)

        def show():
            label = "exactly" if data["exact_degree"] else "at most"
            print(f"invariant representatives, p = {data['p']}, polynomial degree {label} {data['q']}")
            for c in data["classes"]:
                print(
                    f"  class of {c['representative']:<8} size {c['size']}  codim {c['codim']}  "
                    f"dimension {c['dimension']}  by degree {c['by_degree']}"
                )
            print(f"total {data['total']}  by degree {data['total_by_degree']}")

        _emit(data, args.json, show)
        return EXIT_OK
    raise InputError(f"unknown command {cmd}")


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return run(args)
    except (InputError, SpecError, ParseError, FieldOrderError, GroupOrderError, SingularGeneratorError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
