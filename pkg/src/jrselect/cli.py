"""Command-line interface.

Subcommands: select, verify-jr, price, report, simulate, construct,
fetch. Exit codes: 0 on success, 1 on validation errors (bad files, bad
parameters), 2 on runtime failures (enumeration budget exceeded, network
problems). Output goes to stdout unless -o/--output names a file; --format
switches between json and csv where both exist.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import io as jio
from .core import Instance
from .errors import (
    BudgetExceededError,
    JRSelectError,
    NetworkError,
    ValidationError,
)
from .jr import verify_jr
from .mallows import run_price_sweep
from .scoring import RULES
from .solve import (
    DEFAULT_ENUMERATION_BUDGET,
    SelectionResult,
    cohesive_groups_worst_case,
    diverse_approval_worst_case,
    greedy_cc,
    optimal_jr_set_exact,
    optimal_set,
    price_of_jr,
    unbounded_price_instance,
)

RULE_CHOICES = ["engagement", "maximin_diverse_approval", "mda", "product_diverse_approval", "product", "external"]
METHOD_CHOICES = {"unconstrained": "opt", "exact-jr": "exact", "greedy": "greedy"}


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", choices=["json", "csv"], default=None, help="output format")
    parser.add_argument("--seed", type=int, default=0, help="seed for randomized commands")
    parser.add_argument(
        "--budget",
        type=int,
        default=DEFAULT_ENUMERATION_BUDGET,
        help="subset budget for exact enumeration",
    )
    parser.add_argument("--offline", action="store_true", help="never touch the network")
    parser.add_argument("-o", "--output", default=None, help="write output to this file")


def _add_instance_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--approvals", help="approval CSV (user_id,item_id,value)")
    parser.add_argument("--instance", help="instance JSON written by construct")
    parser.add_argument("--k", type=int, help="committee size (required with --approvals)")
    parser.add_argument("--groups", help="group CSV (user_id,group_id)")
    parser.add_argument("--scores", help="score CSV (item_id,score)")
    parser.add_argument("--mode", choices=["binary", "probability"], default="binary")
    parser.add_argument("--cutoff", type=float, default=0.5, help="probability-mode approval cutoff")


def _load_instance(args) -> Instance:
    if args.instance:
        return jio.load_instance_json(args.instance)
    if not args.approvals:
        raise ValidationError("either --approvals or --instance is required")
    if args.k is None:
        raise ValidationError("--k is required with --approvals")
    return jio.load_instance(
        args.approvals,
        args.k,
        groups_path=args.groups,
        scores_path=args.scores,
        mode=args.mode,
        cutoff=args.cutoff,
    )


def _emit(text: str, output) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _parse_items(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip() != ""]
    except ValueError:
        raise ValidationError(f"item list {text!r} must be comma-separated integers")


def _selection_payload(result: SelectionResult) -> dict:
    committee = result.committee
    return {
        "items": list(committee.sorted_items()),
        "size": committee.size,
        "score": jio.score_to_json(committee.score),
        "satisfies_jr": committee.satisfies_jr,
        "rule": result.rule,
        "method": result.method,
        "justifying_prefix_size": result.justifying_prefix_size,
    }


def _selection_csv(result: SelectionResult) -> str:
    committee = result.committee
    return (
        "rule,method,size,score,satisfies_jr,justifying_prefix_size,items\n"
        + ",".join(
            [
                result.rule,
                result.method,
                str(committee.size),
                jio.format_number(committee.score),
                str(committee.satisfies_jr).lower(),
                str(result.justifying_prefix_size),
                " ".join(str(i) for i in committee.sorted_items()),
            ]
        )
        + "\n"
    )


def _cmd_select(args) -> int:
    instance = _load_instance(args)
    rule = RULES[args.rule]
    method = METHOD_CHOICES[args.method]
    if method == "opt":
        result = optimal_set(instance, rule)
    elif method == "exact":
        result = optimal_jr_set_exact(instance, rule, budget=args.budget)
    else:
        result = greedy_cc(instance, rule)
    if (args.format or "json") == "json":
        text = json.dumps(_selection_payload(result), indent=2) + "\n"
    else:
        text = _selection_csv(result)
    _emit(text, args.output)
    print(f"justifying_prefix_size={result.justifying_prefix_size}", file=sys.stderr)
    return 0


def _cmd_verify_jr(args) -> int:
    instance = _load_instance(args)
    items = _parse_items(args.items)
    witness = verify_jr(items, instance)
    if (args.format or "json") == "json":
        payload = {
            "items": sorted(set(items)),
            "satisfies_jr": witness is None,
            "witness": None
            if witness is None
            else {"item": witness.item, "group": sorted(witness.group)},
        }
        text = json.dumps(payload, indent=2) + "\n"
    else:
        lines = ["satisfies_jr,witness_item,witness_group"]
        if witness is None:
            lines.append("true,,")
        else:
            lines.append(f"false,{witness.item},{' '.join(str(u) for u in sorted(witness.group))}")
        text = "\n".join(lines) + "\n"
    _emit(text, args.output)
    return 0


def _cmd_price(args) -> int:
    instance = _load_instance(args)
    rule = RULES[args.rule]
    report = price_of_jr(instance, rule, method=args.method, budget=args.budget)
    if (args.format or "csv") == "csv":
        price = "undefined" if report.price is None else jio.format_number(report.price)
        text = (
            "rule,method,score_opt,score_constrained,price,exact\n"
            + ",".join(
                [
                    report.rule,
                    report.method,
                    jio.format_number(report.score_opt),
                    jio.format_number(report.score_constrained),
                    price,
                    str(report.exact).lower(),
                ]
            )
            + "\n"
        )
    else:
        payload = {
            "rule": report.rule,
            "method": report.method,
            "score_opt": jio.score_to_json(report.score_opt),
            "score_constrained": jio.score_to_json(report.score_constrained),
            "price": jio.score_to_json(report.price),
            "exact": report.exact,
        }
        text = json.dumps(payload, indent=2) + "\n"
    _emit(text, args.output)
    return 0


def _cmd_report(args) -> int:
    instance = _load_instance(args)
    items = _parse_items(args.committee)
    report = jio.representation_report(items, instance, rule=args.rule or "")
    if (args.format or "csv") == "csv":
        text = jio.representation_report_to_csv(report)
    else:
        text = json.dumps(jio.representation_report_to_dict(report), indent=2) + "\n"
    _emit(text, args.output)
    return 0


def _parse_phi_grid(text: str) -> list[float]:
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValidationError("--phi range must be start:stop:step")
        start, stop, step = (float(p) for p in parts)
        if step <= 0:
            raise ValidationError("--phi step must be positive")
        count = int(round((stop - start) / step))
        grid = [round(start + i * step, 10) for i in range(count + 1)]
        return [phi for phi in grid if phi <= stop + 1e-9]
    return [float(p) for p in text.split(",") if p.strip() != ""]


def _cmd_simulate(args) -> int:
    rule = RULES[args.rule]
    grid = _parse_phi_grid(args.phi)
    report = run_price_sweep(
        grid,
        n=args.n,
        m=args.m,
        k=args.k,
        tau=args.tau,
        sims=args.sims,
        delta=args.delta,
        rule=rule,
        seed=args.seed,
    )
    if (args.format or "csv") == "csv":
        text = jio.sweep_to_csv(report)
    else:
        text = json.dumps(jio.sweep_to_dict(report), indent=2) + "\n"
    _emit(text, args.output)
    if args.svg:
        jio.write_sweep_svg(report, args.svg)
    return 0


def _cmd_construct(args) -> int:
    if args.family == "unbounded-price":
        if args.k is None or args.epsilon is None or args.c is None:
            raise ValidationError("unbounded-price needs --k, --epsilon and --c")
        instance = unbounded_price_instance(args.k, args.epsilon, args.c)
    elif args.family == "mda-tight":
        if args.n is None or args.k is None:
            raise ValidationError("mda-tight needs --n and --k")
        instance = diverse_approval_worst_case(args.n, args.k)
    else:
        if args.n is None or args.k is None or args.gamma is None:
            raise ValidationError("cohesive-tight needs --n, --k and --gamma")
        instance = cohesive_groups_worst_case(args.n, args.k, args.gamma, c=args.c if args.c is not None else 1.0)
    written = jio.write_instance_files(instance, args.out)
    for path in written:
        print(path)
    return 0


def _cmd_fetch(args) -> int:
    paths = jio.fetch_dataset(
        args.url, args.cache_dir, offline=args.offline, sha256=args.sha256
    )
    for path in paths:
        print(path)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jrselect",
        description="Approval-based top-k selection under a justified-representation constraint.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("select", help="select a committee under a rule and method")
    _add_instance_args(p)
    _add_common(p)
    p.add_argument("--rule", choices=RULE_CHOICES, required=True)
    p.add_argument("--method", choices=sorted(METHOD_CHOICES), default="greedy")
    p.set_defaults(func=_cmd_select)

    p = sub.add_parser("verify-jr", help="check justified representation of an item set")
    _add_instance_args(p)
    _add_common(p)
    p.add_argument("--items", required=True, help="comma-separated item ids")
    p.set_defaults(func=_cmd_verify_jr)

    p = sub.add_parser("price", help="price of justified representation")
    _add_instance_args(p)
    _add_common(p)
    p.add_argument("--rule", choices=RULE_CHOICES, required=True)
    p.add_argument("--method", choices=["exact", "greedy"], default="exact")
    p.set_defaults(func=_cmd_price)

    p = sub.add_parser("report", help="representation report for a committee")
    _add_instance_args(p)
    _add_common(p)
    p.add_argument("--committee", required=True, help="comma-separated item ids")
    p.add_argument("--rule", default="", help="rule label recorded in the report")
    p.set_defaults(func=_cmd_report)

    p = sub.add_parser("simulate", help="dispersion sweep of the greedy price")
    _add_common(p)
    p.add_argument("--phi", required=True, help="grid as start:stop:step or comma list")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--tau", type=int, required=True)
    p.add_argument("--sims", type=int, default=100, help="instances per grid point")
    p.add_argument("--delta", type=float, default=0.05)
    p.add_argument("--rule", choices=["engagement", "maximin_diverse_approval", "mda", "product_diverse_approval", "product"], default="engagement")
    p.add_argument("--svg", default=None, help="also write an SVG plot here")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("construct", help="write a worst-case instance to a directory")
    _add_common(p)
    p.add_argument("family", choices=["unbounded-price", "mda-tight", "cohesive-tight"])
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--gamma", type=int)
    p.add_argument("--epsilon", type=float)
    p.add_argument("--c", type=float)
    p.set_defaults(func=_cmd_construct)

    p = sub.add_parser("fetch", help="download and cache a dataset")
    _add_common(p)
    p.add_argument("--url", required=True)
    p.add_argument("--cache-dir", required=True)
    p.add_argument("--sha256", default=None, help="pinned digest for the download")
    p.set_defaults(func=_cmd_fetch)

    return parser


def cli_main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (BudgetExceededError, NetworkError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except JRSelectError as exc:  # pragma: no cover - safety net
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(cli_main())


__all__ = ["build_parser", "cli_main", "main"]


if __name__ == "__main__":  # pragma: no cover
    main()
