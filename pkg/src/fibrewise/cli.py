"""Command-line surface.

Exit codes: 0 success / normalized, 2 hypothesis violation, 3 obstruction
found, 4 invalid input, 1 internal error.  All outputs are deterministic
for fixed inputs and flags.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import io
from .algebra import AlgebraError
from .certify import emit_triviality_report, verify_equivalence
from .dga import EngineError, cohomology_in_degree
from .model import validate_comultiplication, validate_relative_model
from .normalize import InvalidModelError, hopf_normalize, ls_normalize
from .perturb import PerturbationError, PerturbationSpec, perturb

OK = 0
INTERNAL_ERROR = 1
HYPOTHESIS_VIOLATION = 2
OBSTRUCTION = 3
INVALID_INPUT = 4


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except FileNotFoundError:
        raise io.ParseError(path, "file not found")
    except json.JSONDecodeError as exc:
        raise io.ParseError(path, f"not valid JSON: {exc}")


def _write_output(path: str | None, doc) -> None:
    text = io.dumps(doc)
    if path:
        Path(path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _cmd_check(args) -> int:
    doc = _load_json(args.model)
    model, comul = io.parse_model(
        doc, validate=False, truncation_override=args.max_degree
    )
    problems = []
    for verdict in (
        validate_relative_model(model),
        validate_comultiplication(model, comul),
    ):
        if not verdict.ok:
            problems.extend(verdict.failures)
    print(f"truncation degree: {model.truncation}")
    if problems:
        for line in problems:
            print("FAIL:", line)
        return INVALID_INPUT
    print("model and comultiplication are valid "
          f"(verified up to degree {model.truncation})")
    return OK


def _cmd_cohomology(args) -> int:
    doc = _load_json(args.model)
    model, _ = io.parse_model(doc)
    slice_ = cohomology_in_degree(model.base_cdga(), args.degree)
    print(f"truncation degree: {model.truncation}")
    print(f"degree {args.degree}: dim Z = {len(slice_.cycles)}, "
          f"dim E = {len(slice_.boundaries)}, dim H = {len(slice_.complement)}")
    for poly in slice_.complement:
        print("class:", repr(poly))
    return OK


def _run_pipeline(args, pipeline) -> int:
    doc = _load_json(args.model)
    model, comul = io.parse_model(doc)
    runner = hopf_normalize if pipeline == "hopf" else ls_normalize
    result = runner(model, comul, force=args.force)
    out = io.result_to_document(result, pipeline, model.truncation)
    _write_output(args.output, out)
    print(emit_triviality_report(result, pipeline), file=sys.stderr)
    if result.outcome == "normalized":
        return OK
    if result.outcome == "hypothesis-violation":
        return HYPOTHESIS_VIOLATION
    return OBSTRUCTION


def _cmd_verify(args) -> int:
    model_doc = _load_json(args.model)
    model, comul = io.parse_model(model_doc)
    cert = io.certificate_from_document(_load_json(args.certificate))
    if [(g.name, g.degree) for g in model.table.base] != cert.base_spec or [
        (g.name, g.degree) for g in model.table.fiber
    ] != cert.fiber_spec:
        print("FAIL: certificate is for a different generator table")
        return INVALID_INPUT
    if cert.d_base != model.d_base:
        print("FAIL: certificate base differential differs from the model")
        return INVALID_INPUT
    if cert.source_d != model.d_fiber or cert.source_c != comul.images:
        print("FAIL: certificate source does not match the model")
        return INVALID_INPUT
    verdict = verify_equivalence(cert)
    if not verdict.ok:
        print("FAIL:", verdict.failures[0])
        return INVALID_INPUT
    print(f"certificate verified: {len(cert.steps)} steps replayed "
          f"(up to degree {cert.truncation})")
    return OK


def _cmd_perturb(args) -> int:
    doc = _load_json(args.model)
    model, comul = io.parse_model(doc)
    spec = PerturbationSpec(
        seed=args.seed, max_word_length=args.max_word_length, mode=args.mode
    )
    new_model, new_comul = perturb(model, comul, spec)
    _write_output(args.output, io.model_to_document(new_model, new_comul))
    return OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fibrewise",
        description="Normalization of relative Sullivan models of fibrewise "
                    "H-spaces, with machine-checkable certificates.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="validate a model document")
    p.add_argument("model")
    p.add_argument("--max-degree", type=int, default=None,
                   help="override the truncation degree for this run")
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("cohomology", help="one cohomology slice of the base")
    p.add_argument("model")
    p.add_argument("-n", "--degree", type=int, required=True)
    p.set_defaults(func=_cmd_cohomology)

    for name, help_text in (
        ("hopf", "remove the differential from the fiber generators"),
        ("ls", "normalize the comultiplication to the standard one"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("model")
        p.add_argument("-o", "--output", default=None,
                       help="write the result document to this path")
        p.add_argument("--force", action="store_true",
                       help="attempt normalization even when the hypothesis "
                            "check fails, reporting the first obstruction")
        p.set_defaults(func=lambda args, _name=name: _run_pipeline(args, _name))

    p = sub.add_parser("verify", help="replay a certificate against a model")
    p.add_argument("model")
    p.add_argument("certificate")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("perturb", help="seeded perturbation of a standard model")
    p.add_argument("model")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--mode", choices=("change-of-generators", "exact-homotopy", "both"),
                   default="both")
    p.add_argument("--max-word-length", type=int, default=3)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_perturb)
    return parser


def run_command(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return INVALID_INPUT if exc.code not in (0, None) else OK
    try:
        return args.func(args)
    except (io.ParseError, InvalidModelError, PerturbationError, AlgebraError) as exc:
        print("ERROR:", exc, file=sys.stderr)
        return INVALID_INPUT
    except EngineError as exc:
        print("INTERNAL ERROR:", exc, file=sys.stderr)
        return INTERNAL_ERROR


def main() -> None:
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
