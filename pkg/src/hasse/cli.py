"""Command line front end.

Every command prints either a short human-readable report or, with
``--json``, one JSON object with the fields
``command, p, order, pass, value, first_failure, error``.

Exit codes: 0 success / check passed, 1 a mathematical check failed,
2 bad input (syntax, parameters), 3 a precondition failed (e.g. NotNormalizable).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .derivation import (CONSTANT, IterativeDerivation, Report, composition_constant, level,
                         standard_derivation, verify_iterativity)
from .equivalence import (Substitution, apply_substitution, check_equivalence_condition, compress,
                          decompress, frobenius_twist, normalize_at, recover_substitution)
from .errors import HasseError, InputError, PreconditionError
from .idmodule import (IDModuleMatrix, is_constant_vector, transform_module,
                       verify_module_iterativity)
from .parsing import parse_ratfun
from .series import DEFAULT_ORDER

ORDER_ENV = "HASSE_ORDER"

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_PRECONDITION = 0, 1, 2, 3

OPERANDS = ("theta", "theta_tilde", "lambda_", "t", "f", "d", "m", "module", "vector", "max_order")


@dataclass(frozen=True)
class CommandRequest:
    command: str
    p: int | None
    order: int
    operands: dict = field(default_factory=dict)
    json: bool = False

    def get(self, name, default=None):
        value = self.operands.get(name)
        return default if value is None else value


@dataclass
class CommandReport:
    command: str
    p: int | None
    order: int
    passed: bool | None = None
    value: object = None
    first_failure: dict | None = None
    error: dict | None = None
    exit_code: int = EXIT_OK

    def to_dict(self):
        return {
            "command": self.command,
            "p": self.p,
            "order": self.order,
            "pass": self.passed,
            "value": self.value,
            "first_failure": self.first_failure,
            "error": self.error,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False)

    def to_text(self) -> str:
        head = f"{self.command} (p={self.p}, order={self.order})"
        if self.error:
            return f"{head}: error {self.error['kind']}: {self.error['message']}"
        lines = []
        if self.passed is not None:
            lines.append(f"{head}: {'PASS' if self.passed else 'FAIL'}")
        else:
            lines.append(f"{head}:")
        if self.first_failure:
            ff = self.first_failure
            where = f" in entry {tuple(ff['entry'])}" if "entry" in ff else ""
            lines.append(f"  first failure at U^{ff['i']} T^{ff['j']}{where}: "
                         f"lhs = {ff['lhs']}, rhs = {ff['rhs']}")
        if self.value is not None:
            lines.extend("  " + line for line in _value_lines(self.value))
        return "\n".join(lines)


def _value_lines(value, prefix=""):
    if isinstance(value, dict):
        for k, v in value.items():
            if isinstance(v, (dict, list)):
                yield f"{prefix}{k}:"
                yield from _value_lines(v, prefix + "  ")
            else:
                yield f"{prefix}{k}: {v}"
    elif isinstance(value, list):
        for v in value:
            yield f"{prefix}- {v}"
    else:
        yield f"{prefix}{value}"


# -- handlers --------------------------------------------------------------------

def _need(req, name, flag=None):
    value = req.get(name)
    if value is None:
        raise InputError(f"{req.command} needs --{flag or name.rstrip('_').replace('_', '-')}")
    return value


def _p(req):
    if req.p is None:
        raise InputError(f"{req.command} needs --p")
    return req.p


def _theta(req, name="theta", default_standard=True):
    text = req.get(name)
    if text is None:
        if not default_standard:
            _need(req, name)
        return standard_derivation(_p(req), req.order)
    return IterativeDerivation.from_text(text, _p(req), req.order)


def _lambda(req):
    return Substitution.from_text(_need(req, "lambda_"), _p(req), req.order)


def _int(req, name, minimum=0):
    raw = _need(req, name)
    try:
        value = int(raw)
    except (TypeError, ValueError):
        raise InputError(f"--{name} must be an integer, got {raw!r}") from None
    if value < minimum:
        raise InputError(f"--{name} must be at least {minimum}")
    return value


def _check(report: Report, out: CommandReport):
    out.passed = report.passed
    out.first_failure = report.first_failure.to_dict() if report.first_failure else None
    out.exit_code = EXIT_OK if report.passed else EXIT_FAIL


def _module(req, theta):
    return IDModuleMatrix.from_text(_need(req, "module"), theta)


def _vector(req):
    return [parse_ratfun(x.strip(), _p(req)) for x in _need(req, "vector").split(",")]


def cmd_standard(req, out):
    out.value = standard_derivation(_p(req), req.order).to_dict()


def cmd_apply(req, out):
    theta = _theta(req)
    out.value = str(theta.apply(_need(req, "f")))


def cmd_verify(req, out):
    _check(verify_iterativity(_theta(req, default_standard=False)), out)


def cmd_level(req, out):
    d = level(_theta(req), _need(req, "f"))
    out.value = "constant" if d is CONSTANT else d


def cmd_comp_const(req, out):
    out.value = composition_constant(_int(req, "m", 1), _p(req))


def cmd_equiv_apply(req, out):
    out.value = apply_substitution(_theta(req), _lambda(req)).to_dict()


def cmd_equiv_check(req, out):
    _check(check_equivalence_condition(_theta(req, default_standard=False), _lambda(req)), out)


def cmd_equiv_recover(req, out):
    theta = _theta(req)
    theta_tilde = _theta(req, "theta_tilde", default_standard=False)
    lam = recover_substitution(theta, theta_tilde, req.get("f", "s"))
    out.value = {**lam.to_dict(), "invertible": lam.is_invertible()}


def cmd_normalize(req, out):
    theta_tilde, lam = normalize_at(_theta(req, default_standard=False), req.get("t", "s"))
    out.value = {"theta": theta_tilde.to_dict(), "lambda": lam.to_dict()}


def cmd_twist(req, out):
    out.value = frobenius_twist(_theta(req), _int(req, "d", 0)).to_dict()


def cmd_compress(req, out):
    theta_bar, d = compress(_theta(req, default_standard=False))
    out.value = {"theta": theta_bar.to_dict(), "d": d}


def cmd_decompress(req, out):
    max_order = req.get("max_order")
    theta = decompress(_theta(req), _int(req, "d", 0),
                       int(max_order) if max_order is not None else None)
    out.value = theta.to_dict()


def cmd_module_verify(req, out):
    _check(verify_module_iterativity(_module(req, _theta(req))), out)


def cmd_module_transform(req, out):
    transformed = transform_module(_module(req, _theta(req)), _lambda(req))
    out.value = transformed.to_dict()
    _check(verify_module_iterativity(transformed), out)


def cmd_module_constant(req, out):
    constant = is_constant_vector(_module(req, _theta(req)), _vector(req))
    out.passed = constant
    out.exit_code = EXIT_OK if constant else EXIT_FAIL


COMMANDS = {
    "standard": cmd_standard,
    "apply": cmd_apply,
    "verify": cmd_verify,
    "level": cmd_level,
    "comp-const": cmd_comp_const,
    "equiv-apply": cmd_equiv_apply,
    "equiv-check": cmd_equiv_check,
    "equiv-recover": cmd_equiv_recover,
    "normalize": cmd_normalize,
    "twist": cmd_twist,
    "compress": cmd_compress,
    "decompress": cmd_decompress,
    "module-verify": cmd_module_verify,
    "module-transform": cmd_module_transform,
    "module-constant": cmd_module_constant,
}


def run(req: CommandRequest) -> CommandReport:
    out = CommandReport(req.command, req.p, req.order)
    try:
        if req.command not in COMMANDS:
            raise InputError(f"unknown command {req.command!r}")
        if req.order < 2:
            raise InputError("--order must be at least 2")
        COMMANDS[req.command](req, out)
    except HasseError as exc:
        out.passed, out.value, out.first_failure = None, None, None
        out.error = {"kind": exc.kind, "message": str(exc)}
        out.exit_code = EXIT_PRECONDITION if isinstance(exc, PreconditionError) else EXIT_INPUT
    return out


# -- argument handling ------------------------------------------------------------

def _default_order():
    raw = os.environ.get(ORDER_ENV)
    if raw is None:
        return DEFAULT_ORDER
    try:
        return int(raw)
    except ValueError:
        raise SystemExit(f"{ORDER_ENV} must be an integer, got {raw!r}")


def _common(parser):
    parser.add_argument("--p", type=int, help="characteristic (a prime)")
    parser.add_argument("--order", type=int, default=None,
                        help=f"truncation order N (default ${ORDER_ENV} or {DEFAULT_ORDER})")
    parser.add_argument("--theta", help="generator image theta(s), e.g. 's + T^3'")
    parser.add_argument("--theta-tilde", dest="theta_tilde",
                        help="second derivation (equiv-recover)")
    parser.add_argument("--lambda", dest="lambda_", help="substitution series P(T)")
    parser.add_argument("--t", help="element to normalize at (default s)")
    parser.add_argument("--f", help="element of F_p(s)")
    parser.add_argument("--d", help="Frobenius exponent")
    parser.add_argument("--m", help="index for comp-const")
    parser.add_argument("--max-order", dest="max_order", help="cap for decompress")
    parser.add_argument("--module", help="matrix A(T): rows split by ';', entries by ','")
    parser.add_argument("--vector", help="coordinates split by ','")
    parser.add_argument("--json", action="store_true", help="emit a JSON report")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="hasse", description="Iterative derivations on F_p(s), exact to a truncation order.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        _common(sub.add_parser(name))
    batch = sub.add_parser("batch", help="run JSON-lines requests from a file ('-' = stdin)")
    batch.add_argument("file")
    batch.add_argument("--jobs", type=int, default=1)
    return parser


def request_from_args(args) -> CommandRequest:
    order = args.order if args.order is not None else _default_order()
    operands = {k: getattr(args, k) for k in OPERANDS if getattr(args, k, None) is not None}
    return CommandRequest(args.command, args.p, order, operands, args.json)


def request_from_dict(d: dict) -> CommandRequest:
    d = dict(d)
    command = d.pop("command", None)
    p = d.pop("p", None)
    order = d.pop("order", None)
    if order is None:
        order = _default_order()
    if "lambda" in d:
        d["lambda_"] = d.pop("lambda")
    d = {k.replace("-", "_"): v for k, v in d.items()}
    unknown = set(d) - set(OPERANDS)
    if unknown:
        raise InputError(f"unknown request fields: {sorted(unknown)}")
    return CommandRequest(command, p, int(order), {k: str(v) for k, v in d.items()}, True)


def _run_batch(path, jobs):
    stream = sys.stdin if path == "-" else open(path, encoding="utf-8")
    with stream:
        lines = [line for line in stream if line.strip()]
    reports = []
    requests = []
    for n, line in enumerate(lines):
        try:
            requests.append(request_from_dict(json.loads(line)))
        except (ValueError, InputError) as exc:
            requests.append(None)
            reports.append((n, CommandReport("batch", None, 0, error={
                "kind": "InputError", "message": f"line {n + 1}: {exc}"}, exit_code=EXIT_INPUT)))
    todo = [(n, r) for n, r in enumerate(requests) if r is not None]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            done = list(pool.map(run, [r for _, r in todo]))
    else:
        done = [run(r) for _, r in todo]
    reports.extend(zip([n for n, _ in todo], done))
    reports.sort(key=lambda item: item[0])
    for _, report in reports:
        print(report.to_json())
    return max((r.exit_code for _, r in reports), default=EXIT_OK)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "batch":
        return _run_batch(args.file, args.jobs)
    report = run(request_from_args(args))
    print(report.to_json() if args.json else report.to_text())
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
