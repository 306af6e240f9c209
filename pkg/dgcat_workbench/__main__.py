"""Command-line entry point.

Run with::

    python -m dgcat_workbench validate workspace.json
    python -m dgcat_workbench end workspace.json --bimodule diag
    python -m dgcat_workbench adjoint workspace.json --of S --field fp:2
    python -m dgcat_workbench oracle --instances 100

The JSON report goes to stdout (or ``--json-out``); a short human summary
goes to stderr through logging.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Callable

from .complexes import cohomology
from .constants import DEFAULT_SEED, ORACLE_INSTANCES
from .derived import (
    derived_compose, derived_duality_unit, derived_hom, has_left_adjoint,
    quasi_functor_compose, resolve, structural_maps, verify_quasiadj_diagrams,
)
from .dgcat import validate_dgcat, validate_functor
from .dgmod import (
    LeftModule, RightModule, is_qis_morphism, module_iso, nat_complex,
    validate_module, yoneda_iso,
)
from .duality import (
    L_dual, LR_unit, R_dual, isbell_O, isbell_spec, isbell_unit, isbell_counit,
    search_representability,
)
from .endcoend import (
    coend_bimodule, coend_oracle, compose, coyoneda_witness, end_bimodule,
    end_oracle, fubini_witness,
)
from .enums import ExitCode, ReprKind, Side
from .errors import (
    DimensionMismatchError, NotClosedError, NotQuasiIsomorphismError,
    UncertifiedResolutionError, UnknownObjectError, ValidationError,
    WorkspaceFormatError,
)
from .exact_linalg import Field
from .fixtures import random_f2_pair
from .models import first_failure
from .workspace import Workspace, read_workspace

logger = logging.getLogger(__name__)

Handler = Callable[..., tuple[dict, ExitCode]]

INVALID_INPUT = (
    ValidationError, WorkspaceFormatError, UnknownObjectError, NotClosedError,
    NotQuasiIsomorphismError, DimensionMismatchError,
)
NOT_INPUTS = {"command", "log_level", "json_out", "field", "seed", "depth", "force_uncertified", "parallel"}


# ============================================================
# COMMANDS
# ============================================================

def _ok(payload: dict, positive: bool = True) -> tuple[dict, ExitCode]:
    return payload, ExitCode.OK if positive else ExitCode.NEGATIVE


def cmd_validate(ws: Workspace, args) -> tuple[dict, ExitCode]:
    reports = {}
    for name, cat in ws.categories.items():
        reports[f"categories.{name}"] = validate_dgcat(cat)
    for name, fun in ws.functors.items():
        reports[f"functors.{name}"] = validate_functor(fun)
    for name, t in ws.modules.items():
        reports[f"modules.{name}"] = validate_module(t)
    overall = first_failure(*reports.values(), check="workspace")
    logger.info("validated %d entries: %s", len(reports), "ok" if overall else overall.check)
    payload = {"ok": overall.ok, "entries": {k: r.to_dict() for k, r in reports.items()}}
    return payload, ExitCode.OK if overall else ExitCode.INVALID


def cmd_cohomology(ws: Workspace, args) -> tuple[dict, ExitCode]:
    if args.module:
        t = ws.module(args.module)
        dims = {f"{b}|{a}": cohomology(t[(b, a)]).dims for b, a in t.keys()}
    elif args.category:
        cat = ws.category(args.category)
        dims = {f"{a}|{b}": cohomology(cat.hom[(a, b)]).dims for a, b in cat.pairs()}
    else:
        raise ValidationError("arguments", "give --module or --category")
    return _ok({"cohomology": dims})


def cmd_nat(ws: Workspace, args) -> tuple[dict, ExitCode]:
    nat = nat_complex(ws.module(args.source), ws.module(args.target))
    return _ok({"dims": nat.complex.dims, "cohomology": cohomology(nat.complex).dims})


def cmd_yoneda(ws: Workspace, args) -> tuple[dict, ExitCode]:
    witness = yoneda_iso(args.object, ws.module(args.module))
    return _ok(witness.to_dict(), witness.verify())


def cmd_end(ws: Workspace, args) -> tuple[dict, ExitCode]:
    t = ws.module(args.bimodule)
    result = end_bimodule(t)
    payload = {**result.to_dict(), "wedge": result.verify_wedge(), "oracle": end_oracle(t)}
    logger.info("end of %s: dims %s", t.name, result.total.dims)
    return _ok(payload)


def cmd_coend(ws: Workspace, args) -> tuple[dict, ExitCode]:
    t = ws.module(args.bimodule)
    result = coend_bimodule(t)
    payload = {**result.to_dict(), "cowedge": result.verify_cowedge(), "oracle": coend_oracle(t)}
    logger.info("coend of %s: dims %s", t.name, result.total.dims)
    return _ok(payload)


def cmd_fubini(ws: Workspace, args) -> tuple[dict, ExitCode]:
    witness = fubini_witness(ws.module(args.bimodule), ws.category(args.first), ws.category(args.second))
    return _ok(witness.to_dict(), witness.verify())


def cmd_coyoneda(ws: Workspace, args) -> tuple[dict, ExitCode]:
    side = Side(args.side) if args.side else None
    witness = coyoneda_witness(ws.module(args.bimodule), side)
    return _ok(witness.to_dict(), witness.verify())


def cmd_isbell(ws: Workspace, args) -> tuple[dict, ExitCode]:
    m = ws.module(args.module)
    if isinstance(m, RightModule):
        dual, unit = isbell_O(m), isbell_unit(m)
    elif isinstance(m, LeftModule):
        dual, unit = isbell_spec(m), isbell_counit(m)
    else:
        raise ValidationError("isbell", f"{args.module} is not a one-sided module")
    payload = {
        "dual_dims": dual.dims(),
        "unit_closed": unit.is_closed,
        "unit_iso": module_iso(unit) is not None,
        "unit_quasi_iso": is_qis_morphism(unit),
    }
    return _ok(payload)


def cmd_dual(ws: Workspace, args) -> tuple[dict, ExitCode]:
    t = ws.module(args.bimodule)
    dual = L_dual(t) if args.side == "L" else R_dual(t)
    return _ok({"side": args.side, "dims": dual.dims()})


def cmd_unit(ws: Workspace, args) -> tuple[dict, ExitCode]:
    t = ws.module(args.bimodule)
    if args.kind == "derived":
        result = derived_duality_unit(t, args.depth, args.force_uncertified)
        return _ok(result.to_dict(), result.quasi_iso)
    unit = LR_unit(t)
    iso = module_iso(unit) is not None
    return _ok({"iso": iso, "quasi_iso": is_qis_morphism(unit)}, iso)


def cmd_resolve(ws: Workspace, args) -> tuple[dict, ExitCode]:
    result = resolve(ws.module(args.bimodule), args.depth, args.force_uncertified)
    logger.info("resolution of %s: depth %d, certified=%s, verified=%s",
                args.bimodule, result.depth, result.certified, result.verified)
    return _ok(result.to_dict(), result.verified)


def cmd_dhom(ws: Workspace, args) -> tuple[dict, ExitCode]:
    result = derived_hom(ws.module(args.source), ws.module(args.target), args.depth, args.force_uncertified)
    return _ok(result.to_dict())


def cmd_compose(ws: Workspace, args) -> tuple[dict, ExitCode]:
    result = compose(ws.module(args.second), ws.module(args.first))
    return _ok({"dims": result.dims()})


def cmd_dcompose(ws: Workspace, args) -> tuple[dict, ExitCode]:
    result = derived_compose(ws.module(args.second), ws.module(args.first),
                             args.depth, args.force_uncertified, args.resolve_both)
    return _ok(result.to_dict())


def cmd_qrep(ws: Workspace, args) -> tuple[dict, ExitCode]:
    outcome = search_representability(ws.module(args.bimodule), Side(args.side), ReprKind(args.kind),
                                      args.seed, parallel=args.parallel)
    found = outcome.witness is not None
    logger.info("%s %s representability of %s: %s", args.side, args.kind, args.bimodule,
                "found" if found else f"fails at {outcome.failed_at}")
    return _ok(outcome.to_dict(), found)


def cmd_maps(ws: Workspace, args) -> tuple[dict, ExitCode]:
    maps = structural_maps(ws.module(args.bimodule))
    payload = maps.to_dict()
    if args.only:
        payload = {args.only: payload[args.only]}
    return _ok(payload)


def cmd_quasiadj(ws: Workspace, args) -> tuple[dict, ExitCode]:
    result = verify_quasiadj_diagrams(ws.module(args.bimodule), args.derived, args.depth,
                                      args.force_uncertified)
    return _ok(result.to_dict(), result.report.ok)


def cmd_adjoint(ws: Workspace, args) -> tuple[dict, ExitCode]:
    decision = has_left_adjoint(ws.module(args.of), args.depth, args.force_uncertified,
                                args.seed, args.parallel)
    logger.info("%s %s a left adjoint", args.of, "has" if decision.exists else "has no")
    return _ok(decision.to_dict(), decision.exists)


def cmd_qcompose(ws: Workspace, args) -> tuple[dict, ExitCode]:
    result = quasi_functor_compose(ws.module(args.second), ws.module(args.first), args.depth,
                                   args.force_uncertified, args.seed, args.parallel)
    return _ok(result.to_dict())


def cmd_oracle(ws: Workspace | None, args) -> tuple[dict, ExitCode]:
    """Compare ends and coends with their brute-force recomputation on random F₂ bimodules."""
    failures = []
    for i in range(args.instances):
        cat, t = random_f2_pair(args.seed + i)
        checks = {"end": end_oracle(t), "coend": coend_oracle(t)}
        if not all(checks.values()):
            failures.append({"instance": i, "category": cat.name, "checks": checks})
    logger.info("oracle: %d/%d instances agree", args.instances - len(failures), args.instances)
    return _ok({"instances": args.instances, "failures": failures}, not failures)


COMMANDS: dict[str, Handler] = {
    "validate": cmd_validate,
    "cohomology": cmd_cohomology,
    "nat": cmd_nat,
    "yoneda": cmd_yoneda,
    "end": cmd_end,
    "coend": cmd_coend,
    "fubini": cmd_fubini,
    "coyoneda": cmd_coyoneda,
    "isbell": cmd_isbell,
    "dual": cmd_dual,
    "unit": cmd_unit,
    "resolve": cmd_resolve,
    "dhom": cmd_dhom,
    "compose": cmd_compose,
    "dcompose": cmd_dcompose,
    "qrep": cmd_qrep,
    "maps": cmd_maps,
    "quasiadj": cmd_quasiadj,
    "adjoint": cmd_adjoint,
    "qcompose": cmd_qcompose,
    "oracle": cmd_oracle,
}


# ============================================================
# ARGUMENTS
# ============================================================

def _hex(text: str) -> int:
    return int(text, 16)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", type=str, default=None,
                        help="Override the workspace field: q or fp:<p>")
    common.add_argument("--depth", type=int, default=None,
                        help="Bar resolution depth (default: the certified bound)")
    common.add_argument("--seed", type=_hex, default=DEFAULT_SEED,
                        help=f"Seed schedule start, hex (default: {DEFAULT_SEED:#x})")
    common.add_argument("--force-uncertified", action="store_true",
                        help="Run derived operations on uncertified resolutions")
    common.add_argument("--json-out", type=str, default=None,
                        help="Write the JSON report here instead of stdout")
    common.add_argument("--parallel", action="store_true",
                        help="Search objects in parallel worker processes")
    common.add_argument("--log-level", type=str, default="INFO",
                        help="Log level for the stderr summary (default: INFO)")

    parser = argparse.ArgumentParser(prog="dgcat", description="Exact computations with finite dg-categories")
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name: str, help_text: str, workspace: bool = True) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text, parents=[common])
        if workspace:
            p.add_argument("workspace", type=str, help="Workspace JSON file")
        return p

    command("validate", "Validate every category, functor and module")
    p = command("cohomology", "Cohomology of each component")
    p.add_argument("--module")
    p.add_argument("--category")
    p = command("nat", "Nat(S, T) and its cohomology")
    p.add_argument("--source", required=True)
    p.add_argument("--target", required=True)
    p = command("yoneda", "Nat(h_A, M) ≅ M(A)")
    p.add_argument("--module", required=True)
    p.add_argument("--object", required=True)
    for name, text in (("end", "End of a bimodule over one category"),
                       ("coend", "Coend of a bimodule over one category")):
        command(name, text).add_argument("--bimodule", required=True)
    p = command("fubini", "Compare the three ends of a bimodule over a tensor product")
    p.add_argument("--bimodule", required=True)
    p.add_argument("--first", required=True)
    p.add_argument("--second", required=True)
    p = command("coyoneda", "Unit isomorphisms for composition with the diagonal")
    p.add_argument("--bimodule", required=True)
    p.add_argument("--side", choices=[s.value for s in Side])
    command("isbell", "Isbell dual of a one-sided module and its unit").add_argument("--module", required=True)
    p = command("dual", "L or R dual of a bimodule")
    p.add_argument("--bimodule", required=True)
    p.add_argument("--side", choices=["L", "R"], default="L")
    p = command("unit", "T → RL T, exact or derived")
    p.add_argument("--bimodule", required=True)
    p.add_argument("--kind", choices=["lr", "derived"], default="lr")
    command("resolve", "Bar resolution with its certificate").add_argument("--bimodule", required=True)
    p = command("dhom", "Derived Hom dimensions")
    p.add_argument("--source", required=True)
    p.add_argument("--target", required=True)
    for name, text in (("compose", "Underived composition second ⋄ first"),
                       ("dcompose", "Derived composition second ⋄ first"),
                       ("qcompose", "Composition of quasi-functors with its witness")):
        p = command(name, text)
        p.add_argument("--first", required=True)
        p.add_argument("--second", required=True)
        if name == "dcompose":
            p.add_argument("--resolve-both", action="store_true")
    p = command("qrep", "Representability search")
    p.add_argument("--bimodule", required=True)
    p.add_argument("--side", choices=[s.value for s in Side], default=Side.RIGHT.value)
    p.add_argument("--kind", choices=[k.value for k in ReprKind], default=ReprKind.STRICT.value)
    p = command("maps", "Structural maps t, n, e, e′ and the counit")
    p.add_argument("--bimodule", required=True)
    p.add_argument("--only", choices=["t", "n", "e", "e_prime", "counit"])
    p = command("quasiadj", "Quasi-adjunction diagrams")
    p.add_argument("--bimodule", required=True)
    p.add_argument("--derived", action="store_true")
    command("adjoint", "Decide whether a quasi-functor has a left adjoint").add_argument("--of", required=True)
    p = command("oracle", "Brute-force cross-checks on random F₂ bimodules", workspace=False)
    p.add_argument("--instances", type=int, default=ORACLE_INSTANCES)
    return parser


# ============================================================
# ENTRY POINT
# ============================================================

def _provenance(args) -> dict:
    return {
        "field": args.field,
        "seed": hex(args.seed),
        "depth": args.depth,
        "force_uncertified": args.force_uncertified,
        "parallel": args.parallel,
    }


def _emit(report: dict, json_out: str | None) -> None:
    text = json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    if json_out:
        Path(json_out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def run(args: argparse.Namespace) -> tuple[dict, ExitCode]:
    """Load the workspace (if any) and dispatch *args.command*; errors become exit codes."""
    try:
        override = Field.parse(args.field) if args.field else None
        ws = read_workspace(args.workspace, override) if hasattr(args, "workspace") else None
        if ws is not None and args.field is None:
            args.field = ws.field.spec
        return COMMANDS[args.command](ws, args)
    except UncertifiedResolutionError as exc:
        logger.warning("refused: %s", exc)
        return {"error": {"kind": "uncertified", "message": str(exc)}}, ExitCode.UNCERTIFIED
    except INVALID_INPUT as exc:
        logger.error("invalid input: %s", exc)
        error = {"kind": type(exc).__name__, "message": str(exc)}
        if isinstance(exc, ValidationError):
            error["axiom"] = exc.axiom
            error["location"] = {k: list(v) if isinstance(v, tuple) else v for k, v in exc.location.items()}
        if isinstance(exc, WorkspaceFormatError):
            error["path"] = exc.path
        return {"error": error}, ExitCode.INVALID


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=getattr(logging, args.log_level.upper(), logging.INFO),
                        format="%(message)s", stream=sys.stderr)
    result, code = run(args)
    report = {
        "operation": args.command,
        "inputs": {k: v for k, v in sorted(vars(args).items()) if k not in NOT_INPUTS},
        "result": result,
        "provenance": _provenance(args),
        "exit_code": int(code),
    }
    _emit(report, args.json_out)
    return int(code)


if __name__ == "__main__":
    sys.exit(main())
