"""Command-line entry point: ``hullcoh <command> --input FILE``.

Exit codes: 0 success; 1 DISAGREE (betti) or a counterexample (psi-test);
2 invalid input; 3 no symplectic form found; 4 hard Lefschetz fails.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .hull import InvalidPresentation, validate
from .io import ParseError, PresentationFile, load, matrix_json, vector_json
from .lefschetz import OddDimension, find_symplectic, hard_lefschetz_check
from .liecomplex import cohomology, complex_from_presentation, format_cochain, minimal_model_report
from .oracle import NotEquivariant, wang_betti
from .qkernel import rational_str
from .simpclass import verify_cochain_map

SCHEMA_VERSION = "1"
COMMANDS = ("check", "betti", "minimal-model", "psi-test", "lefschetz")

EXIT_OK, EXIT_FAIL, EXIT_INVALID, EXIT_NO_FORM, EXIT_HLP_FAILS = 0, 1, 2, 3, 4


@dataclass(frozen=True)
class RunConfig:
    command: str
    input: str
    max_degree: int = 3
    samples: int = 100
    seed: int = 0
    height: int = 8
    draws: int = 1000
    format: str = "json"


class UsageError(ValueError):
    pass


def _base(cfg: RunConfig, pf: PresentationFile | None) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "tool_version": __version__,
        "command": cfg.command,
        "input": Path(cfg.input).name,
        "presentation": pf.presentation.name if pf else None,
    }


def _load_valid(cfg: RunConfig) -> PresentationFile:
    pf = load(cfg.input)
    validate(pf.presentation, raise_on_failure=True)
    return pf


def _trivial_module(pf: PresentationFile) -> bool:
    mod = pf.presentation.module
    return mod.dim == 1 and mod.is_nilpotent_trivial and all(R.is_identity() for R in mod.R_gens)


# -- commands -------------------------------------------------------------------

def cmd_check(cfg: RunConfig) -> tuple[dict, int]:
    pf = load(cfg.input)
    rep = validate(pf.presentation)
    out = _base(cfg, pf)
    out["checks"] = [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in rep.checks]
    out["valid"] = rep.ok
    out["dim_u"] = pf.presentation.n
    return out, EXIT_OK if rep.ok else EXIT_INVALID


def cmd_betti(cfg: RunConfig) -> tuple[dict, int]:
    pf = _load_valid(cfg)
    h = pf.presentation
    cx = complex_from_presentation(h)
    co = cohomology(cx)
    out = _base(cfg, pf)
    out["ce"] = {
        "betti": list(co.betti),
        "invariant_dims": list(co.dims),
        "euler_characteristic": co.euler,
        "representatives": [[format_cochain(h.n, k, z, h.u_names, h.value_dim) for z in reps]
                            for k, reps in enumerate(co.representatives)],
    }
    code = EXIT_OK
    if pf.oracle is None:
        out["oracle"] = None
        out["verdict"] = "NO_ORACLE"
    else:
        o = pf.oracle
        ob = wang_betti(o.A, o.base_actions, o.t_action)
        out["oracle"] = {"class": "Z_semidirect_Zm", "A": matrix_json(o.A), "betti": list(ob)}
        agree = tuple(ob) == tuple(co.betti)
        out["verdict"] = "AGREE" if agree else "DISAGREE"
        code = EXIT_OK if agree else EXIT_FAIL
    return out, code


def cmd_minimal_model(cfg: RunConfig) -> tuple[dict, int]:
    pf = _load_valid(cfg)
    h = pf.presentation
    if not _trivial_module(pf):
        raise UsageError("minimal-model needs a presentation with the trivial module")
    notes = []
    if h.t_generators:
        notes.append("T acts nontrivially: this is the minimal model of the forms with coefficients "
                     "in the coordinate ring of T; the T-invariant part alone computes H*(Gamma, Q)")
    mm = minimal_model_report(h.lie, h.u_names, notes)
    out = _base(cfg, pf)
    out["generators"] = [{"name": g, "degree": 1, "weight": w, "dual_to": vector_json(b)}
                         for g, w, b in zip(mm.generators, mm.weights, mm.generator_basis)]
    out["differential"] = {g: mm.differential[g] for g in mm.generators}
    out["order"] = mm.generators
    out["triangular"] = mm.triangular
    out["decomposable"] = mm.decomposable
    out["minimal"] = mm.minimal
    out["notes"] = mm.notes
    return out, EXIT_OK


def cmd_psi_test(cfg: RunConfig) -> tuple[dict, int]:
    pf = _load_valid(cfg)
    h = pf.presentation
    if cfg.samples < 1:
        raise UsageError("--samples must be at least 1")
    if cfg.max_degree < 0 or cfg.max_degree > h.n + 1:
        raise UsageError(f"--max-degree must lie in 0..{h.n + 1}")
    rep = verify_cochain_map(h, cfg.max_degree, cfg.samples, cfg.seed)
    out = _base(cfg, pf)
    out.update({"seed": cfg.seed, "max_degree": cfg.max_degree, "samples": cfg.samples})
    out["degrees"] = [
        {"degree": d.degree, "samples": 0 if d.skipped else d.samples, "failures": d.checks,
         "skipped": d.skipped or None, "counterexamples": d.counterexamples}
        for d in rep.degrees
    ]
    out["counterexamples"] = rep.counterexample_count
    out["verdict"] = "PASS" if rep.ok else "FAIL"
    return out, EXIT_OK if rep.ok else EXIT_FAIL


def cmd_lefschetz(cfg: RunConfig) -> tuple[dict, int]:
    pf = _load_valid(cfg)
    h = pf.presentation
    if not _trivial_module(pf):
        raise UsageError("lefschetz needs a presentation with the trivial module")
    if h.n % 2:
        raise OddDimension(f"dim u = {h.n} is odd")
    cx = complex_from_presentation(h)
    co = cohomology(cx)
    out = _base(cfg, pf)
    out["betti"] = list(co.betti)
    out["search"] = {"seed": cfg.seed, "height": cfg.height, "draws": cfg.draws}
    cert = find_symplectic(cx, seed=cfg.seed, height=cfg.height, draws=cfg.draws)
    if cert is None:
        out["certificate"] = None
        out["verdict"] = "NO_FORM_FOUND"
        out["note"] = "the search found no nondegenerate closed invariant 2-form; this does not prove none exists"
        return out, EXIT_NO_FORM
    hard_lefschetz_check(cert, co)
    out["certificate"] = {
        "omega": format_cochain(h.n, 2, cert.omega, h.u_names),
        "omega_coefficients": vector_json(cert.omega),
        "half_dim": cert.half_dim,
        "top_coefficient": rational_str(cert.top_coefficient),
        "denominator": cert.denominator,
        "found_by": cert.found_by,
        "levels": [
            {"k": lv.k, "from_degree": lv.source_degree, "to_degree": lv.target_degree,
             "matrix": matrix_json(lv.matrix) if lv.matrix.rows and lv.matrix.cols else [],
             "shape": [lv.matrix.rows, lv.matrix.cols], "rank": lv.rank, "pairing_rank": lv.pairing_rank,
             "isomorphism": lv.isomorphism}
            for lv in cert.levels
        ],
    }
    bad = [lv.k for lv in cert.levels if not lv.isomorphism]
    out["failing_levels"] = bad
    out["verdict"] = "HLP_VERIFIED" if cert.hlp else "HLP_FAILS"
    return out, EXIT_OK if cert.hlp else EXIT_HLP_FAILS


HANDLERS = {
    "check": cmd_check,
    "betti": cmd_betti,
    "minimal-model": cmd_minimal_model,
    "psi-test": cmd_psi_test,
    "lefschetz": cmd_lefschetz,
}


def run(cfg: RunConfig) -> tuple[dict, int]:
    """Execute one command; errors become reports with exit code 2."""
    try:
        return HANDLERS[cfg.command](cfg)
    except ParseError as e:
        out = _base(cfg, None)
        out["error"] = {"kind": "parse", "message": str(e), "field": e.path or None,
                        "line": e.line, "column": e.column}
    except (InvalidPresentation, OddDimension, NotEquivariant, UsageError) as e:
        out = _base(cfg, None)
        out["error"] = {"kind": type(e).__name__, "message": str(e)}
    return out, EXIT_INVALID


# -- rendering ------------------------------------------------------------------

def render_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def _md(value, indent: int = 0) -> list:
    pad = "  " * indent
    lines = []
    if isinstance(value, dict):
        for k in sorted(value):
            v = value[k]
            if isinstance(v, (dict, list)) and v and not _flat_list(v):
                lines.append(f"{pad}- **{k}**:")
                lines.extend(_md(v, indent + 1))
            else:
                lines.append(f"{pad}- **{k}**: {_scalar(v)}")
    elif isinstance(value, list):
        for i, v in enumerate(value):
            if isinstance(v, (dict, list)) and v and not _flat_list(v):
                lines.append(f"{pad}- [{i}]")
                lines.extend(_md(v, indent + 1))
            else:
                lines.append(f"{pad}- {_scalar(v)}")
    else:
        lines.append(f"{pad}- {_scalar(value)}")
    return lines


def _flat_list(v) -> bool:
    return isinstance(v, list) and all(not isinstance(x, (dict, list)) for x in v)


def _scalar(v) -> str:
    if v is None:
        return "none"
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, list):
        return "(" + ", ".join(_scalar(x) for x in v) + ")" if v else "()"
    if isinstance(v, dict):
        return "{}"
    return str(v)


def render_markdown(report: dict) -> str:
    title = f"# hullcoh {report.get('command')}: {report.get('presentation') or report.get('input')}"
    return "\n".join([title, ""] + _md(report)) + "\n"


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hullcoh", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--input", "-i", required=True, help="presentation JSON file")
    p.add_argument("--max-degree", type=int, default=3, help="psi-test: highest cochain degree")
    p.add_argument("--samples", type=int, default=100, help="psi-test: random tuples per degree")
    p.add_argument("--seed", type=int, default=0, help="seed for every random choice")
    p.add_argument("--height", type=int, default=8, help="lefschetz: height bound of random coefficients")
    p.add_argument("--draws", type=int, default=1000, help="lefschetz: number of random draws")
    p.add_argument("--format", choices=("json", "markdown"), default="json")
    p.add_argument("--version", action="version", version=f"hullcoh {__version__}")
    return p


def main(argv: list | None = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(args.command, args.input, args.max_degree, args.samples, args.seed,
                    args.height, args.draws, args.format)
    report, code = run(cfg)
    text = render_json(report) if cfg.format == "json" else render_markdown(report)
    sys.stdout.write(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
