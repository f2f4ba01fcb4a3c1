"""Command-line interface: frame files, deterministic reports, exit codes.

Frame files are JSON documents: {"dim": n, "vectors": [[...], ...]} with an
optional "name". Reports go to stdout as canonical JSON (sorted keys, floats
printed with 17 significant digits) so that identical inputs always produce
byte-identical output; timing and other diagnostics go to stderr.

Exit codes: 0 for a positive verdict, 1 for a negative verdict, 2 for usage
or input errors, 3 for a failed premise (not a frame / pair not woven), 4
when the subset enumeration limit is exceeded.

Subset masks on the command line are binary numerals whose least-significant
bit is index 1: "100" selects {3}, "0011" selects {1, 2}.

The environment variable FRAMEWEAVE_TOL overrides the default tolerances as
two comma-separated reals: rank_rel,frame_rel.
"""

import argparse
import hashlib
import json
import os
import sys
import time
from dataclasses import dataclass

import numpy as np

from . import geometry, linalg, weaving
from .errors import (
    EnumerationLimitExceeded,
    FrameweaveError,
    NotAFrame,
    NotWovenPremise,
)
from .frames import (
    Closure,
    Frame,
    Scope,
    apply_frame_operator,
    apply_operator,
    canonical_dual,
    difference_family,
    linear_comb_family,
    optimal_bounds,
    profile_operator,
)
from .geometry import weaving_span_geometry
from .linalg import Tolerance
from .weaving import (
    IndexSubset,
    Problem,
    SubsetPolicy,
    certify_woven,
    certify_woven_sequences,
    check_corollary,
    check_norm_sum,
    check_perturbation,
    explore_problem,
)

EXIT_POSITIVE = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2
EXIT_PREMISE = 3
EXIT_LIMIT = 4

TOLERANCE_ENV_VAR = "FRAMEWEAVE_TOL"


class CliUsageError(Exception):
    """Bad arguments or unreadable/invalid input files (exit code 2)."""


# ---------------------------------------------------------------------------
# canonical serialization


def _format_float(value: float) -> str:
    if not np.isfinite(value):
        raise ValueError(f"cannot serialize non-finite value {value!r}")
    return format(value, ".17g")


def to_canonical_json(value, indent: int = 2, level: int = 0) -> str:
    """Deterministic JSON: sorted keys, floats at 17 significant digits."""
    pad = " " * (indent * level)
    inner = " " * (indent * (level + 1))
    if isinstance(value, dict):
        if not value:
            return "{}"
        parts = [
            f"{inner}{json.dumps(str(key))}: {to_canonical_json(value[key], indent, level + 1)}"
            for key in sorted(value)
        ]
        return "{\n" + ",\n".join(parts) + f"\n{pad}}}"
    if isinstance(value, (list, tuple)):
        if not len(value):
            return "[]"
        parts = [f"{inner}{to_canonical_json(item, indent, level + 1)}" for item in value]
        return "[\n" + ",\n".join(parts) + f"\n{pad}]"
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return _format_float(float(value))
    if value is None:
        return "null"
    if isinstance(value, str):
        return json.dumps(value, ensure_ascii=False)
    raise TypeError(f"cannot serialize value of type {type(value)!r}")


@dataclass(frozen=True)
class ReportEnvelope:
    """Machine-readable report: command, input digests, tolerances, payload.

    runtime_ms is measured per invocation and therefore printed to stderr
    only; the stdout serialization must stay deterministic.
    """

    command: str
    inputs: dict
    tolerances: Tolerance
    result: dict
    runtime_ms: float

    def to_text(self) -> str:
        payload = {
            "command": self.command,
            "inputs": self.inputs,
            "tolerances": {
                "rank_rel": self.tolerances.rank_rel,
                "frame_rel": self.tolerances.frame_rel,
            },
            "result": self.result,
        }
        return to_canonical_json(payload) + "\n"


def _emit(envelope: ReportEnvelope) -> None:
    sys.stdout.write(envelope.to_text())
    print(f"runtime_ms={envelope.runtime_ms:.3f}", file=sys.stderr)


# ---------------------------------------------------------------------------
# frame files


def load_frame_file(path: str) -> tuple[Frame, dict]:
    """Read a frame file; returns the Frame and an input descriptor with digest."""
    try:
        with open(path, "rb") as handle:
            raw = handle.read()
    except OSError as exc:
        raise CliUsageError(f"cannot read {path}: {exc}") from exc
    try:
        doc = json.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise CliUsageError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise CliUsageError(f"{path}: expected a JSON object with 'dim' and 'vectors'")
    dim = doc.get("dim")
    vectors = doc.get("vectors")
    name = doc.get("name")
    if not isinstance(dim, int) or dim < 1:
        raise CliUsageError(f"{path}: 'dim' must be a positive integer")
    if not isinstance(vectors, list) or not vectors:
        raise CliUsageError(f"{path}: 'vectors' must be a nonempty list of vectors")
    for row in vectors:
        if (
            not isinstance(row, list)
            or len(row) != dim
            or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in row)
        ):
            raise CliUsageError(f"{path}: every vector must be a list of {dim} numbers")
    if name is not None and not isinstance(name, str):
        raise CliUsageError(f"{path}: 'name' must be a string when present")
    try:
        frame = Frame(vectors)
    except FrameweaveError as exc:
        raise CliUsageError(f"{path}: {exc}") from exc
    descriptor = {"path": path, "sha256": hashlib.sha256(raw).hexdigest()}
    if name is not None:
        descriptor["name"] = name
    return frame, descriptor


def frame_file_text(frame: Frame, name: str | None = None) -> str:
    doc = {"dim": frame.ambient_dim, "vectors": [list(row) for row in frame.vectors]}
    if name is not None:
        doc["name"] = name
    return to_canonical_json(doc) + "\n"


def load_matrix_file(path: str) -> np.ndarray:
    try:
        with open(path, "rb") as handle:
            doc = json.loads(handle.read().decode("utf-8"))
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise CliUsageError(f"cannot read matrix file {path}: {exc}") from exc
    try:
        return linalg.as_matrix(doc, name=f"matrix in {path}")
    except (FrameweaveError, ValueError) as exc:
        raise CliUsageError(f"{path}: {exc}") from exc


def _tolerance_from_env() -> Tolerance:
    raw = os.environ.get(TOLERANCE_ENV_VAR)
    if raw is None:
        return Tolerance()
    parts = raw.split(",")
    if len(parts) != 2:
        raise CliUsageError(f"{TOLERANCE_ENV_VAR} must be 'rank_rel,frame_rel', got {raw!r}")
    try:
        return Tolerance(rank_rel=float(parts[0]), frame_rel=float(parts[1]))
    except ValueError as exc:
        raise CliUsageError(f"invalid {TOLERANCE_ENV_VAR}: {exc}") from exc


# ---------------------------------------------------------------------------
# payload helpers


def _subset_payload(subset: IndexSubset) -> dict:
    return {"mask": subset.mask, "bits": subset.bits, "members": list(subset.members)}


def _woven_payload(report) -> dict:
    return {
        "woven": report.woven,
        "universal_lower": report.universal_lower,
        "universal_upper": report.universal_upper,
        "worst_subset": _subset_payload(report.worst_subset),
        "breaking_subset": (
            _subset_payload(report.breaking_subset) if report.breaking_subset else None
        ),
        "subsets_examined": report.subsets_examined,
        "subset_policy": report.subset_policy.value,
    }


def _condition_payload(report) -> dict:
    return {
        "condition_holds": report.condition_holds,
        "lhs": report.lhs,
        "rhs": report.rhs,
        "guaranteed_lower": report.guaranteed_lower,
        "guaranteed_upper": report.guaranteed_upper,
        "note": report.note,
    }


def _geometry_payload(report) -> dict:
    return {
        "directed_gap_ab": report.directed_gap_ab,
        "directed_gap_ba": report.directed_gap_ba,
        "gap": report.gap,
        "min_angle_cos": report.min_angle_cos,
        "angle_cos": report.angle_cos,
    }


def _parse_sigma(text: str, m: int) -> IndexSubset:
    try:
        mask = int(text, 2)
    except ValueError as exc:
        raise CliUsageError(f"sigma must be a binary mask string, got {text!r}") from exc
    if not 0 <= mask < (1 << m):
        raise CliUsageError(f"sigma mask {text!r} is out of range for {m} vectors")
    return IndexSubset(m, mask)


# ---------------------------------------------------------------------------
# subcommands


def _cmd_bounds(args, tol: Tolerance) -> int:
    frame, descriptor = load_frame_file(args.frame)
    start = time.perf_counter()
    scope = Scope.SPAN_OF_FAMILY if args.span else Scope.AMBIENT
    bounds = optimal_bounds(frame, scope, tol)
    runtime = (time.perf_counter() - start) * 1000.0
    result = {
        "lower": bounds.lower,
        "upper": bounds.upper,
        "relative_to": bounds.relative_to.value,
    }
    _emit(ReportEnvelope("bounds", {"frame": descriptor}, tol, result, runtime))
    return EXIT_POSITIVE


def _cmd_woven(args, tol: Tolerance) -> int:
    frame_f, desc_f = load_frame_file(args.frame_f)
    frame_g, desc_g = load_frame_file(args.frame_g)
    start = time.perf_counter()
    if args.sequences:
        report = certify_woven_sequences(frame_f, frame_g, tol, limit=args.limit, jobs=args.jobs)
    else:
        policy = SubsetPolicy.NONTRIVIAL_ONLY if args.policy == "nontrivial" else SubsetPolicy.ALL
        report = certify_woven(frame_f, frame_g, policy, tol, limit=args.limit, jobs=args.jobs)
    result = _woven_payload(report)
    if args.sequences:
        # Transparency: how the verdict would read with trivial subsets included.
        all_report = certify_woven(
            frame_f, frame_g, SubsetPolicy.ALL, tol, limit=args.limit, jobs=args.jobs
        )
        result["all_subsets_woven"] = all_report.woven
    runtime = (time.perf_counter() - start) * 1000.0
    _emit(ReportEnvelope("woven", {"f": desc_f, "g": desc_g}, tol, result, runtime))
    return EXIT_POSITIVE if report.woven else EXIT_NEGATIVE


def _cmd_check(args, tol: Tolerance) -> int:
    wanted = 3 if args.condition == "perturb" else 2
    if len(args.frames) != wanted:
        raise CliUsageError(f"check {args.condition} needs exactly {wanted} frame files")
    loaded = [load_frame_file(path) for path in args.frames]
    inputs = {"condition": args.condition}
    for key, (_, descriptor) in zip(("f", "g", "h"), loaded):
        inputs[key] = descriptor
    start = time.perf_counter()
    if args.condition == "perturb":
        report = check_perturbation(loaded[0][0], loaded[1][0], loaded[2][0], tol)
    elif args.condition == "corollary":
        report = check_corollary(loaded[0][0], loaded[1][0], tol)
    else:
        report = check_norm_sum(loaded[0][0], loaded[1][0], tol)
    runtime = (time.perf_counter() - start) * 1000.0
    _emit(ReportEnvelope("check", inputs, tol, _condition_payload(report), runtime))
    return EXIT_POSITIVE if report.condition_holds else EXIT_NEGATIVE


def _cmd_geometry(args, tol: Tolerance) -> int:
    frame_a, desc_a = load_frame_file(args.file_a)
    frame_b, desc_b = load_frame_file(args.file_b)
    start = time.perf_counter()
    if args.sigma is not None:
        sigma = _parse_sigma(args.sigma, len(frame_a))
        report = weaving_span_geometry(frame_a, frame_b, sigma, tol)
        inputs = {
            "f": desc_a,
            "g": desc_b,
            "sigma": {"mask": sigma.mask, "bits": sigma.bits, "m": sigma.m},
        }
    else:
        first = linalg.orthonormal_basis(frame_a.vectors.T, tol)
        second = linalg.orthonormal_basis(frame_b.vectors.T, tol)
        report = geometry.gap_angle_report(first, second, tol)
        inputs = {"a": desc_a, "b": desc_b}
    runtime = (time.perf_counter() - start) * 1000.0
    _emit(ReportEnvelope("geometry", inputs, tol, _geometry_payload(report), runtime))
    return EXIT_POSITIVE


def _closure_from_arg(text: str) -> Closure:
    return Closure.WRAP_AROUND if text == "wrap" else Closure.ZERO_TAIL


def _cmd_construct(args, tol: Tolerance) -> int:
    frame, descriptor = load_frame_file(args.frame)
    if args.kind == "diff":
        built = difference_family(frame, _closure_from_arg(args.closure))
    elif args.kind == "lincomb":
        if args.alpha is None or args.beta is None:
            raise CliUsageError("construct lincomb requires --alpha and --beta")
        built = linear_comb_family(frame, args.alpha, args.beta, _closure_from_arg(args.closure))
    elif args.kind == "dual":
        built = canonical_dual(frame, tol)
    elif args.kind == "frameop":
        built = apply_frame_operator(frame)
    else:
        if args.matrix is None:
            raise CliUsageError("construct operator requires --matrix")
        built = apply_operator(profile_operator(load_matrix_file(args.matrix), tol), frame)
    base_name = args.name
    if base_name is None and "name" in descriptor:
        base_name = f"{args.kind}({descriptor['name']})"
    text = frame_file_text(built, base_name)
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8") as handle:
                handle.write(text)
        except OSError as exc:
            raise CliUsageError(f"cannot write {args.out}: {exc}") from exc
    else:
        sys.stdout.write(text)
    return EXIT_POSITIVE


def _cmd_explore(args, tol: Tolerance) -> int:
    which = Problem.FRAME_OPERATOR_IMAGE if args.problem == 1 else Problem.CANONICAL_DUAL
    inputs = {
        "problem": args.problem,
        "trials": args.trials,
        "ambient_dim": args.dim,
        "family_size": args.count,
        "seed": args.seed,
    }
    start = time.perf_counter()
    report = explore_problem(which, args.trials, (args.dim, args.count), args.seed, tol)
    runtime = (time.perf_counter() - start) * 1000.0
    counter_payload = None
    if report.counterexample is not None:
        counter_payload = {
            "trial_index": report.counterexample.trial_index,
            "frame": [list(row) for row in report.counterexample.frame_vectors],
            "partner": [list(row) for row in report.counterexample.partner_vectors],
            "breaking_subset": _subset_payload(report.counterexample.breaking_subset),
        }
    result = {
        "woven_count": report.woven_count,
        "not_woven_count": report.not_woven_count,
        "min_universal_lower": report.min_universal_lower,
        "counterexample": counter_payload,
    }
    _emit(ReportEnvelope("explore", inputs, tol, result, runtime))
    return EXIT_POSITIVE


# ---------------------------------------------------------------------------
# parser and dispatch


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="frameweave",
        description="Certify woven-ness of finite frames and compute frame/subspace geometry.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p_bounds = sub.add_parser("bounds", help="optimal frame bounds of a family")
    p_bounds.add_argument("frame", help="frame file (JSON)")
    p_bounds.add_argument(
        "--span", action="store_true", help="bounds relative to the family's span"
    )
    p_bounds.set_defaults(handler=_cmd_bounds)

    p_woven = sub.add_parser("woven", help="exhaustive woven certification of two families")
    p_woven.add_argument("frame_f", help="first frame file")
    p_woven.add_argument("frame_g", help="second frame file")
    p_woven.add_argument(
        "--sequences",
        action="store_true",
        help="treat the inputs as frame sequences (nontrivial subsets only)",
    )
    p_woven.add_argument("--policy", choices=["all", "nontrivial"], default="all")
    p_woven.add_argument("--limit", type=int, default=weaving.DEFAULT_ENUMERATION_LIMIT)
    p_woven.add_argument("--jobs", type=int, default=1)
    p_woven.set_defaults(handler=_cmd_woven)

    p_check = sub.add_parser("check", help="sufficient conditions for woven-ness")
    p_check.add_argument("condition", choices=["perturb", "corollary", "normsum"])
    p_check.add_argument("frames", nargs="+", help="frame files (3 for perturb, else 2)")
    p_check.set_defaults(handler=_cmd_check)

    p_geo = sub.add_parser("geometry", help="gap and angle between subspaces or weaving spans")
    p_geo.add_argument("file_a", help="first frame file (spanning family)")
    p_geo.add_argument("file_b", help="second frame file (spanning family)")
    p_geo.add_argument(
        "--sigma",
        help="binary subset mask (LSB is index 1); compares the two weaving spans",
    )
    p_geo.set_defaults(handler=_cmd_geometry)

    p_con = sub.add_parser("construct", help="derive a new family from a frame file")
    p_con.add_argument("kind", choices=["diff", "lincomb", "dual", "frameop", "operator"])
    p_con.add_argument("frame", help="source frame file")
    p_con.add_argument("--closure", choices=["zero", "wrap"], default="zero")
    p_con.add_argument("--alpha", type=float)
    p_con.add_argument("--beta", type=float)
    p_con.add_argument("--matrix", help="JSON file holding a square matrix (list of rows)")
    p_con.add_argument("--out", help="write the frame file here instead of stdout")
    p_con.add_argument("--name", help="name recorded in the output frame file")
    p_con.set_defaults(handler=_cmd_construct)

    p_exp = sub.add_parser("explore", help="randomized search pairing frames with images/duals")
    p_exp.add_argument("problem", type=int, choices=[1, 2])
    p_exp.add_argument("--trials", type=int, default=100)
    p_exp.add_argument("--dim", type=int, default=2, help="ambient dimension n")
    p_exp.add_argument("--count", type=int, default=3, help="vectors per frame m")
    p_exp.add_argument("--seed", type=int, default=0)
    p_exp.set_defaults(handler=_cmd_explore)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        tol = _tolerance_from_env()
        return args.handler(args, tol)
    except CliUsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NotAFrame, NotWovenPremise) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PREMISE
    except EnumerationLimitExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except (FrameweaveError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
