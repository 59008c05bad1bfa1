"""Command-line interface.

    schmidtcorr analyze DIST_CSV AXES_JSON [--modes-dir DIR]
    schmidtcorr gaussian COV_CSV -p P [--modes-dir DIR]
    schmidtcorr photon --mu MU --a A --p P [--sweep SPEC]

Global flags (``--out``, ``--top-modes``, ``--grid``, ``--range``,
``--deterministic``, ``--tail``) may appear before or after the command.

Exit status: 0 on success, 2 for unreadable or invalid input, 3 when the
input is well formed but numerically degenerate.
"""

import argparse
import datetime
import logging
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .distributions import GridAxis, JointDistribution2D, embed_amplitude, pearson_correlation
from .errors import DomainError, InvalidInputError
from .gaussian import (
    GaussianSpec,
    decompose_gaussian,
    default_axes,
    enumerate_mode_weights,
    multiple_correlation_det,
    multivariate_schmidt_modes,
)
from .io import (
    ReportDocument,
    format_float,
    mode_to_csv,
    read_axes_json,
    read_matrix_csv,
    sweep_to_csv,
    write_atomic,
)
from .photon import (
    DEFAULT_TAIL,
    SWEEP_COLUMNS,
    BeamSplitterParams,
    CompoundPoissonParams,
    SweepSpec,
    beam_split,
    choose_truncation,
    compound_poisson_pmf,
    correlation_sweep,
    pearson_closed_form,
)
from .schmidt import schmidt_decompose

log = logging.getLogger("schmidtcorr")

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_DOMAIN = 3


def parse_values(text):
    """Parse ``v1,v2,...``, ``log:start:stop:n`` or ``lin:start:stop:n``."""
    text = text.strip()
    try:
        if text.startswith(("log:", "lin:")):
            kind, start, stop, n = text.split(":")
            start, stop, n = float(start), float(stop), int(n)
            if n < 1:
                raise ValueError
            if kind == "log":
                if start <= 0 or stop <= 0:
                    raise ValueError
                return tuple(np.logspace(np.log10(start), np.log10(stop), n).tolist())
            return tuple(np.linspace(start, stop, n).tolist())
        return tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise InvalidInputError(f"cannot parse value list {text!r}") from None


def parse_sweep(text, args):
    """Parse a sweep description such as ``a=log:0.1:10:20;mu=7``.

    Missing keys fall back to the single-point ``--a`` / ``--mu`` values.
    """
    fields = {}
    for part in text.split(";"):
        if not part.strip():
            continue
        key, sep, value = part.partition("=")
        key = key.strip()
        if not sep or key not in ("a", "mu"):
            raise InvalidInputError(f"bad sweep item {part!r}; expected a=... or mu=...")
        fields[key] = parse_values(value)
    for key in ("a", "mu"):
        if key not in fields:
            single = getattr(args, key)
            if single is None:
                raise InvalidInputError(f"sweep needs {key}= values or --{key}")
            fields[key] = (single,)
    return SweepSpec(fields["a"], fields["mu"], args.p, args.tail)


def _metadata(args):
    if args.deterministic:
        return None
    return {
        "tool": "schmidtcorr",
        "version": __version__,
        "generated_at": datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds"),
        "argv": sys.argv[1:],
    }


def _emit(args, text):
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        write_atomic(args.out, text)


def _axis_labels(axes, default):
    return [getattr(ax, "label", f"{default}{i + 1}") for i, ax in enumerate(axes)]


def cmd_analyze(args):
    mass = read_matrix_csv(args.dist_csv)
    axis_a, axis_b = read_axes_json(args.axes_json)
    dist = JointDistribution2D.from_mass(mass, axis_a, axis_b)
    spectrum, modes = schmidt_decompose(embed_amplitude(dist))
    warnings = []
    try:
        pearson = pearson_correlation(dist)
    except DomainError as exc:
        pearson = None
        warnings.append(str(exc))
    top = min(args.top_modes, spectrum.rank)
    written = []
    if args.modes_dir:
        for k in range(top):
            for side, axis, vec in (("a", axis_a, modes.modes_a), ("b", axis_b, modes.modes_b)):
                path = Path(args.modes_dir) / f"mode_{side}_{k}.csv"
                write_atomic(path, mode_to_csv([axis.centers], axis.to_continuous(vec[:, k]), ["center"]))
                written.append(path)
    doc = ReportDocument(
        analysis_kind="distribution",
        inputs_echo={
            "dist_csv": str(args.dist_csv),
            "axes": [axis_a.to_json(), axis_b.to_json()],
            "shape": list(mass.shape),
            "input_total_mass": float(mass.sum()),
        },
        schmidt_number=spectrum.schmidt_number,
        correlation_sq=spectrum.correlation_sq,
        pearson=pearson,
        weights=spectrum.weights[: args.top_modes].tolist(),
        extra={"rank": spectrum.rank, "tail_mass": spectrum.tail_mass},
        modes_written_to=written,
        warnings=warnings,
        metadata=_metadata(args),
    )
    _emit(args, doc.to_json())


def cmd_gaussian(args):
    cov = read_matrix_csv(args.cov_csv)
    spec = GaussianSpec(cov, args.partition)
    decomp = decompose_gaussian(spec)
    det_corr = multiple_correlation_det(spec)
    top = enumerate_mode_weights(decomp, args.top_modes)
    warnings = []
    if abs(det_corr - decomp.correlation_sq) > 1e-9:
        warnings.append(
            f"Schmidt and determinant multiple correlations differ by {abs(det_corr - decomp.correlation_sq):.3e}"
        )
    written = []
    if args.modes_dir:
        axes = default_axes(spec, args.grid, args.range)
        p0 = spec.partition_p
        for idx, _ in top:
            mode_a, mode_b = multivariate_schmidt_modes(spec, idx, axes, decomp)
            tag = "_".join(str(n) for n in idx) or "0"
            for side, sub_axes, mode in (("a", axes[:p0], mode_a), ("b", axes[p0:], mode_b)):
                cell = float(np.prod([ax.width for ax in sub_axes]))
                path = Path(args.modes_dir) / f"mode_{side}_{tag}.csv"
                text = mode_to_csv([ax.centers for ax in sub_axes], mode / np.sqrt(cell), _axis_labels(sub_axes, "x"))
                write_atomic(path, text)
                written.append(path)
    doc = ReportDocument(
        analysis_kind="gaussian",
        inputs_echo={
            "cov_csv": str(args.cov_csv),
            "dimension": spec.dimension,
            "partition_p": spec.partition_p,
            "partition_q": spec.partition_q,
            "swapped": spec.swapped,
        },
        schmidt_number=decomp.total_K,
        correlation_sq=decomp.correlation_sq,
        pearson=None,
        weights=[w for _, w in top],
        extra={
            "mode_indices": [list(idx) for idx, _ in top],
            "canonical_correlations": [pair.rho for pair in decomp.pairs],
            "partial_K": [pair.partial_K for pair in decomp.pairs],
            "correlation_sq_schmidt": decomp.correlation_sq,
            "correlation_sq_det": det_corr,
        },
        modes_written_to=written,
        warnings=warnings,
        metadata=_metadata(args),
    )
    _emit(args, doc.to_json())


def cmd_photon(args):
    BeamSplitterParams(args.p)
    if args.sweep:
        spec = parse_sweep(args.sweep, args)
        rows = correlation_sweep(spec, max_workers=args.workers)
        for row in rows:
            if row.error:
                print(f"warning: a={format_float(row.a)} mu={format_float(row.mu)}: {row.error}", file=sys.stderr)
        _emit(args, sweep_to_csv(rows, SWEEP_COLUMNS))
        return
    if args.mu is None or args.a is None:
        raise InvalidInputError("single-point mode needs --mu and --a (or use --sweep)")
    params = CompoundPoissonParams(args.mu, args.a)
    splitter = BeamSplitterParams(args.p)
    k_max = choose_truncation(params, args.tail)
    joint = beam_split(compound_poisson_pmf(params, k_max), splitter)
    spectrum, _ = schmidt_decompose(embed_amplitude(joint))
    doc = ReportDocument(
        analysis_kind="photon",
        inputs_echo={"mu": params.mu, "a": params.a, "p": splitter.p, "tail": args.tail},
        schmidt_number=spectrum.schmidt_number,
        correlation_sq=spectrum.correlation_sq,
        pearson=pearson_correlation(joint),
        weights=spectrum.weights[: args.top_modes].tolist(),
        extra={
            "pearson_closed_form": pearson_closed_form(params, splitter),
            "k_max": k_max,
            "kept_mass": joint.total_mass,
        },
        metadata=_metadata(args),
    )
    _emit(args, doc.to_json())


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _add_global_flags(parser, suppress):
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--out", default=d("-"), help="output file (default: stdout)")
    parser.add_argument("--top-modes", type=_positive_int, default=d(5), help="number of modes/weights to report")
    parser.add_argument("--grid", type=_positive_int, default=d(512), help="cells per axis for sampled modes")
    parser.add_argument("--range", type=float, default=d(6.0), help="half-width of sampled axes in sigmas")
    parser.add_argument("--deterministic", action="store_true", default=d(False), help="omit the metadata block")
    parser.add_argument("--tail", type=float, default=d(DEFAULT_TAIL), help="photon-number truncation tail mass")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="schmidtcorr",
        description="Schmidt-decomposition correlation analysis of probability distributions.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _add_global_flags(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _add_global_flags(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common], help="decompose a gridded joint distribution")
    p.add_argument("dist_csv", help="mass matrix CSV (rows: axis A cells, columns: axis B cells)")
    p.add_argument("axes_json", help="axis sidecar JSON")
    p.add_argument("--modes-dir", help="write per-mode CSV files here")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("gaussian", parents=[common], help="analytic decomposition of a Gaussian state")
    p.add_argument("cov_csv", help="covariance or correlation matrix CSV")
    p.add_argument("-p", "--partition", type=_positive_int, required=True,
                   help="number of leading variables forming subsystem A")
    p.add_argument("--modes-dir", help="write sampled mode surfaces here")
    p.set_defaults(func=cmd_gaussian)

    p = sub.add_parser("photon", parents=[common], help="compound-Poisson beam through a beam splitter")
    p.add_argument("--mu", type=float, help="mean photon number")
    p.add_argument("--a", type=float, help="clusterization parameter")
    p.add_argument("--p", type=float, required=True, help="transmission probability")
    p.add_argument("--sweep", help="sweep over a and/or mu, e.g. 'a=log:0.1:10:20;mu=7'")
    p.add_argument("--workers", type=int, default=None, help="threads for sweep evaluation")
    p.set_defaults(func=cmd_photon)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        args.func(args)
    except InvalidInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
