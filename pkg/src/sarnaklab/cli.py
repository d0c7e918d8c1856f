"""Command-line front end.

Each command reads sequence files, runs one analysis and writes one
artifact.  Exit status: 0 on success, 2 on validation errors, 3 when a
quantity is undefined for the input.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import warnings
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

from . import __version__
from .criterion import chowla_correlation, criterion_scan, orthogonality_average
from .empirics import autocovariance, block_distribution, joint_block_distribution
from .exceptions import ComputationError, NotCenteredWarning, ValidationError
from .generators import (
    difference_indicator,
    doubling,
    gen_iid,
    gen_liouville,
    gen_rotation_coding,
    gen_skew_alternating,
    pointwise_product,
    skew_process,
)
from .infometrics import pinsker_bounds
from .report import emit_report
from .sequences import Alphabet, dumps_text, read_sequence, write_sequence

COMMANDS = ("generate", "blocks", "metrics", "criterion", "chowla", "ortho")
KINDS = ("liouville", "moebius", "iid", "rotation", "skew-alt", "skew-process",
         "doubling", "product", "diff")
GOLDEN_CONJUGATE = (5 ** 0.5 - 1) / 2

EXIT_OK, EXIT_VALIDATION, EXIT_COMPUTATION = 0, 2, 3


@dataclass
class RunConfig:
    command: str
    inputs: list = field(default_factory=list)
    output: str | None = None
    kind: str | None = None
    n: int | None = None
    seed: int = 0
    p: list | None = None
    alpha: float = GOLDEN_CONJUGATE
    x0: float = 0.0
    i0: int = 0
    g_list: list = field(default_factory=lambda: [1])
    m_max: int = 6
    m: int = 1
    lags: list = field(default_factory=lambda: [1])
    autocov: list = field(default_factory=list)
    eps: float = 0.05
    weighting: str = "cesaro"
    format: str = "json"
    threads: int = 1
    strict: bool = False

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValidationError(f"config: unknown keys {sorted(unknown)}")
        return cls(**data)

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def loads(cls, text: str) -> "RunConfig":
        return cls.from_dict(json.loads(text))

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise ValidationError(f"unknown command {self.command!r}")
        if self.command == "generate":
            if self.kind not in KINDS:
                raise ValidationError(f"generate: unknown --kind {self.kind!r}")
        elif not self.inputs:
            raise ValidationError(f"{self.command}: --in is required")
        if self.weighting not in ("cesaro", "log", "logarithmic"):
            raise ValidationError(f"unknown weighting {self.weighting!r}")
        if self.format not in ("json", "csv"):
            raise ValidationError(f"unknown format {self.format!r}")


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _float_list(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def default_threads() -> int:
    env = os.environ.get("SARNAKLAB_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sarnaklab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"sarnaklab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--in", dest="inputs", action="append", default=[],
                        help="input sequence file (repeat for commands taking two)")
    common.add_argument("--out", dest="output")
    common.add_argument("--weighting", choices=["cesaro", "log"], default="cesaro")
    common.add_argument("--format", choices=["json", "csv"], default="json")
    common.add_argument("--threads", type=int, default=None)
    common.add_argument("--strict", action="store_true",
                        help="treat warnings (e.g. an uncentered sequence) as errors")
    common.add_argument("--config", help="JSON run config; command-line flags are ignored")

    g = sub.add_parser("generate", parents=[common], help="write a sequence file")
    g.add_argument("--kind", choices=KINDS, required=False)
    g.add_argument("--n", type=int)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--p", type=_float_list, help="probabilities for --kind iid")
    g.add_argument("--alpha", type=float, default=GOLDEN_CONJUGATE)
    g.add_argument("--x0", type=float, default=0.0)
    g.add_argument("--i0", type=int, default=0)

    b = sub.add_parser("blocks", parents=[common], help="empirical m-block distribution")
    b.add_argument("--m", type=int, default=1)

    mt = sub.add_parser("metrics", parents=[common], help="autocovariances, block entropy, Pinsker bounds")
    mt.add_argument("--autocov", type=_int_list, default=[])
    mt.add_argument("--m", type=int, default=1)
    mt.add_argument("--g", dest="g_list", type=_int_list, default=[])

    c = sub.add_parser("criterion", parents=[common], help="scan eps_g totals over (g, m)")
    c.add_argument("--g", dest="g_list", type=_int_list, default=[1])
    c.add_argument("--mmax", dest="m_max", type=int, default=6)
    c.add_argument("--eps", type=float, default=0.05)

    ch = sub.add_parser("chowla", parents=[common], help="Chowla correlation at given lags")
    ch.add_argument("--lags", type=_int_list, default=[1])

    sub.add_parser("ortho", parents=[common], help="weighted inner product of two sequences")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    if args.config:
        cfg = RunConfig.loads(Path(args.config).read_text())
        if args.output:
            cfg.output = args.output
        return cfg
    values = {f.name: getattr(args, f.name) for f in fields(RunConfig) if hasattr(args, f.name)}
    values = {k: v for k, v in values.items() if v is not None}
    values["threads"] = args.threads if args.threads is not None else default_threads()
    return RunConfig(**values)


def _meta(cfg: RunConfig, n: int | None) -> dict:
    return {
        "tool": "sarnaklab",
        "version": __version__,
        "config": cfg.to_dict(),
        "seed": cfg.seed,
        "window_length": n,
        "weighting": cfg.weighting,
    }


def _weighting(cfg: RunConfig) -> str:
    return "logarithmic" if cfg.weighting in ("log", "logarithmic") else "cesaro"


def _generate(cfg: RunConfig):
    kind = cfg.kind
    needs_n = kind in ("liouville", "moebius", "iid", "rotation", "skew-alt")
    if needs_n and (cfg.n is None or cfg.n < 1):
        raise ValidationError(f"generate: --n must be >= 1 for --kind {kind}")
    if kind in ("liouville", "moebius"):
        return gen_liouville(cfg.n, kind, threads=cfg.threads)
    if kind == "iid":
        probs = cfg.p or [0.5, 0.5]
        alphabet = Alphabet.pm1() if len(probs) == 2 else Alphabet(tuple(range(len(probs))))
        return gen_iid(alphabet, probs, cfg.n, cfg.seed)
    if kind == "rotation":
        return gen_rotation_coding(cfg.alpha, cfg.x0, cfg.n)
    if kind == "skew-alt":
        return gen_skew_alternating(cfg.n, cfg.i0, cfg.seed)
    seqs = [read_sequence(p) for p in cfg.inputs]
    if kind == "doubling":
        _expect_inputs(seqs, 1, kind)
        return doubling(seqs[0])
    if kind == "diff":
        _expect_inputs(seqs, 1, kind)
        return difference_indicator(seqs[0])
    if kind == "product":
        _expect_inputs(seqs, 2, kind)
        return pointwise_product(seqs[0], seqs[1])
    if kind == "skew-process":
        _expect_inputs(seqs, 1, kind)
        y = seqs[0]
        x = gen_iid(Alphabet.pm1(), [0.5, 0.5], len(y) + 1, cfg.seed)
        return skew_process(x, y).x_prime
    raise ValidationError(f"generate: unknown --kind {kind!r}")


def _expect_inputs(seqs, count: int, kind: str) -> None:
    if len(seqs) != count:
        raise ValidationError(f"generate --kind {kind}: expected {count} --in file(s), got {len(seqs)}")


def _metrics(cfg: RunConfig, u) -> dict:
    w = _weighting(cfg)
    bundle: dict = {"n": len(u)}
    bundle["autocov"] = {str(lag): autocovariance(u, lag, w) for lag in cfg.autocov}
    if cfg.m <= len(u):
        dist = block_distribution(u, cfg.m, w)
        bundle["block_entropy"] = {"m": cfg.m, "bits": dist.entropy(), "distinct_blocks": int(dist.codes.size)}
    pinsker = {}
    for g in cfg.g_list:
        mat, _ = joint_block_distribution(u, g, cfg.m, w).matrix()
        pinsker[str(g)] = asdict(pinsker_bounds(mat))
    if pinsker:
        bundle["pinsker"] = pinsker
    bundle["caveat"] = "plug-in estimates; entropy bias of order (alphabet^m)/n is not corrected"
    return bundle


def _write(cfg: RunConfig, payload: bytes) -> None:
    if cfg.output:
        Path(cfg.output).write_bytes(payload)
    else:
        sys.stdout.buffer.write(payload)
        sys.stdout.flush()


def run(cfg: RunConfig) -> int:
    """Execute one command; returns the process exit status."""
    try:
        cfg.validate()
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            status = _dispatch(cfg)
        for wmsg in caught:
            print(f"warning: {wmsg.message}", file=sys.stderr)
        if cfg.strict and any(issubclass(wm.category, NotCenteredWarning) for wm in caught):
            print(f"error: {cfg.command}: sequence not centered (--strict)", file=sys.stderr)
            return EXIT_VALIDATION
        return status
    except ValidationError as exc:
        print(f"error: {cfg.command}: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except ComputationError as exc:
        print(f"error: {cfg.command}: {exc}", file=sys.stderr)
        return EXIT_COMPUTATION


def _dispatch(cfg: RunConfig) -> int:
    w = _weighting(cfg)
    if cfg.command == "generate":
        seq = _generate(cfg)
        meta = {**seq.meta, **_meta(cfg, len(seq))}
        if cfg.output:
            write_sequence(seq, cfg.output, meta)
        else:
            _write(cfg, dumps_text(seq, meta).encode())
        return EXIT_OK

    seqs = [read_sequence(p) for p in cfg.inputs]
    u = seqs[0]
    meta = _meta(cfg, len(u))
    if cfg.command == "blocks":
        dist = block_distribution(u, cfg.m, w)
        payload = json.loads(emit_report(dist.to_dict(), "json", meta))
        body = {**payload["results"], "meta": payload["meta"]}
        _write(cfg, (json.dumps(body, sort_keys=True, indent=1) + "\n").encode())
    elif cfg.command == "metrics":
        _write(cfg, emit_report(_metrics(cfg, u), cfg.format, meta))
    elif cfg.command == "criterion":
        report = criterion_scan(u, cfg.g_list, cfg.m_max, cfg.eps, w)
        _write(cfg, emit_report(report, cfg.format, meta))
    elif cfg.command == "chowla":
        value = chowla_correlation(u, cfg.lags, w)
        _write(cfg, emit_report({"lags": cfg.lags, "value": value, "n": len(u)}, cfg.format, meta))
    elif cfg.command == "ortho":
        if len(seqs) != 2:
            raise ValidationError("ortho: expected two --in files (sequence, observable)")
        value = orthogonality_average(u, seqs[1], w)
        _write(cfg, emit_report({"value": value, "n": len(u)}, cfg.format, meta))
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
    except (ValidationError, TypeError, OSError, json.JSONDecodeError) as exc:
        print(f"error: config: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
