"""Command line entry point ``isub``.

Subcommands: ``ingest``, ``synth``, ``run``, ``metrics`` and ``compare``.
Exit codes are 0 on success, 2 for configuration errors, 3 for data errors
and 4 for any other pipeline failure.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .compare import compare_histograms
from .errors import ConfigError, DataError, GraphError, PatternSyntaxError
from .graph import ingest_tweets, read_jsonl
from .metrics import compute_metrics
from .pipeline import (EXIT_CONFIG, EXIT_DATA, EXIT_OK, EXIT_PIPELINE, PipelineConfig,
                       PipelineError, build_candidates, graph_summary, run_pipeline)
from .synth import SynthSpec, synth_generate

logger = logging.getLogger("interesting_subgraphs")


def _load_config(args, out_dir=True) -> PipelineConfig:
    if not args.config:
        raise ConfigError("--config is required")
    cfg = PipelineConfig.load(args.config)
    if args.seed is not None:
        cfg.seed = args.seed
    if out_dir and args.out:
        cfg.out = args.out
    cfg.__post_init__()
    return cfg


def cmd_ingest(args) -> int:
    g = ingest_tweets(read_jsonl(args.input))
    summary = graph_summary(g)
    if args.out:
        g.save(args.out)
        summary["snapshot"] = str(args.out)
    print(json.dumps(summary, indent=1, sort_keys=True))
    return EXIT_OK


def cmd_synth(args) -> int:
    spec = SynthSpec.load(args.config) if args.config else SynthSpec()
    if args.seed is not None:
        spec.seed = args.seed
    out = Path(args.out or "synth.jsonl")
    synth_generate(spec, out)
    print(out)
    return EXIT_OK


def cmd_run(args) -> int:
    cfg = _load_config(args)
    path = run_pipeline(cfg)
    report = json.loads(path.read_text())
    print(f"report: {path}")
    for item in report["interesting"]:
        print(f"interesting {item['cid']} {json.dumps(item['group_key'], sort_keys=True)}")
    return EXIT_OK


def cmd_metrics(args) -> int:
    cfg = _load_config(args, out_dir=False)
    _, _, candidates, _, stopwords = build_candidates(cfg)
    if args.candidate:
        chosen = [c for c in candidates if c.cid == args.candidate]
        if not chosen:
            raise DataError(f"no surviving candidate {args.candidate!r}; "
                            f"available: {', '.join(c.cid for c in candidates)}")
        c = chosen[0]
    else:
        c = candidates[0]
    bundle = compute_metrics(c, stopwords)
    body = {"cid": c.cid, **c.provenance, "summary": bundle.summary(),
            "metrics": bundle.to_dict()}
    text = json.dumps(body, indent=1, sort_keys=True)
    if args.out:
        Path(args.out).write_text(text)
        print(args.out)
    else:
        print(text)
    return EXIT_OK


def _read_values(path) -> list[float]:
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError:
        data = text.split()
    if isinstance(data, dict):
        data = list(data.values())
    try:
        return [float(v) for v in data]
    except (TypeError, ValueError):
        raise DataError(f"{path}: expected numbers (JSON list or whitespace separated)") from None


def cmd_compare(args) -> int:
    cand, ref = _read_values(args.candidate), _read_values(args.reference)
    if not cand or not ref:
        raise DataError("both value files must be non-empty")
    value, (hc, hr), _ = compare_histograms(cand, ref, args.bins)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        hc.to_csv(out / "candidate.csv")
        hr.to_csv(out / "reference.csv")
    print(json.dumps({"jsd": value, "candidate": hc.to_dict(), "reference": hr.to_dict()},
                     sort_keys=True))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="isub",
                                description="Discover interesting subgraphs of a tweet graph.")
    p.add_argument("-v", "--verbose", action="count", default=0)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("ingest", help="build the property graph from a JSONL file")
    s.add_argument("input")
    s.add_argument("--out", help="write a JSON snapshot of the graph")
    s.set_defaults(func=cmd_ingest)

    s = sub.add_parser("synth", help="write a synthetic JSONL corpus")
    s.add_argument("--config", help="JSON synth spec")
    s.add_argument("--seed", type=int)
    s.add_argument("--out", help="output JSONL path (default synth.jsonl)")
    s.set_defaults(func=cmd_synth)

    s = sub.add_parser("run", help="run the full pipeline")
    s.add_argument("--config", required=True)
    s.add_argument("--seed", type=int)
    s.add_argument("--out", help="output directory (overrides the config)")
    s.set_defaults(func=cmd_run)

    s = sub.add_parser("metrics", help="metrics of one candidate")
    s.add_argument("--config", required=True)
    s.add_argument("--seed", type=int)
    s.add_argument("--candidate", help="candidate id (default: the first survivor)")
    s.add_argument("--out", help="write JSON here instead of stdout")
    s.set_defaults(func=cmd_metrics)

    s = sub.add_parser("compare", help="JSD of two value files on reference bins")
    s.add_argument("candidate")
    s.add_argument("reference")
    s.add_argument("--bins", type=int, default=20)
    s.add_argument("--out", help="directory for the two histogram CSVs")
    s.set_defaults(func=cmd_compare)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except PipelineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except (ConfigError, PatternSyntaxError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (DataError, OSError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (GraphError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PIPELINE


if __name__ == "__main__":
    sys.exit(main())
