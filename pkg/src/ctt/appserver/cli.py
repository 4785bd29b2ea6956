"""The ctt command line: build, eval, serve."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from ctt.config import load_config
from ctt.appserver.pipeline import StageError, persist_build, run_pipeline
from ctt.evalkit.report import (
    evaluate_all,
    load_ground_truth,
    reports_to_tsv,
)
from ctt.mapstore.canonical import map_hash
from ctt.mapstore.store import MapStore


def cli_build(config_path: Path) -> int:
    try:
        config = load_config(config_path)
    except (OSError, ValueError) as exc:
        print(f"error: [config] {exc}", file=sys.stderr)
        return 2
    try:
        result = run_pipeline(config)
    except StageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    store = MapStore(Path(config.store_dir))
    persist_build(result, store)
    print(
        f"built {result.map.video_id}: "
        f"{len(result.map.propositions)} propositions, "
        f"{len(result.map.concepts)} concepts, "
        f"{len(result.map.relations)} relations"
    )
    print(f"map sha256 {map_hash(result.map)}")
    return 0


def cli_eval(gt_dir: Path, pred_dir: Path, out_json: Path | None) -> int:
    from ctt.appserver.api import _outputs_from_json

    store = MapStore(pred_dir)
    all_reports = {}
    for gt_path in sorted(gt_dir.glob("*.json")):
        gt = load_ground_truth(gt_path)
        pred_raw = store.read_artifact(gt.video_id, "predictions.json")
        if pred_raw is None:
            print(f"warning: no predictions for {gt.video_id}", file=sys.stderr)
            continue
        outputs = _outputs_from_json(json.loads(pred_raw), store, gt.video_id)
        reports = evaluate_all(outputs, gt)
        all_reports[gt.video_id] = [r.to_dict() for r in reports]
        print(f"== {gt.video_id}")
        print(reports_to_tsv(reports), end="")
    if out_json is not None:
        out_json.write_text(
            json.dumps(all_reports, sort_keys=True, indent=2), encoding="utf-8"
        )
    return 0 if all_reports else 1


def cli_serve(store_dir: Path, port: int, host: str) -> int:
    import uvicorn

    from ctt.appserver.api import create_app

    uvicorn.run(create_app(store_dir), host=host, port=port, log_level="info")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="ctt",
        description="Build, evaluate and serve lecture-video concept maps.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_build = sub.add_parser("build", help="run the pipeline from a config file")
    p_build.add_argument("-c", "--config", type=Path, required=True)

    p_eval = sub.add_parser("eval", help="score stored predictions against labels")
    p_eval.add_argument("--gt", type=Path, required=True, help="ground truth dir")
    p_eval.add_argument("--pred", type=Path, required=True, help="store dir")
    p_eval.add_argument("--out", type=Path, default=None, help="write JSON report")

    p_serve = sub.add_parser("serve", help="serve the HTTP API over a store")
    p_serve.add_argument("--port", type=int, default=8571)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--store", type=Path, required=True)

    args = parser.parse_args(argv)
    if args.command == "build":
        return cli_build(args.config)
    if args.command == "eval":
        return cli_eval(args.gt, args.pred, args.out)
    if args.command == "serve":
        return cli_serve(args.store, args.port, args.host)
    return 2


if __name__ == "__main__":
    raise SystemExit(main())
