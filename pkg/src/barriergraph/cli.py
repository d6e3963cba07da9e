"""Command line: build, verify, lip, report.

Exit codes: 0 pass, 1 check failure, 2 usage error, 3 resource guard.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from . import analysis, barrier_words as words, blowup, index_tree, ribbed, skeleton

log = logging.getLogger("barriergraph")

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_GUARD = 0, 1, 2, 3
OUT_ENV = "BARRIERGRAPH_OUT"
EXACT_SEARCH_MAX_VERTICES = 5000
FORMATS = ("json", "edgelist", "dot")
VERIFY_CHOICES = ("words", "skeleton", "ribbed", "degeneracy", "hamiltonian", "structure")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    tree: str
    ell: int
    m: Optional[int]
    alpha: float
    tree_file: Optional[Path]
    out: Path
    formats: tuple
    budget: int
    samples: int
    seed: int
    allow_large: bool
    threads: int

    def tree_description(self) -> str:
        return self.tree


def _parse_count(text: str) -> int:
    text = text.strip()
    if "^" in text:
        base, exp = text.split("^", 1)
        return int(base) ** int(exp)
    if "e" in text.lower():
        return int(float(text))
    return int(text)


def _config(args) -> RunConfig:
    family = args.tree
    if family == "unbalanced":
        if args.ell is not None:
            raise UsageError("the unbalanced family takes its size from --m; do not pass --ell")
        if args.m is None:
            raise UsageError("--tree unbalanced needs --m")
        ell = args.m
    elif family == "complete":
        if args.m is not None:
            raise UsageError("--m applies to --tree unbalanced only")
        if args.ell is None:
            raise UsageError("--tree complete needs --ell")
        ell = args.ell
    else:
        if args.tree_file is None:
            raise UsageError("--tree file needs --tree-file")
        ell = -1
    if family != "file" and ell < 1:
        raise UsageError("ell must be >= 1")
    if args.budget < 0:
        raise UsageError("--budget must be >= 0")
    formats = tuple(f.strip() for f in args.formats.split(",") if f.strip())
    for f in formats:
        if f not in FORMATS:
            raise UsageError(f"unknown export format {f!r}; choose from {', '.join(FORMATS)}")
    out = Path(args.out or os.environ.get(OUT_ENV, "barriergraph-out"))
    return RunConfig(
        tree=family,
        ell=ell,
        m=args.m,
        alpha=args.alpha,
        tree_file=Path(args.tree_file) if args.tree_file else None,
        out=out,
        formats=formats,
        budget=args.budget,
        samples=args.samples,
        seed=args.seed,
        allow_large=args.allow_large,
        threads=args.threads,
    )


def make_tree(cfg: RunConfig) -> index_tree.IndexTree:
    if cfg.tree == "complete":
        return index_tree.build_near_complete(cfg.ell)
    if cfg.tree == "unbalanced":
        return index_tree.build_unbalanced(cfg.m, cfg.alpha)
    try:
        return index_tree.IndexTree.from_json(cfg.tree_file.read_text())
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"cannot read index-tree file {cfg.tree_file}: {exc}") from exc


def construct(cfg: RunConfig):
    t = make_tree(cfg)
    if t.ell > skeleton.DEFAULT_MAX_ELL and not cfg.allow_large:
        raise skeleton.SkeletonGuardError(
            f"ell={t.ell} exceeds the memory guard (st_{t.ell} has {skeleton.skeleton_size(t.ell)} nodes); "
            "pass --allow-large to override"
        )
    timings = {}
    start = time.perf_counter()
    st = skeleton.build_skeleton(t.ell, allow_large=cfg.allow_large)
    timings["skeleton"] = time.perf_counter() - start
    start = time.perf_counter()
    rt = ribbed.build_ribbed(st, t)
    timings["ribbed"] = time.perf_counter() - start
    start = time.perf_counter()
    g = blowup.build_blowup(rt)
    timings["blowup"] = time.perf_counter() - start
    return t, st, rt, g, timings


def manifest_counts(rt: ribbed.RibbedTree, g: blowup.BlowupGraph) -> dict:
    return {
        "tree_nodes": int(rt.n_tree),
        "blocking_nodes": int(rt.n_blocking),
        "vertices": int(g.n),
        "edges": int(g.m),
    }


def _dump(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n")


def cmd_build(cfg: RunConfig) -> int:
    t, st, rt, g, timings = construct(cfg)
    out = cfg.out
    out.mkdir(parents=True, exist_ok=True)
    files = {}
    _dump(out / "index_tree.json", t.to_dict())
    files["index_tree"] = "index_tree.json"
    if "json" in cfg.formats:
        _dump(out / "skeleton.json", st.to_dict())
        _dump(
            out / "ribbed.json",
            {
                "format_version": 1,
                "ell": rt.ell,
                "nodes": rt.node_table(),
                "edges": [{"u": u, "v": v, "kind": ribbed.EDGE_KINDS[k]} for u, v, k in rt.edges()],
            },
        )
        _dump(out / "graph.json", g.to_dict())
        files.update(skeleton="skeleton.json", ribbed="ribbed.json", graph="graph.json")
    if "edgelist" in cfg.formats:
        (out / "ribbed.edges").write_text(rt.edge_list_text())
        (out / "graph.edges").write_text(g.edge_list_text())
        files.update(ribbed_edges="ribbed.edges", graph_edges="graph.edges")
    if "dot" in cfg.formats:
        (out / "graph.dot").write_text(g.to_dot())
        files["graph_dot"] = "graph.dot"
    manifest = {
        "format_version": 1,
        "ell": t.ell,
        "tree": t.description,
        "attachment": blowup.ATTACHMENT_CONVENTION,
        "counts": manifest_counts(rt, g),
        "files": files,
        "wall_time_seconds": {k: round(v, 6) for k, v in timings.items()},
    }
    _dump(out / "manifest.json", manifest)
    print(json.dumps({"out": str(out), "counts": manifest["counts"]}, sort_keys=True))
    return EXIT_OK


def _load_artifacts(cfg: RunConfig, source: Path):
    """Rebuild from the stored index-tree and compare with stored graph and manifest."""
    problems = []
    tree_path = source / "index_tree.json"
    try:
        t = index_tree.IndexTree.from_json(tree_path.read_text())
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise ArtifactError(f"corrupted artifact {tree_path}: {exc}") from exc
    st = skeleton.build_skeleton(t.ell, allow_large=cfg.allow_large)
    rt = ribbed.build_ribbed(st, t)
    g = blowup.build_blowup(rt)
    man_path = source / "manifest.json"
    try:
        manifest = json.loads(man_path.read_text())
        counts = manifest["counts"]
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise ArtifactError(f"corrupted artifact {man_path}: {exc}") from exc
    if counts != manifest_counts(rt, g):
        problems.append(f"{man_path}: counts {counts} differ from recount {manifest_counts(rt, g)}")
    graph_path = source / "graph.json"
    if graph_path.exists():
        try:
            stored = blowup.BlowupGraph.from_dict(json.loads(graph_path.read_text()))
        except (OSError, ValueError, KeyError, TypeError, IndexError) as exc:
            raise ArtifactError(f"corrupted artifact {graph_path}: {exc}") from exc
        same = (
            stored.n == g.n
            and stored.m == g.m
            and (stored.edges == g.edges).all()
            and (stored.rank == g.rank).all()
            and (stored.kind == g.kind).all()
        )
        if not same:
            problems.append(f"{graph_path}: stored graph differs from the rebuilt one")
    return t, st, rt, g, problems


class ArtifactError(Exception):
    pass


def cmd_verify(cfg: RunConfig, which: list, source: Optional[Path] = None) -> int:
    if source is not None:
        t, st, rt, g, problems = _load_artifacts(cfg, source)
    elif which == ["words"]:
        # the word suite needs only the index-tree, so no guard applies
        t, st, rt, g, problems = make_tree(cfg), None, None, None, []
    else:
        t, st, rt, g, _ = construct(cfg)
        problems = []
    results: dict = {}
    if problems:
        results["artifacts"] = {"pass": False, "problems": problems}
    for name in which:
        start = time.perf_counter()
        if name == "words":
            if t.ell > words.EXHAUSTIVE_CAP:
                raise UsageError(f"word suite is exhaustive and capped at ell <= {words.EXHAUSTIVE_CAP}")
            res = words.check_word_properties(t).to_dict()
        elif name == "skeleton":
            res = skeleton.verify_skeleton(st).to_dict()
        elif name == "ribbed":
            res = ribbed.verify_ribbed(rt).to_dict()
        elif name == "degeneracy":
            cert = blowup.degeneracy(g)
            res = {
                "pass": cert.degeneracy <= 2 and blowup.check_degeneracy_certificate(g, cert),
                "degeneracy": cert.degeneracy,
            }
        elif name == "hamiltonian":
            try:
                cert = blowup.hamiltonian_path(g)
                rep = blowup.check_path(g, cert, require_hamiltonian=True)
                res = {"pass": rep.passed, "length": len(cert.vertices), "vertices": g.n}
            except blowup.HamiltonianConstructionError as exc:
                res = {"pass": False, "error": str(exc)}
        elif name == "structure":
            res = analysis.check_structure_lemmas(g, t, cfg.samples, cfg.seed).to_dict()
        else:
            raise UsageError(f"unknown check {name!r}")
        res["seconds"] = round(time.perf_counter() - start, 3)
        results[name] = res
    ok = all(r.get("pass", False) for r in results.values())
    print(json.dumps({"ell": t.ell, "tree": t.description, "pass": ok, "results": results}, sort_keys=True, default=str))
    return EXIT_OK if ok else EXIT_FAIL


def run_lip(cfg: RunConfig, g: blowup.BlowupGraph) -> tuple[analysis.InducedPathResult, dict]:
    heur = analysis.lip_heuristic(g, seeds=max(cfg.samples, 1), rng_seed=cfg.seed)
    notes = {"heuristic_order": heur.order, "seed": cfg.seed}
    if g.n > EXACT_SEARCH_MAX_VERTICES:
        notes["exact_search"] = f"skipped: {g.n} vertices exceeds {EXACT_SEARCH_MAX_VERTICES}"
        return heur, notes
    res = analysis.lip_exact(g, budget=cfg.budget, incumbent=heur.certificate.vertices)
    notes["exact_search"] = "complete" if res.exact else f"budget of {cfg.budget} expansions exhausted"
    return res, notes


def cmd_lip(cfg: RunConfig) -> int:
    t, st, rt, g, _ = construct(cfg)
    res, notes = run_lip(cfg, g)
    check = blowup.check_path(g, res.certificate, require_induced=True)
    cfg.out.mkdir(parents=True, exist_ok=True)
    (cfg.out / "lip.cert").write_text(res.certificate.to_text())
    payload = {"ell": t.ell, "tree": t.description, **res.to_dict(), **notes, "certificate_valid": check.passed}
    _dump(cfg.out / "lip.json", payload)
    print(json.dumps({k: v for k, v in payload.items() if k != "path"}, sort_keys=True))
    return EXIT_OK if check.passed else EXIT_FAIL


def summary_table(rep: dict) -> str:
    head = f"{'ell':>4} {'|V|':>10} {'lip':>6} {'exact':>6} {'lower':>8} {'13S+1':>8} {'936 l log l':>12}"
    row = (
        f"{rep['ell']:>4} {rep['vertices']:>10} {rep['lip']:>6} {str(rep['lip_exact']):>6} "
        f"{rep['lower_bound']:>8.3f} {rep['bound_13_sigma_plus_1']:>8} {rep['bound_936_ell_log_ell']:>12.1f}"
    )
    return head + "\n" + row + "\n"


def cmd_report(cfg: RunConfig) -> int:
    t, st, rt, g, _ = construct(cfg)
    res, notes = run_lip(cfg, g)
    rep = analysis.bound_report(g, t, res, alpha=cfg.alpha if cfg.tree == "unbalanced" else None)
    rep["search"] = notes
    cfg.out.mkdir(parents=True, exist_ok=True)
    _dump(cfg.out / "report.json", rep)
    table = summary_table(rep)
    (cfg.out / "report.txt").write_text(table)
    sys.stdout.write(table)
    return EXIT_OK if rep["pass"] else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tree", choices=("complete", "unbalanced", "file"), default="complete")
    common.add_argument("--ell", type=int)
    common.add_argument("--m", type=int)
    common.add_argument("--alpha", type=float, default=3.0)
    common.add_argument("--tree-file")
    common.add_argument("--out", help=f"output directory (default ${OUT_ENV} or ./barriergraph-out)")
    common.add_argument("--formats", default="json", help="comma-separated subset of json,edgelist,dot")
    common.add_argument("--budget", type=_parse_count, default=2_000_000, help="node expansions; 0 = unlimited")
    common.add_argument("--samples", type=int, default=1000)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--allow-large", action="store_true")
    common.add_argument("--threads", type=int, default=1, help="accepted for compatibility; runs single-threaded")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="barriergraph", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("build", parents=[common], help="construct and export G(T)")
    v = sub.add_parser("verify", parents=[common], help="run verifiers")
    v.add_argument("--which", default="all", help="comma list of " + ",".join(VERIFY_CHOICES) + " or all")
    v.add_argument("--from", dest="source", help="verify stored artifacts in this directory")
    sub.add_parser("lip", parents=[common], help="longest induced path search")
    sub.add_parser("report", parents=[common], help="bound report and summary table")
    return parser


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        if args.command == "verify" and args.source and args.ell is None and args.m is None:
            args.ell = 1  # placeholder; the tree comes from the artifact directory
        cfg = _config(args)
        if args.command == "build":
            return cmd_build(cfg)
        if args.command == "verify":
            which = list(VERIFY_CHOICES) if args.which == "all" else [w.strip() for w in args.which.split(",")]
            for w in which:
                if w not in VERIFY_CHOICES:
                    raise UsageError(f"unknown check {w!r}")
            return cmd_verify(cfg, which, Path(args.source) if args.source else None)
        if args.command == "lip":
            return cmd_lip(cfg)
        return cmd_report(cfg)
    except (UsageError, index_tree.IndexTreeError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except skeleton.SkeletonGuardError as exc:
        print(f"resource guard: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except ArtifactError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
