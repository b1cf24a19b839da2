"""Command-line entry point.

Commands: ingest, harvest, serve, dump, load, stats, validate. Every
command is non-interactive, prints one summary (human key=value lines, or
a single JSON object with --json), and exits with a documented code:

    0  success
    2  usage, configuration, or input/output error
    3  data error (rejected records, integrity violations, dump mismatch)
    4  store busy (another process holds the writer lock)
    5  network failure after retries

Settings resolve as flag > OPENINDEX_* environment variable > config file
(./openindex.toml by default) > built-in default. The OPENINDEX_TODAY
variable (ISO date) pins the clock for reproducible runs.
"""

from __future__ import annotations

import argparse
import datetime as dt
import json
import os
import sys
from pathlib import Path
from typing import Any, Callable, Iterator

from .api import ApiConfig
from .api import serve as api_serve
from .concepts import ConceptTree, coverage_report, load_concept_tree
from .config import ConfigError, EngineConfig, load_config
from .disambig import AuthorMatchWeights
from .idnorm import IssnLinkingTable
from .ids import EntityKind
from .ingestion import (
    HarvestError,
    Ingestor,
    StubRejectedError,
    harvest,
    iter_pubmed_set,
    parse_crossref,
)
from .store import (
    DumpError,
    StoreBusyError,
    StoreError,
    open_store,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_BUSY = 4
EXIT_NETWORK = 5


def _fail(message: str) -> None:
    print(f"openindex: {message}", file=sys.stderr)


def _emit(as_json: bool, payload: dict[str, Any]) -> None:
    if as_json:
        print(json.dumps(payload, ensure_ascii=False))
        return
    for key, value in payload.items():
        if isinstance(value, dict):
            for inner_key, inner_value in value.items():
                print(f"{key}.{inner_key}={inner_value}")
        else:
            print(f"{key}={value}")


def _today(env: dict[str, str] | os._Environ = os.environ) -> dt.date | None:
    raw = env.get("OPENINDEX_TODAY")
    if raw is None:
        return None
    try:
        return dt.date.fromisoformat(raw)
    except ValueError:
        raise ConfigError(f"OPENINDEX_TODAY {raw!r} is not an ISO date") from None


def _build_ingestor(handle, cfg: EngineConfig) -> Ingestor:
    tree: ConceptTree | None = None
    if cfg.concept_tree:
        tree = load_concept_tree(cfg.concept_tree)
    issn_table: IssnLinkingTable | None = None
    if cfg.issn_table:
        issn_table = IssnLinkingTable.load(cfg.issn_table)
    weights = AuthorMatchWeights(
        name_exact=cfg.weight_name_exact,
        coauthor_each=cfg.weight_coauthor_each,
        coauthor_cap=cfg.weight_coauthor_cap,
        venue=cfg.weight_venue,
        citation_each=cfg.weight_citation_each,
        citation_cap=cfg.weight_citation_cap,
    )
    return Ingestor(
        handle,
        concept_tree=tree,
        issn_table=issn_table,
        author_threshold=cfg.author_threshold,
        institution_threshold=cfg.institution_threshold,
        author_weights=weights,
        tag_threshold=cfg.tag_threshold,
        tag_decay=cfg.tag_decay,
    )


def _iter_source_records(
    source: str, path: Path, retrieved: dt.date | None
) -> Iterator[tuple[Any | None, str | None]]:
    """Yield (stub, None) or (None, reject reason) per record in the file."""
    if source in ("crossref", "repository"):
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    record = json.loads(line)
                except json.JSONDecodeError as exc:
                    yield None, f"line {lineno}: not valid JSON ({exc})"
                    continue
                try:
                    yield parse_crossref(
                        record, source=source, retrieved_date=retrieved
                    ), None
                except StubRejectedError as exc:
                    yield None, f"line {lineno}: {exc}"
    else:
        text = path.read_text(encoding="utf-8")
        yield from iter_pubmed_set(text, retrieved_date=retrieved)


def cmd_ingest(args: argparse.Namespace, cfg: EngineConfig) -> int:
    path = Path(args.input)
    today = _today()
    counters = {"read": 0, "created": 0, "updated": 0, "merged": 0, "rejected": 0}
    report_fh = open(args.report, "w", encoding="utf-8") if args.report else None
    try:
        with open_store(cfg.data_dir, today=today, durability="batch") as handle:
            ingestor = _build_ingestor(handle, cfg)
            for stub, reason in _iter_source_records(
                args.source, path, today or handle.today()
            ):
                counters["read"] += 1
                if stub is None:
                    counters["rejected"] += 1
                    line = {
                        "source_record_id": None,
                        "outcome": "rejected",
                        "work_id": None,
                        "warnings": [reason],
                    }
                    if report_fh:
                        report_fh.write(json.dumps(line, ensure_ascii=False) + "\n")
                    continue
                try:
                    report = ingestor.ingest_stub(stub)
                except (StubRejectedError, StoreError) as exc:
                    counters["rejected"] += 1
                    if report_fh:
                        line = {
                            "source_record_id": stub.source_record_id,
                            "outcome": "rejected",
                            "work_id": None,
                            "warnings": [str(exc)],
                        }
                        report_fh.write(json.dumps(line, ensure_ascii=False) + "\n")
                    continue
                counters[report.outcome] += 1
                if report_fh:
                    report_fh.write(report.to_json() + "\n")
            handle.recompute_aggregates()
            handle.compact()
    finally:
        if report_fh:
            report_fh.close()
    _emit(args.json, {"command": "ingest", **counters})
    return EXIT_OK if counters["rejected"] == 0 else EXIT_DATA


def cmd_harvest(args: argparse.Namespace, cfg: EngineConfig) -> int:
    today = _today()
    counters = {"read": 0, "created": 0, "updated": 0, "merged": 0, "rejected": 0}
    cursor: str | None = args.cursor
    failed = False
    with open_store(cfg.data_dir, today=today, durability="batch") as handle:
        ingestor = _build_ingestor(handle, cfg)
        retrieved = today or handle.today()
        try:
            while True:
                records, next_cursor = harvest(args.endpoint, cursor, args.rows)
                for record in records:
                    counters["read"] += 1
                    try:
                        stub = parse_crossref(record, retrieved_date=retrieved)
                    except StubRejectedError:
                        counters["rejected"] += 1
                        continue
                    try:
                        report = ingestor.ingest_stub(stub)
                    except (StubRejectedError, StoreError):
                        counters["rejected"] += 1
                        continue
                    counters[report.outcome] += 1
                if next_cursor is None:
                    cursor = None
                    break
                cursor = next_cursor
        except HarvestError as exc:
            _fail(str(exc))
            failed = True
        handle.recompute_aggregates()
        handle.compact()
    _emit(args.json, {"command": "harvest", **counters, "cursor": cursor})
    if failed:
        return EXIT_NETWORK
    return EXIT_OK if counters["rejected"] == 0 else EXIT_DATA


def cmd_serve(args: argparse.Namespace, cfg: EngineConfig) -> int:
    gui_dir: str | None = None
    if args.with_gui:
        gui_dir = cfg.gui_dir or "frontend/dist"
        if not Path(gui_dir).is_dir():
            _fail(f"GUI directory {gui_dir} does not exist; build the frontend first")
            return EXIT_USAGE
    api_config = ApiConfig(
        host=args.host or cfg.host,
        port=args.port if args.port is not None else cfg.port,
        base_url=cfg.base_url,
        per_page_default=cfg.per_page_default,
        per_page_max=cfg.per_page_max,
        max_connections=cfg.max_connections,
    )
    with open_store(cfg.data_dir, today=_today()) as handle:
        api_serve(handle, api_config, gui_dir=gui_dir)
    return EXIT_OK


def cmd_dump(args: argparse.Namespace, cfg: EngineConfig) -> int:
    with open_store(cfg.data_dir, today=_today()) as handle:
        report = handle.dump_export(args.out)
    _emit(
        args.json,
        {
            "command": "dump",
            "created_date": report.created_date,
            "records": report.total_records,
            "files": report.file_count,
            "out": str(args.out),
        },
    )
    return EXIT_OK


def cmd_load(args: argparse.Namespace, cfg: EngineConfig) -> int:
    with open_store(cfg.data_dir, today=_today()) as handle:
        report = handle.dump_import(args.in_dir)
    _emit(
        args.json,
        {
            "command": "load",
            "created_date": report.created_date,
            "counts": report.counts,
        },
    )
    return EXIT_OK


def cmd_stats(args: argparse.Namespace, cfg: EngineConfig) -> int:
    with open_store(cfg.data_dir, today=_today()) as handle:
        stats = handle.stats()
        counts = stats["counts"]

        def fraction(kind: EntityKind, has: Callable[[Any], bool]) -> float:
            entities = handle.peek_all(kind)
            if not entities:
                return 0.0
            return sum(1 for e in entities if has(e)) / len(entities)

        ceid_coverage = {
            "works_with_doi": round(fraction(EntityKind.WORK, lambda w: w.doi is not None), 4),
            "authors_with_orcid": round(
                fraction(EntityKind.AUTHOR, lambda a: a.orcid is not None), 4
            ),
            "venues_with_issn_l": round(
                fraction(EntityKind.VENUE, lambda v: v.issn_l is not None), 4
            ),
            "institutions_with_ror": round(
                fraction(EntityKind.INSTITUTION, lambda i: i.ror is not None), 4
            ),
            "concepts_with_wikidata": round(
                fraction(EntityKind.CONCEPT, lambda c: bool(c.wikidata)), 4
            ),
        }
        coverage = coverage_report(handle.peek_all(EntityKind.WORK))
    payload = {
        "command": "stats",
        "counts": counts,
        "unresolved_references": stats["unresolved_references"],
        "ceid_coverage": ceid_coverage,
        "concept_coverage": round(coverage.fraction, 4),
        "concept_coverage_by_type": {
            name: round(frac, 4) for name, (_, _, frac) in coverage.by_type.items()
        },
        "dump_created_date": stats["last_dump_created"],
    }
    _emit(args.json, payload)
    return EXIT_OK


def cmd_validate(args: argparse.Namespace, cfg: EngineConfig) -> int:
    with open_store(cfg.data_dir, today=_today()) as handle:
        violations = handle.integrity_check()
    if args.json:
        _emit(True, {"command": "validate", "violations": violations})
    else:
        for violation in violations:
            print(violation)
        print(f"violations={len(violations)}")
    return EXIT_OK if not violations else EXIT_DATA


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="openindex",
        description="Desk-scale scholarly knowledge graph engine.",
    )
    parser.add_argument("--config", help="config file path (default ./openindex.toml)")
    parser.add_argument("--data-dir", help="store directory override")
    parser.add_argument(
        "--json", action="store_true", help="print the summary as one JSON line"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_json_flag(sp: argparse.ArgumentParser) -> None:
        # Accepted after the subcommand too; SUPPRESS keeps the
        # pre-subcommand value when the flag is absent here.
        sp.add_argument("--json", action="store_true", default=argparse.SUPPRESS)

    p = sub.add_parser("ingest", help="parse a source file and run the pipeline")
    p.add_argument("--source", required=True, choices=["crossref", "pubmed", "repository"])
    p.add_argument("--input", required=True)
    p.add_argument("--report", help="write per-record JSON Lines reports here")
    p.set_defaults(handler=cmd_ingest)
    add_json_flag(p)

    p = sub.add_parser("harvest", help="pull records from a cursored endpoint")
    p.add_argument("--endpoint", required=True)
    p.add_argument("--cursor", help="resume from this cursor token")
    p.add_argument("--rows", type=int, default=100)
    p.set_defaults(handler=cmd_harvest)
    add_json_flag(p)

    p = sub.add_parser("serve", help="run the read-only HTTP service")
    p.add_argument("--port", type=int)
    p.add_argument("--host")
    p.add_argument(
        "--with-gui", action="store_true", help="also serve the static explorer under /gui"
    )
    p.set_defaults(handler=cmd_serve)
    add_json_flag(p)

    p = sub.add_parser("dump", help="export the partitioned dump tree")
    p.add_argument("--out", required=True)
    p.set_defaults(handler=cmd_dump)
    add_json_flag(p)

    p = sub.add_parser("load", help="import a dump tree into an empty store")
    p.add_argument("--in", dest="in_dir", required=True)
    p.set_defaults(handler=cmd_load)
    add_json_flag(p)

    p = sub.add_parser("stats", help="print entity counts and coverage")
    p.set_defaults(handler=cmd_stats)
    add_json_flag(p)

    p = sub.add_parser("validate", help="run the full integrity check")
    p.set_defaults(handler=cmd_validate)
    add_json_flag(p)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(
            args.config,
            overrides={"data_dir": args.data_dir} if args.data_dir else None,
        )
        return args.handler(args, cfg)
    except ConfigError as exc:
        _fail(str(exc))
        return EXIT_USAGE
    except StoreBusyError as exc:
        _fail(str(exc))
        return EXIT_BUSY
    except DumpError as exc:
        _fail(str(exc))
        return EXIT_DATA
    except StoreError as exc:
        _fail(str(exc))
        return EXIT_USAGE
    except OSError as exc:
        _fail(str(exc))
        return EXIT_USAGE
    except StubRejectedError as exc:
        # A file that does not parse as the declared format at all.
        _fail(str(exc))
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
