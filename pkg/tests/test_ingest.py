"""Ingestion pipeline: parsing, interning, dedup, edge-list persistence."""

import json

import pytest

from sessionrec.errors import ConfigError, EdgeListFormatError, KernelClassConflictError
from sessionrec.ingest import (
    IdMaps,
    RawEvent,
    SourceSpec,
    build_graph,
    edge_list_bytes,
    load_edge_list,
    parse_events,
    save_edge_list,
)
from sessionrec.model import ClassId, GraphBuilder, KernelClass

from conftest import build_f1, f1_classes


def write(path, text):
    path.write_text(text, encoding="utf-8")
    return path


def csv_spec(path, class_id=1, name="orders", weight=1):
    return SourceSpec(
        class_id=ClassId(class_id), class_name=name, kind="behavioural",
        weight=weight, path=path, format="csv",
    )


def jsonl_spec(path, class_id=2, name="visits"):
    return SourceSpec(
        class_id=ClassId(class_id), class_name=name, kind="behavioural",
        weight=1, path=path, format="jsonl",
    )


class TestParseEvents:
    def test_csv_line_maps_directly(self, tmp_path):
        spec = csv_spec(write(tmp_path / "orders.csv", "ORD-1001,550\n"))
        events, malformed = parse_events(spec)
        assert events == [RawEvent("ORD-1001", "550")]
        assert malformed == 0

    def test_empty_kernel_key_is_malformed(self, tmp_path):
        spec = csv_spec(write(tmp_path / "orders.csv", ",550\nORD-1,550\n"))
        events, malformed = parse_events(spec)
        assert events == [RawEvent("ORD-1", "550")]
        assert malformed == 1

    def test_header_line_skipped(self, tmp_path):
        spec = csv_spec(write(tmp_path / "orders.csv", "kernel,object\nORD-1,550\n"))
        events, malformed = parse_events(spec)
        assert events == [RawEvent("ORD-1", "550")]
        assert malformed == 0

    def test_non_header_first_line_is_data(self, tmp_path):
        spec = csv_spec(write(tmp_path / "orders.csv", "a,b\nc,d\n"))
        events, _ = parse_events(spec)
        assert len(events) == 2

    def test_wrong_column_count_is_malformed(self, tmp_path):
        spec = csv_spec(write(tmp_path / "orders.csv", "a,b,c\njust-one\nok,1\n"))
        events, malformed = parse_events(spec)
        assert events == [RawEvent("ok", "1")]
        assert malformed == 2

    def test_jsonl_records(self, tmp_path):
        text = '{"kernel":"sess-ab12","object":"77"}\nnot json\n{"kernel":"sess-x","object":5}\n'
        spec = jsonl_spec(write(tmp_path / "visits.jsonl", text))
        events, malformed = parse_events(spec)
        assert events == [RawEvent("sess-ab12", "77")]
        assert malformed == 2  # unparseable line + non-string object field

    def test_blank_lines_ignored(self, tmp_path):
        spec = csv_spec(write(tmp_path / "orders.csv", "\nORD-1,5\n\n"))
        events, malformed = parse_events(spec)
        assert len(events) == 1
        assert malformed == 0

    def test_unknown_format_rejected(self, tmp_path):
        with pytest.raises(ConfigError):
            SourceSpec(
                class_id=ClassId(1), class_name="x", kind="behavioural",
                weight=1, path=tmp_path / "x", format="xml",
            )

    def test_missing_file_raises_io_error(self, tmp_path):
        with pytest.raises(OSError):
            parse_events(csv_spec(tmp_path / "absent.csv"))


class TestBuildGraph:
    def test_two_source_counts(self, tmp_path):
        orders = write(tmp_path / "orders.csv", "ORD-1,550\nORD-1,550\nORD-1,551\n")
        visits = write(tmp_path / "visits.csv", "sess-a,550\nsess-b,551\n")
        result = build_graph([csv_spec(orders), csv_spec(visits, class_id=2, name="visits")])
        assert result.snapshot.count_arcs == 4
        orders_stats = result.report.per_class[ClassId(1)]
        visits_stats = result.report.per_class[ClassId(2)]
        assert (orders_stats.events_read, orders_stats.arcs_emitted,
                orders_stats.duplicates_dropped, orders_stats.malformed_lines) == (3, 2, 1, 0)
        assert (visits_stats.events_read, visits_stats.arcs_emitted,
                visits_stats.duplicates_dropped, visits_stats.malformed_lines) == (2, 2, 0, 0)
        assert result.report.elapsed_seconds > 0

    def test_empty_source_list_rejected(self):
        with pytest.raises(ConfigError):
            build_graph([])

    def test_duplicate_class_ids_rejected(self, tmp_path):
        path = write(tmp_path / "a.csv", "k,1\n")
        with pytest.raises(ConfigError):
            build_graph([csv_spec(path), csv_spec(path, name="again")])

    def test_rebuild_is_deterministic(self, tmp_path):
        orders = write(tmp_path / "orders.csv", "ORD-2,9\nORD-1,7\nORD-1,9\n")
        visits = write(tmp_path / "visits.jsonl", '{"kernel":"s1","object":"7"}\n')
        sources = [csv_spec(orders), jsonl_spec(visits)]
        first = build_graph(sources)
        second = build_graph(sources)
        assert first.snapshot == second.snapshot
        assert first.report.per_class == second.report.per_class
        assert edge_list_bytes(first.snapshot) == edge_list_bytes(second.snapshot)

    def test_kernel_ranges_disjoint_per_class(self, tmp_path):
        orders = write(tmp_path / "orders.csv", "A,1\nB,2\n")
        visits = write(tmp_path / "visits.csv", "A,1\nC,3\n")
        result = build_graph([csv_spec(orders), csv_spec(visits, class_id=2)])
        by_class = {}
        for kernel, (class_id, _raw) in result.maps.kernels.items():
            by_class.setdefault(class_id, set()).add(kernel)
        assert not (by_class[ClassId(1)] & by_class[ClassId(2)])
        # same raw key under two classes becomes two kernels
        assert result.snapshot.count_kernels == 4

    def test_dedup_equivalence_against_independent_set(self, tmp_path):
        import random

        rng = random.Random(42)
        lines = [f"k{rng.randint(1, 30)},o{rng.randint(1, 20)}" for _ in range(500)]
        path = write(tmp_path / "events.csv", "\n".join(lines) + "\n")
        result = build_graph([csv_spec(path)])
        expected_pairs = {tuple(line.split(",")) for line in lines}
        assert result.report.per_class[ClassId(1)].arcs_emitted == len(expected_pairs)
        assert result.snapshot.count_arcs == len(expected_pairs)

    def test_object_allowlist_filters_and_counts(self, tmp_path):
        path = write(tmp_path / "orders.csv", "k1,good\nk1,bad\nk2,good\n")
        result = build_graph([csv_spec(path)], valid_objects={"good"})
        stats = result.report.per_class[ClassId(1)]
        assert stats.filtered_out == 1
        assert stats.arcs_emitted == 2
        assert stats.events_read == stats.arcs_emitted + stats.duplicates_dropped \
            + stats.malformed_lines + stats.filtered_out

    def test_report_identity_holds_per_class(self, tmp_path):
        path = write(tmp_path / "m.csv", "k1,1\nbad-line-with,too,many\nk1,1\nk2,2\n")
        result = build_graph([csv_spec(path)])
        stats = result.report.per_class[ClassId(1)]
        assert stats.events_read == stats.arcs_emitted + stats.duplicates_dropped \
            + stats.malformed_lines
        assert stats.events_read == 4


class TestEdgeListPersistence:
    def test_save_writes_sorted_lines(self, tmp_path, f1):
        out = tmp_path / "graph.edges"
        byte_count = save_edge_list(f1, out)
        lines = out.read_text().splitlines()
        assert len(lines) == 8
        assert byte_count == out.stat().st_size
        keys = [tuple(map(int, line.split(",")[:2])) for line in lines]
        assert keys == sorted(keys)

    def test_save_empty_snapshot_is_zero_bytes(self, tmp_path):
        out = tmp_path / "empty.edges"
        assert save_edge_list(GraphBuilder().freeze(), out) == 0
        assert out.stat().st_size == 0

    def test_round_trip_identity_with_class_table(self, tmp_path, f1):
        out = tmp_path / "graph.edges"
        save_edge_list(f1, out)
        assert load_edge_list(out, classes=f1_classes()) == f1

    def test_round_trip_stats_without_class_table(self, tmp_path, f1):
        out = tmp_path / "graph.edges"
        save_edge_list(f1, out)
        loaded = load_edge_list(out)
        assert loaded.stats() == f1.stats()
        assert loaded.arcs == f1.arcs

    def test_save_load_save_is_byte_identical(self, tmp_path, f1):
        first = tmp_path / "a.edges"
        second = tmp_path / "b.edges"
        save_edge_list(f1, first)
        save_edge_list(load_edge_list(first), second)
        assert first.read_bytes() == second.read_bytes()

    def test_duplicate_pair_is_format_error_with_line(self, tmp_path):
        path = write(tmp_path / "dup.edges", "1,10,1\n1,10,1\n")
        with pytest.raises(EdgeListFormatError) as exc_info:
            load_edge_list(path)
        assert exc_info.value.line_no == 2

    def test_non_integer_field_is_format_error(self, tmp_path):
        path = write(tmp_path / "bad.edges", "1,x,1\n")
        with pytest.raises(EdgeListFormatError):
            load_edge_list(path)

    def test_wrong_arity_is_format_error(self, tmp_path):
        path = write(tmp_path / "bad.edges", "1,2\n")
        with pytest.raises(EdgeListFormatError):
            load_edge_list(path)

    def test_kernel_class_conflict_detected_on_load(self, tmp_path):
        path = write(tmp_path / "conflict.edges", "5,10,1\n5,11,2\n")
        with pytest.raises(KernelClassConflictError) as exc_info:
            load_edge_list(path)
        assert exc_info.value.kernel == 5

    def test_loaded_classes_default_to_weight_one(self, tmp_path, f1):
        out = tmp_path / "graph.edges"
        save_edge_list(f1, out)
        loaded = load_edge_list(out)
        assert all(kc.weight == 1 for kc in loaded.classes.values())


class TestIdMaps:
    def test_sidecars_round_trip(self, tmp_path):
        orders = write(tmp_path / "orders.csv", "ORD-1,550\nORD-2,551\n")
        visits = write(tmp_path / "visits.csv", "sess-a,550\n")
        result = build_graph([csv_spec(orders), csv_spec(visits, class_id=2)])
        edge_path = tmp_path / "graph.edges"
        save_edge_list(result.snapshot, edge_path)
        result.maps.save(edge_path)

        kernels_map, objects_map = IdMaps.sidecar_paths(edge_path)
        assert kernels_map.exists() and objects_map.exists()
        # objects rows leave the class column empty
        assert objects_map.read_text().splitlines()[0].split(",")[1] == ""

        loaded = IdMaps.load(edge_path)
        assert loaded.kernels == result.maps.kernels
        assert loaded.objects == result.maps.objects
        assert loaded.object_id("550") == result.maps.object_id("550")

    def test_missing_sidecars_raise(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            IdMaps.load(tmp_path / "nowhere.edges")

    def test_interning_is_dense_and_stable(self):
        maps = IdMaps()
        a = maps.intern_object("x")
        b = maps.intern_object("y")
        assert maps.intern_object("x") == a
        assert (a, b) == (1, 2)
