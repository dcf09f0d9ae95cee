import json

import pytest

from toricstab import ParseError
from toricstab import corpus as corpus_mod


def test_corpus_names_complete():
    names = corpus_mod.corpus_names()
    assert names == [
        "CP3", "B1", "B2", "B3", "B4",
        "C1", "C2", "C3", "C4", "C5",
        "D1", "D2", "E1", "E2", "E3", "E4",
        "F1", "F2", "ORB-530571",
    ]


def test_provenance_tags(corpus_entries):
    explicit = {n for n, e in corpus_entries.items() if e.provenance == "explicit"}
    assert explicit == {"CP3", "B1", "B2", "ORB-530571"}
    assert all(
        e.provenance in ("explicit", "database") for e in corpus_entries.values()
    )


def test_save_load_roundtrip(tmp_path, corpus_entries):
    for entry in corpus_entries.values():
        path = tmp_path / f"{entry.name}.json"
        corpus_mod.save_polytope(path, entry.polytope)
        again = corpus_mod.load_polytope(path)
        assert again == entry.polytope
        assert sorted((h.normal, h.rhs) for h in again.halfspaces) == sorted(
            (h.normal, h.rhs) for h in entry.polytope.halfspaces
        )


def test_load_halfspaces_only_synthesizes_vertices(tmp_path, corpus_entries):
    entry = corpus_entries["B2"]
    doc = {
        "name": "B2-hrep",
        "halfspaces": [
            {"normal": list(h.normal), "rhs": str(h.rhs)}
            for h in entry.polytope.halfspaces
        ],
    }
    path = tmp_path / "b2h.json"
    path.write_text(json.dumps(doc))
    p = corpus_mod.load_polytope(path)
    assert p.vertices == entry.polytope.vertices


def test_load_vertices_only_synthesizes_halfspaces(tmp_path, cube):
    doc = {"vertices": [[str(x) for x in v] for v in cube.vertices]}
    path = tmp_path / "cube.json"
    path.write_text(json.dumps(doc))
    p = corpus_mod.load_polytope(path)
    assert sorted((h.normal, h.rhs) for h in p.halfspaces) == sorted(
        (h.normal, h.rhs) for h in cube.halfspaces
    )


def test_malformed_rhs_rejected(tmp_path):
    doc = {"halfspaces": [{"normal": [1, 0], "rhs": "1/0"}]}
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    with pytest.raises(ParseError):
        corpus_mod.load_polytope(path)


def test_malformed_json_rejected(tmp_path):
    path = tmp_path / "garbage.json"
    path.write_text("{not json")
    with pytest.raises(ParseError):
        corpus_mod.load_polytope(path)


def test_mismatched_representations_rejected(tmp_path, cube):
    doc = {
        "halfspaces": [
            {"normal": list(h.normal), "rhs": str(h.rhs)} for h in cube.halfspaces
        ],
        "vertices": [["2", "0", "0"], ["-2", "0", "0"], ["0", "2", "0"],
                     ["0", "-2", "0"], ["0", "0", "2"], ["0", "0", "-2"]],
    }
    path = tmp_path / "mismatch.json"
    path.write_text(json.dumps(doc))
    with pytest.raises(Exception):
        corpus_mod.load_polytope(path)


def test_unknown_corpus_entry():
    with pytest.raises(ParseError):
        corpus_mod.load_entry("NOPE")


def test_corpus_dir_override(tmp_path, monkeypatch, cube):
    corpus_mod.save_polytope(tmp_path / "X1.json", cube)
    (tmp_path / "index.json").write_text(json.dumps(["X1"]))
    monkeypatch.setenv(corpus_mod.ENV_CORPUS_DIR, str(tmp_path))
    assert corpus_mod.corpus_names() == ["X1"]
    entry = corpus_mod.load_entry("X1")
    assert entry.polytope.volume() == 8


def test_resolve_input_corpus_prefix(corpus_entries):
    p = corpus_mod.resolve_input("corpus:B2")
    assert p == corpus_entries["B2"].polytope


def test_integrity_gate_clean(corpus_gate):
    assert all(not problems for problems in corpus_gate.values()), corpus_gate


def test_integrity_gate_catches_tampering(corpus_entries):
    entry = corpus_mod.load_entry("B3")
    # perturb the polytope: swap in the wrong fan (the B2 one)
    entry.polytope = corpus_mod.load_entry("B2").polytope
    problems = corpus_mod.verify_entry(entry)
    assert problems  # theta and facet list both disagree
