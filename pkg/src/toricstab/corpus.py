"""Polytope file I/O and the built-in corpus of reference threefolds.

Corpus entries are checked-in JSON files (one per variety) holding the fan
rays, the moment polytope in both representations, and the published check
values the entry must reproduce.  Entries tagged ``explicit`` carry data
fixed verbatim by the primary source; entries tagged ``database`` were
regenerated from the standard classification of smooth toric Fano threefolds
(see scripts/build_corpus.py) and must pass :func:`verify_entry` before any
stability conclusion is attributed to them.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional

from .errors import ParseError, ValidationError
from .integrate import Poly, boundary_integral, moment_vector
from .lattice import ehrhart, lattice_points
from .linalg import rat, rat_str
from .plfun import AffineFn
from .polytope import Polytope, is_reflexive_delzant
from .stability import FAILS, chow_necessary, excess_region, extremal_affine, theta_nodes

DATA_DIR = Path(__file__).parent / "data"
ENV_CORPUS_DIR = "TORICSTAB_CORPUS_DIR"


# ---------------------------------------------------------------------------
# polytope (de)serialization
# ---------------------------------------------------------------------------


def polytope_to_json(p: Polytope) -> dict:
    return {
        "name": p.name,
        "dim": p.dim,
        "halfspaces": [
            {"normal": list(h.normal), "rhs": rat_str(h.rhs)} for h in p.halfspaces
        ],
        "vertices": [[rat_str(x) for x in v] for v in p.vertices],
    }


def polytope_from_json(data: dict, name: Optional[str] = None) -> Polytope:
    """Accepts either representation; synthesizes and cross-checks the other."""
    if not isinstance(data, dict):
        raise ParseError("polytope document must be a JSON object")
    name = data.get("name") or name
    hs_doc = data.get("halfspaces")
    v_doc = data.get("vertices")
    if not hs_doc and not v_doc:
        raise ParseError("polytope needs 'halfspaces' or 'vertices'")
    built_h = built_v = None
    try:
        if hs_doc:
            raw = []
            for k, item in enumerate(hs_doc):
                try:
                    raw.append((tuple(item["normal"]), rat(item["rhs"])))
                except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
                    raise ParseError(f"halfspace {k}: {exc}") from exc
            built_h = Polytope.from_halfspaces(raw, name)
        if v_doc:
            pts = []
            for k, row in enumerate(v_doc):
                try:
                    pts.append(tuple(rat(x) for x in row))
                except (TypeError, ValueError, ZeroDivisionError) as exc:
                    raise ParseError(f"vertex {k}: {exc}") from exc
            built_v = Polytope.from_vertices(pts, name)
    except ParseError:
        raise
    except ValidationError:
        raise
    except Exception as exc:  # degenerate geometry surfaces as validation
        raise ValidationError(str(exc)) from exc
    if built_h and built_v:
        if built_h.vertices != built_v.vertices:
            raise ValidationError(
                "halfspace and vertex representations describe different polytopes"
            )
        return built_h
    p = built_h or built_v
    if "dim" in data and data["dim"] != p.dim:
        raise ValidationError(f"declared dim {data['dim']} != actual {p.dim}")
    return p


def load_polytope(path) -> Polytope:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno}: {exc.msg}") from exc
    doc = data.get("polytope", data) if isinstance(data, dict) else data
    return polytope_from_json(doc, name=path.stem)


def save_polytope(path, p: Polytope) -> None:
    Path(path).write_text(json.dumps(polytope_to_json(p), indent=1) + "\n")


# ---------------------------------------------------------------------------
# corpus
# ---------------------------------------------------------------------------


@dataclass
class CorpusEntry:
    name: str
    provenance: str  # "explicit" (data fixed verbatim) or "database" (regenerated)
    polytope: Polytope
    rays: Optional[list[tuple[int, ...]]]
    expected: dict
    raw: dict = field(repr=False, default_factory=dict)


def corpus_dir() -> Path:
    override = os.environ.get(ENV_CORPUS_DIR)
    return Path(override) if override else DATA_DIR


def corpus_names() -> list[str]:
    index = corpus_dir() / "index.json"
    if index.exists():
        return json.loads(index.read_text())
    return sorted(p.stem for p in corpus_dir().glob("*.json") if p.stem != "index")


def load_entry(name: str) -> CorpusEntry:
    path = corpus_dir() / f"{name}.json"
    if not path.exists():
        raise ParseError(f"no corpus entry named {name!r}")
    data = json.loads(path.read_text())
    poly = polytope_from_json(data.get("polytope", data), name=data.get("name", name))
    rays = [tuple(r) for r in data["rays"]] if "rays" in data else None
    return CorpusEntry(
        name=data.get("name", name),
        provenance=data.get("provenance", "database"),
        polytope=poly,
        rays=rays,
        expected=data.get("expected", {}),
        raw=data,
    )


def load_corpus() -> list[CorpusEntry]:
    return [load_entry(name) for name in corpus_names()]


def resolve_input(spec: str) -> Polytope:
    """'corpus:NAME' or a path to a polytope JSON file."""
    if spec.startswith("corpus:"):
        return load_entry(spec.split(":", 1)[1]).polytope
    return load_polytope(spec)


# ---------------------------------------------------------------------------
# integrity gate
# ---------------------------------------------------------------------------


def verify_entry(entry: CorpusEntry) -> list[str]:
    """Recompute every published check value stored on the entry.

    Returns a list of human-readable discrepancy strings; empty means the
    entry is trustworthy.  Database-derived entries must pass this gate
    before stability conclusions are attributed to them.
    """
    problems: list[str] = []
    p = entry.polytope
    exp = entry.expected

    def check(label, got, want):
        if got != want:
            problems.append(f"{label}: computed {got} != expected {want}")

    if entry.rays is not None:
        want_hs = sorted(
            (tuple(-x for x in r), Fraction(1)) for r in entry.rays
        )
        got_hs = sorted((h.normal, h.rhs) for h in p.halfspaces)
        check("facets-vs-rays", got_hs, want_hs)
    if "fano_vertices" in entry.raw:
        from .polytope import polar_dual

        fano = Polytope.from_vertices(entry.raw["fano_vertices"])
        dual = polar_dual(fano)
        want = sorted(tuple(rat(x) for x in v) for v in entry.raw["dual_vertices"])
        check("polar_dual_vertices", sorted(dual.vertices), want)
        doubled = Polytope.from_vertices(
            [tuple(2 * x for x in v) for v in dual.vertices]
        )
        check("doubled_dual", doubled.vertices, p.vertices)
    if entry.provenance == "database":
        reflexive, delzant = is_reflexive_delzant(p)
        if not reflexive:
            problems.append("database entry is not reflexive")
        if not delzant:
            problems.append("database entry fails the vertex-basis condition")

    theta_exp = exp.get("theta")
    if theta_exp is not None:
        ed = extremal_affine(p)
        if theta_exp == "zero":
            check("theta", ed.theta, AffineFn.zero(p.dim))
        else:
            want = AffineFn.make(theta_exp["a"], theta_exp["c"])
            check("theta", ed.theta, want)

    dm_exp = exp.get("delta_minus_vertices")
    if dm_exp is not None:
        ed = extremal_affine(p)
        dm = excess_region(p, ed)
        if dm_exp == "empty":
            if dm is not None:
                problems.append("excess region expected empty but has interior")
        else:
            want = sorted(tuple(rat(x) for x in v) for v in dm_exp)
            if dm is None:
                problems.append("excess region expected nonempty but is empty")
            else:
                check("delta_minus", sorted(dm.vertices), want)

    if "volume" in exp:
        check("volume", p.volume(), rat(exp["volume"]))
    if "moment_x3" in exp:
        check("moment_x3", moment_vector(p)[2], rat(exp["moment_x3"]))
    if "moment" in exp:
        check("moment", moment_vector(p), tuple(rat(x) for x in exp["moment"]))
    if "boundary_moment" in exp:
        got = tuple(
            boundary_integral(p, Poly.coordinate(p.dim, k)) for k in range(p.dim)
        )
        check("boundary_moment", got, tuple(rat(x) for x in exp["boundary_moment"]))
    if "delta_minus_volume" in exp:
        ed = extremal_affine(p)
        dm = excess_region(p, ed)
        if dm is None:
            problems.append("delta_minus_volume expected but region is empty")
        else:
            check("delta_minus_volume", dm.volume(), rat(exp["delta_minus_volume"]))
    if "ehrhart" in exp:
        check(
            "ehrhart",
            ehrhart(p).coeffs,
            tuple(rat(x) for x in exp["ehrhart"]),
        )
    if "lattice_point_sum" in exp:
        pts = lattice_points(p, 1)
        got = tuple(Fraction(sum(z[k] for z in pts)) for k in range(p.dim))
        check("lattice_point_sum", got, tuple(rat(x) for x in exp["lattice_point_sum"]))
    if "lattice_point_sums" in exp:
        for level, want in exp["lattice_point_sums"].items():
            pts = lattice_points(p, int(level))
            got = tuple(Fraction(sum(z[k] for z in pts)) for k in range(p.dim))
            check(
                f"lattice_point_sums[{level}]",
                got,
                tuple(rat(x) for x in want),
            )
    if "weighted_node_sum" in exp:
        ed = extremal_affine(p)
        nd = theta_nodes(p, ed, 1)
        got = tuple(
            sum(
                (nd.deviations[j] * nd.nodes[j][k] for j in range(nd.count)),
                Fraction(0),
            )
            for k in range(p.dim)
        )
        check("weighted_node_sum", got, tuple(rat(x) for x in exp["weighted_node_sum"]))
    if "chow_level1" in exp:
        ed = extremal_affine(p)
        cond = chow_necessary(p, ed, 1)
        want = exp["chow_level1"]
        if (want == "fails") != (cond.status == FAILS):
            problems.append(f"chow_level1: computed {cond.status} != expected {want}")
    return problems


def verify_corpus() -> dict[str, list[str]]:
    """Run the integrity gate across the corpus; name -> discrepancy list."""
    return {entry.name: verify_entry(entry) for entry in load_corpus()}
