"""Category and algebra file formats plus the registry of bundled categories."""
from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Callable

from .algebra import AlgebraObject
from .braided import CategoryData, validate_category
from .errors import BadParameters, ParseError
from .generators import gen_fibonacci, gen_ising, gen_pointed_cyclic, gen_product, gen_tambara_yamagami, gen_z2
from .ring import DEFAULT_TOL, FusionRing

__all__ = [
    "CatalogEntry",
    "CATALOG",
    "emit_category",
    "parse_category",
    "emit_algebra",
    "parse_algebra",
    "content_hash",
    "catalog_names",
    "catalog_entry",
    "load_bundled",
    "bundled_path",
    "bundled_algebra_path",
]


def _num(x: float) -> str:
    x = float(x)
    if not math.isfinite(x):
        raise BadParameters(f"cannot serialize non-finite value {x}")
    return format(x, ".17g")


def _inline(obj: dict) -> str:
    parts = []
    for k in sorted(obj):
        v = obj[k]
        parts.append(f"{json.dumps(k)}: {_num(v) if isinstance(v, float) else json.dumps(v, ensure_ascii=False)}")
    return "{" + ", ".join(parts) + "}"


def _document(fields: dict) -> str:
    """Deterministic JSON: sorted keys, one record per line, 17-digit floats."""
    lines = ["{"]
    keys = sorted(fields)
    for i, k in enumerate(keys):
        v = fields[k]
        comma = "," if i < len(keys) - 1 else ""
        if isinstance(v, list) and v and isinstance(v[0], (dict, list)):
            lines.append(f"  {json.dumps(k)}: [")
            for j, item in enumerate(v):
                text = _inline(item) if isinstance(item, dict) else json.dumps(item, ensure_ascii=False)
                lines.append(f"    {text}{',' if j < len(v) - 1 else ''}")
            lines.append(f"  ]{comma}")
        else:
            lines.append(f"  {json.dumps(k)}: {json.dumps(v, ensure_ascii=False)}{comma}")
    lines.append("}")
    return "\n".join(lines) + "\n"


def emit_category(data: CategoryData) -> str:
    names = data.ring.names
    F = [
        {"a": names[a], "b": names[b], "c": names[c], "d": names[d], "e": names[e], "f": names[f],
         "re": v.real, "im": v.imag}
        for (a, b, c, d, e, f), v in sorted(data.F.items())
    ]
    fields = {
        "name": data.name,
        "labels": list(names),
        "dual": [names[i] for i in data.ring.dual],
        "fusion": [[names[a], names[b], names[c]] for a, b, c in data.ring.triples()],
        "F": F,
    }
    if data.R is not None:
        fields["R"] = [
            {"a": names[a], "b": names[b], "c": names[c], "re": v.real, "im": v.imag}
            for (a, b, c), v in sorted(data.R.items())
        ]
    return _document(fields)


def content_hash(data: CategoryData) -> str:
    return hashlib.sha256(emit_category(data).encode()).hexdigest()[:12]


def _load_json(source: str | Path):
    text = source
    if isinstance(source, Path) or (isinstance(source, str) and not source.lstrip().startswith("{")):
        try:
            text = Path(source).read_text(encoding="utf-8")
        except OSError as exc:
            raise ParseError(f"cannot read {source}: {exc}") from exc
    try:
        # integers are read as floats so that "-0" keeps its sign
        return json.loads(text, parse_int=float)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno) from exc


def _label_lookup(labels, name, field):
    try:
        return labels[name]
    except (KeyError, TypeError):
        raise ParseError(f"unknown label {name!r}", field=field) from None


def _complex(entry, field) -> complex:
    try:
        return complex(float(entry["re"]), float(entry.get("im", 0.0)))
    except (KeyError, TypeError, ValueError):
        raise ParseError("expected numeric 're' and 'im'", field=field) from None


def parse_category(source: str | Path, tol: float = DEFAULT_TOL) -> CategoryData:
    """Load and validate a category document (path or JSON text).

    Structural problems raise ParseError/MissingEntry. Axiom failures do not
    raise: the result is stored on ``data.validation`` and entropy
    computations on such data raise AxiomViolation.
    """
    doc = _load_json(source)
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object")
    for key in ("name", "labels", "fusion", "F"):
        if key not in doc:
            raise ParseError("required field missing", field=key)
    names = doc["labels"]
    if not isinstance(names, list) or not names or not all(isinstance(n, str) for n in names):
        raise ParseError("labels must be a non-empty list of strings", field="labels")
    if names[0] != "1":
        raise ParseError("the first label must be the unit '1'", field="labels")
    if len(set(names)) != len(names):
        raise ParseError("duplicate label", field="labels")
    idx = {n: i for i, n in enumerate(names)}

    triples = []
    seen = set()
    for i, t in enumerate(doc["fusion"]):
        if not isinstance(t, list) or len(t) != 3:
            raise ParseError("fusion entries are [a, b, c] triples", field=f"fusion[{i}]")
        key = tuple(_label_lookup(idx, n, f"fusion[{i}]") for n in t)
        if key in seen:
            raise ParseError(f"duplicate fusion triple {t} (multiplicity above 1 is not supported)", field=f"fusion[{i}]")
        seen.add(key)
        triples.append(key)
    dual = None
    if doc.get("dual") is not None:
        if not isinstance(doc["dual"], list) or len(doc["dual"]) != len(names):
            raise ParseError("dual must list one label per label", field="dual")
        dual = [_label_lookup(idx, n, "dual") for n in doc["dual"]]
    ring = FusionRing.from_triples(names, triples, dual)

    F = {}
    for i, entry in enumerate(doc["F"]):
        field = f"F[{i}]"
        try:
            key = tuple(_label_lookup(idx, entry[k], field) for k in "abcdef")
        except (KeyError, TypeError):
            raise ParseError("F entries need keys a..f", field=field) from None
        if key in F:
            raise ParseError(f"duplicate F key {key}", field=field)
        F[key] = _complex(entry, field)
    R = None
    if doc.get("R") is not None:
        R = {}
        for i, entry in enumerate(doc["R"]):
            field = f"R[{i}]"
            try:
                key = tuple(_label_lookup(idx, entry[k], field) for k in "abc")
            except (KeyError, TypeError):
                raise ParseError("R entries need keys a, b, c", field=field) from None
            if key in R:
                raise ParseError(f"duplicate R key {key}", field=field)
            R[key] = _complex(entry, field)
    if not isinstance(doc["name"], str):
        raise ParseError("name must be a string", field="name")
    data = CategoryData(ring, F, R, name=doc["name"])
    data.validation = validate_category(data, tol)
    return data


def emit_algebra(data: CategoryData, alg: AlgebraObject) -> str:
    names = data.ring.names
    fields = {
        "category": data.name,
        "name": alg.name,
        "objects": [names[a] for a in alg.support],
        "m": [
            {"a": names[a], "b": names[b], "c": names[c], "re": v.real, "im": v.imag}
            for (a, b, c), v in sorted(alg.m.items())
        ],
    }
    return _document(fields)


def parse_algebra(source: str | Path, data: CategoryData) -> AlgebraObject:
    doc = _load_json(source)
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object")
    for key in ("category", "objects", "m"):
        if key not in doc:
            raise ParseError("required field missing", field=key)
    if doc["category"] != data.name:
        raise ParseError(f"algebra is for category {doc['category']!r}, not {data.name!r}", field="category")
    idx = {n: i for i, n in enumerate(data.ring.names)}
    objects = [_label_lookup(idx, n, "objects") for n in doc["objects"]]
    if len(set(objects)) != len(objects):
        raise ParseError("each simple object may appear once (multiplicity-free algebras only)", field="objects")
    if 0 not in objects:
        raise ParseError("objects must include the unit '1'", field="objects")
    m = {}
    for i, entry in enumerate(doc["m"]):
        field = f"m[{i}]"
        try:
            key = tuple(_label_lookup(idx, entry[k], field) for k in "abc")
        except (KeyError, TypeError):
            raise ParseError("m entries need keys a, b, c", field=field) from None
        if key in m:
            raise ParseError(f"duplicate multiplication key {key}", field=field)
        m[key] = _complex(entry, field)
    try:
        return AlgebraObject.build(data, objects, m, name=doc.get("name") or "+".join(doc["objects"]))
    except Exception as exc:
        raise ParseError(str(exc), field="m") from exc


@dataclass(frozen=True)
class CatalogEntry:
    """``table_id`` lists candidate rows as ``FR^{r,s}_k(i/j)`` when invariants cannot separate them."""

    name: str
    build: Callable[[], CategoryData]
    table_id: str
    provenance: str
    algebras: tuple[tuple[str, tuple[str, ...]], ...] = ()


def _toric():
    return gen_z2(1, 1)


_KLEIN_HYPERBOLIC = [[0, 1], [1, 0]]


_ENTRIES = [
    CatalogEntry("toric3d", _toric, "FR^{2,0}_1(0)", "TABLE: row FR^{2,0}_1(0) = Z2(1,1)",
                 (("toric3d-A1", ("1", "x")),)),
    CatalogEntry("semion", lambda: gen_z2(-1, 1j), "FR^{2,0}_1(1)", "TABLE: row FR^{2,0}_1(1) = Z2(-1,i)"),
    CatalogEntry("fermionic-toric3d", lambda: gen_z2(1, -1), "FR^{2,0}_1(2)", "TABLE: row FR^{2,0}_1(2)"),
    CatalogEntry("antisemion", lambda: gen_z2(-1, -1j), "FR^{2,0}_1(3)", "TABLE: row FR^{2,0}_1(3)"),
    CatalogEntry("fibonacci", lambda: gen_fibonacci(False), "FR^{2,0}_2(0/1)", "TABLE: rows FR^{2,0}_2"),
    CatalogEntry("fibonacci-bar", lambda: gen_fibonacci(True), "FR^{2,0}_2(0/1)", "TABLE: rows FR^{2,0}_2"),
]
for _nu in range(1, 16, 2):
    _ENTRIES.append(
        CatalogEntry(f"ising-nu{_nu}", (lambda nu=_nu: gen_ising(nu)), "FR^{3,0}_1(0..7)", "TABLE: rows FR^{3,0}_1")
    )
for _p, _rows in ((0, "0"), (1, "1/2"), (2, "1/2")):
    _ENTRIES.append(
        CatalogEntry(f"z3-p{_p}", (lambda p=_p: gen_pointed_cyclic(3, p)), f"FR^{{3,2}}_1({_rows})", "TABLE: rows FR^{3,2}_1")
    )
_ENTRIES += [
    CatalogEntry("ty-klein-symmetric", lambda: gen_tambara_yamagami(_KLEIN_HYPERBOLIC, [1, 1], 1, 1),
                 "FR^{5,0}_1(1/3)", "TABLE: rows FR^{5,0}_1, symmetric TY over Z2xZ2",
                 (("ty-klein-symmetric-Ag1", ("1", "g1")),)),
    CatalogEntry("ty-klein-symmetric-fermionic", lambda: gen_tambara_yamagami(_KLEIN_HYPERBOLIC, [1, 1], 1, -1),
                 "FR^{5,0}_1(1/3)", "TABLE: rows FR^{5,0}_1, symmetric TY over Z2xZ2 with fermionic σ"),
    CatalogEntry("ty-klein", lambda: gen_tambara_yamagami(_KLEIN_HYPERBOLIC, [-1, -1], 1, 1),
                 "FR^{5,0}_1(5/7/9)", "TABLE: rows FR^{5,0}_1 with TY ✓",
                 (("ty-klein-Ag1", ("1", "g1")),)),
    CatalogEntry("ty-klein-bar", lambda: gen_tambara_yamagami(_KLEIN_HYPERBOLIC, [-1, -1], 1, -1),
                 "FR^{5,0}_1(5/7/9)", "TABLE: rows FR^{5,0}_1 with TY ✓"),
]
_ENTRIES += [
    CatalogEntry("z4-p0", lambda: gen_pointed_cyclic(4, 0), "", "DERIVED: symmetric pointed Z4"),
    CatalogEntry("z4-p1", lambda: gen_pointed_cyclic(4, 1), "", "DERIVED: Z4 with Müger center {0,2}",
                 (("z4-p1-A2", ("1", "g2")),)),
    CatalogEntry("z4-p1/2", lambda: gen_pointed_cyclic(4, "1/2"), "", "DERIVED: modular pointed Z4"),
    CatalogEntry("z5-p1", lambda: gen_pointed_cyclic(5, 1), "", "DERIVED: modular pointed Z5"),
    CatalogEntry("z6-p0", lambda: gen_pointed_cyclic(6, 0), "", "DERIVED: symmetric pointed Z6"),
    CatalogEntry("z6-p1", lambda: gen_pointed_cyclic(6, 1), "", "DERIVED: Z6 with Müger center {0,3}"),
    CatalogEntry("toric3d-x-toric3d", lambda: gen_product(_toric(), _toric(), "toric3d-x-toric3d"), "",
                 "DERIVED: Deligne product, symmetric rank 4"),
    CatalogEntry("toric3d-x-semion", lambda: gen_product(_toric(), gen_z2(-1, 1j), "toric3d-x-semion"), "",
                 "DERIVED: Deligne product, properly premodular pointed"),
    CatalogEntry("semion-x-antisemion", lambda: gen_product(gen_z2(-1, 1j), gen_z2(-1, -1j), "semion-x-antisemion"), "",
                 "DERIVED: Deligne product, modular pointed"),
    CatalogEntry("fibonacci-x-toric3d", lambda: gen_product(gen_fibonacci(), _toric(), "fibonacci-x-toric3d"), "",
                 "DERIVED: Deligne product, properly premodular non-pointed",
                 (("fibonacci-x-toric3d-Ax", ("1", "x")),)),
    CatalogEntry("ising-x-toric3d", lambda: gen_product(gen_ising(1), _toric(), "ising-x-toric3d"), "",
                 "DERIVED: Deligne product, properly premodular non-pointed"),
    CatalogEntry("ising-nu3-x-toric3d", lambda: gen_product(gen_ising(3), _toric(), "ising-nu3-x-toric3d"), "",
                 "DERIVED: Deligne product with a κ=-1 factor"),
]

CATALOG: dict[str, CatalogEntry] = {e.name: e for e in sorted(_ENTRIES, key=lambda e: e.name)}


def catalog_names() -> list[str]:
    return sorted(CATALOG)


def catalog_entry(name: str) -> CatalogEntry:
    try:
        return CATALOG[name]
    except KeyError:
        raise BadParameters(f"unknown catalog entry {name!r}") from None


@lru_cache(maxsize=None)
def _generated(name: str) -> CategoryData:
    data = catalog_entry(name).build()
    data.name = name
    return data


def load_bundled(name: str) -> CategoryData:
    """Generator output for a catalog entry (validated at generation)."""
    return _generated(name)


def _file_stem(name: str) -> str:
    return name.replace("/", "_")


def bundled_path(name: str) -> Path:
    catalog_entry(name)
    return Path(str(resources.files("loopgas") / "data" / f"{_file_stem(name)}.json"))


def bundled_algebra_path(alg_name: str) -> Path:
    return Path(str(resources.files("loopgas") / "data" / "algebras" / f"{_file_stem(alg_name)}.json"))


def bundled_algebras(name: str) -> list[tuple[str, AlgebraObject]]:
    """Algebras shipped with a catalog entry, multiplication identically 1."""
    data = load_bundled(name)
    out = []
    idx = {n: i for i, n in enumerate(data.ring.names)}
    for alg_name, objects in catalog_entry(name).algebras:
        support = [idx[o] for o in objects]
        m = {(a, b, c): 1.0 for a in support for b in support for c in data.ring.fuse(a, b) if c in support}
        out.append((alg_name, AlgebraObject.build(data, support, m, name=alg_name)))
    return out


def write_bundled_files(directory: Path | None = None) -> list[Path]:
    """Regenerate every shipped data file from the generators."""
    directory = Path(directory) if directory else Path(str(resources.files("loopgas") / "data"))
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for name in catalog_names():
        data = load_bundled(name)
        path = directory / f"{_file_stem(name)}.json"
        path.write_text(emit_category(data), encoding="utf-8")
        written.append(path)
        for alg_name, alg in bundled_algebras(name):
            apath = directory / "algebras" / f"{_file_stem(alg_name)}.json"
            apath.parent.mkdir(exist_ok=True)
            apath.write_text(emit_algebra(data, alg), encoding="utf-8")
            written.append(apath)
    return written
