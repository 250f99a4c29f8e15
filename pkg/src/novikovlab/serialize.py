"""JSON file formats (schema version ``"fmt": 1``).

Every file is an object with ``"fmt": 1`` and a ``"kind"`` naming its type:

``complex``
    ``{"ring", "lo", "hi", "ranks": {deg: n}, "diff": {deg: matrix}}`` plus an
    optional ``"cone_split": {"source_ranks": {deg: n}}`` declaring the complex
    to be a mapping cone.
``chain_map``
    ``{"source", "target", "comps": {deg: matrix}}``; source and target are
    paths (relative to the map file) or inline complex objects.
``bicomplex``
    ``{"ring", "p_lo", "p_hi", "q_lo", "q_hi", "ranks", "dh", "dv"}`` keyed by ``"p,q"``.
``cocycle`` / ``witness``
    ``{"n", "terms": {p: vector}}`` (a witness also has ``verified_range`` and ``direction``).

Matrices are ``{"rows", "cols", "entries"}``.  Base-ring scalars are strings
(``"-3"``, ``"2/5"``); Laurent entries are ``[[exp, "scalar"], ...]`` lists.
"""
from __future__ import annotations

import hashlib
import json
from pathlib import Path

from .bicomplex import DoubleComplexWindow, TotCocycle, Witness, torus_bicomplex, validate_bicomplex
from .complexes import ChainMap, CochainComplex, split_cone, validate_chain_map, validate_complex
from .errors import NovikovLabError, SchemaError
from .linalg import Matrix
from .rings import LaurentPoly, RingTag

FMT = 1
KINDS = ("complex", "chain_map", "bicomplex", "cocycle", "witness")


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def digest(data: bytes) -> str:
    return "sha256:" + hashlib.sha256(data).hexdigest()


# -- elements ----------------------------------------------------------------------

def element_to_json(R: RingTag, x):
    if R.is_laurent:
        return x.to_pairs()
    return R.format(x)


def element_from_json(R: RingTag, v, where: str):
    try:
        if R.is_laurent:
            if not isinstance(v, list):
                raise SchemaError(f"{where}: Laurent entry must be a list of [exp, scalar] pairs")
            return LaurentPoly.from_pairs(R.base, v)
        if isinstance(v, bool) or not isinstance(v, (str, int)):
            raise SchemaError(f"{where}: scalar must be a string or integer")
        return R.parse_element(str(v))
    except SchemaError:
        raise
    except (ValueError, TypeError, ArithmeticError) as exc:
        raise SchemaError(f"{where}: {exc}") from None


def matrix_to_json(M: Matrix):
    return {"rows": M.rows, "cols": M.cols,
            "entries": [[element_to_json(M.ring, x) for x in r] for r in M.entries]}


def matrix_from_json(R: RingTag, obj, where: str) -> Matrix:
    _need(obj, dict, where)
    rows = _int(obj, "rows", where)
    cols = _int(obj, "cols", where)
    ent = obj.get("entries")
    if not isinstance(ent, list) or len(ent) != rows or any(
            not isinstance(r, list) or len(r) != cols for r in ent):
        raise SchemaError(f"{where}.entries: expected a {rows}x{cols} array")
    return Matrix(R, rows, cols, [[element_from_json(R, x, f"{where}.entries[{i}][{j}]")
                                   for j, x in enumerate(r)] for i, r in enumerate(ent)])


def _need(obj, typ, where):
    if not isinstance(obj, typ):
        raise SchemaError(f"{where}: expected {typ.__name__}")


def _int(obj, key, where):
    v = obj.get(key)
    if isinstance(v, bool) or not isinstance(v, int):
        raise SchemaError(f"{where}.{key}: expected an integer")
    return v


def _deg(k, where):
    try:
        return int(k)
    except ValueError:
        raise SchemaError(f"{where}: degree key {k!r} is not an integer") from None


def _pq(k, where):
    try:
        p, q = k.split(",")
        return int(p), int(q)
    except ValueError:
        raise SchemaError(f"{where}: key {k!r} is not of the form 'p,q'") from None


def _ring(obj, where):
    if not isinstance(obj.get("ring"), str):
        raise SchemaError(f"{where}.ring: expected a ring name such as \"ZZ\" or \"Laurent(ZZ)\"")
    try:
        return RingTag.parse(obj["ring"])
    except (ValueError, TypeError) as exc:
        raise SchemaError(f"{where}.ring: {exc}") from None


def _header(obj, kind, where):
    _need(obj, dict, where)
    if obj.get("fmt") != FMT:
        raise SchemaError(f"{where}.fmt: expected schema version {FMT}")
    if kind is not None and obj.get("kind") != kind:
        raise SchemaError(f"{where}.kind: expected {kind!r}, got {obj.get('kind')!r}")


# -- complexes and maps ------------------------------------------------------------------

def complex_to_json(C: CochainComplex, cone_split: dict | None = None):
    out = {"fmt": FMT, "kind": "complex", "ring": str(C.ring), "lo": C.lo, "hi": C.hi,
           "ranks": {str(n): r for n, r in C.ranks.items()},
           "diff": {str(n): matrix_to_json(m) for n, m in C.diff.items()}}
    if cone_split is None and C.cone_of is not None:
        cone_split = C.cone_of.source.ranks
    if cone_split is not None:
        out["cone_split"] = {"source_ranks": {str(n): r for n, r in cone_split.items() if r}}
    return out


def complex_from_json(obj, where: str = "$", validate: bool = True) -> CochainComplex:
    _header(obj, "complex", where)
    R = _ring(obj, where)
    ranks = obj.get("ranks", {})
    _need(ranks, dict, f"{where}.ranks")
    rk = {}
    for k, v in ranks.items():
        if isinstance(v, bool) or not isinstance(v, int) or v < 0:
            raise SchemaError(f"{where}.ranks.{k}: expected a non-negative integer")
        rk[_deg(k, f"{where}.ranks")] = v
    diff = obj.get("diff", {})
    _need(diff, dict, f"{where}.diff")
    d = {_deg(k, f"{where}.diff"): matrix_from_json(R, m, f"{where}.diff.{k}") for k, m in diff.items()}
    lo = obj.get("lo")
    hi = obj.get("hi")
    try:
        C = CochainComplex(R, rk, d, lo, hi)
    except NovikovLabError as exc:
        raise SchemaError(f"{where}: {exc}") from None
    if validate:
        validate_complex(C).raise_if_failed()
    split = obj.get("cone_split")
    if split is not None:
        _need(split, dict, f"{where}.cone_split")
        src = split.get("source_ranks", {})
        _need(src, dict, f"{where}.cone_split.source_ranks")
        f = split_cone(C, {_deg(k, f"{where}.cone_split"): v for k, v in src.items()})
        C.cone_of = f
    return C


def chain_map_to_json(h: ChainMap, source=None, target=None):
    """``source``/``target`` may be path strings; by default the complexes are inlined."""
    return {"fmt": FMT, "kind": "chain_map",
            "source": source if source is not None else complex_to_json(h.source),
            "target": target if target is not None else complex_to_json(h.target),
            "comps": {str(n): matrix_to_json(m) for n, m in h.comps.items()}}


def chain_map_from_json(obj, base: Path | None = None, where: str = "$") -> ChainMap:
    _header(obj, "chain_map", where)

    def resolve(key):
        ref = obj.get(key)
        if isinstance(ref, str):
            path = (base or Path(".")) / ref
            return complex_from_json(load_json(path), str(path))
        return complex_from_json(ref, f"{where}.{key}")

    src = resolve("source")
    tgt = resolve("target")
    if tgt == src:
        tgt = src
    comps = obj.get("comps", {})
    _need(comps, dict, f"{where}.comps")
    R = src.ring
    try:
        h = ChainMap(src, tgt, {_deg(k, f"{where}.comps"): matrix_from_json(R, m, f"{where}.comps.{k}")
                                for k, m in comps.items()})
    except NovikovLabError as exc:
        raise SchemaError(f"{where}: {exc}") from None
    validate_chain_map(h).raise_if_failed()
    return h


# -- double complexes, cocycles, witnesses -------------------------------------------

def bicomplex_to_json(D: DoubleComplexWindow):
    key = lambda pq: f"{pq[0]},{pq[1]}"
    return {"fmt": FMT, "kind": "bicomplex", "ring": str(D.ring),
            "p_lo": D.p_lo, "p_hi": D.p_hi, "q_lo": D.q_lo, "q_hi": D.q_hi,
            "ranks": {key(pq): r for pq, r in D.ranks.items()},
            "dh": {key(pq): matrix_to_json(m) for pq, m in D.dh_maps.items()},
            "dv": {key(pq): matrix_to_json(m) for pq, m in D.dv_maps.items()},
            **({"torus": chain_map_to_json(D.torus[1])} if D.torus is not None else {})}


def bicomplex_from_json(obj, where: str = "$") -> DoubleComplexWindow:
    _header(obj, "bicomplex", where)
    R = _ring(obj, where)
    bounds = [_int(obj, k, where) for k in ("p_lo", "p_hi", "q_lo", "q_hi")]
    maps = {}
    for name in ("ranks", "dh", "dv"):
        part = obj.get(name, {})
        _need(part, dict, f"{where}.{name}")
        maps[name] = part
    ranks = {_pq(k, f"{where}.ranks"): v for k, v in maps["ranks"].items()}
    dh = {_pq(k, f"{where}.dh"): matrix_from_json(R, m, f"{where}.dh.{k}") for k, m in maps["dh"].items()}
    dv = {_pq(k, f"{where}.dv"): matrix_from_json(R, m, f"{where}.dv.{k}") for k, m in maps["dv"].items()}
    try:
        D = DoubleComplexWindow(R, *bounds, ranks, dh, dv)
    except ValueError as exc:
        raise SchemaError(f"{where}: {exc}") from None
    validate_bicomplex(D).raise_if_failed()
    if "torus" in obj:
        # provenance: the window must be exactly the torus double complex of this self map
        h = chain_map_from_json(obj["torus"], None, f"{where}.torus")
        if h.source != h.target:
            raise SchemaError(f"{where}.torus: not a self map")
        T = torus_bicomplex(h.source, h, D.p_lo, D.p_hi)
        if (T.ring, T.q_lo, T.q_hi, T.ranks, T.dh_maps, T.dv_maps) != \
                (D.ring, D.q_lo, D.q_hi, D.ranks, D.dh_maps, D.dv_maps):
            raise SchemaError(f"{where}.torus: the stored maps are not the torus double complex of this map")
        D = T
    return D


def _terms_to_json(R, terms):
    return {str(p): [element_to_json(R, x) for x in v] for p, v in sorted(terms.items())}


def cocycle_to_json(x: TotCocycle, R: RingTag):
    return {"fmt": FMT, "kind": "cocycle", "ring": str(R), "n": x.n, "terms": _terms_to_json(R, x.terms)}


def cocycle_from_json(obj, R: RingTag | None = None, where: str = "$") -> TotCocycle:
    _header(obj, "cocycle", where)
    if R is None:
        R = _ring(obj, where)
    elif "ring" in obj and _ring(obj, where) != R:
        raise SchemaError(f"{where}.ring: cocycle over {obj['ring']} for a complex over {R}")
    n = _int(obj, "n", where)
    terms = obj.get("terms", {})
    _need(terms, dict, f"{where}.terms")
    out = {}
    for k, v in terms.items():
        _need(v, list, f"{where}.terms.{k}")
        out[_deg(k, f"{where}.terms")] = tuple(
            element_from_json(R, e, f"{where}.terms.{k}[{i}]") for i, e in enumerate(v))
    return TotCocycle(n, out)


def witness_to_json(w: Witness, R: RingTag):
    return {"fmt": FMT, "kind": "witness", "ring": str(R), "n": w.n, "direction": w.direction,
            "verified_range": list(w.verified_range), "terms": _terms_to_json(R, w.terms)}


# -- files -------------------------------------------------------------------------

def load_json(path: Path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise SchemaError(f"{path}: cannot read ({exc.strerror})") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def parse_input(path, expect: str | None = None):
    """Load and validate any file kind; returns the parsed value."""
    path = Path(path)
    obj = load_json(path)
    _header(obj, None, str(path))
    kind = obj.get("kind")
    if kind not in KINDS or kind == "witness":
        raise SchemaError(f"{path}.kind: unknown kind, or an output-only kind, {kind!r}")
    if expect is not None and kind != expect:
        raise SchemaError(f"{path}: expected a {expect} file, got {kind}")
    if kind == "complex":
        return complex_from_json(obj, str(path))
    if kind == "chain_map":
        return chain_map_from_json(obj, path.parent, str(path))
    if kind == "bicomplex":
        return bicomplex_from_json(obj, str(path))
    return cocycle_from_json(obj, where=str(path))


def dump(obj, path) -> None:
    Path(path).write_text(canonical_json(obj))
