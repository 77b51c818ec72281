"""Reading and writing instance, clustering and source-problem files.

Instance files are JSON with a fixed key order so that golden files compare
byte for byte. Source problems use small whitespace text formats:

MCC::

    n m k
    c_0 c_1 ... c_{n-1}      # class label (0..k-1) of each vertex
    u v                      # m edge lines

Dominating set::

    n m k
    u v                      # m edge lines
"""

from __future__ import annotations

import json
from typing import Any

from .errors import InstanceError
from .graph import build_graph
from .reductions import DsInstance, MccInstance
from .solvers import Clustering, MsrInstance, Variant


def instance_to_dict(inst: MsrInstance) -> dict[str, Any]:
    g = inst.graph
    if g is None:
        raise InstanceError("only graph-backed instances can be serialized")
    out: dict[str, Any] = {
        "graph": {"n": g.n, "edges": [list(e) for e in g.edges], "unit": g.unit},
        "k": inst.k,
        "delta": inst.delta,
        "variant": inst.variant.value,
    }
    if inst.variant is Variant.ALLOWED:
        out["allowed_centers"] = sorted(inst.allowed)
    return out


def dump_instance(inst: MsrInstance) -> str:
    """Fixed key order, one edge per line."""
    d = instance_to_dict(inst)
    g = d["graph"]
    edges = ",\n".join(f"      {json.dumps(e)}" for e in g["edges"])
    lines = [
        "{",
        '  "graph": {',
        f'    "n": {g["n"]},',
        f'    "edges": [\n{edges}\n    ],' if edges else '    "edges": [],',
        f'    "unit": {json.dumps(g["unit"])}',
        "  },",
        f'  "k": {d["k"]},',
        f'  "delta": {json.dumps(d["delta"])},',
    ]
    if "allowed_centers" in d:
        lines.append(f'  "variant": {json.dumps(d["variant"])},')
        lines.append(f'  "allowed_centers": {json.dumps(d["allowed_centers"])}')
    else:
        lines.append(f'  "variant": {json.dumps(d["variant"])}')
    lines.append("}")
    return "\n".join(lines) + "\n"


def instance_from_dict(d: dict[str, Any]) -> MsrInstance:
    try:
        gd = d["graph"]
        n = gd["n"]
        edges = [tuple(e) for e in gd["edges"]]
        k = d["k"]
    except (KeyError, TypeError) as exc:
        raise InstanceError(f"instance is missing field {exc}") from None
    g = build_graph(n, edges)
    if "unit" in gd and bool(gd["unit"]) != g.unit:
        raise InstanceError("'unit' flag disagrees with the edge weights")
    try:
        variant = Variant(d.get("variant", "standard"))
    except ValueError:
        raise InstanceError(f"unknown variant {d.get('variant')!r}") from None
    allowed = d.get("allowed_centers")
    if variant is Variant.ALLOWED and allowed is None:
        raise InstanceError("variant 'allowed' requires allowed_centers")
    if variant is not Variant.ALLOWED and allowed is not None:
        raise InstanceError("allowed_centers given for a variant that does not use it")
    return MsrInstance.from_graph(g, k, d.get("delta"), variant, allowed)


def load_instance(text: str) -> MsrInstance:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"instance file is not valid JSON: {exc}") from None
    if not isinstance(d, dict):
        raise InstanceError("instance file must hold a JSON object")
    return instance_from_dict(d)


def dump_clustering(c: Clustering) -> str:
    return json.dumps({"pairs": [list(p) for p in c.pairs]}) + "\n"


def load_clustering(text: str) -> Clustering:
    """Accept ``{"pairs": [[c, r], ...]}`` or a bare list of pairs."""
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"clustering file is not valid JSON: {exc}") from None
    pairs = d.get("pairs") if isinstance(d, dict) else d
    if not isinstance(pairs, list) or any(
            not isinstance(p, list) or len(p) != 2 or not all(isinstance(x, int) for x in p)
            for p in pairs):
        raise InstanceError("clustering must be a list of [center, radius] integer pairs")
    return Clustering(tuple((c, r) for c, r in pairs))


def _rows(text: str) -> list[list[int]]:
    rows = [ln.split("#", 1)[0].split() for ln in text.splitlines()]
    try:
        return [[int(x) for x in r] for r in rows if r]
    except ValueError as exc:
        raise InstanceError(f"expected integers: {exc}") from None


def parse_mcc_text(text: str) -> MccInstance:
    rows = _rows(text)
    if len(rows) < 2 or len(rows[0]) != 3:
        raise InstanceError("MCC file needs an 'n m k' header and a class-label line")
    n, m, k = rows[0]
    labels = rows[1]
    if len(labels) != n:
        raise InstanceError(f"expected {n} class labels, found {len(labels)}")
    if any(not 0 <= c < k for c in labels):
        raise InstanceError(f"class labels must lie in 0..{k - 1}")
    edges = [tuple(r) for r in rows[2:]]
    if len(edges) != m:
        raise InstanceError(f"header announces {m} edges, found {len(edges)}")
    if any(len(e) != 2 for e in edges):
        raise InstanceError("MCC edges are unweighted 'u v' pairs")
    g = build_graph(n, edges)
    parts = tuple(tuple(v for v in range(n) if labels[v] == i) for i in range(k))
    return MccInstance(g, parts)


def format_mcc_text(mcc: MccInstance) -> str:
    cls = mcc.class_of()
    lines = [f"{mcc.graph.n} {mcc.graph.m} {mcc.k}", " ".join(map(str, cls))]
    lines += [f"{u} {v}" for u, v, _ in mcc.graph.edges]
    return "\n".join(lines) + "\n"


def parse_ds_text(text: str) -> DsInstance:
    rows = _rows(text)
    if not rows or len(rows[0]) != 3:
        raise InstanceError("dominating-set file needs an 'n m k' header")
    n, m, k = rows[0]
    edges = [tuple(r) for r in rows[1:]]
    if len(edges) != m:
        raise InstanceError(f"header announces {m} edges, found {len(edges)}")
    if any(len(e) != 2 for e in edges):
        raise InstanceError("dominating-set edges are unweighted 'u v' pairs")
    return DsInstance(build_graph(n, edges), k)


def format_ds_text(ds: DsInstance) -> str:
    lines = [f"{ds.graph.n} {ds.graph.m} {ds.k}"] + [f"{u} {v}" for u, v, _ in ds.graph.edges]
    return "\n".join(lines) + "\n"
