"""JSON descriptors for problems, instances and labelings."""
from __future__ import annotations

import json
from typing import Union

from .model import (
    Alphabet,
    HalfEdgeLabeling,
    MalformedInputError,
    NodeEdgeLFL,
    PartialOrder,
    RadiusConfiguration,
    RadiusLFL,
    TreeInstance,
    make_node_config,
)

Problem = Union[NodeEdgeLFL, RadiusLFL]


def problem_to_dict(problem: Problem) -> dict:
    if isinstance(problem, NodeEdgeLFL):
        node_configs = []
        for cfg in problem.node_configs:
            items = []
            for pid, count in cfg.required:
                x, y = problem.pair_sym(pid)
                items.extend({"in": x, "out": y} for _ in range(count))
            for pid in sorted(cfg.starred):
                x, y = problem.pair_sym(pid)
                items.append({"in": x, "out": y, "star": True})
            node_configs.append(items)
        edge_configs = []
        for a, b in sorted(problem.edge_configs):
            edge_configs.append([list(problem.pair_sym(a)), list(problem.pair_sym(b))])
        return {
            "formalism": "node-edge",
            "name": problem.name,
            "sigma_in": list(problem.sigma_in.symbols),
            "sigma_out": list(problem.sigma_out.symbols),
            "node_configs": node_configs,
            "edge_configs": edge_configs,
        }
    configurations = []
    for cfg in problem.configurations:
        configurations.append(
            {
                "nodes": list(range(cfg.n)),
                "edges": [[u, v, k] for u, v, k in cfg.edges],
                "center": cfg.center,
                "labels": {str(i): list(cfg.labels[i]) for i in range(cfg.n)},
            }
        )
    out = {
        "formalism": "radius-po" if problem.has_aux else "radius",
        "name": problem.name,
        "sigma_in": list(problem.sigma_in.symbols),
        "sigma_out": list(problem.sigma_out.symbols),
        "radius": problem.radius,
        "configurations": configurations,
    }
    if problem.has_aux:
        out["aux"] = list(problem.aux.symbols)
        out["order"] = sorted([lo, hi] for lo, hi in problem.order.pairs)
    return out


def problem_from_dict(data: dict) -> Problem:
    try:
        formalism = data["formalism"]
    except KeyError:
        raise MalformedInputError("problem descriptor missing 'formalism'")
    name = data.get("name", "")
    sigma_in = Alphabet(tuple(data["sigma_in"]))
    sigma_out = Alphabet(tuple(data["sigma_out"]))
    if formalism == "node-edge":
        node_configs = []
        for items in data["node_configs"]:
            required: dict[int, int] = {}
            starred = set()
            for item in items:
                pid = sigma_in.id(item["in"]) * len(sigma_out) + sigma_out.id(item["out"])
                if item.get("star"):
                    if pid in starred:
                        raise MalformedInputError(
                            "at most one starred element per (input, output) pair"
                        )
                    starred.add(pid)
                else:
                    required[pid] = required.get(pid, 0) + 1
            node_configs.append(make_node_config(required, starred))
        edge_configs = set()
        for (xa, ya), (xb, yb) in data["edge_configs"]:
            a = sigma_in.id(xa) * len(sigma_out) + sigma_out.id(ya)
            b = sigma_in.id(xb) * len(sigma_out) + sigma_out.id(yb)
            edge_configs.add((a, b) if a <= b else (b, a))
        return NodeEdgeLFL(sigma_in, sigma_out, tuple(node_configs), frozenset(edge_configs), name)
    if formalism in ("radius", "radius-po"):
        aux = Alphabet(tuple(data.get("aux", ())))
        order = PartialOrder(frozenset((lo, hi) for lo, hi in data.get("order", ())))
        configurations = []
        for c in data["configurations"]:
            nodes = c["nodes"]
            idx = {str(k): i for i, k in enumerate(nodes)}
            labels = [None] * len(nodes)
            for k, (x, y) in c["labels"].items():
                labels[idx[str(k)]] = (x, y)
            if any(l is None for l in labels):
                raise MalformedInputError("configuration labels must cover every node")
            edges = tuple(
                sorted(
                    (min(idx[str(u)], idx[str(v)]), max(idx[str(u)], idx[str(v)]), kind)
                    for u, v, kind in c["edges"]
                )
            )
            configurations.append(
                RadiusConfiguration(
                    n=len(nodes), center=idx[str(c["center"])], edges=edges, labels=tuple(labels)
                )
            )
        return RadiusLFL(
            sigma_in=sigma_in,
            sigma_out=sigma_out,
            radius=int(data["radius"]),
            configurations=tuple(configurations),
            aux=aux,
            order=order,
            name=name,
            allow_disconnected_required=bool(data.get("allow_disconnected_required", False)),
        )
    raise MalformedInputError(f"unknown formalism {formalism!r}")


# ---------------------------------------------------------------------------
# Instances
# ---------------------------------------------------------------------------


def _half_edge_key(names: tuple[str, ...], u: int, v: int) -> str:
    a, b = (u, v) if u < v else (v, u)
    return f"{names[a]}-{names[b]}:{names[u]}"


def _resolve_half_edge_key(key: str, name_to_id: dict[str, int], edges: set) -> tuple[int, int]:
    body, _, end = key.rpartition(":")
    if end not in name_to_id:
        raise MalformedInputError(f"half-edge key {key!r}: unknown endpoint")
    for cut in range(1, len(body)):
        if body[cut] != "-":
            continue
        left, right = body[:cut], body[cut + 1 :]
        if left in name_to_id and right in name_to_id:
            a, b = name_to_id[left], name_to_id[right]
            lo, hi = (a, b) if a < b else (b, a)
            if (lo, hi) in edges:
                e = name_to_id[end]
                if e == a or e == b:
                    other = b if e == a else a
                    return (e, other)
    raise MalformedInputError(f"half-edge key {key!r} does not name an instance edge")


def instance_to_dict(instance: TreeInstance) -> dict:
    out: dict = {
        "nodes": list(instance.names),
        "edges": [[instance.names[u], instance.names[v]] for u, v in instance.edges],
    }
    if instance.half_inputs is not None:
        #節 half-edge inputs take precedence as the native node-edge convention
        out["half_edge_inputs"] = {}
        for (u, v), x in sorted(instance.half_inputs.items()):
            key = _half_edge_key(instance.names, u, v)
            out["half_edge_inputs"][key] = x
    if instance.node_inputs is not None:
        out["node_inputs"] = {
            instance.names[i]: instance.node_inputs[i] for i in range(instance.n)
        }
    return out


def instance_to_dict_symbolic(instance: TreeInstance, sigma_in: Alphabet) -> dict:
    out = instance_to_dict(instance)
    if "half_edge_inputs" in out:
        out["half_edge_inputs"] = {
            k: sigma_in.sym(x) for k, x in out["half_edge_inputs"].items()
        }
    if "node_inputs" in out:
        out["node_inputs"] = {k: sigma_in.sym(x) for k, x in out["node_inputs"].items()}
    return out


def instance_from_dict(data: dict, sigma_in: Alphabet) -> TreeInstance:
    names = tuple(str(x) for x in data["nodes"])
    if len(set(names)) != len(names):
        raise MalformedInputError("duplicate node names")
    name_to_id = {nm: i for i, nm in enumerate(names)}
    edges = set()
    for u, v in data["edges"]:
        a, b = name_to_id[str(u)], name_to_id[str(v)]
        if a == b:
            raise MalformedInputError("self-loop in instance")
        edges.add((a, b) if a < b else (b, a))
    edge_tuple = tuple(sorted(edges))

    def to_id(x) -> int:
        return sigma_in.id(str(x)) if isinstance(x, str) else int(x)

    node_inputs = None
    half_inputs = None
    if "node_inputs" in data:
        raw = data["node_inputs"]
        node_inputs = tuple(to_id(raw[nm]) for nm in names)
    if "half_edge_inputs" in data:
        half_inputs = {}
        for key, x in data["half_edge_inputs"].items():
            he = _resolve_half_edge_key(str(key), name_to_id, edges)
            half_inputs[he] = to_id(x)
    if node_inputs is None and half_inputs is None:
        raise MalformedInputError("instance needs node_inputs or half_edge_inputs")
    return TreeInstance(len(names), edge_tuple, names, node_inputs, half_inputs)


def labeling_to_dict(
    labeling: HalfEdgeLabeling, instance: TreeInstance, sigma_out: Alphabet
) -> dict:
    if labeling.kind == "node":
        return {
            "node_outputs": {
                instance.names[v]: sigma_out.sym(y) for v, y in sorted(labeling.values.items())
            }
        }
    return {
        "half_edge_outputs": {
            _half_edge_key(instance.names, u, v): sigma_out.sym(y)
            for (u, v), y in sorted(labeling.values.items())
        }
    }


def labeling_from_dict(data: dict, instance: TreeInstance, sigma_out: Alphabet) -> HalfEdgeLabeling:
    name_to_id = {nm: i for i, nm in enumerate(instance.names)}
    edges = set(instance.edges)
    if "node_outputs" in data:
        values = {
            name_to_id[str(k)]: sigma_out.id(str(v)) for k, v in data["node_outputs"].items()
        }
        return HalfEdgeLabeling("node", values)
    if "half_edge_outputs" in data:
        values = {}
        for key, v in data["half_edge_outputs"].items():
            he = _resolve_half_edge_key(str(key), name_to_id, edges)
            values[he] = sigma_out.id(str(v))
        return HalfEdgeLabeling("half-edge", values)
    raise MalformedInputError("labeling needs node_outputs or half_edge_outputs")


def load_json(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def dump_json(obj: dict, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")
