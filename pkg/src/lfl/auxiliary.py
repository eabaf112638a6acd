"""Elimination of auxiliary (wildcard) labels from partially ordered LFLs."""
from __future__ import annotations

from typing import Optional

from .model import (
    OPTIONAL,
    REQUIRED,
    Alphabet,
    PartialOrder,
    RadiusConfiguration,
    RadiusLFL,
)


def build_config(center_key, labels: dict, edges: list) -> RadiusConfiguration:
    """Assemble a configuration from arbitrary hashable node keys.

    ``labels`` maps key -> (input, output) and ``edges`` holds
    (key1, key2, kind) triples.  Keys are renumbered deterministically.
    """
    keys = sorted(labels.keys(), key=repr)
    idx = {k: i for i, k in enumerate(keys)}
    norm_edges = []
    for k1, k2, kind in edges:
        u, v = idx[k1], idx[k2]
        if u > v:
            u, v = v, u
        norm_edges.append((u, v, kind))
    return RadiusConfiguration(
        n=len(keys),
        center=idx[center_key],
        edges=tuple(sorted(norm_edges)),
        labels=tuple(labels[k] for k in keys),
    )


def _subtree_nodes(cfg: RadiusConfiguration, u: int, depth: dict[int, int]) -> list[int]:
    out = [u]
    stack = [u]
    while stack:
        a = stack.pop()
        for b in cfg.neighbors(a):
            if depth[b] == depth[a] + 1 and b not in out:
                out.append(b)
                stack.append(b)
    return out


def _is_required_node(cfg: RadiusConfiguration, u: int) -> bool:
    return any(cfg.kind(u, v) == REQUIRED for v in cfg.neighbors(u))


def _expand_once(
    cfg: RadiusConfiguration, problem: RadiusLFL, warnings: list[str]
) -> Optional[list[RadiusConfiguration]]:
    """Expand the deepest auxiliary-labeled node; None when no aux remains.

    Deepest-first keeps copied subtrees auxiliary-free, so every step strictly
    lowers the auxiliary count and the fixpoint terminates.
    """
    aux_syms = set(problem.aux.symbols)
    depth = cfg.depths()
    candidates = [u for u in range(cfg.n) if cfg.labels[u][1] in aux_syms]
    if not candidates:
        return None
    u = max(candidates, key=lambda a: (depth[a], -a))
    x_u, a_sym = cfg.labels[u]
    dominated = sorted(problem.below(a_sym))

    def as_keyed():
        labels = {i: cfg.labels[i] for i in range(cfg.n)}
        edges = [(a, b, k) for a, b, k in cfg.edges]
        return labels, edges

    if u == cfg.center or _is_required_node(cfg, u):
        # one configuration copy per dominated output symbol
        if not dominated:
            warnings.append(
                f"auxiliary {a_sym!r} on a required node dominates no output; "
                "configuration dropped"
            )
            return []
        out = []
        for y in dominated:
            labels, edges = as_keyed()
            labels[u] = (x_u, y)
            out.append(build_config(cfg.center, labels, edges))
        return out

    # optional node: one optional copy (with its whole subtree) per symbol
    sub = _subtree_nodes(cfg, u, depth)
    parent = cfg.parent_of(u)
    labels, edges = as_keyed()
    for a in sub:
        del labels[a]
    edges = [
        (a, b, k)
        for a, b, k in edges
        if (a not in sub and b not in sub) or (a == b and a not in sub)
    ]
    if not dominated:
        warnings.append(
            f"auxiliary {a_sym!r} on an optional node dominates no output; "
            "copy set empty, subtree removed"
        )
        return [build_config(cfg.center, labels, edges)]
    for ci, y in enumerate(dominated):
        for a in sub:
            key = ("copy", ci, a)
            xa, ya = cfg.labels[a]
            labels[key] = (xa, y) if a == u else (xa, ya)
        edges.append((parent, ("copy", ci, u), OPTIONAL))
        for a in sub:
            for b in cfg.neighbors(a):
                if b in sub and a < b:
                    edges.append((("copy", ci, a), ("copy", ci, b), cfg.kind(a, b)))
            for x, y_, k in cfg.edges:
                if x == y_ == a:
                    edges.append((("copy", ci, a), ("copy", ci, a), k))
    return [build_config(cfg.center, labels, edges)]


def eliminate_auxiliary(problem: RadiusLFL) -> tuple[RadiusLFL, tuple[str, ...]]:
    """Expand auxiliary labels away, iterated to fixpoint.

    Required-node auxiliaries become one configuration copy per dominated
    output symbol; optional-node auxiliaries expand in place to one optional
    copy per dominated symbol.  Returns the plain problem and any warnings.
    """
    if not problem.has_aux:
        return problem, ()
    warnings: list[str] = []
    work = list(problem.configurations)
    done: list[RadiusConfiguration] = []
    while work:
        cfg = work.pop(0)
        expansion = _expand_once(cfg, problem, warnings)
        if expansion is None:
            done.append(cfg)
        else:
            work = expansion + work
    seen = set()
    unique = []
    for cfg in done:
        key = cfg.canonical()
        if key not in seen:
            seen.add(key)
            unique.append(cfg)
    plain = RadiusLFL(
        sigma_in=problem.sigma_in,
        sigma_out=problem.sigma_out,
        radius=problem.radius,
        configurations=tuple(unique),
        aux=Alphabet(()),
        order=PartialOrder(frozenset()),
        name=problem.name + "(plain)" if problem.name else "",
        allow_disconnected_required=problem.allow_disconnected_required,
    )
    return plain, tuple(warnings)
