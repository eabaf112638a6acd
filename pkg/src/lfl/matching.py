"""Exact matching and verification semantics for both formalisms."""
from __future__ import annotations

from collections import Counter
from typing import Optional

from .model import (
    OPTIONAL,
    REQUIRED,
    HalfEdgeLabeling,
    MalformedInputError,
    NodeConfig,
    NodeEdgeLFL,
    PreconditionError,
    RadiusConfiguration,
    RadiusLFL,
    TreeInstance,
    Verdict,
    Violation,
    validate_required_connectivity,
)

# ---------------------------------------------------------------------------
# Node-edge formalism
# ---------------------------------------------------------------------------


def match_node_config(labels: Counter, config: NodeConfig) -> bool:
    """Exact-or-starred multiplicity rule for one node configuration.

    ``labels`` counts pair_ids on the half-edges around one node.  True iff
    every pair occurs exactly as often as required, or more often with the
    pair starred; pairs absent from the configuration must not occur.
    """
    for pid, have in labels.items():
        want = config.m(pid)
        if have == want:
            continue
        if have > want and pid in config.starred:
            continue
        return False
    for pid, want in config.required:
        if labels.get(pid, 0) < want:
            return False
    return True


def match_any_node_config(problem: NodeEdgeLFL, labels: Counter) -> Optional[int]:
    for i, cfg in enumerate(problem.node_configs):
        if match_node_config(labels, cfg):
            return i
    return None


def match_edge_config(problem: NodeEdgeLFL, pid_a: int, pid_b: int) -> bool:
    """True iff the unordered pair of half-edge labels belongs to C_E."""
    return problem.edge_ok(pid_a, pid_b)


def node_label_counter(
    instance: TreeInstance, labeling: HalfEdgeLabeling, problem: NodeEdgeLFL, v: int
) -> Counter:
    c: Counter = Counter()
    for u in instance.neighbors(v):
        pid = problem.pair_id(instance.half_input(v, u), labeling.at((v, u)))
        c[pid] += 1
    return c


def verify_node_edge(
    instance: TreeInstance, labeling: HalfEdgeLabeling, problem: NodeEdgeLFL
) -> Verdict:
    """Check every node multiset against C_V and every edge pair against C_E."""
    if labeling.kind != "half-edge":
        raise MalformedInputError("node-edge verification needs a half-edge labeling")
    missing = [he for he in instance.half_edges() if he not in labeling.values]
    if missing:
        raise MalformedInputError(f"partial labeling: {len(missing)} half-edges unlabeled")
    n_out = len(problem.sigma_out)
    for he, out in labeling.values.items():
        if not 0 <= out < n_out:
            raise MalformedInputError(f"unknown output id {out} on {he}")
    violations = []
    for v in range(instance.n):
        counts = node_label_counter(instance, labeling, problem, v)
        if match_any_node_config(problem, counts) is None:
            human = sorted((problem.pair_sym(p), c) for p, c in counts.items())
            violations.append(
                Violation(
                    "node",
                    (instance.names[v],),
                    f"multiset {human} matches no node configuration",
                )
            )
    for u, v in instance.edges:
        pu = problem.pair_id(instance.half_input(u, v), labeling.at((u, v)))
        pv = problem.pair_id(instance.half_input(v, u), labeling.at((v, u)))
        if not problem.edge_ok(pu, pv):
            violations.append(
                Violation(
                    "edge",
                    (instance.names[u], instance.names[v]),
                    f"pair {{{problem.pair_sym(pu)}, {problem.pair_sym(pv)}}}"
                    " not in edge configurations",
                )
            )
    return Verdict(not violations, tuple(violations))


# ---------------------------------------------------------------------------
# Radius formalism: homomorphism matching
# ---------------------------------------------------------------------------


def neighborhood(instance: TreeInstance, v: int, r: int) -> dict[int, int]:
    """Nodes of N_r(v) with their depths.

    On trees this is the depth-<=r subtree.  The distance convention excludes
    edges between two depth-r nodes (they would lie at distance r+1), which on
    trees cannot occur anyway.
    """
    depth = {v: 0}
    frontier = [v]
    for d in range(1, r + 1):
        nxt = []
        for u in frontier:
            for w in instance.neighbors(u):
                if w not in depth:
                    depth[w] = d
                    nxt.append(w)
        frontier = nxt
    return depth


def _label_ok(
    instance: TreeInstance,
    labeling: HalfEdgeLabeling,
    problem: RadiusLFL,
    config: RadiusConfiguration,
    inst_node: int,
    cfg_node: int,
) -> bool:
    x, y = config.labels[cfg_node]
    if problem.sigma_in.sym(instance.node_input(inst_node)) != x:
        return False
    concrete = problem.sigma_out.sym(labeling.at(inst_node))
    return problem.output_matches(concrete, y)


def match_radius_configuration(
    instance: TreeInstance,
    v: int,
    labeling: HalfEdgeLabeling,
    config: RadiusConfiguration,
    problem: RadiusLFL,
) -> Optional[dict[int, int]]:
    """Search for a homomorphism witness from N_r(v) onto ``config``.

    Implements the four matching rules: correctly centered, labelings
    respected (outputs compared under the partial order), required-subgraph
    isomorphism, and edge preservation.  Returns a node map instance->config
    or None.

    When required edges form a connected subgraph containing the center the
    search embeds that rigid skeleton first and handles the purely-optional
    remainder with memoized subtree checks; otherwise it falls back to plain
    backtracking.
    """
    if labeling.kind != "node":
        raise MalformedInputError("radius matching needs a node labeling")
    if any(a == b for a, b, k in config.edges if k == REQUIRED):
        return None  # required self-loop is never matchable on a tree
    if validate_required_connectivity(config) is not None:
        return match_radius_configuration_bruteforce(instance, v, labeling, config, problem)

    r = problem.radius
    ball = neighborhood(instance, v, r)
    cdepth = config.depths()
    req_edges = config.required_edges()
    skel_required: set[int] = {n for uw in req_edges for n in uw}

    def label_ok(a: int, q: int) -> bool:
        return _label_ok(instance, labeling, problem, config, a, q)

    if not label_ok(v, config.center):
        return None

    # Memoized: can the instance subtree entered at `a` map into the purely
    # optional region with a -> q?
    memo: dict[tuple[int, int], bool] = {}

    def can_hang(a: int, q: int) -> bool:
        key = (a, q)
        got = memo.get(key)
        if got is not None:
            return got
        memo[key] = False  # cycle guard; trees cannot recurse into this
        ok = label_ok(a, q)
        if ok:
            for b in instance.neighbors(a):
                if b not in ball or ball[b] <= ball[a]:
                    continue
                if not any(
                    config.kind(q, q2) == OPTIONAL and q2 not in skel_required and can_hang(b, q2)
                    for q2 in config.neighbors(q)
                ):
                    ok = False
                    break
        memo[key] = ok
        return ok

    def hang_candidates(qa: int, b: int):
        for q2 in config.neighbors(qa):
            if config.kind(qa, q2) == OPTIONAL and q2 not in skel_required and can_hang(b, q2):
                yield q2

    # Orient the skeleton away from the center and order parents first.
    skel_parent: dict[int, int] = {}
    order: list[int] = []
    if req_edges:
        children: dict[int, list[int]] = {}
        for u, w in req_edges:
            hi, lo = (u, w) if cdepth[u] > cdepth[w] else (w, u)
            children.setdefault(lo, []).append(hi)
        stack = [config.center]
        seen = {config.center}
        while stack:
            u = stack.pop()
            for w in sorted(children.get(u, ())):
                if w not in seen:
                    seen.add(w)
                    skel_parent[w] = u
                    order.append(w)
                    stack.append(w)

    result: Optional[dict[int, int]] = None  # config -> instance

    def extend(i: int, g: dict[int, int], used: set[int]) -> bool:
        nonlocal result
        if i == len(order):
            for q, a in g.items():
                for b in instance.neighbors(a):
                    if b not in ball or ball[b] <= ball[a] or b in used:
                        continue
                    if next(hang_candidates(q, b), None) is None:
                        return False
            result = dict(g)
            return True
        q = order[i]
        a = g[skel_parent[q]]
        for b in instance.neighbors(a):
            if b in used or b not in ball or ball[b] <= ball[a]:
                continue
            if not label_ok(b, q):
                continue
            g[q] = b
            used.add(b)
            if extend(i + 1, g, used):
                return True
            used.discard(b)
            del g[q]
        return False

    if not extend(0, {config.center: v}, {v}):
        return None

    # Complete the witness over the optional region, greedily and memo-guided.
    witness: dict[int, int] = {a: q for q, a in result.items()}

    def place(a: int) -> None:
        qa = witness[a]
        for b in instance.neighbors(a):
            if b not in ball or ball[b] <= ball[a] or b in witness:
                continue
            for q2 in hang_candidates(qa, b):
                witness[b] = q2
                place(b)
                break

    for a in sorted(witness, key=lambda x: ball[x]):
        place(a)
    return witness


def match_radius_configuration_bruteforce(
    instance: TreeInstance,
    v: int,
    labeling: HalfEdgeLabeling,
    config: RadiusConfiguration,
    problem: RadiusLFL,
) -> Optional[dict[int, int]]:
    """Plain backtracking over all node maps; doubles as the matcher oracle."""
    if labeling.kind != "node":
        raise MalformedInputError("radius matching needs a node labeling")
    ball = neighborhood(instance, v, problem.radius)
    nodes = sorted(ball, key=lambda x: (ball[x], x))
    req_edges = config.required_edges()

    def label_ok(a: int, q: int) -> bool:
        return _label_ok(instance, labeling, problem, config, a, q)

    f: dict[int, int] = {}

    def rec(i: int) -> Optional[dict[int, int]]:
        if i == len(nodes):
            used: Counter = Counter()
            for a in nodes:
                for b in instance.neighbors(a):
                    if b in f and a < b:
                        qa, qb = f[a], f[b]
                        used[(qa, qb) if qa <= qb else (qb, qa)] += 1
            req_set = {((u, w) if u <= w else (w, u)) for u, w in req_edges}
            for lo, hi in req_set:
                if used.get((lo, hi), 0) != 1:
                    return None
            req_nodes = {n for uw in req_edges for n in uw}
            pre: Counter = Counter(q for q in f.values() if q in req_nodes)
            if any(pre.get(q, 0) != 1 for q in req_nodes):
                return None
            # edges among required preimages must map onto required edges
            for a in nodes:
                if f[a] not in req_nodes:
                    continue
                for b in instance.neighbors(a):
                    if b in f and a < b and f[b] in req_nodes:
                        qa, qb = f[a], f[b]
                        if ((qa, qb) if qa <= qb else (qb, qa)) not in req_set:
                            return None
            return dict(f)
        a = nodes[i]
        cands = [config.center] if a == v else list(range(config.n))
        for q in cands:
            if not label_ok(a, q):
                continue
            if any(b in f and not config.has_edge(q, f[b]) for b in instance.neighbors(a)):
                continue
            f[a] = q
            got = rec(i + 1)
            if got is not None:
                return got
            del f[a]
        return None

    return rec(0)


def match_any_radius_configuration(
    instance: TreeInstance, v: int, labeling: HalfEdgeLabeling, problem: RadiusLFL
) -> Optional[tuple[int, dict[int, int]]]:
    for i, cfg in enumerate(problem.configurations):
        w = match_radius_configuration(instance, v, labeling, cfg, problem)
        if w is not None:
            return i, w
    return None


def verify_radius(
    instance: TreeInstance, labeling: HalfEdgeLabeling, problem: RadiusLFL
) -> Verdict:
    """Valid iff every node's r-ball matches some configuration."""
    if labeling.kind != "node":
        raise MalformedInputError("radius verification needs a node labeling")
    if set(labeling.values.keys()) != set(range(instance.n)):
        raise MalformedInputError("partial labeling over nodes")
    if instance.node_inputs is None:
        raise PreconditionError("radius instances carry node inputs")
    for v, out in labeling.values.items():
        if not 0 <= out < len(problem.sigma_out):
            raise MalformedInputError(f"unknown output id {out} at node {v}")
    violations = []
    for v in range(instance.n):
        if match_any_radius_configuration(instance, v, labeling, problem) is None:
            violations.append(
                Violation("node", (instance.names[v],), "no configuration matches the r-ball")
            )
    return Verdict(not violations, tuple(violations))
