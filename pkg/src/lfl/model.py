"""Problem and instance model: alphabets, the three problem formalisms, trees.

Symbols are interned to small integers at construction time; multisets are kept
as canonical sorted count vectors so equality is structural throughout.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

REQUIRED = "required"
OPTIONAL = "optional"


class LflError(Exception):
    """Base error for this package."""


class MalformedInputError(LflError):
    """Raised when a symbol, labeling or file violates the declared schema."""


class PreconditionError(LflError):
    """Raised when an operation's precondition does not hold."""


class CapExceededError(LflError):
    """Raised when an enumeration exceeds its configured cap; never truncates."""


@dataclass(frozen=True)
class Alphabet:
    """A finite ordered list of distinct symbol tokens."""

    symbols: tuple[str, ...]

    def __post_init__(self):
        if len(set(self.symbols)) != len(self.symbols):
            raise MalformedInputError(f"alphabet symbols not distinct: {self.symbols}")
        object.__setattr__(self, "_index", {s: i for i, s in enumerate(self.symbols)})

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self):
        return iter(range(len(self.symbols)))

    def id(self, symbol: str) -> int:
        try:
            return self._index[symbol]
        except KeyError:
            raise MalformedInputError(f"unknown symbol {symbol!r} (alphabet {self.symbols})")

    def sym(self, ident: int) -> str:
        return self.symbols[ident]

    def __contains__(self, symbol: str) -> bool:
        return symbol in self._index


# ---------------------------------------------------------------------------
# Node-edge checkable problems
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NodeConfig:
    """One allowed node configuration: exact multiplicities plus starred pairs.

    ``required`` lists (pair_id, count) with count >= 1, sorted by pair_id.
    ``starred`` is the set of pair_ids that may occur arbitrarily often beyond
    their required count.
    """

    required: tuple[tuple[int, int], ...]
    starred: frozenset[int]

    def m(self, pid: int) -> int:
        for p, c in self.required:
            if p == pid:
                return c
        return 0

    @property
    def pairs(self) -> frozenset[int]:
        return frozenset(p for p, _ in self.required) | self.starred

    @property
    def size(self) -> int:
        """Multiset cardinality: required copies plus one per starred pair."""
        return sum(c for _, c in self.required) + len(self.starred)

    @property
    def required_total(self) -> int:
        return sum(c for _, c in self.required)


def make_node_config(required: Mapping[int, int], starred: Iterable[int]) -> NodeConfig:
    req = tuple(sorted((p, c) for p, c in required.items() if c > 0))
    return NodeConfig(req, frozenset(starred))


@dataclass(frozen=True)
class NodeEdgeLFL:
    """A node-edge checkable problem over half-edge labels.

    Half-edge labels are (input, output) pairs interned as
    ``pair_id = input_id * len(sigma_out) + output_id``.  Edge configurations
    are unordered pairs of pair_ids.
    """

    sigma_in: Alphabet
    sigma_out: Alphabet
    node_configs: tuple[NodeConfig, ...]
    edge_configs: frozenset[tuple[int, int]]
    name: str = ""

    def __post_init__(self):
        n_out = len(self.sigma_out)
        n_pairs = len(self.sigma_in) * n_out
        for cfg in self.node_configs:
            for p in cfg.pairs:
                if not 0 <= p < n_pairs:
                    raise MalformedInputError(f"pair id {p} outside declared alphabets")
        for a, b in self.edge_configs:
            if not (0 <= a <= b < n_pairs):
                raise MalformedInputError(f"bad edge config ({a},{b})")
        partners: dict[int, set[int]] = {}
        for a, b in self.edge_configs:
            partners.setdefault(a, set()).add(b)
            partners.setdefault(b, set()).add(a)
        object.__setattr__(
            self, "_partners", {p: frozenset(s) for p, s in partners.items()}
        )

    # -- pair helpers ------------------------------------------------------
    def pair_id(self, in_id: int, out_id: int) -> int:
        return in_id * len(self.sigma_out) + out_id

    def pair_in(self, pid: int) -> int:
        return pid // len(self.sigma_out)

    def pair_out(self, pid: int) -> int:
        return pid % len(self.sigma_out)

    def pair_sym(self, pid: int) -> tuple[str, str]:
        return self.sigma_in.sym(self.pair_in(pid)), self.sigma_out.sym(self.pair_out(pid))

    def edge_ok(self, pid_a: int, pid_b: int) -> bool:
        lo, hi = (pid_a, pid_b) if pid_a <= pid_b else (pid_b, pid_a)
        return (lo, hi) in self.edge_configs

    def partners(self, pid: int) -> frozenset[int]:
        """Pair ids that may sit on the opposite half of an edge."""
        return self._partners.get(pid, frozenset())

    @property
    def max_config_size(self) -> int:
        """s, the maximum cardinality over node configurations."""
        return max((c.size for c in self.node_configs), default=0)

    @property
    def max_required_total(self) -> int:
        return max((c.required_total for c in self.node_configs), default=0)


# ---------------------------------------------------------------------------
# Radius (homomorphism) problems
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RadiusConfiguration:
    """A centered labeled ball with required/optional edges.

    Nodes are 0..n-1; ``labels[i]`` is an (input, output-or-auxiliary) symbol
    pair; ``edges`` hold (u, v, kind) with u <= v; self-loops are accepted
    syntactically but can never be matched on tree instances.
    """

    n: int
    center: int
    edges: tuple[tuple[int, int, str], ...]
    labels: tuple[tuple[str, str], ...]

    def __post_init__(self):
        if not 0 <= self.center < self.n:
            raise MalformedInputError("center outside node range")
        if len(self.labels) != self.n:
            raise MalformedInputError("labels must cover every node")
        adj: dict[int, list[int]] = {i: [] for i in range(self.n)}
        kinds: dict[tuple[int, int], str] = {}
        for u, v, kind in self.edges:
            if not (0 <= u < self.n and 0 <= v < self.n and u <= v):
                raise MalformedInputError(f"bad edge ({u},{v})")
            if kind not in (REQUIRED, OPTIONAL):
                raise MalformedInputError(f"bad edge kind {kind!r}")
            if (u, v) in kinds:
                raise MalformedInputError(f"duplicate edge ({u},{v})")
            kinds[(u, v)] = kind
            if u != v:
                adj[u].append(v)
                adj[v].append(u)
        object.__setattr__(self, "_adj", {u: tuple(sorted(vs)) for u, vs in adj.items()})
        object.__setattr__(self, "_kinds", kinds)

    def neighbors(self, u: int) -> tuple[int, ...]:
        return self._adj[u]

    def kind(self, u: int, v: int) -> str:
        return self._kinds[(u, v) if u <= v else (v, u)]

    def has_edge(self, u: int, v: int) -> bool:
        return ((u, v) if u <= v else (v, u)) in self._kinds

    def required_edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u, v, k in self.edges if k == REQUIRED and u != v]

    def depths(self) -> dict[int, int]:
        """BFS distance from the center (self-loops ignored)."""
        depth = {self.center: 0}
        frontier = [self.center]
        while frontier:
            nxt = []
            for u in frontier:
                for v in self._adj[u]:
                    if v not in depth:
                        depth[v] = depth[u] + 1
                        nxt.append(v)
            frontier = nxt
        return depth

    def is_tree(self) -> bool:
        simple = [(u, v) for u, v, _ in self.edges if u != v]
        return len(simple) == self.n - 1 and len(self.depths()) == self.n

    def parent_of(self, u: int) -> Optional[int]:
        """Parent when rooted at the center; None for the center itself."""
        if u == self.center:
            return None
        depth = self.depths()
        for v in self._adj[u]:
            if depth.get(v, -2) == depth[u] - 1:
                return v
        return None

    def canonical(self) -> object:
        """Rooted-tree canonical form (label-aware) for isomorphism dedup."""
        depth = self.depths()

        def canon(u: int, parent: Optional[int], via_kind: Optional[str]) -> tuple:
            kids = []
            for v in self._adj[u]:
                if v != parent and depth.get(v, -1) == depth[u] + 1:
                    kids.append(canon(v, u, self.kind(u, v)))
            loops = sum(1 for a, b, _ in self.edges if a == b == u)
            return (self.labels[u], via_kind, loops, tuple(sorted(kids)))

        return canon(self.center, None, None)


def validate_required_connectivity(cfg: RadiusConfiguration) -> Optional[str]:
    """Check that required edges form a connected subgraph containing the center.

    Returns a diagnostic string on failure, None when fine.  Configurations
    with no required edges pass vacuously.
    """
    req = cfg.required_edges()
    if not req:
        return None
    nodes = set()
    for u, v in req:
        nodes.add(u)
        nodes.add(v)
    if cfg.center not in nodes:
        return f"required edges do not touch the center (nodes {sorted(nodes)})"
    adj: dict[int, set[int]] = {u: set() for u in nodes}
    for u, v in req:
        adj[u].add(v)
        adj[v].add(u)
    seen = {cfg.center}
    stack = [cfg.center]
    while stack:
        u = stack.pop()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                stack.append(v)
    if seen != nodes:
        return f"required subgraph disconnected: {sorted(nodes - seen)} unreachable"
    return None


@dataclass(frozen=True)
class PartialOrder:
    """Reflexive-transitive closure of a declared order over outputs + aux."""

    pairs: frozenset[tuple[str, str]]  # (lo, hi) raw declarations

    def closure(self, sigma_out: Alphabet, aux: Alphabet) -> dict[str, frozenset[str]]:
        """Map each symbol to the set of concrete output symbols below it."""
        domain = set(sigma_out.symbols) | set(aux.symbols)
        below: dict[str, set[str]] = {s: {s} for s in domain}
        for lo, hi in self.pairs:
            if lo not in domain or hi not in domain:
                raise MalformedInputError(f"order pair ({lo},{hi}) outside domain")
        changed = True
        while changed:
            changed = False
            for lo, hi in self.pairs:
                add = below[lo] - below[hi]
                if add:
                    below[hi] |= add
                    changed = True
        # antisymmetry over the declared closure
        for a in domain:
            for b in domain:
                if a != b and a in below[b] and b in below[a]:
                    raise MalformedInputError(f"order not antisymmetric: {a} ~ {b}")
        out = set(sigma_out.symbols)
        return {s: frozenset(below[s] & out) for s in domain}


@dataclass(frozen=True)
class RadiusLFL:
    """An LFL in the radius formalism, optionally with auxiliary wildcards."""

    sigma_in: Alphabet
    sigma_out: Alphabet
    radius: int
    configurations: tuple[RadiusConfiguration, ...]
    aux: Alphabet = Alphabet(())
    order: PartialOrder = PartialOrder(frozenset())
    name: str = ""
    allow_disconnected_required: bool = False

    def __post_init__(self):
        if self.radius < 1:
            raise MalformedInputError("radius must be >= 1")
        object.__setattr__(self, "_below", self.order.closure(self.sigma_out, self.aux))
        legal_out = set(self.sigma_out.symbols) | set(self.aux.symbols)
        for cfg in self.configurations:
            depth = cfg.depths()
            if len(depth) != cfg.n:
                raise MalformedInputError("configuration not connected")
            if any(d > self.radius for d in depth.values()):
                raise MalformedInputError("configuration node beyond declared radius")
            for u, v, _ in cfg.edges:
                if u != v and 1 + min(depth[u], depth[v]) > self.radius:
                    raise MalformedInputError("configuration edge beyond declared radius")
            for x, y in cfg.labels:
                if x not in self.sigma_in:
                    raise MalformedInputError(f"unknown input symbol {x!r}")
                if y not in legal_out:
                    raise MalformedInputError(f"unknown output symbol {y!r}")
            if not self.allow_disconnected_required:
                diag = validate_required_connectivity(cfg)
                if diag is not None:
                    raise MalformedInputError(
                        f"configuration rejected: {diag} "
                        "(pass allow_disconnected_required=True to override)"
                    )

    def below(self, symbol: str) -> frozenset[str]:
        """Concrete output symbols dominated by ``symbol`` (reflexive)."""
        return self._below[symbol]

    def output_matches(self, concrete: str, cfg_label: str) -> bool:
        return concrete in self._below[cfg_label]

    @property
    def has_aux(self) -> bool:
        return len(self.aux) > 0


# ---------------------------------------------------------------------------
# Instances and labelings
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TreeInstance:
    """An input-labeled tree; node ids are 0..n-1 with external names kept.

    Inputs live either on nodes (radius formalism) or on half-edges
    (node-edge formalism); both may be present after a conversion.  A
    half-edge is the ordered pair (u, v): the half of edge {u, v} at u.
    """

    n: int
    edges: tuple[tuple[int, int], ...]  # u < v
    names: tuple[str, ...]
    node_inputs: Optional[tuple[int, ...]] = None
    half_inputs: Optional[Mapping[tuple[int, int], int]] = None

    def __post_init__(self):
        if len(self.names) != self.n:
            raise MalformedInputError("names must cover every node")
        adj: dict[int, list[int]] = {i: [] for i in range(self.n)}
        for u, v in self.edges:
            if not (0 <= u < v < self.n):
                raise MalformedInputError(f"bad edge ({u},{v})")
            adj[u].append(v)
            adj[v].append(u)
        if len(self.edges) != self.n - 1:
            raise MalformedInputError("not a tree: wrong edge count")
        seen = {0} if self.n else set()
        stack = [0] if self.n else []
        while stack:
            u = stack.pop()
            for v in adj[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        if len(seen) != self.n:
            raise MalformedInputError("not a tree: disconnected")
        object.__setattr__(self, "_adj", {u: tuple(sorted(vs)) for u, vs in adj.items()})
        if self.node_inputs is not None and len(self.node_inputs) != self.n:
            raise MalformedInputError("node_inputs must cover every node")
        if self.half_inputs is not None:
            want = {(u, v) for u, v in self.edges} | {(v, u) for u, v in self.edges}
            if set(self.half_inputs.keys()) != want:
                raise MalformedInputError("half_inputs must cover every half-edge exactly")

    def neighbors(self, u: int) -> tuple[int, ...]:
        return self._adj[u]

    def degree(self, u: int) -> int:
        return len(self._adj[u])

    def half_edges(self) -> list[tuple[int, int]]:
        out = []
        for u, v in self.edges:
            out.append((u, v))
            out.append((v, u))
        return out

    def half_input(self, u: int, v: int) -> int:
        if self.half_inputs is not None:
            return self.half_inputs[(u, v)]
        if self.node_inputs is not None:
            return self.node_inputs[u]
        raise MalformedInputError("instance carries no input labeling")

    def node_input(self, u: int) -> int:
        if self.node_inputs is None:
            raise MalformedInputError("instance has no node inputs")
        return self.node_inputs[u]

    def with_half_inputs_from_nodes(self) -> "TreeInstance":
        """Duplicate node inputs onto all incident half-edges (lossy in reverse)."""
        if self.node_inputs is None:
            raise PreconditionError("no node inputs to convert")
        half = {}
        for u, v in self.edges:
            half[(u, v)] = self.node_inputs[u]
            half[(v, u)] = self.node_inputs[v]
        return TreeInstance(self.n, self.edges, self.names, self.node_inputs, half)


def path_instance(n: int, inputs: Optional[Sequence[int]] = None) -> TreeInstance:
    edges = tuple((i, i + 1) for i in range(n - 1))
    names = tuple(str(i) for i in range(n))
    node_inputs = tuple(inputs) if inputs is not None else tuple(0 for _ in range(n))
    return TreeInstance(n, edges, names, node_inputs)


def star_instance(leaves: int, inputs: Optional[Sequence[int]] = None) -> TreeInstance:
    edges = tuple((0, i) for i in range(1, leaves + 1))
    n = leaves + 1
    names = tuple(str(i) for i in range(n))
    node_inputs = tuple(inputs) if inputs is not None else tuple(0 for _ in range(n))
    return TreeInstance(n, edges, names, node_inputs)


@dataclass(frozen=True)
class HalfEdgeLabeling:
    """A candidate solution: outputs on half-edges or on nodes."""

    kind: str  # "half-edge" | "node"
    values: Mapping

    def __post_init__(self):
        if self.kind not in ("half-edge", "node"):
            raise MalformedInputError(f"bad labeling kind {self.kind!r}")

    def at(self, key) -> int:
        return self.values[key]


@dataclass(frozen=True)
class Violation:
    kind: str  # "node" | "edge"
    where: tuple
    reason: str


@dataclass(frozen=True)
class Verdict:
    valid: bool
    violations: tuple[Violation, ...] = ()

    def __bool__(self) -> bool:
        return self.valid
