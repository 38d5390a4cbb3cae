"""Coupled-cell networks: colourings, quotients, fibrations, and chain lifts.

A network is a typed directed multigraph.  Node ids are contiguous from 1.
Arrow weights may be numeric or symbolic (parameter names such as "alpha"
resolved later, at simulation time).  All types here are immutable values;
every operation is pure.
"""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass, field

from .errors import InvalidColoring, NotBalanced, UnknownNetwork

Weight = float | int | str

SINGLE_NODE = "single-node"
TWO_NODE_LATERAL = "two-node-lateral"

FORMAT_VERSION = 1


def _weight_key(w: Weight):
    # canonical sort key over mixed numeric/symbolic weights
    if isinstance(w, str):
        return (1, w)
    return (0, repr(float(w)))


@dataclass(frozen=True)
class Arrow:
    """Directed arrow tail -> head with a type tag and a coupling weight."""

    tail: int
    head: int
    kind: str
    weight: Weight

    def key(self):
        return (self.kind, _weight_key(self.weight))


@dataclass(frozen=True)
class Network:
    """Typed directed multigraph with node ids 1..n.

    ``node_types[i-1]`` is the type tag of node i.  Parallel arrows are
    allowed.  Self-arrows are rejected because the rate model excludes
    self-coupling.
    """

    node_types: tuple[str, ...]
    arrows: tuple[Arrow, ...]

    def __post_init__(self):
        n = len(self.node_types)
        for a in self.arrows:
            if not (1 <= a.tail <= n and 1 <= a.head <= n):
                raise ValueError(f"arrow {a.tail}->{a.head} references a missing node")
            if a.tail == a.head:
                raise ValueError(f"self-arrow on node {a.head} is not allowed")

    @property
    def n(self) -> int:
        return len(self.node_types)

    def node_ids(self) -> range:
        return range(1, self.n + 1)

    def inputs(self, i: int) -> tuple[Arrow, ...]:
        return tuple(a for a in self.arrows if a.head == i)

    def outputs(self, i: int) -> tuple[Arrow, ...]:
        return tuple(a for a in self.arrows if a.tail == i)


@dataclass(frozen=True)
class Coloring:
    """Total node colouring; colour ids contiguous from 1.

    ``colors[i-1]`` is the colour of node i.
    """

    colors: tuple[int, ...]

    def __post_init__(self):
        used = sorted(set(self.colors))
        if used != list(range(1, len(used) + 1)):
            raise ValueError("colour ids must be contiguous from 1")

    @classmethod
    def from_clusters(cls, clusters, n: int | None = None) -> "Coloring":
        """Build from a list of node-id clusters, coloured in listing order."""
        assignment: dict[int, int] = {}
        for c, cluster in enumerate(clusters, start=1):
            for i in cluster:
                if i in assignment:
                    raise ValueError(f"node {i} appears in two clusters")
                assignment[i] = c
        size = n if n is not None else (max(assignment) if assignment else 0)
        if sorted(assignment) != list(range(1, size + 1)):
            raise ValueError("clusters must partition nodes 1..n")
        return cls(tuple(assignment[i] for i in range(1, size + 1)))

    @classmethod
    def trivial(cls, n: int) -> "Coloring":
        return cls(tuple(range(1, n + 1)))

    @property
    def n_colors(self) -> int:
        return max(self.colors) if self.colors else 0

    def color_of(self, i: int) -> int:
        return self.colors[i - 1]

    def clusters(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.n_colors)]
        for i, c in enumerate(self.colors, start=1):
            out[c - 1].append(i)
        return out


@dataclass(frozen=True)
class NodeMap:
    """Node map between two networks; ``mapping[i-1]`` is the image of node i."""

    mapping: tuple[int, ...]
    source: str = ""
    target: str = ""

    def __call__(self, i: int) -> int:
        return self.mapping[i - 1]


def _check_total(net: Network, col: Coloring) -> None:
    if len(col.colors) != net.n:
        raise InvalidColoring(
            f"colouring covers {len(col.colors)} nodes, network has {net.n}"
        )


def _input_signature(net: Network, col: Coloring, i: int):
    """Canonical multiset of (arrow kind, weight, tail colour) for node i."""
    sig = [(a.kind, _weight_key(a.weight), col.color_of(a.tail)) for a in net.inputs(i)]
    return tuple(sorted(sig))


def is_balanced(net: Network, col: Coloring) -> bool:
    """True iff same-coloured nodes share node type and have colour-isomorphic inputs.

    Colour-isomorphic means there is a bijection between the input arrow
    multisets preserving arrow type, weight, and tail colour.
    """
    _check_total(net, col)
    for cluster in col.clusters():
        rep = cluster[0]
        rep_type = net.node_types[rep - 1]
        rep_sig = _input_signature(net, col, rep)
        for i in cluster[1:]:
            if net.node_types[i - 1] != rep_type:
                return False
            if _input_signature(net, col, i) != rep_sig:
                return False
    return True


def quotient(net: Network, col: Coloring) -> tuple[Network, NodeMap]:
    """Collapse a balanced colouring to its quotient network.

    The quotient has one node per colour; its input multiset is the
    representative's, with tails replaced by tail colours.  The returned
    NodeMap is the projection node -> colour.
    """
    if not is_balanced(net, col):
        raise NotBalanced("colouring is not balanced; quotient undefined")
    clusters = col.clusters()
    types = tuple(net.node_types[cluster[0] - 1] for cluster in clusters)
    arrows = []
    for c, cluster in enumerate(clusters, start=1):
        rep = cluster[0]
        for a in net.inputs(rep):
            arrows.append(Arrow(col.color_of(a.tail), c, a.kind, a.weight))
    qnet = Network(types, tuple(arrows))
    return qnet, NodeMap(col.colors)


def check_fibration(src: Network, dst: Network, nmap: NodeMap) -> bool:
    """True iff nmap preserves node types, arrow types/weights, and input sets.

    The input set condition: for every source node i, the multiset of
    (kind, weight, image-of-tail) over i's inputs equals the multiset of
    (kind, weight, tail) over the inputs of the image node.
    """
    if len(nmap.mapping) != src.n:
        return False
    if any(not (1 <= j <= dst.n) for j in nmap.mapping):
        return False
    for i in src.node_ids():
        j = nmap(i)
        if src.node_types[i - 1] != dst.node_types[j - 1]:
            return False
        src_sig = sorted((a.kind, _weight_key(a.weight), nmap(a.tail)) for a in src.inputs(i))
        dst_sig = sorted((a.kind, _weight_key(a.weight), a.tail) for a in dst.inputs(j))
        if src_sig != dst_sig:
            return False
    return True


# --- isomorphism (tiny networks only) ---------------------------------------

_ISO_LIMIT = 10


def _iso_signature(net: Network, i: int):
    ins = tuple(sorted(a.key() for a in net.inputs(i)))
    outs = tuple(sorted(a.key() for a in net.outputs(i)))
    return (net.node_types[i - 1], ins, outs)


def _arrow_multiset(net: Network):
    return sorted((a.tail, a.head, a.kind, _weight_key(a.weight)) for a in net.arrows)


def is_isomorphic(a: Network, b: Network) -> bool:
    """Brute-force isomorphism test, limited to networks of at most 10 nodes."""
    if a.n > _ISO_LIMIT or b.n > _ISO_LIMIT:
        raise ValueError(f"isomorphism search is limited to {_ISO_LIMIT} nodes")
    if a.n != b.n or len(a.arrows) != len(b.arrows):
        return False
    sig_a = [_iso_signature(a, i) for i in a.node_ids()]
    sig_b = [_iso_signature(b, i) for i in b.node_ids()]
    if sorted(sig_a) != sorted(sig_b):
        return False
    candidates = [
        [j for j in b.node_ids() if sig_b[j - 1] == sig_a[i - 1]] for i in a.node_ids()
    ]
    target = _arrow_multiset(b)

    def extend(perm: list[int], used: set[int]) -> bool:
        i = len(perm) + 1
        if i > a.n:
            mapped = sorted(
                (perm[x.tail - 1], perm[x.head - 1], x.kind, _weight_key(x.weight))
                for x in a.arrows
            )
            return mapped == target
        for j in candidates[i - 1]:
            if j not in used:
                perm.append(j)
                used.add(j)
                if extend(perm, used):
                    return True
                perm.pop()
                used.remove(j)
        return False

    return extend([], set())


# --- feedforward / lateral lifts ---------------------------------------------


@dataclass(frozen=True)
class LiftSpec:
    """Recipe for extending a CPG with a chain of repeating modules.

    ``h`` overrides the weight of the within-module lateral arrows
    (two-node-lateral only); None keeps the weight of the CPG arrow the
    lateral arrow replaces.
    """

    cpg: Network
    module_kind: str = SINGLE_NODE
    n_modules: int = 0
    h: Weight | None = None

    def __post_init__(self):
        if self.module_kind not in (SINGLE_NODE, TWO_NODE_LATERAL):
            raise ValueError(f"unknown module kind {self.module_kind!r}")
        if self.n_modules < 0:
            raise ValueError("n_modules must be >= 0")
        if self.module_kind == SINGLE_NODE and self.h is not None:
            raise ValueError("single-node modules carry no lateral strength")
        if self.module_kind == TWO_NODE_LATERAL and self.cpg.n % 2:
            raise ValueError("two-node-lateral modules need an even CPG")


@dataclass(frozen=True)
class Lift:
    """A built lift: network, canonical colouring, and block layout."""

    network: Network
    coloring: Coloring
    cpg_nodes: tuple[int, ...]
    modules: tuple[tuple[int, ...], ...]


def build_lift(spec: LiftSpec) -> Lift:
    """Construct the chain lift of a CPG.

    Chain nodes cycle through the CPG colours.  Each chain node replicates
    the input multiset of its CPG counterpart; every replicated input is
    drawn from the most recently added node of the required tail colour,
    which keeps the canonical colouring balanced and all chain connections
    short-range.  Two-node-lateral modules pair colours (c, c + n/2) and
    draw inputs whose tail colour is the partner's from the partner node,
    so each module mirrors one cross-column of the CPG.
    """
    cpg = spec.cpg
    n = cpg.n
    types = list(cpg.node_types)
    arrows = list(cpg.arrows)
    colors = list(range(1, n + 1))
    # latest[c] = most recently added node of colour c+1
    latest = list(range(1, n + 1))
    modules: list[tuple[int, ...]] = []

    def replicate(new_id: int, counterpart: int, partner: int | None, partner_color: int | None):
        for a in cpg.inputs(counterpart):
            if partner is not None and a.tail == partner_color:
                w = a.weight if spec.h is None else spec.h
                arrows.append(Arrow(partner, new_id, a.kind, w))
            else:
                arrows.append(Arrow(latest[a.tail - 1], new_id, a.kind, a.weight))

    if spec.module_kind == SINGLE_NODE:
        for k in range(spec.n_modules):
            c = (k % n) + 1
            new_id = n + k + 1
            types.append(cpg.node_types[c - 1])
            colors.append(c)
            replicate(new_id, c, None, None)
            latest[c - 1] = new_id
            modules.append((new_id,))
    else:
        half = n // 2
        for k in range(spec.n_modules):
            cp = (k % half) + 1
            cq = cp + half
            p = n + 2 * k + 1
            q = n + 2 * k + 2
            types.extend([cpg.node_types[cp - 1], cpg.node_types[cq - 1]])
            colors.extend([cp, cq])
            replicate(p, cp, q, cq)
            replicate(q, cq, p, cp)
            latest[cp - 1] = p
            latest[cq - 1] = q
            modules.append((p, q))

    net = Network(tuple(types), tuple(arrows))
    return Lift(net, Coloring(tuple(colors)), tuple(range(1, n + 1)), tuple(modules))


def feedforward_lift(spec: LiftSpec) -> tuple[Network, Coloring]:
    """Lift network plus its canonical balanced colouring."""
    lift = build_lift(spec)
    return lift.network, lift.coloring


# --- builtin catalogue --------------------------------------------------------


def _ring3() -> Network:
    # Z3 ring: each node driven by its predecessor (1 <- 3, 2 <- 1, 3 <- 2)
    arrows = (
        Arrow(3, 1, "chain", "alpha"),
        Arrow(1, 2, "chain", "alpha"),
        Arrow(2, 3, "chain", "alpha"),
    )
    return Network(("std",) * 3, arrows)


def _biped4() -> Network:
    """4-node biped CPG: diagonal (alpha), lateral (beta), medial (gamma) inputs."""
    diag = [(4, 1), (3, 2), (2, 3), (1, 4)]
    lat = [(3, 1), (4, 2), (1, 3), (2, 4)]
    med = [(2, 1), (1, 2), (4, 3), (3, 4)]
    arrows = tuple(
        [Arrow(t, h, "diag", "alpha") for t, h in diag]
        + [Arrow(t, h, "lat", "beta") for t, h in lat]
        + [Arrow(t, h, "med", "gamma") for t, h in med]
    )
    return Network(("std",) * 4, arrows)


def _five_node() -> Network:
    """5-node lift of the biped CPG with trivial symmetry; clusters {1,5},{2},{3},{4}.

    The duplicated node 5 copies node 1's inputs; the three choices left
    open by balance are fixed so that 2->5, 3->5 and 4->1 are the unique
    unidirectional arrows of their types.
    """
    diag = [(4, 1), (4, 5), (5, 4), (3, 2), (2, 3)]
    lat = [(3, 1), (3, 5), (1, 3), (4, 2), (2, 4)]
    med = [(2, 1), (2, 5), (1, 2), (4, 3), (3, 4)]
    arrows = tuple(
        [Arrow(t, h, "diag", "alpha") for t, h in diag]
        + [Arrow(t, h, "lat", "beta") for t, h in lat]
        + [Arrow(t, h, "med", "gamma") for t, h in med]
    )
    return Network(("std",) * 5, arrows)


_LIFT_NAME = re.compile(r"^biped-(ff|lateral)[:(](\d+)\)?$")

BUILTIN_NAMES = ("chain7", "biped4", "five-node", "biped-ff(k)", "biped-lateral(k)")


def builtin(name: str) -> tuple[Network, Coloring]:
    """Return a catalogued network and its default colouring.

    Names: ``chain7``, ``biped4``, ``five-node``, ``biped-ff(k)``,
    ``biped-lateral(k)`` (also accepted as ``biped-ff:k``).
    """
    if name == "chain7":
        return feedforward_lift(LiftSpec(_ring3(), SINGLE_NODE, 4))
    if name == "biped4":
        net = _biped4()
        return net, Coloring.trivial(4)
    if name == "five-node":
        return _five_node(), Coloring((1, 2, 3, 4, 1))
    m = _LIFT_NAME.match(name)
    if m:
        kind = SINGLE_NODE if m.group(1) == "ff" else TWO_NODE_LATERAL
        k = int(m.group(2))
        return feedforward_lift(LiftSpec(_biped4(), kind, k))
    raise UnknownNetwork(f"unknown builtin {name!r}; known: {', '.join(BUILTIN_NAMES)}")


def builtin_lift(name: str) -> Lift:
    """Like :func:`builtin` for the lift names, keeping the block layout."""
    m = _LIFT_NAME.match(name)
    if name == "chain7":
        return build_lift(LiftSpec(_ring3(), SINGLE_NODE, 4))
    if not m:
        raise UnknownNetwork(f"{name!r} is not a lift builtin")
    kind = SINGLE_NODE if m.group(1) == "ff" else TWO_NODE_LATERAL
    return build_lift(LiftSpec(_biped4(), kind, int(m.group(2))))


# --- text format ---------------------------------------------------------------


def to_json_dict(net: Network) -> dict:
    return {
        "version": FORMAT_VERSION,
        "nodes": [{"id": i, "type": net.node_types[i - 1]} for i in net.node_ids()],
        "arrows": [
            {"from": a.tail, "to": a.head, "type": a.kind, "weight": a.weight}
            for a in net.arrows
        ],
    }


def from_json_dict(doc: dict) -> Network:
    if doc.get("version") != FORMAT_VERSION:
        raise ValueError(f"unsupported network format version {doc.get('version')!r}")
    nodes = sorted(doc["nodes"], key=lambda d: d["id"])
    if [d["id"] for d in nodes] != list(range(1, len(nodes) + 1)):
        raise ValueError("node ids must be contiguous from 1")
    types = tuple(d["type"] for d in nodes)
    arrows = tuple(
        Arrow(d["from"], d["to"], d["type"], d["weight"]) for d in doc["arrows"]
    )
    return Network(types, arrows)


def dumps(net: Network) -> str:
    return json.dumps(to_json_dict(net), indent=2, sort_keys=True)


def loads(text: str) -> Network:
    return from_json_dict(json.loads(text))


def load(path) -> Network:
    with open(path, "r", encoding="utf-8") as fh:
        return from_json_dict(json.load(fh))
