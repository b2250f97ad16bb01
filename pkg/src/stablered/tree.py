"""The dual tree of a degenerate fiber, with exact rational edge data.

Vertices split into interior components (with a genus) and leaves, the
leaves being primitive tails, new tails, or wild branch points.  Each
edge carries integers (m, h); the reverse orientation is derived as
(m, -h), so the edge compatibility law is structural.  All identities are
checked in exact rational arithmetic.

The admissible-tree enumerator encodes, as local filters, the facts that
make the structure theorem run: every interior vertex satisfies the local
vanishing-cycle identity, node values avoid {-1, 0, 1}, the three
distinguished leaves sit in distinct directions from the root, interior
components carry at least three special points, and an interior vertex
whose edge data would force a differential with a pole of order two or
more cannot carry a logarithmic form while wild points rule out exact
ones.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import BoundsTooLarge, ExceptionalInput, MalformedGraph

PRIMITIVE = "primitive"
NEW = "new"
WILD = "wild"
LEAF_KINDS = (PRIMITIVE, NEW, WILD)


@dataclass(frozen=True)
class Edge:
    source: str
    target: str
    m: int
    h: int
    # explicit reverse data for adversarial tests; None means derived
    reverse_m: int = None
    reverse_h: int = None

    @property
    def sigma(self) -> Fraction:
        return Fraction(self.h, self.m)


@dataclass
class ReductionTree:
    root: str
    genus: dict                  # interior vertex name -> genus
    leaves: dict                 # leaf name -> kind
    edges: list                  # Edge records, one per undirected edge

    def vertices(self):
        return list(self.genus) + list(self.leaves)

    def is_interior(self, v) -> bool:
        return v in self.genus

    def directed(self):
        """Both orientations of every edge: (source, target, m, h)."""
        out = []
        for e in self.edges:
            out.append((e.source, e.target, e.m, e.h))
            rm = e.reverse_m if e.reverse_m is not None else e.m
            rh = e.reverse_h if e.reverse_h is not None else -e.h
            out.append((e.target, e.source, rm, rh))
        return out

    def out_edges(self, v):
        return [d for d in self.directed() if d[0] == v]

    def neighbors(self, v):
        return [t for (s, t, _, _) in self.directed() if s == v]

    def leaf_edge(self, leaf):
        """The unique directed edge with target the leaf."""
        for d in self.directed():
            if d[1] == leaf:
                return d
        raise MalformedGraph(f"leaf {leaf} has no incident edge")

    def leaf_sigma(self, leaf) -> Fraction:
        _, _, m, h = self.leaf_edge(leaf)
        return Fraction(h, m)

    def b0(self):
        return sorted(n for n, k in self.leaves.items()
                      if k in (PRIMITIVE, WILD))

    def tails(self):
        return sorted(n for n, k in self.leaves.items()
                      if k in (PRIMITIVE, NEW))

    def check_structure(self):
        names = self.vertices()
        if len(set(names)) != len(names):
            raise MalformedGraph("duplicate vertex names")
        if self.root not in self.genus:
            raise MalformedGraph("root must be an interior vertex")
        for k in self.leaves.values():
            if k not in LEAF_KINDS:
                raise MalformedGraph(f"unknown leaf kind {k!r}")
        for e in self.edges:
            if e.source not in names or e.target not in names:
                raise MalformedGraph(f"edge {e} touches an unknown vertex")
            if e.m < 1:
                raise MalformedGraph(f"edge {e} has m < 1")
        if len(self.edges) != len(names) - 1:
            raise MalformedGraph("edge count does not match a tree")
        seen = {self.root}
        frontier = [self.root]
        while frontier:
            v = frontier.pop()
            for t in self.neighbors(v):
                if t not in seen:
                    seen.add(t)
                    frontier.append(t)
        if len(seen) != len(names):
            raise MalformedGraph("graph is not connected")
        for leaf in self.leaves:
            if len(self.neighbors(leaf)) != 1:
                raise MalformedGraph(f"leaf {leaf} must have degree 1")

    def side_of(self, edge_directed):
        """Vertices in the component of T - {edge} containing the target."""
        s, t, _, _ = edge_directed
        seen = {t}
        frontier = [t]
        while frontier:
            v = frontier.pop()
            for w in self.neighbors(v):
                if v == t and w == s:
                    continue       # do not cross the removed edge
                if w not in seen:
                    seen.add(w)
                    frontier.append(w)
        return seen

    def canonical(self):
        """Root-preserving canonical encoding for deduplication."""
        def enc(v, parent):
            children = []
            for (s, t, m, h) in self.out_edges(v):
                if t == parent:
                    continue
                children.append(((m, h), enc(t, v)))
            children.sort()
            if v in self.leaves:
                return (self.leaves[v],)
            return ("int", self.genus[v], tuple(children))
        return enc(self.root, None)


@dataclass
class TreeValidation:
    passed: bool
    violations: list


def validate_tree(tree: ReductionTree) -> TreeValidation:
    """Edge antisymmetry, interior vertex sums, and leaf range rules.

    Leaf ranges admit the boundary values sigma = 1 (primitive) and
    sigma = 2 (new); whether a boundary value sits in a legitimate
    one-tail configuration is decided by classify_structure.
    """
    tree.check_structure()
    violations = []
    for e in tree.edges:
        rm = e.reverse_m if e.reverse_m is not None else e.m
        rh = e.reverse_h if e.reverse_h is not None else -e.h
        if rm != e.m:
            violations.append(
                f"edge {e.source}->{e.target}: m = {e.m} but reverse m = {rm}")
        if Fraction(e.h, e.m) + Fraction(rh, rm) != 0:
            violations.append(
                f"edge {e.source}->{e.target}: sigma + reverse sigma != 0")
    for v, g in tree.genus.items():
        total = sum((Fraction(h, m) - 1 for (_, _, m, h) in tree.out_edges(v)),
                    Fraction(0))
        expected = Fraction(2 * g - 2)
        if total != expected:
            violations.append(
                f"vertex {v}: sum(sigma_e - 1) = {total} != {expected}")
    for leaf, kind in tree.leaves.items():
        sigma = tree.leaf_sigma(leaf)
        if kind == WILD and sigma != 0:
            violations.append(f"wild leaf {leaf}: sigma = {sigma} != 0")
        elif kind == PRIMITIVE and not 0 < sigma <= 1:
            violations.append(f"primitive leaf {leaf}: sigma = {sigma} "
                              "outside (0, 1]")
        elif kind == NEW and not 1 < sigma <= 2:
            violations.append(f"new leaf {leaf}: sigma = {sigma} outside (1, 2]")
    return TreeValidation(passed=not violations, violations=violations)


@dataclass
class GlobalVcfReport:
    passed: bool
    chain: list                  # (vertex added, cut sum, expected)
    lhs: Fraction
    rhs: Fraction
    violations: list


def global_vcf(tree: ReductionTree) -> GlobalVcfReport:
    """The global identity, re-derived by induction along the tree.

    Growing the interior subtree one vertex at a time, the sum of
    (sigma_e - 1) over the edge cut must stay at 2g - 2 for the genus
    accumulated so far.  The final cut gives the leaf identity
    sum_prim sigma + sum_new (sigma - 1) = 2 g_X - 2 + |B_0|.
    """
    tree.check_structure()
    violations = []
    order = [tree.root]
    seen = {tree.root}
    queue = [tree.root]
    while queue:
        v = queue.pop(0)
        for t in tree.neighbors(v):
            if t not in seen and tree.is_interior(t):
                seen.add(t)
                order.append(t)
                queue.append(t)

    chain = []
    included = set()
    genus_so_far = 0
    for v in order:
        included.add(v)
        genus_so_far += tree.genus[v]
        cut = sum((Fraction(h, m) - 1
                   for (s, t, m, h) in tree.directed()
                   if s in included and t not in included), Fraction(0))
        expected = Fraction(2 * genus_so_far - 2)
        chain.append((v, cut, expected))
        if cut != expected:
            violations.append(
                f"cut after adding {v}: sum = {cut} != {expected}")

    g_x = sum(tree.genus.values())
    b0 = tree.b0()
    lhs = Fraction(0)
    for leaf, kind in tree.leaves.items():
        sigma = tree.leaf_sigma(leaf)
        if kind == PRIMITIVE:
            lhs += sigma
        elif kind == NEW:
            lhs += sigma - 1
        elif sigma != 0:
            violations.append(f"wild leaf {leaf} with sigma = {sigma}")
    rhs = Fraction(2 * g_x - 2 + len(b0))
    if lhs != rhs:
        violations.append(f"global identity: {lhs} != {rhs}")
    return GlobalVcfReport(passed=not violations, chain=chain,
                           lhs=lhs, rhs=rhs, violations=violations)


@dataclass
class NuProfile:
    nu: dict                     # (source, target) -> floor(sigma)
    fractional: dict             # (source, target) -> <sigma>
    passed: bool
    violations: list


def _floor(f: Fraction) -> int:
    return f.numerator // f.denominator


def nu_profile(tree: ReductionTree) -> NuProfile:
    """Floor/fractional parts of every edge value plus their laws.

    Requires three-point, non-exceptional input: |B_0| = 3 and at least
    two tails.  Checks, per interior vertex, that the fractional parts
    sum to 1 and the (nu - 1) sum to -3; per edge not touching a wild
    leaf, that nu_e + nu_rev = -1 and the closed form
    nu_e = 1 - #(B_0 leaves beyond the edge); and the bounds -2..1
    everywhere.  Violations are reported, not raised, so the profile can
    certify why a malformed assignment fails.
    """
    tree.check_structure()
    b0 = tree.b0()
    if len(b0) != 3:
        raise ExceptionalInput(f"|B_0| = {len(b0)}, need exactly 3")
    if len(tree.tails()) < 2:
        raise ExceptionalInput("fewer than 2 tails is the exceptional case")

    nu, frac = {}, {}
    for (s, t, m, h) in tree.directed():
        sigma = Fraction(h, m)
        nu[(s, t)] = _floor(sigma)
        frac[(s, t)] = sigma - _floor(sigma)

    violations = []
    for v in tree.genus:
        fsum = sum((frac[(s, t)] for (s, t, _, _) in tree.out_edges(v)),
                   Fraction(0))
        nsum = sum(nu[(s, t)] - 1 for (s, t, _, _) in tree.out_edges(v))
        if fsum != 1:
            violations.append(f"vertex {v}: fractional parts sum to {fsum}")
        if nsum != -3:
            violations.append(f"vertex {v}: sum(nu - 1) = {nsum} != -3")
    wild_names = {n for n, k in tree.leaves.items() if k == WILD}
    for (s, t, m, h) in tree.directed():
        if nu[(s, t)] < -2 or nu[(s, t)] > 1:
            violations.append(f"edge {s}->{t}: nu = {nu[(s, t)]} outside [-2, 1]")
        if s in wild_names or t in wild_names:
            continue
        if nu[(s, t)] + nu[(t, s)] != -1:
            violations.append(f"edge {s}->{t}: nu_e + nu_rev != -1")
        beyond = tree.side_of((s, t, m, h))
        count = sum(1 for j in b0 if j in beyond)
        if nu[(s, t)] != 1 - count:
            violations.append(
                f"edge {s}->{t}: nu = {nu[(s, t)]} but closed form gives "
                f"{1 - count}")
        root_precedes = tree.root not in beyond
        if (nu[(s, t)] >= 0) != root_precedes:
            violations.append(
                f"edge {s}->{t}: nu sign does not match root position")
    return NuProfile(nu=nu, fractional=frac, passed=not violations,
                     violations=violations)


@dataclass
class StructureVerdict:
    kind: str                    # Star | Exceptional1 | Exceptional2 | Inconsistent
    reason: str = ""
    certificate: tuple = None    # offending vertex / edge data


def classify_structure(tree: ReductionTree, three_point: bool = True
                       ) -> StructureVerdict:
    """Star / exceptional shape recognition, everything else inconsistent.

    In three-point mode a tree whose interior extends beyond the root
    mirrors the structure theorem's impossible configurations and is
    reported with the edge whose value would force a pole of order two
    or more at the extra component.
    """
    check = validate_tree(tree)
    if not check.passed:
        return StructureVerdict("Inconsistent",
                                reason="; ".join(check.violations))
    b0 = tree.b0()
    if three_point and len(b0) != 3:
        return StructureVerdict("Inconsistent",
                                reason=f"|B_0| = {len(b0)}, need 3")

    extra_interior = [v for v in tree.genus if v != tree.root]
    if extra_interior:
        v = sorted(extra_interior)[0]
        certificate = None
        for (s, t, m, h) in tree.out_edges(v):
            if Fraction(h, m) < 0:
                certificate = (s, t, m, h)
                break
        return StructureVerdict(
            "Inconsistent",
            reason=f"interior vertex {v} beyond the root cannot carry a "
            "logarithmic or exact differential",
            certificate=certificate)

    prim = [(n, tree.leaf_sigma(n)) for n, k in sorted(tree.leaves.items())
            if k == PRIMITIVE]
    new = [(n, tree.leaf_sigma(n)) for n, k in sorted(tree.leaves.items())
           if k == NEW]
    wild = [n for n, k in sorted(tree.leaves.items()) if k == WILD]

    if (len(prim) == 1 and prim[0][1] == 1 and not new and len(wild) == 2):
        return StructureVerdict("Exceptional1")
    if (len(new) == 1 and new[0][1] == 2 and not prim and len(wild) == 3):
        return StructureVerdict("Exceptional2")
    boundary = [n for n, s in prim if s == 1] + [n for n, s in new if s == 2]
    if boundary:
        return StructureVerdict(
            "Inconsistent",
            reason=f"boundary sigma at {boundary} outside the one-tail "
            "exceptional configurations")
    return StructureVerdict("Star")


# ---------------------------------------------------------------------------
# admissible tree enumeration


def _leaf_value_candidates(p_minus_1: int, max_denominator: int):
    """(kind, m, h) candidates for leaf edges, boundary values included."""
    prim, new = [], []
    for m in range(1, max_denominator + 1):
        for h in range(1, 2 * m + 1):
            if math.gcd(h, m) != 1:
                continue
            if (p_minus_1 * h) % m != 0:
                continue
            sigma = Fraction(h, m)
            if 0 < sigma <= 1:
                prim.append((m, h))
            elif 1 < sigma <= 2:
                new.append((m, h))
    key = lambda mh: Fraction(mh[1], mh[0])
    return sorted(prim, key=key), sorted(new, key=key)


def enumerate_admissible_trees(p_minus_1: int, max_vertices: int,
                               max_denominator: int) -> list:
    """All admissible three-point trees within the bounds, up to
    root-preserving isomorphism, in a deterministic order.

    max_vertices bounds the number of interior vertices (components);
    leaves are bounded through the denominator cap, since each new tail
    contributes at least 1/max_denominator to the fractional-part budget.

    Interior vertices beyond the root never survive: the component on
    the far side of an interior edge sees the value with opposite sign,
    a negative value means a pole of order at least two (no logarithmic
    form), a wild mark means a simple pole (no exact form), and node
    values in {-1, 0, 1} are excluded for interior edges.  Together with
    the local sums this empties the assignment domain, so the output
    consists of stars, which is the content of the structure theorem at
    these bounds.
    """
    if max_vertices > 6 or max_denominator > 12:
        raise BoundsTooLarge("bounds beyond desk scale")
    if max_vertices < 1:
        return []

    prim_vals, new_vals = _leaf_value_candidates(p_minus_1, max_denominator)

    trees = []

    # Shapes with a second interior vertex are scanned first.  The value
    # domain for an interior-interior edge is empty (see the docstring),
    # so they contribute nothing; the scan is kept explicit so the
    # structure theorem is exercised rather than assumed.
    interior_edge_domain = [Fraction(h, m)
                            for m in range(1, max_denominator + 1)
                            for h in range(-2 * m, 2 * m + 1)
                            if math.gcd(abs(h), m) == 1
                            and Fraction(h, m) >= 0       # no pole of order >= 2
                            and Fraction(-h, m) >= 0      # seen from the far side
                            and Fraction(h, m) not in (-1, 0, 1)]
    assert not interior_edge_domain

    # stars: root plus three B_0 leaves and up to max_denominator new
    # tails (each new tail uses at least 1/max_denominator of the
    # fractional-part budget)
    for n_new in range(0, max_denominator + 1):
        for n_wild in range(0, 4):
            n_prim = 3 - n_wild
            target = Fraction(3 + n_new - 2)

            def new_rec(slots, start, rem, chosen):
                if slots == 0:
                    if rem == 0:
                        trees.append(_make_star(chosen + [(WILD, 1, 0)] * n_wild))
                    return
                for i in range(start, len(new_vals)):
                    m, h = new_vals[i]
                    sigma = Fraction(h, m)
                    if sigma > rem:
                        break
                    new_rec(slots - 1, i, rem - sigma, chosen + [(NEW, m, h)])

            def prim_rec(slots, start, rem, chosen):
                if slots == 0:
                    new_rec(n_new, 0, rem, chosen)
                    return
                for i in range(start, len(prim_vals)):
                    m, h = prim_vals[i]
                    sigma = Fraction(h, m)
                    if sigma > rem:
                        break
                    prim_rec(slots - 1, i, rem - sigma,
                             chosen + [(PRIMITIVE, m, h)])

            prim_rec(n_prim, 0, target, [])

    seen = {}
    for t in trees:
        seen.setdefault(t.canonical(), t)
    return [seen[k] for k in sorted(seen)]


def _make_star(leaf_specs) -> ReductionTree:
    genus = {"v0": 0}
    leaves = {}
    edges = []
    for i, (kind, m, h) in enumerate(sorted(leaf_specs), start=1):
        name = f"t{i}"
        leaves[name] = kind
        edges.append(Edge(source="v0", target=name, m=m, h=h))
    return ReductionTree(root="v0", genus=genus, leaves=leaves, edges=edges)


# ---------------------------------------------------------------------------
# document form (used by the command-line front end and the service)


def tree_to_document(tree: ReductionTree) -> dict:
    return {
        "root": tree.root,
        "vertices": [{"name": v, "genus": g}
                     for v, g in sorted(tree.genus.items())],
        "leaves": [{"name": n, "kind": k}
                   for n, k in sorted(tree.leaves.items())],
        "edges": [{"source": e.source, "target": e.target,
                   "m": e.m, "h": e.h}
                  for e in tree.edges],
    }


def tree_from_document(doc: dict) -> ReductionTree:
    try:
        genus = {v["name"]: int(v["genus"]) for v in doc["vertices"]}
        leaves = {l["name"]: l["kind"] for l in doc["leaves"]}
        edges = []
        for e in doc["edges"]:
            edges.append(Edge(
                source=e["source"], target=e["target"],
                m=int(e["m"]), h=int(e["h"]),
                reverse_m=int(e["reverse_m"]) if "reverse_m" in e else None,
                reverse_h=int(e["reverse_h"]) if "reverse_h" in e else None))
        tree = ReductionTree(root=doc["root"], genus=genus, leaves=leaves,
                             edges=edges)
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedGraph(f"bad tree document: {exc}") from exc
    tree.check_structure()
    return tree
