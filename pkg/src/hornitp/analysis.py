"""Structural analysis of clause sets.

Covers the head-to-body dependence graph and its acyclicity (recursion
freeness), fragment classification (linear / body-disjoint / head-disjoint /
tree-like), weakly-connected components, rewriting every relation atom to a
fixed argument vector per symbol, and merging of duplicate linear clauses.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NotLinear
from .horn import ClauseSet, HornClause, RelationAtom, RelationSymbol
from .terms import LinearTerm, Var, cand, cor, eq, rename_vars


@dataclass(frozen=True)
class DependenceGraph:
    nodes: frozenset  # of RelationSymbol
    edges: frozenset  # of (head symbol, body symbol)

    def successors(self, p):
        return sorted(q for (h, q) in self.edges if h == p)

    def is_acyclic(self) -> bool:
        return self.find_cycle() is None

    def find_cycle(self):
        """A list of symbols forming a dependence cycle, or None."""
        succ: dict = {p: [] for p in self.nodes}
        for h, q in sorted(self.edges):
            succ[h].append(q)
        state: dict = {}  # 0 visiting, 1 done
        stack_path: list = []

        def visit(p):
            state[p] = 0
            stack_path.append(p)
            for q in succ[p]:
                if q not in state:
                    cyc = visit(q)
                    if cyc is not None:
                        return cyc
                elif state[q] == 0:
                    return stack_path[stack_path.index(q):] + [q]
            stack_path.pop()
            state[p] = 1
            return None

        for p in sorted(self.nodes):
            if p not in state:
                cyc = visit(p)
                if cyc is not None:
                    return cyc
        return None

    def topological_order(self) -> list:
        """Symbols ordered so heads come before their body dependencies."""
        succ: dict = {p: [] for p in self.nodes}
        indeg = {p: 0 for p in self.nodes}
        for h, q in sorted(self.edges):
            succ[h].append(q)
            indeg[q] += 1
        import heapq

        ready = sorted(p for p in self.nodes if indeg[p] == 0)
        heapq.heapify(ready)
        out = []
        while ready:
            p = heapq.heappop(ready)
            out.append(p)
            for q in succ[p]:
                indeg[q] -= 1
                if indeg[q] == 0:
                    heapq.heappush(ready, q)
        assert len(out) == len(self.nodes), "topological order requires an acyclic graph"
        return out


def dependence_graph(hc: ClauseSet) -> DependenceGraph:
    edges = set()
    for h in hc.clauses:
        if h.head is not None:
            for b in h.body:
                edges.add((h.head.symbol, b.symbol))
    return DependenceGraph(hc.relations, frozenset(edges))


@dataclass(frozen=True)
class FragmentReport:
    recursion_free: bool
    linear: bool
    body_disjoint: bool
    head_disjoint: bool
    tree_like: bool
    linear_tree_like: bool

    def as_text(self) -> str:
        rows = [
            ("recursionFree", self.recursion_free),
            ("linear", self.linear),
            ("bodyDisjoint", self.body_disjoint),
            ("headDisjoint", self.head_disjoint),
            ("treeLike", self.tree_like),
            ("linearTreeLike", self.linear_tree_like),
        ]
        return "\n".join(f"{k}: {'true' if v else 'false'}" for k, v in rows)


def classify(hc: ClauseSet) -> FragmentReport:
    recursion_free = dependence_graph(hc).is_acyclic()
    linear = all(len(h.body) <= 1 for h in hc.clauses)
    body_count: dict = {}
    body_disjoint = True
    for h in hc.clauses:
        seen_here: dict = {}
        for b in h.body:
            seen_here[b.symbol] = seen_here.get(b.symbol, 0) + 1
            if seen_here[b.symbol] > 1:
                body_disjoint = False
        for s in seen_here:
            body_count[s] = body_count.get(s, 0) + 1
            if body_count[s] > 1:
                body_disjoint = False
    head_count: dict = {}
    for h in hc.clauses:
        if h.head is not None:
            head_count[h.head.symbol] = head_count.get(h.head.symbol, 0) + 1
    head_disjoint = all(n <= 1 for n in head_count.values())
    tree_like = body_disjoint and head_disjoint
    return FragmentReport(recursion_free, linear, body_disjoint, head_disjoint,
                          tree_like, linear and tree_like)


def connected_components(hc: ClauseSet) -> list:
    """Partition clauses by weak connectivity of shared relation symbols.

    Clauses without relation atoms form singleton components.
    """
    parent: dict = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    for p in hc.relations:
        parent[p] = p
    for h in hc.clauses:
        syms = sorted(h.symbols)
        for s in syms[1:]:
            union(syms[0], s)
    groups: dict = {}
    order: list = []
    for idx, h in enumerate(hc.clauses):
        syms = sorted(h.symbols)
        key = ("clause", idx) if not syms else ("sym", find(syms[0]))
        if key not in groups:
            groups[key] = []
            order.append(key)
        groups[key].append(h)
    return [ClauseSet.make(groups[k]) for k in order]


@dataclass(frozen=True)
class NormalizedClauseSet:
    clause_set: ClauseSet
    arg_vectors: dict  # RelationSymbol -> tuple of Var
    origin_map: dict  # fresh Var -> original Var

    @property
    def clauses(self):
        return self.clause_set.clauses

    @property
    def relations(self):
        return self.clause_set.relations


def _fresh_vector(sym: RelationSymbol, suffix: str = "") -> tuple:
    return tuple(Var(f"{sym.name}#{i}{suffix}", sort)
                 for i, sort in enumerate(sym.arg_sorts))


def normalize(hc: ClauseSet) -> NormalizedClauseSet:
    """Rewrite so each relation atom is the symbol applied to its fixed
    argument vector, binding equalities moved into the clause constraint,
    and all other variables distinct across clauses."""
    arg_vectors = {p: _fresh_vector(p) for p in sorted(hc.relations)}
    reserved = {v for vec in arg_vectors.values() for v in vec}
    origin_map: dict = {}
    new_clauses = []
    for idx, h in enumerate(hc.clauses):
        renaming = {}
        for v in sorted(h.vars):
            nv = Var(f"{v.name}@{idx}", v.sort)
            assert nv not in reserved
            renaming[v] = nv
            origin_map[nv] = v
        bindings = []
        used: dict = {}  # symbol -> copies handed out in this clause

        def rewrite(a: RelationAtom) -> RelationAtom:
            n = used.get(a.symbol, 0)
            used[a.symbol] = n + 1
            vec = arg_vectors[a.symbol] if n == 0 else _fresh_vector(a.symbol, f"~{idx}.{n}")
            sigma = {v: LinearTerm.of(w) for v, w in renaming.items()}
            for x, t in zip(vec, a.args):
                bindings.append(eq(x, t.substituted(sigma)))
            return RelationAtom(a.symbol, tuple(LinearTerm.of(x) for x in vec))

        head = rewrite(h.head) if h.head is not None else None
        body = tuple(rewrite(b) for b in h.body)
        constraint = cand(rename_vars(h.constraint, renaming), *bindings)
        new_clauses.append(HornClause(constraint, body, head))
    return NormalizedClauseSet(ClauseSet(hc.relations, tuple(new_clauses)),
                               arg_vectors, origin_map)


def merge_linear_duplicates(hc: ClauseSet) -> ClauseSet:
    """Merge clauses with identical relation atoms by disjoining constraints.

    Requires a linear set whose atoms already use fixed argument vectors
    (i.e. a normalized set), so that syntactic atom equality captures
    clause-shape equality.
    """
    merged: dict = {}
    order: list = []
    for h in hc.clauses:
        if len(h.body) > 1:
            raise NotLinear("duplicate merging requires at most one body atom per clause")
        key = (h.body[0] if h.body else None, h.head)
        if key not in merged:
            merged[key] = []
            order.append(key)
        merged[key].append(h.constraint)
    out = []
    for key in order:
        body_atom, head = key
        constraint = cor(*merged[key])
        out.append(HornClause(constraint, (body_atom,) if body_atom else (), head))
    return ClauseSet(hc.relations, tuple(out))
