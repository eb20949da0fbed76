"""Dependence graph, fragment classification, components, normalization."""

import random

import pytest

import worked_examples as PE
from generators import random_clause_set
from hornitp.analysis import (
    classify,
    connected_components,
    dependence_graph,
    merge_linear_duplicates,
    normalize,
)
from hornitp.errors import NotLinear, UnknownResult
from hornitp.horn import (
    ClauseSet,
    HornClause,
    RelationSymbol,
    Solution,
    rel_atom,
    verify_solution,
)
from hornitp.terms import INT, TRUE, LinearTerm, Var, cor, eq, free_vars, ge, le


class TestDependenceGraph:
    def test_recursive_cycle_found(self):
        g = dependence_graph(PE.recursive_clauses())
        cycle = g.find_cycle()
        assert cycle is not None
        assert {s.name for s in cycle} >= {"rf", "r9", "r7"}

    def test_treelike_subset_acyclic(self):
        assert dependence_graph(PE.treelike_clauses()).is_acyclic()

    def test_empty_set(self):
        g = dependence_graph(ClauseSet.make([]))
        assert g.is_acyclic() and not g.nodes


class TestClassify:
    def test_treelike_subset(self):
        report = classify(PE.treelike_clauses())
        assert report.recursion_free
        assert report.tree_like
        assert not report.linear  # one clause has two body atoms
        assert not report.linear_tree_like

    def test_unwinding_body_disjoint_not_head_disjoint(self):
        report = classify(PE.unwinding_clauses())
        assert report.recursion_free
        assert report.body_disjoint
        assert not report.head_disjoint
        assert not report.tree_like

    def test_full_system_recursive(self):
        assert not classify(PE.recursive_clauses()).recursion_free

    def test_body_disjoint_rejects_repeated_occurrence(self):
        p = RelationSymbol("p", ())
        x = Var("x", INT)
        h = HornClause(TRUE, (rel_atom(p), rel_atom(p)), None)
        report = classify(ClauseSet.make([h, HornClause(TRUE, (), rel_atom(p))]))
        assert not report.body_disjoint

    def test_as_text_fixed_keys(self):
        text = classify(PE.treelike_clauses()).as_text()
        for key in ("recursionFree", "linear", "bodyDisjoint", "headDisjoint",
                    "treeLike", "linearTreeLike"):
            assert f"{key}: " in text


class TestConnectedComponents:
    def test_single_component(self):
        assert len(connected_components(PE.treelike_clauses())) == 1

    def test_two_chains(self):
        x = Var("x", INT)
        p, q = RelationSymbol("p", (INT,)), RelationSymbol("q", (INT,))
        hc = ClauseSet.make([
            HornClause(TRUE, (), rel_atom(p, x)),
            HornClause(TRUE, (rel_atom(p, x),), None),
            HornClause(TRUE, (), rel_atom(q, x)),
            HornClause(TRUE, (rel_atom(q, x),), None),
        ])
        assert len(connected_components(hc)) == 2

    def test_pure_constraint_clause_is_singleton(self):
        x = Var("x", INT)
        hc = ClauseSet.make([
            HornClause(ge(LinearTerm.of(x), 1), (), None),
            HornClause(TRUE, (), rel_atom(RelationSymbol("p", ()))),
        ])
        assert len(connected_components(hc)) == 2

    def test_partition_exact(self):
        rng = random.Random(4)
        for _ in range(50):
            hc = random_clause_set(rng)
            comps = connected_components(hc)
            collected = [h for c in comps for h in c.clauses]
            assert sorted(map(repr, collected)) == sorted(map(repr, hc.clauses))


class TestNormalize:
    def test_relation_atoms_use_fixed_vectors(self):
        nhc = normalize(PE.treelike_clauses())
        for h in nhc.clauses:
            for a in list(h.body) + ([h.head] if h.head else []):
                expected = nhc.arg_vectors[a.symbol]
                got = [t.coeffs[0][0] if t.coeffs else None for t in a.args]
                # every occurrence is either the fixed vector or a fresh copy
                assert all(v is not None for v in got)
                assert all(t.constant == 0 and len(t.coeffs) == 1 and
                           t.coeffs[0][1] == 1 for t in a.args)

    def test_non_argument_vars_local_to_one_clause(self):
        nhc = normalize(PE.unwinding_clauses())
        vector_vars = {v for vec in nhc.arg_vectors.values() for v in vec}
        seen = {}
        for idx, h in enumerate(nhc.clauses):
            for v in h.vars - vector_vars:
                assert seen.setdefault(v, idx) == idx

    def test_solution_transfers_to_original(self):
        hc = PE.treelike_clauses()
        nhc = normalize(hc)
        from hornitp.solver import solve, Solved

        res = solve(nhc.clause_set)
        assert isinstance(res, Solved)
        # normalized argument vectors are the formal parameters, so the
        # solution carries over verbatim
        assert bool(verify_solution(res.solution, hc))

    def test_recursive_call_binding(self):
        # the recursive-call clause binds the callee's first argument to n-1
        hc = ClauseSet.make([PE.increment_clauses()[7]])
        nhc = normalize(hc)
        (h,) = nhc.clauses
        rf_vec = nhc.arg_vectors[PE.rf]
        r6_vec = nhc.arg_vectors[PE.r6]
        binding = eq(LinearTerm.of(rf_vec[0]) - LinearTerm.of(r6_vec[0]) + 1)
        from hornitp.engine import entails

        assert entails([h.constraint], binding)


class TestMergeLinearDuplicates:
    def _pq(self):
        p = RelationSymbol("p", (INT,))
        q = RelationSymbol("q", (INT,))
        return p, q

    def test_duplicates_disjoined(self):
        p, q = self._pq()
        hc = normalize(ClauseSet.make([
            HornClause(ge(LinearTerm.of(Var("x", INT)), 0),
                       (rel_atom(p, Var("x", INT)),), rel_atom(q, Var("x", INT))),
            HornClause(le(LinearTerm.of(Var("x", INT)), -5),
                       (rel_atom(p, Var("x", INT)),), rel_atom(q, Var("x", INT))),
        ])).clause_set
        merged = merge_linear_duplicates(hc)
        assert len(merged.clauses) == 1
        # the surviving clause must admit both original guards
        from hornitp.engine import entails

        survivors = merged.clauses[0].constraint
        for guard in (h.constraint for h in hc.clauses):
            assert entails([guard], survivors)

    def test_no_duplicates_identity(self):
        p, q = self._pq()
        x = Var("x", INT)
        hc = ClauseSet.make([
            HornClause(TRUE, (rel_atom(p, x),), rel_atom(q, x)),
            HornClause(TRUE, (), rel_atom(p, x)),
        ])
        assert merge_linear_duplicates(hc).clauses == hc.clauses

    def test_not_linear_rejected(self):
        p, q = self._pq()
        x = Var("x", INT)
        hc = ClauseSet.make([
            HornClause(TRUE, (rel_atom(p, x), rel_atom(q, x)), None),
        ])
        with pytest.raises(NotLinear):
            merge_linear_duplicates(hc)


def test_recursion_free_iff_acyclic_random():
    rng = random.Random(9)
    for _ in range(100):
        hc = random_clause_set(rng)
        assert classify(hc).recursion_free == dependence_graph(hc).is_acyclic()
