"""End-to-end solving: dispatch, interpolation sweeps, expansion oracle."""

import random

import pytest

import worked_examples as PE
from generators import random_clause_set
from hornitp import solver
from hornitp.analysis import normalize
from hornitp.encodings import tree_problem_from_treelike
from hornitp.engine import sat
from hornitp.errors import (
    ExpansionLimitExceeded,
    NotUnsat,
    RecursiveSystem,
    UnknownResult,
)
from hornitp.horn import (
    ClauseSet,
    HornClause,
    RelationSymbol,
    rel_atom,
    verify_solution,
)
from hornitp.lp import Sat, Unsat
from hornitp.problems import DagProblem, SequenceProblem, check_dag, check_sequence
from hornitp.solver import (
    Counterexample,
    Solved,
    SolverOptions,
    body_disjoint_transform,
    dag_interpolate,
    expand,
    find_counterexample,
    sequence_interpolants,
    solve,
    tree_interpolate,
)
from hornitp.terms import INT, TRUE, LinearTerm, Var, evaluate, ge, le, lt

X = Var("x", INT)
TX = LinearTerm.of(X)


class TestExpand:
    def test_treelike_subset_expansion_unsat(self):
        assert isinstance(sat(expand(PE.treelike_clauses())), Unsat)

    def test_expansion_limit(self):
        with pytest.raises(ExpansionLimitExceeded):
            expand(PE.treelike_clauses(), limit=3)

    def test_recursive_set_rejected(self):
        with pytest.raises(RecursiveSystem):
            expand(PE.recursive_clauses())

    def test_no_false_clause_expands_to_false(self):
        p = RelationSymbol("p", (INT,))
        hc = ClauseSet.make([HornClause(TRUE, (), rel_atom(p, X))])
        assert isinstance(sat(expand(hc)), Unsat)


class TestFindCounterexample:
    def test_unsolvable_set_yields_witness(self):
        p = RelationSymbol("p", (INT,))
        hc = ClauseSet.make([
            HornClause(ge(TX, 0), (), rel_atom(p, X)),
            HornClause(ge(TX, 5), (rel_atom(p, X),), None),
        ])
        cx = find_counterexample(hc, SolverOptions())
        assert cx is not None
        assert evaluate(cx.constraint, cx.model)
        assert cx.tree.size() == 2

    def test_solvable_set_yields_none(self):
        assert find_counterexample(PE.treelike_clauses(), SolverOptions()) is None


class TestTreeInterpolate:
    def test_treelike_subset_labels_pass_checks(self):
        nhc = normalize(PE.treelike_clauses())
        (tp,) = tree_problem_from_treelike(nhc)
        labels = tree_interpolate(tp)
        from hornitp.problems import check_tree

        assert check_tree(tp, labels) == []

    def test_satisfiable_tree_raises_not_unsat(self):
        from hornitp.problems import TreeProblem

        tp = TreeProblem(("a", "root"), frozenset({("root", "a")}),
                         {"a": ge(TX, 0), "root": ge(TX, 1)}, "root")
        with pytest.raises(NotUnsat) as exc:
            tree_interpolate(tp)
        assert evaluate(ge(TX, 0), exc.value.model)

    def test_tree_log_records_checks(self):
        nhc = normalize(PE.treelike_clauses())
        (tp,) = tree_problem_from_treelike(nhc)
        solver.tree_log = []
        try:
            tree_interpolate(tp)
            assert len(solver.tree_log) == 1
            record = solver.tree_log[0]
            assert record["invariant_checks"] == len(tp.nodes)
            assert record["property_failures"] == []
        finally:
            solver.tree_log = None


class TestSequenceInterpolants:
    def test_labels_form_inductive_sequence(self):
        y = Var("y", INT)
        sp = SequenceProblem((ge(TX, 0), le(TX - LinearTerm.of(y), 0),
                              lt(LinearTerm.of(y), 0)))
        labels = sequence_interpolants(sp)
        assert labels[0] is TRUE
        assert check_sequence(sp, labels) == []


class TestDagInterpolate:
    def test_diamond_labels_pass_checks(self):
        y = Var("y", INT)
        ty = LinearTerm.of(y)
        nodes = ("en", "a", "b", "ex")
        edges = (("en", "a"), ("en", "b"), ("a", "ex"), ("b", "ex"))
        edge_labels = {("en", "a"): ge(TX, 0), ("en", "b"): ge(TX, 2),
                       ("a", "ex"): lt(TX, 0), ("b", "ex"): lt(TX, 2)}
        dp = DagProblem(nodes, edges, "en", "ex", edge_labels,
                        {v: TRUE for v in nodes},
                        {"en": frozenset(), "a": frozenset({X}),
                         "b": frozenset({X}), "ex": frozenset()})
        labels = dag_interpolate(dp)
        assert check_dag(dp, labels) == []

    def test_feasible_path_raises_not_unsat(self):
        nodes = ("en", "a", "ex")
        edges = (("en", "a"), ("a", "ex"))
        edge_labels = {("en", "a"): ge(TX, 0), ("a", "ex"): ge(TX, 5)}
        dp = DagProblem(nodes, edges, "en", "ex", edge_labels,
                        {v: TRUE for v in nodes},
                        {"en": frozenset(), "a": frozenset({X}),
                         "ex": frozenset()})
        with pytest.raises(NotUnsat):
            dag_interpolate(dp)


class TestBodyDisjointTransform:
    def test_shared_body_symbol_copied(self):
        p = RelationSymbol("p", (INT,))
        q = RelationSymbol("q", (INT,))
        r = RelationSymbol("r", (INT,))
        hc = ClauseSet.make([
            HornClause(TRUE, (), rel_atom(p, X)),
            HornClause(TRUE, (rel_atom(p, X),), rel_atom(q, X)),
            HornClause(TRUE, (rel_atom(p, X),), rel_atom(r, X)),
            HornClause(TRUE, (rel_atom(q, X), rel_atom(r, X)), None),
        ])
        from hornitp.analysis import classify

        assert not classify(hc).body_disjoint
        transformed, copies = body_disjoint_transform(hc)
        assert classify(transformed).body_disjoint
        assert len(copies[p]) >= 2

    def test_already_disjoint_is_identity(self):
        hc = PE.unwinding_clauses()
        transformed, copies = body_disjoint_transform(hc)
        assert transformed.clauses == hc.clauses
        assert all(copies[s] == [s] for s in hc.relations)


class TestSolve:
    def test_treelike_subset_solved_and_verified(self):
        res = solve(PE.treelike_clauses())
        assert isinstance(res, Solved)
        assert bool(verify_solution(res.solution, PE.treelike_clauses()))

    def test_unwinding_solved_and_verified(self):
        res = solve(PE.unwinding_clauses())
        assert isinstance(res, Solved)
        assert bool(verify_solution(res.solution, PE.unwinding_clauses()))

    def test_recursive_set_raises(self):
        with pytest.raises(RecursiveSystem):
            solve(PE.recursive_clauses())

    def test_counterexample_for_unsolvable(self):
        p = RelationSymbol("p", (INT,))
        hc = ClauseSet.make([
            HornClause(ge(TX, 0), (), rel_atom(p, X)),
            HornClause(ge(TX, 5), (rel_atom(p, X),), None),
        ])
        res = solve(hc)
        assert isinstance(res, Counterexample)
        assert evaluate(res.constraint, res.model)

    def test_jobs_parallel_components_agree(self):
        rng = random.Random(6)
        for _ in range(10):
            hc = random_clause_set(rng)
            try:
                one = solve(hc, SolverOptions(jobs=1))
                many = solve(hc, SolverOptions(jobs=4))
            except UnknownResult:
                continue
            assert isinstance(one, Solved) == isinstance(many, Solved)

    def test_oracle_equivalence_sample(self):
        rng = random.Random(14)
        for _ in range(40):
            hc = random_clause_set(rng)
            try:
                oracle = sat(expand(hc))
                res = solve(hc)
            except UnknownResult:
                continue
            solvable = isinstance(res, Solved)
            assert solvable == isinstance(oracle, Unsat)
            if solvable:
                assert bool(verify_solution(res.solution, hc))
            else:
                assert evaluate(res.constraint, res.model)
