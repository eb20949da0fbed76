"""Problem shapes and their mechanical condition checkers."""

import pytest

from hornitp.problems import (
    DagProblem,
    SequenceProblem,
    TreeProblem,
    check_dag,
    check_sequence,
    check_tree,
)
from hornitp.terms import FALSE, INT, TRUE, LinearTerm, Var, cand, eq, ge, le, lt

X = Var("x", INT)
Y = Var("y", INT)
TX = LinearTerm.of(X)
TY = LinearTerm.of(Y)


class TestSequence:
    def _problem(self):
        return SequenceProblem((ge(TX, 0), le(TX - TY, 0), lt(TY, 0)))

    def test_valid_labeling(self):
        labels = [TRUE, ge(TX, 0), ge(TY, 0), FALSE]
        assert check_sequence(self._problem(), labels) == []

    def test_step_entailment_violation(self):
        labels = [TRUE, ge(TX, 0), ge(TY, 1), FALSE]
        assert "step-entailment-2" in check_sequence(self._problem(), labels)

    def test_variable_condition_violation(self):
        # I1 may only use fv(T1) intersect fv(T2 T3) = {x}
        labels = [TRUE, ge(TY, 0), ge(TY, 0), FALSE]
        failures = check_sequence(self._problem(), labels)
        assert "variable-condition-1" in failures

    def test_end_label_must_be_false(self):
        labels = [TRUE, ge(TX, 0), ge(TY, 0), TRUE]
        assert "end-label-not-false" in check_sequence(self._problem(), labels)

    def test_wrong_length_rejected(self):
        assert check_sequence(self._problem(), [TRUE, FALSE]) != []


class TestTree:
    def _problem(self):
        # root conjoins contradictory children constraints
        nodes = ("l1", "l2", "root")
        edges = frozenset({("root", "l1"), ("root", "l2")})
        labels = {"l1": ge(TX, 0), "l2": le(TX - TY, 0), "root": lt(TY, 0)}
        return TreeProblem(nodes, edges, labels, "root")

    def test_valid_labeling(self):
        labeling = {"l1": ge(TX, 0), "l2": le(TX - TY, 0), "root": FALSE}
        assert check_tree(self._problem(), labeling) == []

    def test_root_must_be_unsat(self):
        labeling = {"l1": ge(TX, 0), "l2": le(TX - TY, 0), "root": TRUE}
        failures = check_tree(self._problem(), labeling)
        assert "root-label-not-false" in failures

    def test_node_entailment_checked(self):
        labeling = {"l1": ge(TX, 5), "l2": le(TX - TY, 0), "root": FALSE}
        assert "node-entailment-l1" in check_tree(self._problem(), labeling)

    def test_variable_condition_checked(self):
        z = Var("z", INT)
        labeling = {"l1": ge(LinearTerm.of(z), 0), "l2": le(TX - TY, 0),
                    "root": FALSE}
        failures = check_tree(self._problem(), labeling)
        assert "variable-condition-l1" in failures

    def test_two_parents_rejected(self):
        with pytest.raises(AssertionError):
            TreeProblem(("a", "b", "c"),
                        frozenset({("a", "c"), ("b", "c"), ("a", "b")}),
                        {"a": TRUE, "b": TRUE, "c": TRUE}, "a")

    def test_post_order_children_first(self):
        tp = self._problem()
        order = tp.post_order()
        assert order.index("l1") < order.index("root")
        assert order.index("l2") < order.index("root")


class TestDag:
    def _problem(self):
        # diamond: en -> a -> ex and en -> b -> ex, jointly infeasible paths
        nodes = ("en", "a", "b", "ex")
        edges = (("en", "a"), ("en", "b"), ("a", "ex"), ("b", "ex"))
        edge_labels = {
            ("en", "a"): ge(TX, 0),
            ("en", "b"): ge(TX, 1),
            ("a", "ex"): lt(TX, 0),
            ("b", "ex"): lt(TX, 1),
        }
        node_labels = {v: TRUE for v in nodes}
        allowed = {"en": frozenset(), "a": frozenset({X}), "b": frozenset({X}),
                   "ex": frozenset()}
        return DagProblem(nodes, edges, "en", "ex", edge_labels, node_labels,
                          allowed)

    def test_valid_labeling(self):
        labeling = {"en": TRUE, "a": ge(TX, 0), "b": ge(TX, 1), "ex": FALSE}
        assert check_dag(self._problem(), labeling) == []

    def test_edge_entailment_checked(self):
        labeling = {"en": TRUE, "a": ge(TX, 5), "b": ge(TX, 1), "ex": FALSE}
        failures = check_dag(self._problem(), labeling)
        assert any(f.startswith("edge-entailment-en->a") for f in failures)

    def test_allowed_variables_enforced(self):
        labeling = {"en": ge(TX, 0), "a": ge(TX, 0), "b": ge(TX, 1), "ex": FALSE}
        failures = check_dag(self._problem(), labeling)
        assert "variable-condition-en" in failures

    def test_exit_must_be_unsat(self):
        labeling = {"en": TRUE, "a": ge(TX, 0), "b": ge(TX, 1), "ex": TRUE}
        assert "exit-label-not-false" in check_dag(self._problem(), labeling)

    def test_topological_order(self):
        dp = self._problem()
        order = dp.topological_order()
        assert order[0] == "en" and order[-1] == "ex"

    def test_allowed_vars_default_from_edge_labels(self):
        dp = self._problem()
        no_allowed = DagProblem(dp.nodes, dp.edges, dp.entry, dp.exit,
                                dp.edge_labels, dp.node_labels)
        assert no_allowed.allowed_vars("a") == frozenset({X})
