from fractions import Fraction

import pytest
from hypothesis import given, settings
from strategies import graphs

from smc.graph import Graph
from smc.oracles import brute_min_bisection, brute_pathwidth
from smc.separator import (
    Separation,
    bisect_heuristic,
    nice_path_decomposition,
    separate_balanced_by_measure,
    separate_cubic,
    trivial_separation,
    verify_separation,
)


def petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    spokes = [(i, 5 + i) for i in range(5)]
    return Graph(range(10), outer + inner + spokes)


class TestVerify:
    def test_trivial(self):
        g = Graph.complete(4)
        assert verify_separation(g, trivial_separation(g.vertices()))

    def test_path(self):
        g = Graph.path(3)
        assert verify_separation(g, Separation({0}, {1}, {2}))

    def test_crossing_edge(self):
        g = Graph.path(2)
        assert not verify_separation(g, Separation({0}, set(), {1}))

    def test_non_partition(self):
        g = Graph.path(2)
        with pytest.raises(ValueError):
            verify_separation(g, Separation({0}, {0}, {1}))
        with pytest.raises(ValueError):
            verify_separation(g, Separation({0}, set(), set()))


class TestBisection:
    def test_k4(self):
        assert bisect_heuristic(Graph.complete(4)).cut == 4

    @pytest.mark.parametrize("n", [6, 8, 10, 12, 14, 16])
    def test_even_cycles_exact(self, n):
        assert bisect_heuristic(Graph.cycle(n)).cut == 2

    def test_near_optimal_on_petersen(self):
        exact = brute_min_bisection(petersen())
        assert bisect_heuristic(petersen()).cut <= exact + 2

    def test_deterministic(self):
        g = petersen()
        a = bisect_heuristic(g, seed=7)
        b = bisect_heuristic(g, seed=7)
        assert (a.a, a.b, a.cut) == (b.a, b.b, b.cut)

    def test_empty(self):
        assert bisect_heuristic(Graph()).cut == 0

    @settings(max_examples=40)
    @given(graphs(max_n=12))
    def test_halves(self, g):
        bis = bisect_heuristic(g)
        assert abs(len(bis.a) - len(bis.b)) <= 1
        assert sorted(bis.a + bis.b) == g.vertices()


class TestSeparateCubic:
    def test_k4(self):
        # complete graph: any valid separation has an empty side, and the
        # side-balance bound then forces |S| = 3
        g = Graph.complete(4)
        s = separate_cubic(g)
        assert verify_separation(g, s)
        assert len(s.sep) == 3

    def test_c6(self):
        g = Graph.cycle(6)
        s = separate_cubic(g)
        assert len(s.sep) == 2

    def test_empty(self):
        s = separate_cubic(Graph())
        assert (s.left, s.sep, s.right) == (set(), set(), set())

    def test_degree_guard(self):
        with pytest.raises(ValueError):
            separate_cubic(Graph.complete(5))

    @settings(max_examples=60)
    @given(graphs(max_n=40, max_degree=3))
    def test_valid_and_balanced(self, g):
        s = separate_cubic(g)
        assert verify_separation(g, s)
        bound = -(-(g.n - len(s.sep)) // 2)
        assert len(s.left) <= bound and len(s.right) <= bound
        assert len(s.left) <= len(s.right)


class TestPathDecomposition:
    def test_path_width_1(self):
        d = nice_path_decomposition(Graph.path(6))
        assert d.width == 1

    def test_cycle_width_2(self):
        assert nice_path_decomposition(Graph.cycle(7)).width == 2

    def test_k4_width_3(self):
        assert nice_path_decomposition(Graph.complete(4)).width == 3

    def test_empty(self):
        assert nice_path_decomposition(Graph()).bags == []

    @settings(max_examples=40)
    @given(graphs(max_n=10))
    def test_near_exact_small(self, g):
        if g.n == 0:
            return
        d = nice_path_decomposition(g)
        d.validate(g)
        assert len(d.bags) <= 2 * g.n + 1
        assert d.width <= brute_pathwidth(g) + 2


class TestBalancedByMeasure:
    @staticmethod
    def unit(_v: int) -> Fraction:
        return Fraction(1)

    def test_p5(self):
        g = Graph.path(5)
        s = separate_balanced_by_measure(g, self.unit, Fraction(1))
        assert verify_separation(g, s)
        assert abs(len(s.left) - len(s.right)) <= 1

    def test_c6_sweep_reaches_222(self):
        g = Graph.cycle(6)
        found = False
        seen: set[int] = set()
        for bag in nice_path_decomposition(g).bags:
            seen |= bag
            left = seen - bag
            right = set(g.vertices()) - seen
            if len(bag) == 2 and len(left) == 2 and len(right) == 2:
                found = True
        assert found

    def test_single_vertex(self):
        g = Graph([0])
        s = separate_balanced_by_measure(g, self.unit, Fraction(1))
        assert verify_separation(g, s)

    def test_degree_guard(self):
        with pytest.raises(ValueError):
            separate_balanced_by_measure(Graph.complete(8), self.unit, Fraction(10))

    def test_weight_cap_precondition(self):
        with pytest.raises(ValueError):
            separate_balanced_by_measure(
                Graph.path(3), lambda v: Fraction(2), Fraction(1)
            )

    def test_petersen(self):
        g = petersen()
        s = separate_balanced_by_measure(g, self.unit, Fraction(1))
        assert verify_separation(g, s)
        assert abs(len(s.left) - len(s.right)) <= 1

    @settings(max_examples=40)
    @given(graphs(max_n=12, max_degree=3))
    def test_unit_weight_balance(self, g):
        if g.n == 0:
            return
        s = separate_balanced_by_measure(g, self.unit, Fraction(1))
        assert verify_separation(g, s)
        assert abs(len(s.left) - len(s.right)) <= 1
        assert len(s.left) <= len(s.right)