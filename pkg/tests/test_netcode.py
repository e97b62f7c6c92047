import numpy as np
import pytest

from minrank import (
    ICInstance,
    NetworkCode,
    NetworkSpec,
    SolverConfig,
    UNKNOWN_MESSAGE,
    Unknown,
    UnsupportedTopologyError,
    build_pattern_matrix,
    evaluate_code,
    extract_network_code,
    format_network,
    format_network_code,
    load_network,
    make_index_code,
    parse_network,
    reduce_to_index_coding,
    save_network,
    solve_network,
    split_capacities,
)
from minrank.pattern import PatternMatrix

from oracles import binary_code_exists, random_tiny_network


def net_cfg(**kw):
    kw.setdefault("max_iters", 3000)
    kw.setdefault("restarts", 3)
    return SolverConfig(**kw)


class TestNetworkSpec:
    def test_properties(self, butterfly):
        assert butterfly.capacity_sum == 7
        assert butterfly.messages == ("X1", "X2")

    @pytest.mark.parametrize(
        "kw, msg",
        [
            ({"edges": (("s", "x", 1),)}, "unknown node"),
            ({"edges": (("s", "t", 0),)}, "positive integer capacity"),
            ({"sources": (("X1", "s"), ("X1", "t"))}, "declared twice"),
            ({"sources": (("X1", "q"),)}, "unknown node"),
            ({"demands": (("t", "X9"),)}, "no source provides"),
            ({"demands": (("q", "X1"),)}, "unknown node"),
            ({"nodes": ("s", "t", "s")}, "duplicate node"),
            ({"nodes": ("s", "t", "a b")}, "without whitespace"),
        ],
    )
    def test_validation(self, kw, msg):
        base = dict(
            nodes=("s", "t"),
            edges=(("s", "t", 1),),
            sources=(("X1", "s"),),
            demands=(("t", "X1"),),
        )
        base.update(kw)
        with pytest.raises(ValueError, match=msg):
            NetworkSpec(**base)


class TestSplitCapacities:
    def test_splits_into_unit_edges(self):
        net = NetworkSpec(
            nodes=("A", "B"),
            edges=(("A", "B", 3),),
            sources=(("X1", "A"),),
            demands=(("B", "X1"),),
        )
        unit = split_capacities(net)
        assert unit.edges == (("A", "B", 1),) * 3
        assert unit.capacity_sum == net.capacity_sum
        assert unit.sources == net.sources and unit.demands == net.demands

    def test_noop_on_unit_network(self, butterfly):
        assert split_capacities(butterfly).edges == butterfly.edges


class TestReduce:
    def test_butterfly_shape(self, butterfly):
        ic = reduce_to_index_coding(butterfly)
        assert ic.k == 2
        assert ic.n_messages == 9
        assert len(ic.unit_edges) == 7
        assert len(ic.receivers) == 18  # 7 edge + 4 demand + 7 length
        roles = [r.role[0] for r in ic.receivers]
        assert roles == ["edge"] * 7 + ["demand"] * 4 + ["length"] * 7
        assert ic.trivial_demands == ()
        # bottleneck tail collects exactly the two source-adjacent edges
        names = [e.name for e in ic.unit_edges]
        t = names.index("a->b")
        rec = ic.receivers[t]
        assert rec.wants == 2 + t
        assert rec.has == frozenset(
            {2 + names.index("s1->a"), 2 + names.index("s2->a")}
        )
        # length-forcing receivers hold all sources and nothing else
        assert all(r.has == frozenset({0, 1}) for r in ic.receivers[11:])

    def test_single_edge_session(self):
        net = NetworkSpec(
            nodes=("s", "t"),
            edges=(("s", "t", 1),),
            sources=(("X1", "s"),),
            demands=(("t", "X1"),),
        )
        ic = reduce_to_index_coding(net)
        assert ic.messages == ("X1", "Y(s->t)")
        assert len(ic.receivers) == 3
        wants = [r.wants for r in ic.receivers]
        assert wants == [1, 0, 1]

    def test_parallel_edges_get_numbered_names(self):
        net = NetworkSpec(
            nodes=("A", "B"),
            edges=(("A", "B", 1), ("A", "B", 1)),
            sources=(("X1", "A"),),
            demands=(("B", "X1"),),
        )
        ic = reduce_to_index_coding(net)
        assert [e.name for e in ic.unit_edges] == ["A->B#1", "A->B#2"]

    def test_trivial_demand_set_aside(self):
        net = NetworkSpec(
            nodes=("s",),
            edges=(),
            sources=(("X1", "s"),),
            demands=(("s", "X1"),),
        )
        ic = reduce_to_index_coding(net)
        assert ic.receivers == ()
        assert ic.trivial_demands == (("s", "X1"),)

    def test_rejects_wide_edges(self):
        net = NetworkSpec(
            nodes=("A", "B"),
            edges=(("A", "B", 2),),
            sources=(("X1", "A"),),
            demands=(("B", "X1"),),
        )
        with pytest.raises(ValueError, match="unit capacities"):
            reduce_to_index_coding(net)

    def test_cycle_rejected(self):
        net = NetworkSpec(
            nodes=("a", "b", "c"),
            edges=(("a", "b", 1), ("b", "c", 1), ("c", "a", 1)),
            sources=(("X1", "a"),),
            demands=(("c", "X1"),),
        )
        with pytest.raises(UnsupportedTopologyError, match="cycle"):
            reduce_to_index_coding(net)


class TestSolveNetwork:
    def test_butterfly_overlapping_sessions(self, butterfly):
        nc = solve_network(butterfly, net_cfg())
        assert isinstance(nc, NetworkCode)
        assert nc.r_star == 7
        # the bottleneck must genuinely mix both sources
        names = [e.name for e in nc.unit_edges]
        row = nc.global_map[names.index("a->b")]
        assert np.abs(row).min() > 0.01
        # every demand decodes on a fresh random draw
        rng = np.random.default_rng(99)
        x = rng.uniform(-1, 1, 2)
        _, decoded = evaluate_code(nc, x)
        assert len(decoded) == 4
        for (_, msg), value in decoded.items():
            want = x[0] if msg == "X1" else x[1]
            assert abs(value - want) < 0.05

    def test_path_forwards(self, path_net):
        nc = solve_network(path_net, net_cfg())
        assert isinstance(nc, NetworkCode)
        assert nc.r_star == 2
        _, decoded = evaluate_code(nc, np.array([0.7]))
        assert decoded[("b", "X1")] == pytest.approx(0.7, abs=0.05)

    def test_starved_bottleneck_is_unknown(self, starved_net):
        out = solve_network(starved_net, net_cfg())
        assert isinstance(out, Unknown)
        assert out.message == UNKNOWN_MESSAGE
        # the reduced instance has minimum achievable length 2 > capacity 1
        assert out.outcome is not None and out.outcome.r_star == 2

    def test_parallel_edges_carry_independent_combos(self):
        net = NetworkSpec(
            nodes=("A", "B"),
            edges=(("A", "B", 2),),
            sources=(("X1", "A"), ("X2", "A")),
            demands=(("B", "X1"), ("B", "X2")),
        )
        nc = solve_network(net, net_cfg())
        assert isinstance(nc, NetworkCode)
        assert nc.global_map.shape == (2, 2)
        assert abs(np.linalg.det(nc.global_map)) > 1e-3

    def test_zero_edge_trivial_network(self):
        net = NetworkSpec(
            nodes=("s",),
            edges=(),
            sources=(("X1", "s"),),
            demands=(("s", "X1"),),
        )
        nc = solve_network(net, net_cfg())
        assert isinstance(nc, NetworkCode)
        assert nc.r_star == 0
        _, decoded = evaluate_code(nc, np.array([0.3]))
        assert decoded[("s", "X1")] == 0.3

    def test_unknown_message_wording(self):
        assert "does not admit a linear network code" in UNKNOWN_MESSAGE
        assert "could not find an optimal index coding solution" in UNKNOWN_MESSAGE

    def test_agrees_with_binary_oracle(self):
        # real-coefficient pipeline vs exhaustive {0,1} local coefficients
        rng = np.random.default_rng(42)
        checked = 0
        while checked < 6:
            raw = random_tiny_network(rng)
            net = NetworkSpec(
                nodes=tuple(raw["nodes"]),
                edges=tuple((t, h, 1) for t, h in raw["edges"]),
                sources=tuple((m, v) for m, v in raw["sources"].items()),
                demands=tuple(raw["demands"]),
            )
            expected = binary_code_exists(
                len(raw["sources"]), raw["edges"], raw["sources"], raw["demands"]
            )
            got = solve_network(net, net_cfg(seed=7))
            assert isinstance(got, NetworkCode) == expected, format_network(net)
            checked += 1


class TestExtraction:
    def test_requires_matching_rank(self, starved_net):
        ic = reduce_to_index_coding(starved_net)
        pattern = PatternMatrix.from_receivers(
            ic.n_messages, [(r.wants, r.has) for r in ic.receivers]
        )
        base = pattern.fixed_base()
        code = make_index_code(base, 3, pattern, 1e-3)
        with pytest.raises(ValueError, match="capacity sum"):
            extract_network_code(ic, code, starved_net)

    def test_evaluate_rejects_wrong_length(self, butterfly):
        nc = solve_network(butterfly, net_cfg())
        with pytest.raises(ValueError, match="source symbols"):
            evaluate_code(nc, np.zeros(3))


class TestNetworkFiles:
    def test_round_trip(self, tmp_path, butterfly):
        path = tmp_path / "net.txt"
        save_network(butterfly, path)
        assert load_network(path) == butterfly

    def test_parse_ignores_comments_and_blanks(self):
        text = """
        # a tiny relay
        node s
        node t   # sink
        edge s t 1
        source X1 s
        demand t X1
        """
        net = parse_network(text)
        assert net.nodes == ("s", "t")
        assert net.capacity_sum == 1

    def test_parse_errors_carry_line_numbers(self):
        with pytest.raises(ValueError, match="line 2: unrecognized"):
            parse_network("node s\nlink s t\n")
        with pytest.raises(ValueError, match="line 2: capacity"):
            parse_network("node s\nedge s s two\n")

    def test_format_is_canonical(self, butterfly):
        assert parse_network(format_network(butterfly)) == butterfly
