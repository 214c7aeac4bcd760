import numpy as np
import pytest

from bcx.graph import (
    EdgeList,
    RmatParams,
    build_undirected,
    complete_graph,
    cycle_graph,
    disjoint_union,
    erdos_renyi,
    generate_rmat,
    path_graph,
    star_graph,
)


def random_tree(n, seed):
    rng = np.random.default_rng(seed)
    parents = [int(rng.integers(0, i)) for i in range(1, n)]
    return build_undirected(EdgeList(n, [(i, p) for i, p in zip(range(1, n), parents)]))


def with_isolated(g, extra):
    return build_undirected(EdgeList(g.n + extra, g.edge_list().pairs))


def graph_suite():
    """Named graphs covering every family the equivalence checks ask for (>= 200)."""
    rng = np.random.default_rng(2024)
    out = []
    for p in (0.05, 0.1, 0.3):
        for k in range(40):
            n = int(rng.integers(4, 65))
            out.append((f"er-n{n}-p{p}-{k}", erdos_renyi(n, p, seed=1000 * k + n)))
    for scale in (3, 4, 5, 6):
        for ef in (2, 8):
            for seed in range(6):
                out.append((f"rmat-s{scale}-ef{ef}-{seed}",
                            build_undirected(generate_rmat(RmatParams(scale, ef, seed=seed)))))
    out += [(f"P{n}", path_graph(n)) for n in range(2, 11)]
    out += [(f"C{n}", cycle_graph(n)) for n in range(3, 11)]
    out += [(f"K1,{k}", star_graph(k)) for k in range(1, 9)]
    out += [(f"K{n}", complete_graph(n)) for n in range(2, 6)]
    out += [(f"tree{n}", random_tree(n, n)) for n in range(5, 31, 3)]
    out += [
        ("P3+P2", disjoint_union(path_graph(3), path_graph(2))),
        ("P3+P3", disjoint_union(path_graph(3), path_graph(3))),
        ("C5+K1,3", disjoint_union(cycle_graph(5), star_graph(3))),
        ("C6+P4+K4", disjoint_union(cycle_graph(6), path_graph(4), complete_graph(4))),
        ("tree12+C7", disjoint_union(random_tree(12, 3), cycle_graph(7))),
        ("P5+iso2", with_isolated(path_graph(5), 2)),
        ("C4+iso1", with_isolated(cycle_graph(4), 1)),
        ("K1,4+P2+iso3", with_isolated(disjoint_union(star_graph(4), path_graph(2)), 3)),
        ("triangle+pendant", build_undirected(EdgeList(4, [(0, 1), (1, 2), (2, 0), (2, 3)]))),
        ("ER+C8", disjoint_union(erdos_renyi(20, 0.2, seed=5), cycle_graph(8))),
    ]
    return out


@pytest.fixture(scope="session")
def suite():
    return graph_suite()


def pytest_terminal_summary(terminalreporter):
    reports = []
    for key in ("passed", "failed"):
        for rep in terminalreporter.stats.get(key, []):
            if rep.when == "call" and "test_acceptance.py" in rep.nodeid:
                reports.append(rep)
    if not reports:
        return
    terminalreporter.section("acceptance criteria")
    for rep in sorted(reports, key=lambda r: r.nodeid):
        name = rep.nodeid.split("::")[-1]
        terminalreporter.write_line(f"{'PASS' if rep.passed else 'FAIL'}  {name}")
