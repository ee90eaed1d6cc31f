import pytest

from ipfpp.lattice import (
    AdjacencyError,
    RegionError,
    build_region,
    canonical_edge,
    l1_norm,
    neighbors,
    parse_region_spec,
)


def test_l1_norm():
    assert l1_norm((0, 0)) == 0
    assert l1_norm((3, -2)) == 5
    assert l1_norm((1, 1, 1)) == 3


def test_neighbors_order():
    assert neighbors((0,)) == [(-1,), (1,)]
    assert neighbors((0, 0)) == [(-1, 0), (1, 0), (0, -1), (0, 1)]
    assert neighbors((2, 0)) == [(1, 0), (3, 0), (2, -1), (2, 1)]


def test_canonical_edge_symmetry():
    assert canonical_edge((1, 0), (0, 0)) == (((0, 0), (1, 0)))
    assert canonical_edge((0, 0), (1, 0)) == canonical_edge((1, 0), (0, 0))
    with pytest.raises(AdjacencyError):
        canonical_edge((0, 0), (1, 1))


def test_small_ball_counts():
    r = build_region("l1", 2, R=1)
    assert (len(r.vertices), len(r.boundary), r.edge_count) == (5, 4, 4)
    r = build_region("l1", 2, R=2)
    assert (len(r.vertices), len(r.boundary), r.edge_count) == (13, 8, 16)
    r = build_region("l1", 1, R=2)
    assert (len(r.vertices), len(r.boundary), r.edge_count) == (5, 2, 4)


@pytest.mark.parametrize("d,rmax", [(1, 10), (2, 10), (3, 6)])
def test_boundary_equals_norm_shell(d, rmax):
    # adjacency boundary of an l1 ball is exactly the norm-R shell
    for R in range(1, rmax + 1):
        reg = build_region("l1", d, R=R)
        shell = {v for v in reg.vertices if l1_norm(v) == R}
        assert reg.boundary == shell


def test_boundary_norm_shell_d3_r10():
    reg = build_region("l1", 3, R=10)
    assert reg.boundary == {v for v in reg.vertices if l1_norm(v) == 10}


def test_d2_ball_size_closed_form():
    for R in range(0, 51):
        reg = build_region("l1", 2, R=R)
        assert len(reg.vertices) == 2 * R * R + 2 * R + 1


def test_edge_list_clean():
    reg = build_region("l1", 2, R=4)
    assert len(set(reg.edges)) == len(reg.edges)
    vs = set(reg.vertices)
    for lo, hi in reg.edges:
        assert lo in vs and hi in vs
        assert lo < hi
        assert canonical_edge(lo, hi) == canonical_edge(hi, lo) == (lo, hi)


def test_escape_paths_cross_boundary():
    # every unit-step path from the origin to outside must hit the boundary
    reg = build_region("l1", 2, R=3)
    import itertools
    import random

    rng = random.Random(0)
    for _ in range(200):
        pos = reg.origin
        crossed = False
        for step in itertools.count():
            if pos not in reg:
                assert crossed
                break
            if reg.is_boundary(pos):
                crossed = True
            pos = rng.choice(neighbors(pos))
            if step > 100:
                break


def test_lopsided_region():
    reg = build_region("lopsided", 2, R=10)
    assert reg.origin in reg
    assert (-10, 0) in reg and (-11, 0) not in reg
    assert (5, 0) in reg and (6, 0) not in reg
    assert reg.is_boundary((-10, 0)) and reg.is_boundary((5, 0))
    with pytest.raises(RegionError):
        build_region("lopsided", 3, R=5)


def test_custom_region_guards():
    with pytest.raises(RegionError):
        build_region("custom", 2, predicate=lambda v: v != (0, 0))
    with pytest.raises(RegionError):
        build_region("custom", 2, predicate=lambda v: True, max_vertices=100)
    reg = build_region("custom", 2, predicate=lambda v: abs(v[0]) <= 2 and v[1] == 0)
    assert len(reg.vertices) == 5


def test_parse_region_spec():
    assert parse_region_spec("l1:3", 2).kind == "l1:3"
    assert parse_region_spec("lopsided:4", 2).kind == "lopsided:4"
    with pytest.raises(RegionError):
        parse_region_spec("ball-of-mud", 2)
