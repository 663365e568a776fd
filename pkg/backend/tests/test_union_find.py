from services.union_find import UnionFind, find_orbits


def test_groups_are_sorted_by_smallest_member():
    uf = UnionFind(range(6))
    uf.union(4, 1)
    uf.union(5, 3)
    uf.union(3, 0)
    assert uf.groups() == [[0, 3, 5], [1, 4], [2]]
    assert uf.find(5) == uf.find(0)


def test_items_can_be_added_after_construction():
    uf = UnionFind()
    uf.add('b')
    uf.add('a')
    uf.add('a')
    assert uf.groups() == [['a'], ['b']]
    uf.union('a', 'b')
    assert uf.groups() == [['a', 'b']]


def test_orbits_of_a_product_action():
    # (0 1) and (2 3 4) as arrays
    gens = [(1, 0, 2, 3, 4), (0, 1, 3, 4, 2)]
    assert find_orbits(gens, range(5), lambda g, x: g[x]) == [[0, 1], [2, 3, 4]]
