from typing import Callable, Dict, Hashable, Iterable, List


class UnionFind:
    """Disjoint sets with path compression and union by rank."""

    def __init__(self, items: Iterable[Hashable] = ()):
        self.parent: Dict[Hashable, Hashable] = {}
        self.rank: Dict[Hashable, int] = {}
        for item in items:
            self.add(item)

    def add(self, item: Hashable) -> None:
        if item not in self.parent:
            self.parent[item] = item
            self.rank[item] = 0

    def find(self, item: Hashable) -> Hashable:
        root = self.parent[item]
        if self.parent[root] != root:
            root = self.parent[item] = self.find(root)
        return root

    def union(self, a: Hashable, b: Hashable) -> Hashable:
        a, b = self.find(a), self.find(b)
        if a == b:
            return a
        if self.rank[a] < self.rank[b]:
            a, b = b, a
        elif self.rank[a] == self.rank[b]:
            self.rank[a] += 1
        self.parent[b] = a
        return a

    def groups(self) -> List[List[Hashable]]:
        """Classes as sorted lists, ordered by their smallest member."""
        buckets: Dict[Hashable, List[Hashable]] = {}
        for item in self.parent:
            buckets.setdefault(self.find(item), []).append(item)
        return sorted((sorted(members) for members in buckets.values()), key=lambda m: m[0])


def find_orbits(gens: Iterable, space: Iterable[Hashable], action: Callable) -> List[List[Hashable]]:
    """Orbits of a group action given by generators; sorted by smallest point."""
    points = list(space)
    uf = UnionFind(points)
    for g in gens:
        for x in points:
            uf.union(x, action(g, x))
    return uf.groups()
