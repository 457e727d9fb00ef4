"""Strict linear orders represented as tuples of distinct items."""

from __future__ import annotations

from typing import Hashable, Sequence


class InconsistentOrders(ValueError):
    pass


def order_consistent(first: Sequence[Hashable], second: Sequence[Hashable]) -> bool:
    """False iff two shared items appear in opposite relative order."""
    pos = {x: i for i, x in enumerate(first)}
    shared = [pos[y] for y in second if y in pos]
    return all(a < b for a, b in zip(shared, shared[1:]))


def order_combine(first: Sequence[Hashable], second: Sequence[Hashable]) -> set[tuple]:
    """All linear orders over the union that extend both inputs."""
    if not order_consistent(first, second):
        raise InconsistentOrders(f"orders {list(first)} and {list(second)} are inconsistent")
    shared = set(first) & set(second)
    results: set[tuple] = set()

    def merge(i: int, j: int, acc: list):
        if i == len(first) and j == len(second):
            results.add(tuple(acc))
            return
        if i < len(first) and j < len(second) and first[i] == second[j]:
            merge(i + 1, j + 1, acc + [first[i]])
            return
        # a shared item may only be emitted once both sides reach it
        if i < len(first) and first[i] not in shared:
            merge(i + 1, j, acc + [first[i]])
        if j < len(second) and second[j] not in shared:
            merge(i, j + 1, acc + [second[j]])

    merge(0, 0, [])
    return results


def order_remove(order: Sequence[Hashable], item: Hashable) -> tuple:
    if item not in order:
        raise ValueError(f"{item!r} does not occur in the order")
    return tuple(x for x in order if x != item)


def order_insertions(order: tuple, item: Hashable) -> list[tuple]:
    """Every way of inserting a new item, i.e. ``order_combine(order, [item])``."""
    return [order[:i] + (item,) + order[i:] for i in range(len(order) + 1)]
