import itertools

import pytest

from dwitness.perm import (InvalidPermutation, Permutation, all_permutations,
                           loop_decomposition, parse_permutation, to_text)


def test_identity_loops():
    dec = loop_decomposition(Permutation((1, 2, 3)))
    assert set(dec.loops) == {frozenset({1}), frozenset({2}), frozenset({3})}
    assert dec.length == 1
    assert not dec.cyclic


def test_transposition_loops():
    dec = loop_decomposition(Permutation((2, 1, 3)))
    assert set(dec.loops) == {frozenset({1, 2}), frozenset({3})}
    assert dec.length == 2
    assert not dec.cyclic


def test_full_cycle_loops():
    dec = loop_decomposition(Permutation((2, 3, 1)))
    assert dec.loops == (frozenset({1, 2, 3}),)
    assert dec.length == 3
    assert dec.cyclic


def test_rejects_non_bijection():
    with pytest.raises(InvalidPermutation):
        Permutation((1, 1, 3))


def test_parse_and_format():
    p = parse_permutation("2,1,3")
    assert p(1) == 2 and p(2) == 1 and p(3) == 3
    assert to_text(p) == "2,1,3"
    with pytest.raises(InvalidPermutation):
        parse_permutation("2,x,3")


def test_orbits_partition_exhaustive():
    for n in range(1, 7):
        for p in all_permutations(n):
            dec = loop_decomposition(p)
            union = set()
            total = 0
            for loop in dec.loops:
                assert not (union & loop)
                union |= loop
                total += len(loop)
            assert union == set(range(1, n + 1))
            assert total == n
            assert dec.length == max(len(loop) for loop in dec.loops)
            assert dec.cyclic == (len(dec.loops) == 1)


def test_square_orbits_exhaustive():
    # every orbit of p o p has size #F or #F/2 for the orbit F of p containing it
    for n in range(2, 7):
        for p in all_permutations(n):
            square = p.compose(p)
            orbit_of = {}
            for loop in loop_decomposition(p).loops:
                for i in loop:
                    orbit_of[i] = len(loop)
            for loop in loop_decomposition(square).loops:
                sizes = {orbit_of[i] for i in loop}
                assert len(sizes) == 1
                size = sizes.pop()
                if size % 2 == 0:
                    assert len(loop) in (size, size // 2)
                else:
                    assert len(loop) == size


def test_count_of_permutations():
    assert sum(1 for _ in all_permutations(4)) == 24
    assert sorted(p.images for p in all_permutations(3)) == sorted(itertools.permutations((1, 2, 3)))
