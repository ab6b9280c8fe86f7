"""Cache geometry arithmetic, lookup and LRU replacement."""

import pytest

from camsim.memhier import CacheArray, CacheGeometry, split_address
from camsim.topology import ConfigError


L1 = CacheGeometry(256 * 1024, 4, 64)
L2 = CacheGeometry(16 * 1024 * 1024, 4, 64)


def test_baseline_geometry_set_counts():
    assert L1.n_sets == 1024
    assert L2.n_sets == 65536


def test_geometry_rejects_non_power_of_two():
    with pytest.raises(ConfigError):
        CacheGeometry(300 * 1024, 4, 64)
    with pytest.raises(ConfigError):
        CacheGeometry(256 * 1024, 3, 64)
    with pytest.raises(ConfigError):
        CacheGeometry(64, 4, 64)  # capacity < assoc * block


def test_split_address_example():
    # addr 0x12345 with 1024 sets: offset 0x05, set 0x08D, tag 0x1
    tag, idx, off = split_address(0x12345, L1)
    assert (tag, idx, off) == (0x1, 0x08D, 0x05)


def test_split_address_zero_and_same_block():
    assert split_address(0, L1) == (0, 0, 0)
    t1 = split_address(0x1000, L1)[:2]
    t2 = split_address(0x1001, L1)[:2]
    assert t1 == t2


def test_split_address_range_check():
    with pytest.raises(ConfigError):
        split_address(512 * 1024 * 1024, L1, mem_bytes=512 * 1024 * 1024)


def small():
    return CacheArray(CacheGeometry(4 * 64, 4, 64))  # one set, 4 ways


def test_lookup_miss_then_hit():
    c = small()
    assert not c.lookup(0x80)
    c.install(0x80)
    assert c.lookup(0x80)


def test_lru_eviction_order():
    c = small()
    geom = c.geometry
    addrs = [i * geom.block_bytes * geom.n_sets for i in range(5)]
    for a in addrs[:4]:
        c.install(a)
    # oldest untouched is addrs[0]
    assert c.select_victim(0) is not None
    victim = c.install(addrs[4])
    assert victim == addrs[0]
    assert not c.contains(addrs[0])


def test_lru_touch_changes_victim():
    c = small()
    a = [i * 64 for i in range(5)]  # one set (n_sets == 1)
    for x in a[:4]:
        c.install(x)
    c.lookup(a[0])                  # re-touch: a[1] becomes LRU
    victim = c.install(a[4])
    assert victim == a[1]


def test_install_into_free_way_evicts_nothing():
    c = small()
    assert c.install(0) is None
    assert c.select_victim(0) is None


def test_install_respects_exclusions():
    c = small()
    a = [i * 64 for i in range(5)]
    for x in a[:4]:
        c.install(x)
    victim = c.install(a[4], exclude={a[0], a[1]})
    assert victim == a[2]


def test_occupancy_never_exceeds_associativity():
    c = CacheArray(CacheGeometry(8 * 64, 2, 64))  # 4 sets, 2 ways
    for i in range(64):
        addr = i * 64
        if not c.contains(addr):
            c.install(addr)
    assert c.audit() == []
    for ways in c.sets.values():
        assert len(ways) <= 2
