import logging

from reldav.cache import DavenportCache, group_key, subset_hash
from reldav.groups import cyclic, make_group
from reldav.zerosum import small_rel_davenport


def test_round_trip(tmp_path):
    path = tmp_path / "c"
    G = make_group([2, 4])
    cold = DavenportCache(path)
    r1 = small_rel_davenport(G, G.elements, cache=cold)
    assert cold.misses == 1 and path.exists()
    warm = DavenportCache(path)
    r2 = small_rel_davenport(G, G.elements, cache=warm)
    assert warm.hits == 1 and warm.misses == 0
    assert (r1.value, r1.witness) == (r2.value, r2.witness)


def test_record_format(tmp_path):
    path = tmp_path / "c"
    small_rel_davenport(cyclic(6), [(1,), (3,), (5,)], cache=DavenportCache(path))
    (line,) = path.read_text().splitlines()
    gkey, shash, value, witness = line.split("|")
    assert gkey == '{"invariant_factors":[6]}' == group_key((6,))
    assert shash == subset_hash(((1,), (3,), (5,)))
    assert value == "5"
    assert witness == "[[1],[1],[1],[1],[1]]"


def test_corrupted_lines_are_skipped(tmp_path, caplog):
    path = tmp_path / "c"
    G = cyclic(6)
    small_rel_davenport(G, G.elements, cache=DavenportCache(path))
    with open(path, "a") as fh:
        fh.write("garbage\n{not json}|x|1|[]\n|||\n")
    with caplog.at_level(logging.WARNING):
        cache = DavenportCache(path)
    assert cache.skipped == 3
    assert "corrupted" in caplog.text
    assert small_rel_davenport(G, G.elements, cache=cache).value == 5


def test_wrong_record_is_not_trusted(tmp_path):
    path = tmp_path / "c"
    G = cyclic(6)
    S = [(2,)]
    cache = DavenportCache(path)
    cache.put(G.invariant_factors, ((2,),), 5, [(1,), (1,), (1,), (1,), (1,)])  # wrong total
    assert small_rel_davenport(G, S, cache=cache).value == 4


def test_memory_only_cache_writes_nothing(tmp_path):
    cache = DavenportCache(None)
    small_rel_davenport(cyclic(5), [(1,)], cache=cache)
    assert cache.records and list(tmp_path.iterdir()) == []


def test_merge_appends_only_new_records(tmp_path):
    path = tmp_path / "c"
    a = DavenportCache(path)
    small_rel_davenport(cyclic(4), [(1,)], cache=a)
    b = DavenportCache(None)
    small_rel_davenport(cyclic(4), [(1,)], cache=b)
    small_rel_davenport(cyclic(4), [(2,)], cache=b)
    a.merge(b.records)
    assert len(path.read_text().splitlines()) == 2
