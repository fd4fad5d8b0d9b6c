"""
Unit tests for the component cache
"""

import sys
import os
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '../..')))

from app.agents.cache_agent import CacheAgent
import pytest


PAYLOAD = {
    'candidates': [[0, 1], [1, 0]],
    'basis': [0],
    'kernel': [[0, "0,1", "1"], [0, "1,0", "1"]],
    'prev_dimension': 2,
}


@pytest.fixture
def cache(tmp_path):
    return CacheAgent(str(tmp_path / "components"))


def test_directory_is_created(tmp_path):
    """Missing cache directories are created"""
    target = tmp_path / "nested" / "cache"
    CacheAgent(str(target))
    assert target.is_dir()


def test_environment_variable_sets_directory(tmp_path, monkeypatch):
    """NICHOLS_CACHE_DIR is used when no directory is passed"""
    monkeypatch.setenv("NICHOLS_CACHE_DIR", str(tmp_path / "env"))
    assert CacheAgent().cache_dir == str(tmp_path / "env")


def test_save_and_load(cache):
    """A saved component loads back unchanged"""
    result = cache.save_component('nichols', 'abc123', 2, 1, PAYLOAD, matrix=((1, 3), (3, 1)))
    assert result['success']
    assert result['filename'] == 'nichols_abc123_d2_v1.json'
    assert result['size_bytes'] > 0

    loaded = cache.load_component('nichols', 'abc123', 2, 1)
    assert loaded['degree'] == 2
    assert loaded['prev_dimension'] == 2
    assert loaded['candidates'] == PAYLOAD['candidates']
    assert loaded['kernel'] == PAYLOAD['kernel']


def test_missing_and_stale_entries(cache):
    """Absent files and other format versions are misses"""
    assert cache.load_component('nichols', 'abc123', 2, 1) is None
    cache.save_component('nichols', 'abc123', 2, 1, PAYLOAD)
    assert cache.load_component('nichols', 'abc123', 2, 2) is None
    assert cache.load_component('quadratic', 'abc123', 2, 1) is None


def test_corrupt_file_is_ignored(cache):
    """Unreadable JSON is treated as a miss"""
    path = os.path.join(cache.cache_dir, 'nichols_bad_d3_v1.json')
    with open(path, 'w', encoding='utf-8') as f:
        f.write('{not json')
    assert cache.load_component('nichols', 'bad', 3, 1) is None
    assert not cache.entry_info('nichols_bad_d3_v1.json')['success']


def test_list_and_info(cache):
    """Entries are listed and described"""
    cache.save_component('nichols', 'abc123', 1, 1, PAYLOAD)
    cache.save_component('quadratic', 'abc123', 1, 1, PAYLOAD)
    result = cache.list_entries()
    assert result['success']
    assert {e['filename'] for e in result['entries']} == {
        'nichols_abc123_d1_v1.json', 'quadratic_abc123_d1_v1.json'
    }

    info = cache.entry_info('nichols_abc123_d1_v1.json')
    assert info['success']
    assert info['metadata']['kind'] == 'nichols'
    assert info['candidates'] == 2
    assert info['dimension'] == 1
    assert info['kernel_rows'] == 1

    assert cache.entry_info('missing.json')['error'] == 'Cache file not found'


def test_clear(cache):
    """Clearing removes every cache file"""
    cache.save_component('nichols', 'abc123', 1, 1, PAYLOAD)
    cache.save_component('nichols', 'abc123', 2, 1, PAYLOAD)
    result = cache.clear()
    assert result['success']
    assert result['removed'] == 2
    assert cache.list_entries()['entries'] == []
