import json

from analytics.knowledge import expand_stub


def test_expansion_lists_unknown_keywords(kg):
    request = expand_stub(kg, 'detect communities with spectral embeddings', task_id='communities')
    assert request.keywords == ['detect', 'spectral', 'embeddings']
    assert request.task_id == 'communities'
    assert 'pagerank' in request.known_algorithms


def test_expansion_requests_are_numbered(kg, tmp_path):
    expand_stub(kg, 'spectral embeddings', run_dir=str(tmp_path))
    expand_stub(kg, 'graph neural networks', task_id='gnn', run_dir=str(tmp_path))
    assert sorted(p.name for p in tmp_path.iterdir()) == ['expansion-1.json', 'expansion-2.json']
    data = json.loads((tmp_path / 'expansion-2.json').read_text(encoding='utf-8'))
    assert data['query'] == 'graph neural networks'
    assert data['task_id'] == 'gnn'
    assert data['keywords'] == ['neural', 'networks']
