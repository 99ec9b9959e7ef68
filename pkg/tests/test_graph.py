import json
import math

import numpy as np
import pytest

from loopfield import (
    GraphError,
    build_graph,
    clusters,
    component_subgraph,
    delete_vertices,
    dirichlet_form,
    green_function,
    harmonic_killing_transform,
    load_graph,
    precision_matrix,
    save_graph,
)


def two_vertex():
    return build_graph({
        "vertices": ["a", "b"],
        "edges": [["a", "b", 1.0]],
        "kappa": {"a": 1.0},
    })


def path3(kappa):
    return build_graph({
        "vertices": ["a", "b", "c"],
        "edges": [["a", "b", 1.0], ["b", "c", 1.0]],
        "kappa": kappa,
    })


def test_green_two_vertex():
    g = two_vertex()
    expect = np.array([[1.0, 1.0], [1.0, 2.0]])
    assert np.allclose(green_function(g), expect, atol=1e-12)


def test_green_path_killed_at_a():
    g = path3({"a": 1.0})
    expect = np.array([[1.0, 1.0, 1.0], [1.0, 2.0, 2.0], [1.0, 2.0, 3.0]])
    assert np.allclose(green_function(g), expect, atol=1e-12)


def test_precision_is_green_inverse():
    g = path3({"a": 0.5, "c": 2.0})
    lam = precision_matrix(g)
    assert np.allclose(lam @ green_function(g), np.eye(3), atol=1e-12)


def test_precision_entries():
    g = path3({"a": 1.0})
    lam = precision_matrix(g)
    # diagonal kappa_x + sum W, off-diagonal -W
    assert np.allclose(lam, [[2, -1, 0], [-1, 2, -1], [0, -1, 1]])


def test_dirichlet_form_is_quadratic_form():
    g = path3({"a": 0.7})
    f = np.array([0.3, -1.2, 2.0])
    assert math.isclose(dirichlet_form(g, f), f @ precision_matrix(g) @ f,
                        rel_tol=1e-12)


def test_harmonic_transform_path():
    g = path3({"c": 1.0})
    gh, h = harmonic_killing_transform(g, 0)
    assert np.allclose(h, [1.0, 2.0 / 3.0, 1.0 / 3.0], atol=1e-12)
    # conductances become W h(u) h(v); killing off the root is absorbed
    w = sorted(e.w for e in gh.edges)
    assert np.allclose(w, sorted([1.0 * 1.0 * (2 / 3), 1.0 * (2 / 3) * (1 / 3)]))
    assert all(k == 0.0 for k in gh.kappa)


def test_harmonic_transform_keeps_root_killing():
    g = path3({"a": 0.7, "c": 1.0})
    gh, _ = harmonic_killing_transform(g, 0)
    assert gh.kappa[0] == pytest.approx(0.7)
    assert all(k == 0.0 for k in gh.kappa[1:])


def test_harmonic_transform_killing_at_root_only_is_identity():
    g = two_vertex()
    gh, h = harmonic_killing_transform(g, 0)
    assert np.allclose(h, 1.0)
    assert [e.w for e in gh.edges] == [e.w for e in g.edges]


def test_clusters_triangle():
    g = build_graph({
        "vertices": ["a", "b", "c"],
        "edges": [["a", "b", 1.0], ["b", "c", 1.0], ["a", "c", 1.0]],
        "kappa": {"a": 1.0},
    })
    part = clusters(g, [0])
    assert part.count == 2
    assert part.same(0, 1) and not part.same(0, 2)
    assert clusters(g, []).count == 3
    assert clusters(g, [0, 1]).count == 1


def test_delete_vertices_moves_conductance_to_killing():
    g = path3({"c": 1.0})
    sub = delete_vertices(g, [2])
    assert sub.n == 2 and sub.m == 1
    # the severed b-c conductance reappears as killing at b
    assert sub.kappa[sub.labels.index("b")] == pytest.approx(1.0)


def test_component_subgraph():
    g = path3({"a": 1.0, "c": 1.0})
    cut = delete_vertices(g, [1])
    sub, keep = component_subgraph(cut, cut.labels.index("a"))
    assert sub.labels == ("a",)
    assert len(keep) == 1


def test_build_rejects_bad_specs():
    with pytest.raises(GraphError):
        build_graph({"vertices": []})
    with pytest.raises(GraphError):
        build_graph({"vertices": ["a", "a"]})
    with pytest.raises(GraphError):
        build_graph({"vertices": ["a", "b"], "edges": [["a", "z", 1.0]]})
    with pytest.raises(GraphError):
        build_graph({"vertices": ["a", "b"], "edges": [["a", "a", 1.0]]})
    with pytest.raises(GraphError):
        build_graph({"vertices": ["a", "b"], "edges": [["a", "b", 0.0]]})
    with pytest.raises(GraphError):
        build_graph({"vertices": ["a", "b"], "edges": [["a", "b", 1.0]],
                     "kappa": {"a": -1.0}})
    with pytest.raises(GraphError):
        build_graph({"vertices": ["a", "b", "c"],
                     "edges": [["a", "b", 1.0]], "kappa": {"a": 1.0}})


def test_recurrent_needs_opt_in():
    spec = {"vertices": ["a", "b"], "edges": [["a", "b", 1.0]]}
    with pytest.raises(GraphError):
        build_graph(spec)
    g = build_graph(spec, allow_recurrent=True)
    assert not g.is_transient()
    assert two_vertex().is_transient()


def test_json_round_trip(tmp_path):
    g = path3({"a": 0.25})
    path = tmp_path / "g.json"
    save_graph(path, g, x0="a", u=1.5)
    g2, x0, u = load_graph(path)
    assert g2.labels == g.labels
    assert [(e.u, e.v, e.w) for e in g2.edges] == [(e.u, e.v, e.w) for e in g.edges]
    assert g2.kappa == g.kappa
    assert x0 == "a" and u == 1.5


def test_load_rejects_garbage(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("not json")
    with pytest.raises(GraphError):
        load_graph(path)
    path.write_text(json.dumps({"vertices": ["a", "b"],
                                "edges": [["a", "b", 1.0]], "x0": "z"}))
    with pytest.raises(GraphError):
        load_graph(path)
    path.write_text(json.dumps({"vertices": ["a", "b"],
                                "edges": [["a", "b", 1.0]], "u": -2.0}))
    with pytest.raises(GraphError):
        load_graph(path)
    with pytest.raises(GraphError):
        load_graph(tmp_path / "absent.json")
