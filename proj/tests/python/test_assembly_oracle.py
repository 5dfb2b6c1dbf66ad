"""Independent P1 assembly of the flat Y-cone from the mesh file alone."""

import json
import math

import numpy as np
import pytest
import scipy.linalg
import scipy.sparse as sp

import yindex


def face_matrices(face):
    v = np.asarray(face["vertices"], dtype=float)
    n = len(v)
    k = np.zeros((n, n))
    m = np.zeros((n, n))
    for tri in face["triangles"]:
        p = v[tri]
        d = np.array([p[1] - p[0], p[2] - p[0]]).T
        area = 0.5 * abs(np.linalg.det(d))
        grads = np.linalg.solve(d.T, np.array([[-1.0, 1.0, 0.0], [-1.0, 0.0, 1.0]]))
        k[np.ix_(tri, tri)] += area * grads.T @ grads
        m[np.ix_(tri, tri)] += area / 12.0 * (np.ones((3, 3)) + np.eye(3))
    s = np.zeros((n, n))
    for a, b, tag in face["edge_tags"]:
        if tag.lower() != "sigma":
            continue
        length = np.linalg.norm(v[a] - v[b])
        s[np.ix_([a, b], [a, b])] += length / 6.0 * np.array([[2.0, 1.0], [1.0, 2.0]])
    return k, m, s


@pytest.fixture(scope="module")
def case():
    y = yindex.canonical_surface("ycone")
    mesh = yindex.build_ymesh(y, 0.2)
    data = json.loads(mesh.to_json())
    blocks = [face_matrices(f) for f in data["faces"]]
    k = scipy.linalg.block_diag(*[b[0] for b in blocks])
    m = scipy.linalg.block_diag(*[b[1] for b in blocks])
    s = scipy.linalg.block_diag(*[b[2] for b in blocks])
    return y, mesh, data, k, m, s


def test_matrices_match(case):
    y, mesh, _, k, m, s = case
    forms = {name: mat.toarray() for name, mat in yindex.assemble_forms(mesh, y).items()}
    np.testing.assert_allclose(forms["stiffness"], k, atol=1e-12)
    np.testing.assert_allclose(forms["mass"], m, atol=1e-14)
    np.testing.assert_allclose(forms["sigma_mass"], s, atol=1e-14)
    np.testing.assert_allclose(forms["boundary_sigma"], -s, atol=1e-14)
    assert not forms["potential"].any()
    assert not forms["boundary_gamma"].any()


def test_counts_from_independent_basis(case):
    _, mesh, data, k, m, s = case
    sizes = [len(f["vertices"]) for f in data["faces"]]
    offsets = np.concatenate([[0], np.cumsum(sizes)[:-1]])
    n = sum(sizes)
    junction = {int(offsets[j] + t[j]) for t in data["junction_map"] for j in range(3)}
    cols = [np.eye(n)[:, i] for i in range(n) if i not in junction]
    for t in data["junction_map"]:
        dofs = [int(offsets[j] + t[j]) for j in range(3)]
        for w in ([1.0, -1.0, 0.0], [1.0, 1.0, -2.0]):
            c = np.zeros(n)
            c[dofs] = w
            cols.append(c / np.linalg.norm(w))
    z = np.array(cols).T
    vals = scipy.linalg.eigh(z.T @ (k - s) @ z, z.T @ m @ z, eigvals_only=True)
    tol = 5 * mesh.h**2
    assert int((vals < -tol).sum()) == 2
    assert int((abs(vals) <= tol).sum()) == 3
    ours = yindex.compute_index("ycone", mesh.h, k=8)
    np.testing.assert_allclose(ours["eigenvalues"][:8], vals[:8], atol=1e-9)


def test_constants(case):
    _, mesh, data, k, m, s = case
    sizes = [len(f["vertices"]) for f in data["faces"]]
    f = np.concatenate([np.full(sizes[0], 1.0), np.full(sizes[1], 1.0), np.full(sizes[2], -2.0)])
    q = f @ (k - s) @ f
    assert q == pytest.approx(-6 * math.pi, rel=0.05)
