import numpy as np
import pytest

import wardrobe as wd


@pytest.fixture(scope="module")
def body():
    return wd.make_synthetic_body(3)


@pytest.fixture(scope="module")
def closet():
    return wd.make_synthetic_wardrobe(4, subject_count=2, frame_count=1)


def test_icosphere_and_obj_round_trip(tmp_path):
    sphere = wd.make_icosphere(2, 0.5)
    assert sphere.vertex_count == 162
    assert np.allclose(np.linalg.norm(sphere.vertices, axis=1), 0.5)
    path = tmp_path / "sphere.obj"
    wd.save_obj(sphere, path)
    again = wd.load_obj(path)
    assert np.allclose(again.vertices, sphere.vertices)
    assert (again.faces == sphere.faces).all()


def test_invalid_mesh_raises():
    with pytest.raises(wd.WardrobeError):
        wd.TriMesh(np.zeros((3, 3)), np.array([[0, 1, 5]], dtype=np.int32))


def test_zero_pose_gives_template(body):
    params = wd.BodyParams.zero(body)
    posed = wd.pose_mesh(body, params)
    assert np.abs(posed - body.template_mesh.vertices).max() < 1e-12


def test_translation_moves_every_vertex(body):
    params = wd.BodyParams.zero(body)
    params.trans = np.array([0.1, -0.2, 0.3])
    posed = wd.pose_mesh(body, params)
    assert np.allclose(posed - body.template_mesh.vertices, [0.1, -0.2, 0.3])


def test_rodrigues_is_rotation():
    r = wd.rodrigues(np.array([0.2, -0.4, 0.9]))
    assert np.allclose(r @ r.T, np.eye(3))
    assert np.isclose(np.linalg.det(r), 1.0)


def test_garment_pose_unpose_round_trip(body, closet):
    subject = closet.subjects[0]
    layer = subject.figure.garments[0]
    params = subject.figure.params(0)
    posed = wd.pose_garment(closet.model, layer.garment, params, layer.displacements)
    rest = wd.unpose_garment(closet.model, layer.garment, params, posed)
    assert np.abs(rest - layer.displacements).max() < 1e-9


def test_dress_layers(closet):
    layers = wd.dress(closet.model, closet.subjects[0].figure, 0)
    assert [m.label for m in layers] == [0, 1, 2]
    assert layers[0].name == "skin"


def test_geodesic_from_source(body):
    d = np.array(wd.geodesic_distance(body.template_mesh, [0]))
    assert d.shape == (body.vertex_count,)
    assert d[0] == pytest.approx(0.0, abs=1e-12)
    assert (d >= 0).all()


def test_pca_encode_decode(closet):
    rng = np.random.default_rng(0)
    base = closet.templates["short-pants"].mesh.vertices
    samples = [base + 0.01 * rng.standard_normal(base.shape) for _ in range(6)]
    space = wd.fit_pca(samples, components=5)
    assert space.component_count == 5
    basis = space.basis
    assert np.allclose(basis.T @ basis, np.eye(5), atol=1e-10)
    enc = wd.encode(space, samples[0])
    rebuilt = wd.decode(space, enc.z, enc.residual)
    assert np.abs(rebuilt - samples[0]).max() < 1e-9


def test_segmentation_without_smoothing_is_argmin(closet):
    subject = closet.subjects[0]
    sol = wd.segment(closet.model.template_mesh, subject.unaries, lambda_prior=0.0, lambda_pair=0.0)
    assert list(sol.labels) == list(np.argmin(subject.unaries, axis=1))


def test_retarget_onto_self_is_identity(closet):
    fig = closet.subjects[0].figure
    out = wd.retarget(closet.model, fig, fig, "naive")
    for a, b in zip(out.garments, fig.garments):
        assert np.abs(a.displacements - b.displacements).max() < 1e-9


def test_symmetric_error_of_identical_meshes(body):
    assert wd.symmetric_error(body.template_mesh, body.template_mesh) == pytest.approx(0.0, abs=1e-12)


def test_render_label_image(closet):
    cam = wd.look_at(np.array([0.0, 0.9, 3.5]), np.array([0.0, 0.9, 0.0]), np.array([0.0, 1.0, 0.0]), 64, 48)
    image = wd.rasterize_labels(wd.dress(closet.model, closet.subjects[0].figure, 0), cam, 64, 48)
    grid = image.array()
    assert grid.shape == (48, 64)
    assert (grid == 0).any() and (grid == 1).any() and (grid > 1).any()


def test_unknown_strategy_raises(closet):
    fig = closet.subjects[0].figure
    with pytest.raises(wd.WardrobeError):
        wd.retarget(closet.model, fig, fig, "magic")
