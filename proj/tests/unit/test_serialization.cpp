#include "helpers.hpp"

#include "wardrobe/serialization.hpp"

#include <numbers>

using namespace testing;

TEST_SUITE("serialization") {
  TEST_CASE("body model round trip is exact") {
    TempDir dir("body");
    const BodyModel m = make_synthetic_body(5, 4, 6);
    save_body_model(m, dir / "body.json");
    const BodyModel back = load_body_model(dir / "body.json");
    CHECK(back.template_mesh.vertices == m.template_mesh.vertices);
    CHECK(back.template_mesh.faces == m.template_mesh.faces);
    CHECK(back.shape_basis == m.shape_basis);
    CHECK(back.pose_basis == m.pose_basis);
    CHECK(back.joint_regressor == m.joint_regressor);
    CHECK(back.weights == m.weights);
    CHECK(back.parents == m.parents);
    save_body_model(back, dir / "again.json");
    CHECK(read_text(dir / "body.json") == read_text(dir / "again.json"));
  }

  TEST_CASE("body model errors name the offending field") {
    Json j = body_model_to_json(make_synthetic_body(1, 2, 3));
    Json missing = j;
    missing.erase("weights");
    CHECK_THROWS_WITH_AS(body_model_from_json(missing, "m"), doctest::Contains("missing field 'weights'"), Error);
    Json bad_shape = j;
    bad_shape["shape_basis"]["shape"][1] = 2;
    CHECK_THROWS_WITH_AS(body_model_from_json(bad_shape, "m"), doctest::Contains("m.shape_basis.shape"), Error);
    Json short_data = j;
    short_data["weights"]["data"].erase(0);
    CHECK_THROWS_WITH_AS(body_model_from_json(short_data, "m"), doctest::Contains("m.weights"), Error);
    Json bad_face = j;
    bad_face["template"]["faces"][2] = {1, 2};
    CHECK_THROWS_WITH_AS(body_model_from_json(bad_face, "m"), doctest::Contains("faces[2]"), Error);
  }

  TEST_CASE("garment and figure round trips") {
    TempDir dir("figure");
    const BodyModel& m = humanoid();
    std::mt19937_64 rng(2);
    DressedFigure fig;
    fig.beta = fixtures::random_vector(rng, m.shape_count(), 1.0);
    fig.poses = {fixtures::random_pose(rng, m.joint_count(), 0.5), fixtures::random_pose(rng, m.joint_count(), 0.5)};
    fig.trans = Eigen::Vector3d(0.1, 0.2, 0.3);
    fig.skin_displacements = 0.001 * Points::Random(m.vertex_count(), 3);
    Garment g = make_garment_template(m, "t-shirt");
    g.texture = "cloth.png";
    fig.garments.push_back({g, 0.01 * Points::Random(g.vertex_count(), 3)});
    save_body_model(m, dir / "body.json");
    save_figure(fig, dir / "fig.json", dir / "body.json");
    CHECK(std::filesystem::exists(dir / "fig.garment0.json"));
    CHECK(std::filesystem::exists(dir / "fig.garment0.obj"));

    const LoadedFigure back = load_figure(dir / "fig.json");
    CHECK(std::filesystem::equivalent(back.model_path, dir / "body.json"));
    CHECK(back.figure.beta == fig.beta);
    CHECK(back.figure.poses == fig.poses);
    CHECK(back.figure.trans == fig.trans);
    CHECK(back.figure.skin_displacements == fig.skin_displacements);
    REQUIRE(back.figure.garments.size() == 1);
    const GarmentLayer& layer = back.figure.garments[0];
    CHECK(layer.displacements == fig.garments[0].displacements);
    CHECK(layer.garment.name == "t-shirt");
    CHECK(layer.garment.indicator == g.indicator);
    CHECK(layer.garment.boundary_loops == g.boundary_loops);
    CHECK(layer.garment.texture == g.texture);
    CHECK(layer.garment.mesh.vertices == g.mesh.vertices);
    CHECK(layer.garment.mesh.uvs == g.mesh.uvs);
  }

  TEST_CASE("poses are wrapped on load") {
    BodyParams p;
    p.beta = Eigen::VectorXd::Zero(2);
    p.theta = PoseMatrix::Zero(2, 3);
    p.theta(1, 2) = 7.0;
    const BodyParams back = params_from_json(params_to_json(p), "p");
    CHECK(back.theta(1, 2) == doctest::Approx(7.0 - 2.0 * std::numbers::pi));
  }

  TEST_CASE("fits with and without skin displacements") {
    BodyFit fit{BodyParams::zero(humanoid()), Points()};
    fit.params.trans = Eigen::Vector3d(1, 2, 3);
    const Json bare = fit_to_json(fit);
    CHECK_FALSE(bare.contains("skin_displacements"));
    CHECK(fit_from_json(bare, "fit").skin_displacements.rows() == 0);
    fit.skin_displacements = Points::Constant(humanoid().vertex_count(), 3, 0.001);
    const BodyFit back = fit_from_json(fit_to_json(fit), "fit");
    CHECK(back.skin_displacements == fit.skin_displacements);
    CHECK(back.params.trans == fit.params.trans);
    Json broken = bare;
    broken["trans"] = {1, 2};
    CHECK_THROWS_WITH_AS(fit_from_json(broken, "fit"), doctest::Contains("fit.trans"), Error);
  }

  TEST_CASE("shape space round trip") {
    std::mt19937_64 rng(3);
    std::vector<Points> samples;
    for (int s = 0; s < 5; ++s) samples.push_back(Points::Random(12, 3));
    const PcaShapeSpace space = fit_pca(samples, 3, "coat").space;
    const PcaShapeSpace back = shape_space_from_json(shape_space_to_json(space), "s");
    CHECK(back.garment_class == "coat");
    CHECK(back.mean == space.mean);
    CHECK(back.basis == space.basis);
    CHECK(back.singular_values == space.singular_values);
    CHECK(back.residual_cap == space.residual_cap);
    Json bad = shape_space_to_json(space);
    bad["n_c"] = 4;
    CHECK_THROWS_WITH_AS(shape_space_from_json(bad, "s"), doctest::Contains("s.basis"), Error);
  }

  TEST_CASE("camera in explicit and look-at forms") {
    const Camera cam = look_at({0.5, 1.0, 3.0}, {0, 0.9, 0}, {0, 1, 0}, 64, 48);
    const Camera explicit_back = camera_from_json(camera_to_json(cam), 64, 48, "cam");
    CHECK(explicit_back.focal == cam.focal);
    CHECK(explicit_back.rotation == cam.rotation);
    CHECK(explicit_back.translation == cam.translation);

    const Json look = {{"eye", {0.5, 1.0, 3.0}}, {"target", {0, 0.9, 0}}};
    const Camera from_look = camera_from_json(look, 64, 48, "cam");
    CHECK((from_look.rotation - cam.rotation).norm() < 1e-15);
    CHECK(from_look.focal == 48.0);
    CHECK(from_look.cx == 32.0);

    Json with_focal = look;
    with_focal["focal"] = 100.0;
    CHECK(camera_from_json(with_focal, 64, 48, "cam").focal == 100.0);
    Json bad = camera_to_json(cam);
    bad["rotation"][0][0] = 5.0;
    CHECK_THROWS_WITH_AS(camera_from_json(bad, 64, 48, "cam"), doctest::Contains("cam: camera: rotation"), Error);
    CHECK_THROWS_WITH_AS(camera_from_json(Json{{"eye", {0, 0, 1}}}, 64, 48, "cam"),
                         doctest::Contains("missing field 'target'"), Error);
  }

  TEST_CASE("label and table files") {
    TempDir dir("tables");
    write_labels({0, 2, 1, 1}, dir / "l.txt");
    CHECK(read_labels(dir / "l.txt") == std::vector<int>{0, 2, 1, 1});
    write_text(dir / "bad.txt", "0\n1.5\n");
    CHECK_THROWS_WITH_AS(read_labels(dir / "bad.txt"), doctest::Contains("bad.txt:2"), Error);

    write_values({0.1, 1.0 / 3.0}, dir / "v.txt");
    const Eigen::MatrixXd v = read_table(dir / "v.txt");
    CHECK(v(1, 0) == 1.0 / 3.0);
    write_text(dir / "t.txt", "1 2 3\n4 5 6\n\n");
    const Eigen::MatrixXd t = read_table(dir / "t.txt");
    CHECK(t.rows() == 2);
    CHECK(t(1, 2) == 6.0);
    write_text(dir / "ragged.txt", "1 2 3\n4 5\n");
    CHECK_THROWS_WITH_AS(read_table(dir / "ragged.txt"), doctest::Contains("ragged.txt:2"), Error);
    write_text(dir / "word.txt", "1 two 3\n");
    CHECK_THROWS_WITH_AS(read_table(dir / "word.txt"), doctest::Contains("'two' is not a number"), Error);
    CHECK_THROWS_WITH_AS(read_labels(dir / "none.txt"), doctest::Contains("none.txt"), Error);
  }

  TEST_CASE("registration config files") {
    TempDir dir("config");
    write_text(dir / "reg.toml",
               "# registration\n[registration]\nlaplacian_weight = 0.25\nmax_iterations = 7  # short\n"
               "tolerance = \"1e-5\"\n");
    const RegistrationConfig cfg = registration_config_from(read_key_values(dir / "reg.toml"), "reg.toml");
    CHECK(cfg.laplacian_weight == 0.25);
    CHECK(cfg.max_iterations == 7);
    CHECK(cfg.tolerance == 1e-5);
    CHECK(cfg.data_weight == RegistrationConfig{}.data_weight);

    CHECK_THROWS_WITH_AS(registration_config_from({{"lapl_weight", "1"}}, "reg"),
                         doctest::Contains("unknown key 'lapl_weight'"), Error);
    CHECK_THROWS_WITH_AS(registration_config_from({{"max_iterations", "7.5"}}, "reg"),
                         doctest::Contains("field 'max_iterations'"), Error);
    CHECK_THROWS_WITH_AS(registration_config_from({{"data_weight", "-1"}}, "reg"), doctest::Contains("reg:"),
                         Error);
    write_text(dir / "broken.toml", "laplacian_weight 0.5\n");
    CHECK_THROWS_WITH_AS(read_key_values(dir / "broken.toml"), doctest::Contains("broken.toml:1"), Error);
  }

  TEST_CASE("json files") {
    TempDir dir("json");
    write_json(Json{{"b", 1}, {"a", {1.5, 2}}}, dir / "x.json");
    CHECK(read_json(dir / "x.json")["a"][0] == 1.5);
    write_text(dir / "bad.json", "{\"a\": ");
    CHECK_THROWS_WITH_AS(read_json(dir / "bad.json"), doctest::Contains("invalid JSON"), Error);
    CHECK_THROWS_WITH_AS(read_json(dir / "gone.json"), doctest::Contains("gone.json"), Error);
    const Eigen::MatrixXd m = Eigen::MatrixXd::Random(3, 4);
    CHECK(matrix_from_json(matrix_to_json(m), "m") == m);
  }
}
