#include "wardrobe/evaluation.hpp"
#include "wardrobe/garment.hpp"
#include "wardrobe/geodesic.hpp"
#include "wardrobe/primitives.hpp"
#include "wardrobe/registration.hpp"
#include "wardrobe/retarget.hpp"
#include "wardrobe/segmentation.hpp"
#include "wardrobe/serialization.hpp"
#include "wardrobe/shape_space.hpp"
#include "wardrobe/synthetic_wardrobe.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace wardrobe;

namespace {

MrfProblem mrf_problem(const TriMesh& body, const Eigen::MatrixXd& unary, const Eigen::MatrixXd& prior,
                       double lambda_prior, double lambda_pair) {
  MrfProblem p;
  p.edges = unique_edges(body);
  p.unary = unary;
  p.prior = prior;
  p.lambda_prior = lambda_prior;
  p.lambda_pair = lambda_pair;
  p.validate();
  return p;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Layered garment engine";
  py::register_exception<Error>(m, "WardrobeError", PyExc_ValueError);

  py::class_<TriMesh>(m, "TriMesh")
      .def(py::init<>())
      .def(py::init([](Points v, Faces f) {
             TriMesh mesh{std::move(v), std::move(f), {}};
             validate(mesh);
             return mesh;
           }),
           py::arg("vertices"), py::arg("faces"))
      .def_readwrite("vertices", &TriMesh::vertices)
      .def_readwrite("faces", &TriMesh::faces)
      .def_readwrite("uvs", &TriMesh::uvs)
      .def_property_readonly("vertex_count", &TriMesh::vertex_count)
      .def_property_readonly("face_count", &TriMesh::face_count)
      .def("__repr__", [](const TriMesh& t) {
        return "<TriMesh " + std::to_string(t.vertex_count()) + " vertices, " + std::to_string(t.face_count()) +
               " faces>";
      });

  m.def("load_obj", &load_obj, py::arg("path"));
  m.def("save_obj", &save_obj, py::arg("mesh"), py::arg("path"));
  m.def("make_icosphere", &make_icosphere, py::arg("subdivisions"), py::arg("radius") = 1.0);
  m.def("make_grid", &make_grid, py::arg("nx"), py::arg("ny"), py::arg("spacing"));
  m.def("vertex_normals", &vertex_normals, py::arg("mesh"));
  m.def(
      "geodesic_distance",
      [](const TriMesh& mesh, const std::vector<int>& sources) { return geodesic_distance(mesh, sources); },
      py::arg("mesh"), py::arg("sources"));

  py::class_<BodyModel>(m, "BodyModel")
      .def_readonly("template_mesh", &BodyModel::template_mesh)
      .def_readonly("shape_basis", &BodyModel::shape_basis)
      .def_readonly("pose_basis", &BodyModel::pose_basis)
      .def_readonly("joint_regressor", &BodyModel::joint_regressor)
      .def_readonly("weights", &BodyModel::weights)
      .def_readonly("parents", &BodyModel::parents)
      .def_property_readonly("vertex_count", &BodyModel::vertex_count)
      .def_property_readonly("joint_count", &BodyModel::joint_count)
      .def_property_readonly("shape_count", &BodyModel::shape_count);

  py::class_<BodyParams>(m, "BodyParams")
      .def(py::init<>())
      .def(py::init([](Eigen::VectorXd beta, PoseMatrix theta, Eigen::Vector3d trans) {
             return BodyParams{std::move(beta), std::move(theta), trans};
           }),
           py::arg("beta"), py::arg("theta"), py::arg("trans") = Eigen::Vector3d::Zero())
      .def_static("zero", &BodyParams::zero, py::arg("model"))
      .def_readwrite("beta", &BodyParams::beta)
      .def_readwrite("theta", &BodyParams::theta)
      .def_readwrite("trans", &BodyParams::trans);

  m.def("make_synthetic_body", &make_synthetic_body, py::arg("seed"), py::arg("shape_count") = 10,
        py::arg("joint_count") = 16);
  m.def("load_body_model", &load_body_model, py::arg("path"));
  m.def("save_body_model", &save_body_model, py::arg("model"), py::arg("path"));
  m.def("rodrigues", &rodrigues, py::arg("axis_angle"));
  m.def("joint_locations", &joint_locations, py::arg("model"), py::arg("beta"));
  m.def("pose_mesh", &pose_mesh, py::arg("model"), py::arg("params"), py::arg("displacements") = Points());

  py::class_<Garment>(m, "Garment")
      .def_readonly("name", &Garment::name)
      .def_readonly("mesh", &Garment::mesh)
      .def_readonly("indicator", &Garment::indicator)
      .def_readonly("boundary_loops", &Garment::boundary_loops)
      .def_property_readonly("vertex_count", &Garment::vertex_count);

  py::class_<GarmentLayer>(m, "GarmentLayer")
      .def(py::init([](Garment g, Points d) { return GarmentLayer{std::move(g), std::move(d)}; }),
           py::arg("garment"), py::arg("displacements"))
      .def_readwrite("garment", &GarmentLayer::garment)
      .def_readwrite("displacements", &GarmentLayer::displacements);

  py::class_<DressedFigure>(m, "DressedFigure")
      .def(py::init<>())
      .def_readwrite("beta", &DressedFigure::beta)
      .def_readwrite("poses", &DressedFigure::poses)
      .def_readwrite("trans", &DressedFigure::trans)
      .def_readwrite("skin_displacements", &DressedFigure::skin_displacements)
      .def_readwrite("garments", &DressedFigure::garments)
      .def_property_readonly("frame_count", &DressedFigure::frame_count)
      .def("params", &DressedFigure::params, py::arg("frame"))
      .def("validate", &DressedFigure::validate, py::arg("model"));

  py::class_<LabeledMesh>(m, "LabeledMesh")
      .def_readonly("name", &LabeledMesh::name)
      .def_readonly("label", &LabeledMesh::label)
      .def_readonly("mesh", &LabeledMesh::mesh);

  m.def("garment_classes", &garment_classes);
  m.def("make_garment_template", &make_garment_template, py::arg("model"), py::arg("garment_class"),
        py::arg("offset") = 0.003);
  m.def("load_garment", &load_garment, py::arg("path"));
  m.def("pose_garment", &pose_garment, py::arg("model"), py::arg("garment"), py::arg("params"),
        py::arg("displacements"));
  m.def("unpose_garment", &unpose_garment, py::arg("model"), py::arg("garment"), py::arg("params"),
        py::arg("posed_vertices"));
  m.def("dress", &dress, py::arg("model"), py::arg("figure"), py::arg("frame") = 0);
  m.def(
      "load_figure", [](const std::filesystem::path& p) { return load_figure(p).figure; }, py::arg("path"));

  py::class_<BodyFit>(m, "BodyFit")
      .def(py::init([](BodyParams p, Points skin) { return BodyFit{std::move(p), std::move(skin)}; }),
           py::arg("params"), py::arg("skin_displacements") = Points())
      .def_readwrite("params", &BodyFit::params)
      .def_readwrite("skin_displacements", &BodyFit::skin_displacements);

  py::class_<RegistrationConfig>(m, "RegistrationConfig")
      .def(py::init<>())
      .def_readwrite("boundary_weight", &RegistrationConfig::boundary_weight)
      .def_readwrite("data_weight", &RegistrationConfig::data_weight)
      .def_readwrite("laplacian_weight", &RegistrationConfig::laplacian_weight)
      .def_readwrite("interp_weight", &RegistrationConfig::interp_weight)
      .def_readwrite("unpose_weight", &RegistrationConfig::unpose_weight)
      .def_readwrite("max_iterations", &RegistrationConfig::max_iterations)
      .def_readwrite("tolerance", &RegistrationConfig::tolerance)
      .def("validate", &RegistrationConfig::validate);

  py::class_<RegistrationResult>(m, "RegistrationResult")
      .def_readonly("vertices", &RegistrationResult::vertices)
      .def_readonly("displacements", &RegistrationResult::displacements)
      .def_readonly("initial", &RegistrationResult::initial)
      .def_readonly("converged", &RegistrationResult::converged)
      .def_readonly("warning", &RegistrationResult::warning)
      .def_readonly("boundary_residual", &RegistrationResult::boundary_residual);

  m.def("labeled_submesh", &labeled_submesh, py::arg("target"), py::arg("labels"), py::arg("label"));
  m.def("loop_points", &loop_points, py::arg("mesh"), py::arg("loops"));
  m.def("pair_loops_by_centroid", &pair_loops_by_centroid, py::arg("template_vertices"), py::arg("template_loops"),
        py::arg("target_loops"));
  m.def("register_garment", &register_garment, py::arg("model"), py::arg("garment"), py::arg("fit"),
        py::arg("target"), py::arg("labels"), py::arg("label"), py::arg("target_loops"),
        py::arg("config") = RegistrationConfig{});

  py::class_<PcaShapeSpace>(m, "PcaShapeSpace")
      .def_readonly("garment_class", &PcaShapeSpace::garment_class)
      .def_readonly("mean", &PcaShapeSpace::mean)
      .def_readonly("basis", &PcaShapeSpace::basis)
      .def_readonly("singular_values", &PcaShapeSpace::singular_values)
      .def_readwrite("residual_cap", &PcaShapeSpace::residual_cap)
      .def_property_readonly("component_count", &PcaShapeSpace::component_count);
  py::class_<Encoding>(m, "Encoding")
      .def_readonly("z", &Encoding::z)
      .def_readonly("residual", &Encoding::residual)
      .def_readonly("clipped", &Encoding::clipped);
  m.def(
      "fit_pca",
      [](const std::vector<Points>& samples, int components, const std::string& cls) {
        return fit_pca(samples, components, cls).space;
      },
      py::arg("samples"), py::arg("components") = 35, py::arg("garment_class") = "");
  m.def("encode", &encode, py::arg("space"), py::arg("garment"));
  m.def("decode", &decode, py::arg("space"), py::arg("z"), py::arg("residual") = Points());

  py::class_<GarmentPrior>(m, "GarmentPrior")
      .def_readonly("region", &GarmentPrior::region)
      .def_readonly("cost_in", &GarmentPrior::cost_in)
      .def_readonly("cost_out", &GarmentPrior::cost_out);
  py::class_<MrfSolution>(m, "MrfSolution")
      .def_readonly("labels", &MrfSolution::labels)
      .def_readonly("energy", &MrfSolution::energy);
  m.def("build_prior", &build_prior, py::arg("body"), py::arg("region"), py::arg("kappa") = 1.0);
  m.def("prior_cost_table", &prior_cost_table, py::arg("priors"), py::arg("prior_labels"), py::arg("label_count"));
  m.def(
      "segment",
      [](const TriMesh& body, const Eigen::MatrixXd& unary, const Eigen::MatrixXd& prior, double lambda_prior,
         double lambda_pair) { return solve_mrf(mrf_problem(body, unary, prior, lambda_prior, lambda_pair)); },
      py::arg("body"), py::arg("unary"), py::arg("prior") = Eigen::MatrixXd(), py::arg("lambda_prior") = 1.0,
      py::arg("lambda_pair") = 0.5);

  m.def(
      "retarget",
      [](const BodyModel& model, const DressedFigure& source, const DressedFigure& target,
         const std::string& strategy) {
        return retarget_pipeline(model, source, target, parse_strategy(strategy)).figure;
      },
      py::arg("model"), py::arg("source"), py::arg("target"), py::arg("strategy") = "body-aware");

  m.def("mean_surface_distance", &mean_surface_distance, py::arg("source"), py::arg("target"));
  m.def("symmetric_error", &symmetric_error, py::arg("pred"), py::arg("gt"));
  m.def("loss_3d_tpose", &loss_3d_tpose, py::arg("model"), py::arg("pred"), py::arg("gt"));

  py::class_<Camera>(m, "Camera")
      .def_readwrite("focal", &Camera::focal)
      .def_readwrite("cx", &Camera::cx)
      .def_readwrite("cy", &Camera::cy)
      .def_readwrite("rotation", &Camera::rotation)
      .def_readwrite("translation", &Camera::translation);
  py::class_<LabelImage>(m, "LabelImage")
      .def_readonly("width", &LabelImage::width)
      .def_readonly("height", &LabelImage::height)
      .def_readonly("legend", &LabelImage::legend)
      .def("array", [](const LabelImage& img) {
        using Grid = Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
        return Grid(Eigen::Map<const Grid>(img.labels.data(), img.height, img.width));
      });
  m.def("look_at", &look_at, py::arg("eye"), py::arg("target"), py::arg("up"), py::arg("width"), py::arg("height"));
  m.def("rasterize_labels", &rasterize_labels, py::arg("meshes"), py::arg("camera"), py::arg("width"),
        py::arg("height"));

  py::class_<WardrobeSubject>(m, "WardrobeSubject")
      .def_readonly("figure", &WardrobeSubject::figure)
      .def_readonly("fit", &WardrobeSubject::fit)
      .def_property_readonly("scan", [](const WardrobeSubject& s) { return s.scan.mesh; })
      .def_property_readonly("scan_labels", [](const WardrobeSubject& s) { return s.scan.vertex_labels; })
      .def_readonly("body_labels", &WardrobeSubject::body_labels)
      .def_readonly("unaries", &WardrobeSubject::unaries);
  py::class_<SyntheticWardrobe>(m, "SyntheticWardrobe")
      .def_readonly("model", &SyntheticWardrobe::model)
      .def_readonly("templates", &SyntheticWardrobe::templates)
      .def_readonly("subjects", &SyntheticWardrobe::subjects);
  m.def("make_synthetic_wardrobe", &make_synthetic_wardrobe, py::arg("seed"), py::arg("subject_count") = 2,
        py::arg("frame_count") = 2);
  m.def("template_regions", &template_regions, py::arg("templates"));
}
