#include "wardrobe/serialization.hpp"

#include "wardrobe/evaluation.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace wardrobe {
namespace {

const Json& field(const Json& j, const char* key, const std::string& context) {
  if (!j.is_object()) throw Error(context + ": expected a JSON object");
  const auto it = j.find(key);
  if (it == j.end()) throw Error(context + ": missing field '" + key + "'");
  return *it;
}

double number(const Json& j, const std::string& context) {
  if (!j.is_number()) throw Error(context + ": expected a number");
  return j.get<double>();
}

int integer(const Json& j, const std::string& context) {
  if (!j.is_number_integer()) throw Error(context + ": expected an integer");
  return j.get<int>();
}

std::vector<double> numbers(const Json& j, const std::string& context) {
  if (!j.is_array()) throw Error(context + ": expected an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], context + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<int> integers(const Json& j, const std::string& context) {
  if (!j.is_array()) throw Error(context + ": expected an array");
  std::vector<int> out;
  out.reserve(j.size());
  for (size_t i = 0; i < j.size(); ++i) out.push_back(integer(j[i], context + "[" + std::to_string(i) + "]"));
  return out;
}

Json rows_to_json(const Points& p) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < p.rows(); ++i) out.push_back({p(i, 0), p(i, 1), p(i, 2)});
  return out;
}

Points rows_from_json(const Json& j, const std::string& context) {
  if (!j.is_array()) throw Error(context + ": expected an array of 3-vectors");
  Points out(static_cast<Eigen::Index>(j.size()), 3);
  for (size_t i = 0; i < j.size(); ++i) {
    const auto row = numbers(j[i], context + "[" + std::to_string(i) + "]");
    if (row.size() != 3) throw Error(context + "[" + std::to_string(i) + "]: expected 3 components");
    for (int c = 0; c < 3; ++c) out(static_cast<Eigen::Index>(i), c) = row[c];
  }
  return out;
}

Json pose_to_json(const PoseMatrix& theta) { return rows_to_json(theta); }

Json vector_to_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Eigen::VectorXd vector_from_json(const Json& j, const std::string& context) {
  const auto v = numbers(j, context);
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Json tensor_to_json(const Eigen::MatrixXd& m, std::vector<Eigen::Index> shape) {
  Json out;
  out["shape"] = shape;
  std::vector<double> data(static_cast<size_t>(m.size()));
  size_t k = 0;
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) data[k++] = m(r, c);
  out["data"] = std::move(data);
  return out;
}

// Reads a row-major tensor and folds it into `rows` x (product of the rest).
Eigen::MatrixXd tensor_from_json(const Json& j, Eigen::Index rows, Eigen::Index cols, const std::string& context) {
  const auto shape = integers(field(j, "shape", context), context + ".shape");
  const auto data = numbers(field(j, "data", context), context + ".data");
  Eigen::Index product = 1;
  for (int s : shape) {
    if (s < 0) throw Error(context + ".shape: negative extent");
    product *= s;
  }
  if (product != static_cast<Eigen::Index>(data.size())) {
    throw Error(context + ": shape does not match data length");
  }
  if (rows * cols != product) {
    throw Error(context + ": expected " + std::to_string(rows) + "x" + std::to_string(cols) + " entries");
  }
  Eigen::MatrixXd out(rows, cols);
  size_t k = 0;
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) out(r, c) = data[k++];
  return out;
}

fs::path resolve(const fs::path& base_file, const std::string& ref) {
  const fs::path p(ref);
  return p.is_absolute() ? p : base_file.parent_path() / p;
}

std::string relative_ref(const fs::path& target, const fs::path& base_file) {
  const fs::path base_dir = fs::absolute(base_file).parent_path();
  return fs::absolute(target).lexically_normal().lexically_relative(base_dir.lexically_normal()).generic_string();
}

Json garment_to_json(const Garment& garment, const std::string& mesh_ref) {
  Json j;
  j["class"] = garment.name;
  j["mesh"] = mesh_ref;
  j["indicator"] = garment.indicator;
  j["boundary_loops"] = garment.boundary_loops;
  j["texture"] = garment.texture ? Json(*garment.texture) : Json(nullptr);
  return j;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

Json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw Error("'" + path.string() + "': invalid JSON (" + e.what() + ")");
  }
}

void write_json(const Json& doc, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out << doc.dump() << '\n';
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

Json matrix_to_json(const Eigen::MatrixXd& m) { return tensor_to_json(m, {m.rows(), m.cols()}); }

Eigen::MatrixXd matrix_from_json(const Json& j, const std::string& context) {
  const auto shape = integers(field(j, "shape", context), context + ".shape");
  if (shape.size() != 2) throw Error(context + ".shape: expected two extents");
  return tensor_from_json(j, shape[0], shape[1], context);
}

Json body_model_to_json(const BodyModel& model) {
  const Eigen::Index n = model.vertex_count();
  Json j;
  j["template"]["vertices"] = rows_to_json(model.template_mesh.vertices);
  Json faces = Json::array();
  for (int f = 0; f < model.template_mesh.face_count(); ++f) {
    faces.push_back({model.template_mesh.faces(f, 0), model.template_mesh.faces(f, 1), model.template_mesh.faces(f, 2)});
  }
  j["template"]["faces"] = std::move(faces);
  j["shape_basis"] = tensor_to_json(model.shape_basis, {n, 3, model.shape_basis.cols()});
  j["pose_basis"] = tensor_to_json(model.pose_basis, {n, 3, model.pose_basis.cols()});
  j["joint_regressor"] = matrix_to_json(model.joint_regressor);
  j["weights"] = matrix_to_json(model.weights);
  j["parents"] = model.parents;
  return j;
}

BodyModel body_model_from_json(const Json& j, const std::string& context) {
  BodyModel model;
  const Json& tmpl = field(j, "template", context);
  model.template_mesh.vertices = rows_from_json(field(tmpl, "vertices", context + ".template"), context + ".template.vertices");
  const Json& faces = field(tmpl, "faces", context + ".template");
  if (!faces.is_array()) throw Error(context + ".template.faces: expected an array");
  model.template_mesh.faces.resize(static_cast<Eigen::Index>(faces.size()), 3);
  for (size_t f = 0; f < faces.size(); ++f) {
    const auto tri = integers(faces[f], context + ".template.faces[" + std::to_string(f) + "]");
    if (tri.size() != 3) throw Error(context + ".template.faces[" + std::to_string(f) + "]: expected 3 indices");
    for (int c = 0; c < 3; ++c) model.template_mesh.faces(static_cast<Eigen::Index>(f), c) = tri[c];
  }
  model.parents = integers(field(j, "parents", context), context + ".parents");
  const Eigen::Index n = model.template_mesh.vertices.rows();
  const auto K = static_cast<Eigen::Index>(model.parents.size());
  if (K < 1) throw Error(context + ".parents: at least one joint is required");

  const Json& sb = field(j, "shape_basis", context);
  const auto sb_shape = integers(field(sb, "shape", context + ".shape_basis"), context + ".shape_basis.shape");
  if (sb_shape.size() != 3 || sb_shape[0] != n || sb_shape[1] != 3) {
    throw Error(context + ".shape_basis.shape: expected [n, 3, n_beta]");
  }
  model.shape_basis = tensor_from_json(sb, 3 * n, sb_shape[2], context + ".shape_basis");
  model.pose_basis = tensor_from_json(field(j, "pose_basis", context), 3 * n, 9 * (K - 1), context + ".pose_basis");
  model.joint_regressor = tensor_from_json(field(j, "joint_regressor", context), K, n, context + ".joint_regressor");
  model.weights = tensor_from_json(field(j, "weights", context), n, K, context + ".weights");
  try {
    model.validate();
  } catch (const Error& e) {
    throw Error(context + ": " + e.what());
  }
  return model;
}

void save_body_model(const BodyModel& model, const fs::path& path) { write_json(body_model_to_json(model), path); }

BodyModel load_body_model(const fs::path& path) { return body_model_from_json(read_json(path), path.string()); }

Json params_to_json(const BodyParams& params) {
  Json j;
  j["beta"] = vector_to_json(params.beta);
  j["theta"] = pose_to_json(params.theta);
  j["trans"] = {params.trans.x(), params.trans.y(), params.trans.z()};
  return j;
}

BodyParams params_from_json(const Json& j, const std::string& context) {
  BodyParams p;
  p.beta = vector_from_json(field(j, "beta", context), context + ".beta");
  p.theta = rows_from_json(field(j, "theta", context), context + ".theta");
  const auto t = numbers(field(j, "trans", context), context + ".trans");
  if (t.size() != 3) throw Error(context + ".trans: expected 3 components");
  p.trans = {t[0], t[1], t[2]};
  return p.normalized();
}

Json fit_to_json(const BodyFit& fit) {
  Json j = params_to_json(fit.params);
  if (fit.skin_displacements.rows() != 0) j["skin_displacements"] = rows_to_json(fit.skin_displacements);
  return j;
}

BodyFit fit_from_json(const Json& j, const std::string& context) {
  BodyFit fit;
  fit.params = params_from_json(j, context);
  if (j.contains("skin_displacements") && !j["skin_displacements"].is_null()) {
    fit.skin_displacements = rows_from_json(j["skin_displacements"], context + ".skin_displacements");
  }
  return fit;
}

void save_garment(const Garment& garment, const fs::path& path) {
  fs::path obj = path;
  obj.replace_extension(".obj");
  save_obj(garment.mesh, obj);
  write_json(garment_to_json(garment, obj.filename().string()), path);
}

Garment load_garment(const fs::path& path) {
  const Json j = read_json(path);
  const std::string ctx = path.string();
  Garment g;
  const Json& cls = field(j, "class", ctx);
  if (!cls.is_string()) throw Error(ctx + ".class: expected a string");
  g.name = cls.get<std::string>();
  const Json& mesh_ref = field(j, "mesh", ctx);
  if (!mesh_ref.is_string()) throw Error(ctx + ".mesh: expected a path");
  g.mesh = load_obj(resolve(path, mesh_ref.get<std::string>()));
  g.indicator = integers(field(j, "indicator", ctx), ctx + ".indicator");
  const Json& loops = field(j, "boundary_loops", ctx);
  if (!loops.is_array()) throw Error(ctx + ".boundary_loops: expected an array");
  for (size_t l = 0; l < loops.size(); ++l) {
    g.boundary_loops.push_back(integers(loops[l], ctx + ".boundary_loops[" + std::to_string(l) + "]"));
  }
  if (j.contains("texture") && !j["texture"].is_null()) {
    if (!j["texture"].is_string()) throw Error(ctx + ".texture: expected a path or null");
    g.texture = j["texture"].get<std::string>();
  }
  return g;
}

void save_figure(const DressedFigure& figure, const fs::path& path, const fs::path& model_path) {
  Json j;
  j["model"] = relative_ref(model_path, path);
  j["beta"] = vector_to_json(figure.beta);
  Json poses = Json::array();
  for (const auto& theta : figure.poses) poses.push_back(pose_to_json(theta));
  j["theta"] = std::move(poses);
  j["trans"] = {figure.trans.x(), figure.trans.y(), figure.trans.z()};
  j["skin_displacements"] =
      figure.skin_displacements.rows() != 0 ? rows_to_json(figure.skin_displacements) : Json(nullptr);
  Json garments = Json::array();
  for (size_t k = 0; k < figure.garments.size(); ++k) {
    fs::path gpath = path;
    gpath.replace_extension(".garment" + std::to_string(k) + ".json");
    save_garment(figure.garments[k].garment, gpath);
    Json entry;
    entry["garment"] = gpath.filename().string();
    entry["displacements"] = rows_to_json(figure.garments[k].displacements);
    garments.push_back(std::move(entry));
  }
  j["garments"] = std::move(garments);
  write_json(j, path);
}

LoadedFigure load_figure(const fs::path& path) {
  const Json j = read_json(path);
  const std::string ctx = path.string();
  LoadedFigure out;
  if (j.contains("model") && j["model"].is_string()) out.model_path = resolve(path, j["model"].get<std::string>());
  DressedFigure& fig = out.figure;
  fig.beta = vector_from_json(field(j, "beta", ctx), ctx + ".beta");
  const Json& poses = field(j, "theta", ctx);
  if (!poses.is_array()) throw Error(ctx + ".theta: expected an array of poses");
  for (size_t f = 0; f < poses.size(); ++f) {
    BodyParams p;
    p.theta = rows_from_json(poses[f], ctx + ".theta[" + std::to_string(f) + "]");
    fig.poses.push_back(p.normalized().theta);
  }
  const auto t = numbers(field(j, "trans", ctx), ctx + ".trans");
  if (t.size() != 3) throw Error(ctx + ".trans: expected 3 components");
  fig.trans = {t[0], t[1], t[2]};
  if (j.contains("skin_displacements") && !j["skin_displacements"].is_null()) {
    fig.skin_displacements = rows_from_json(j["skin_displacements"], ctx + ".skin_displacements");
  }
  if (j.contains("garments")) {
    const Json& garments = j["garments"];
    if (!garments.is_array()) throw Error(ctx + ".garments: expected an array");
    for (size_t k = 0; k < garments.size(); ++k) {
      const std::string gctx = ctx + ".garments[" + std::to_string(k) + "]";
      const Json& ref = field(garments[k], "garment", gctx);
      if (!ref.is_string()) throw Error(gctx + ".garment: expected a path");
      GarmentLayer layer;
      layer.garment = load_garment(resolve(path, ref.get<std::string>()));
      layer.displacements = rows_from_json(field(garments[k], "displacements", gctx), gctx + ".displacements");
      fig.garments.push_back(std::move(layer));
    }
  }
  return out;
}

Json shape_space_to_json(const PcaShapeSpace& space) {
  Json j;
  j["class"] = space.garment_class;
  j["mean"] = rows_to_json(space.mean);
  // Column-major: one contiguous block per component.
  j["basis"] = {{"shape", {space.basis.rows(), space.basis.cols()}},
                {"order", "column-major"},
                {"data", std::vector<double>(space.basis.data(), space.basis.data() + space.basis.size())}};
  j["singular_values"] = vector_to_json(space.singular_values);
  j["n_c"] = space.component_count();
  j["residual_cap"] = space.residual_cap;
  return j;
}

PcaShapeSpace shape_space_from_json(const Json& j, const std::string& context) {
  PcaShapeSpace s;
  if (j.contains("class") && j["class"].is_string()) s.garment_class = j["class"].get<std::string>();
  s.mean = rows_from_json(field(j, "mean", context), context + ".mean");
  const int nc = integer(field(j, "n_c", context), context + ".n_c");
  const Json& basis = field(j, "basis", context);
  const auto shape = integers(field(basis, "shape", context + ".basis"), context + ".basis.shape");
  const auto data = numbers(field(basis, "data", context + ".basis"), context + ".basis.data");
  if (shape.size() != 2 || shape[0] != 3 * s.mean.rows() || shape[1] != nc ||
      static_cast<long>(data.size()) != static_cast<long>(shape[0]) * shape[1]) {
    throw Error(context + ".basis: expected a (3m x n_c) array");
  }
  s.basis = Eigen::Map<const Eigen::MatrixXd>(data.data(), shape[0], shape[1]);
  s.singular_values = vector_from_json(field(j, "singular_values", context), context + ".singular_values");
  s.residual_cap = number(field(j, "residual_cap", context), context + ".residual_cap");
  return s;
}

Json camera_to_json(const Camera& camera) {
  Json j;
  j["focal"] = camera.focal;
  j["cx"] = camera.cx;
  j["cy"] = camera.cy;
  Json rot = Json::array();
  for (int r = 0; r < 3; ++r) rot.push_back({camera.rotation(r, 0), camera.rotation(r, 1), camera.rotation(r, 2)});
  j["rotation"] = std::move(rot);
  j["translation"] = {camera.translation.x(), camera.translation.y(), camera.translation.z()};
  return j;
}

Camera camera_from_json(const Json& j, int width, int height, const std::string& context) {
  auto vec3 = [&](const char* key) {
    const auto v = numbers(field(j, key, context), context + "." + key);
    if (v.size() != 3) throw Error(context + "." + key + ": expected 3 components");
    return Eigen::Vector3d(v[0], v[1], v[2]);
  };
  Camera cam;
  if (j.contains("eye")) {
    const Eigen::Vector3d up = j.contains("up") ? vec3("up") : Eigen::Vector3d(0, 1, 0);
    cam = look_at(vec3("eye"), vec3("target"), up, width, height);
  } else {
    cam.focal = height;
    cam.cx = 0.5 * width;
    cam.cy = 0.5 * height;
    const Json& rot = field(j, "rotation", context);
    const Points R = rows_from_json(rot, context + ".rotation");
    if (R.rows() != 3) throw Error(context + ".rotation: expected a 3x3 matrix");
    cam.rotation = R;
    cam.translation = vec3("translation");
  }
  if (j.contains("focal")) cam.focal = number(j["focal"], context + ".focal");
  if (j.contains("cx")) cam.cx = number(j["cx"], context + ".cx");
  if (j.contains("cy")) cam.cy = number(j["cy"], context + ".cy");
  try {
    cam.validate();
  } catch (const Error& e) {
    throw Error(context + ": " + e.what());
  }
  return cam;
}

Json label_image_sidecar(const LabelImage& image) {
  Json j;
  j["width"] = image.width;
  j["height"] = image.height;
  j["legend"] = image.legend;
  j["camera"] = camera_to_json(image.camera);
  return j;
}

std::vector<int> read_labels(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::vector<int> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty()) continue;
    std::istringstream ss(t);
    int v = 0;
    std::string rest;
    if (!(ss >> v) || (ss >> rest)) {
      throw Error(path.string() + ":" + std::to_string(line_no) + ": expected one integer label");
    }
    out.push_back(v);
  }
  return out;
}

void write_labels(const std::vector<int>& labels, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  for (int l : labels) out << l << '\n';
}

Eigen::MatrixXd read_table(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::vector<std::vector<double>> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::istringstream ss(t);
    std::vector<double> row;
    std::string token;
    while (ss >> token) {
      try {
        size_t used = 0;
        row.push_back(std::stod(token, &used));
        if (used != token.size()) throw std::invalid_argument(token);
      } catch (const std::exception&) {
        throw Error(path.string() + ":" + std::to_string(line_no) + ": '" + token + "' is not a number");
      }
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw Error(path.string() + ":" + std::to_string(line_no) + ": expected " +
                  std::to_string(rows.front().size()) + " columns");
    }
    rows.push_back(std::move(row));
  }
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), rows.empty() ? 0 : rows.front().size());
  for (size_t r = 0; r < rows.size(); ++r)
    for (size_t c = 0; c < rows[r].size(); ++c) out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
  return out;
}

void write_values(const std::vector<double>& values, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  char buf[64];
  for (double v : values) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf << '\n';
  }
}

std::map<std::string, std::string> read_key_values(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::map<std::string, std::string> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    const std::string t = trim(hash == std::string::npos ? line : line.substr(0, hash));
    if (t.empty() || t.front() == '[') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw Error(path.string() + ":" + std::to_string(line_no) + ": expected 'key = value'");
    }
    std::string value = trim(t.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    out[trim(t.substr(0, eq))] = value;
  }
  return out;
}

RegistrationConfig registration_config_from(const std::map<std::string, std::string>& values,
                                            const std::string& context) {
  RegistrationConfig cfg;
  const std::map<std::string, double*> reals = {
      {"boundary_weight", &cfg.boundary_weight}, {"data_weight", &cfg.data_weight},
      {"laplacian_weight", &cfg.laplacian_weight}, {"interp_weight", &cfg.interp_weight},
      {"unpose_weight", &cfg.unpose_weight},       {"tolerance", &cfg.tolerance},
      {"energy_floor", &cfg.energy_floor}};
  const std::map<std::string, int*> ints = {{"max_iterations", &cfg.max_iterations},
                                            {"max_backtracks", &cfg.max_backtracks}};
  for (const auto& [key, text] : values) {
    try {
      size_t used = 0;
      if (auto r = reals.find(key); r != reals.end()) {
        *r->second = std::stod(text, &used);
      } else if (auto i = ints.find(key); i != ints.end()) {
        *i->second = std::stoi(text, &used);
      } else {
        throw Error(context + ": unknown key '" + key + "'");
      }
      if (used != text.size()) throw std::invalid_argument(text);
    } catch (const Error&) {
      throw;
    } catch (const std::exception&) {
      throw Error(context + ": field '" + key + "' has invalid value '" + text + "'");
    }
  }
  try {
    cfg.validate();
  } catch (const Error& e) {
    throw Error(context + ": " + e.what());
  }
  return cfg;
}

}  // namespace wardrobe
