#include "wardrobe/evaluation.hpp"
#include "wardrobe/garment.hpp"
#include "wardrobe/geodesic.hpp"
#include "wardrobe/registration.hpp"
#include "wardrobe/retarget.hpp"
#include "wardrobe/segmentation.hpp"
#include "wardrobe/serialization.hpp"
#include "wardrobe/shape_space.hpp"
#include "wardrobe/synthetic_wardrobe.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <set>
#include <sstream>

namespace fs = std::filesystem;
using namespace wardrobe;

namespace {

struct Globals {
  std::uint64_t seed = 0;
  int threads = 1;
  bool verbose = false;
  std::string report;
};

Globals globals;

void log(const std::string& message) {
  if (globals.verbose) std::cerr << "[wardrobe] " << message << '\n';
}

void ensure_parent(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
}

Json points_summary(const Points& p) {
  return {{"rows", p.rows()}, {"max_norm", p.rows() ? p.rowwise().norm().maxCoeff() : 0.0}};
}

Json energy_json(const EnergyTerms& e) {
  return {{"data", e.data},   {"laplacian", e.laplacian},     {"interp", e.interp},
          {"unpose", e.unpose}, {"total", e.total}, {"inside_count", e.inside_count}};
}

BodyModel model_for(const std::string& explicit_path, const fs::path& figure_model, const std::string& what) {
  if (!explicit_path.empty()) return load_body_model(explicit_path);
  if (figure_model.empty()) throw Error(what + ": no body model (pass --model or set 'model' in the figure)");
  return load_body_model(figure_model);
}

std::pair<int, int> parse_size(const std::string& text) {
  int w = 0, h = 0;
  char x = 0;
  std::istringstream ss(text);
  if (!(ss >> w >> x >> h) || x != 'x' || w <= 0 || h <= 0 || !ss.eof()) {
    throw CLI::ValidationError("--size", "expected WIDTHxHEIGHT, got '" + text + "'");
  }
  return {w, h};
}

// ---------------------------------------------------------------- gen-body
struct GenBody {
  int shapes = 10;
  int joints = 16;
  std::string out, obj;

  Json run() const {
    const BodyModel model = make_synthetic_body(globals.seed, shapes, joints);
    ensure_parent(out);
    save_body_model(model, out);
    if (!obj.empty()) {
      ensure_parent(obj);
      save_obj(model.template_mesh, obj);
    }
    log("body model with " + std::to_string(model.vertex_count()) + " vertices written to " + out);
    return {{"vertices", model.vertex_count()},
            {"faces", model.template_mesh.face_count()},
            {"joints", model.joint_count()},
            {"shapes", model.shape_count()},
            {"euler_characteristic", euler_characteristic(model.template_mesh)}};
  }
};

// ------------------------------------------------------------ gen-wardrobe
struct GenWardrobe {
  std::string out;
  int subjects = 2;
  int frames = 2;

  Json run() const {
    const SyntheticWardrobe w = make_synthetic_wardrobe(globals.seed, subjects, frames);
    const fs::path root(out);
    fs::create_directories(root / "templates");
    const fs::path model_path = root / "body.json";
    save_body_model(w.model, model_path);
    save_obj(w.model.template_mesh, root / "body.obj");

    Json manifest;
    manifest["seed"] = globals.seed;
    manifest["model"] = "body.json";
    for (const auto& [name, g] : w.templates) {
      save_garment(g, root / "templates" / (name + ".json"));
      manifest["templates"][name] = "templates/" + name + ".json";
    }
    Json regions;
    regions["labels"] = {"skin", "upper-clothes", "pants"};
    const auto sets = template_regions(w.templates);
    regions["regions"] = {{{"label", 1}, {"vertices", sets[0]}}, {{"label", 2}, {"vertices", sets[1]}}};
    write_json(regions, root / "templates" / "regions.json");

    for (size_t s = 0; s < w.subjects.size(); ++s) {
      const auto& subject = w.subjects[s];
      const std::string name = "subject_" + std::to_string(s);
      const fs::path dir = root / name;
      fs::create_directories(dir);
      save_figure(subject.figure, dir / "figure.json", model_path);
      write_json(fit_to_json(subject.fit), dir / "fit.json");
      save_obj(subject.scan.mesh, dir / "scan.obj");
      write_labels(subject.scan.vertex_labels, dir / "labels.txt");
      write_labels(subject.body_labels, dir / "body_labels.txt");
      std::ofstream unaries(dir / "unaries.txt");
      char buf[64];
      for (Eigen::Index v = 0; v < subject.unaries.rows(); ++v) {
        for (Eigen::Index l = 0; l < subject.unaries.cols(); ++l) {
          std::snprintf(buf, sizeof buf, "%.17g", subject.unaries(v, l));
          unaries << (l ? " " : "") << buf;
        }
        unaries << '\n';
      }
      Json entry{{"directory", name}};
      for (size_t k = 0; k < subject.figure.garments.size(); ++k) {
        entry["garments"].push_back({{"class", subject.figure.garments[k].garment.name}, {"label", k + 1}});
      }
      manifest["subjects"].push_back(entry);
      log("wrote " + name);
    }
    write_json(manifest, root / "wardrobe.json");
    return manifest;
  }
};

// ------------------------------------------------------------------- dress
struct Dress {
  std::string figure, model, out;
  int frame = 0;

  Json run() const {
    const LoadedFigure loaded = load_figure(figure);
    const BodyModel body = model_for(model, loaded.model_path, "dress");
    loaded.figure.validate(body);
    const auto meshes = dress(body, loaded.figure, frame);
    fs::create_directories(out);
    Json files = Json::array();
    for (const auto& m : meshes) {
      const std::string file = m.label == 0 ? "skin.obj" : std::to_string(m.label) + "_" + m.name + ".obj";
      save_obj(m.mesh, fs::path(out) / file);
      files.push_back({{"file", file}, {"label", m.label}, {"vertices", m.mesh.vertex_count()}});
    }
    return {{"frame", frame}, {"meshes", files}};
  }
};

// ---------------------------------------------------------------- register
struct Register {
  std::string model, templ, body_fit, target, labels, config, out, out_figure, target_loops;
  int label = 1;

  Json run() const {
    const BodyModel body = load_body_model(model);
    const Garment garment = load_garment(templ);
    const BodyFit fit = fit_from_json(read_json(body_fit), body_fit);
    const TriMesh scan = load_obj(target);
    const std::vector<int> scan_labels = read_labels(labels);
    if (static_cast<int>(scan_labels.size()) != scan.vertex_count()) {
      throw Error(labels + ": " + std::to_string(scan_labels.size()) + " labels for " +
                  std::to_string(scan.vertex_count()) + " target vertices");
    }
    const RegistrationConfig cfg =
        config.empty() ? RegistrationConfig{} : registration_config_from(read_key_values(config), config);

    std::vector<Points> loops;
    const TriMesh part = labeled_submesh(scan, scan_labels, label);
    const std::vector<Points> found = loop_points(part, boundary_loops(part));
    const Eigen::VectorXd zero_beta = Eigen::VectorXd::Zero(body.shape_count());
    const Points posed_template = pose_garment(
        body, garment, fit.params, garment_displacements(body, garment, garment.mesh.vertices, zero_beta));
    std::string pairing;
    if (!target_loops.empty()) {
      // Explicit order: indices into the target's boundary loops.
      const Json order = read_json(target_loops);
      for (const auto& idx : order) {
        const int k = idx.get<int>();
        if (k < 0 || k >= static_cast<int>(found.size())) throw Error(target_loops + ": loop index out of range");
        loops.push_back(found[k]);
      }
      pairing = "declared";
    } else {
      loops = pair_loops_by_centroid(posed_template, garment.boundary_loops, found);
      pairing = "centroid";
    }

    const RegistrationResult r = register_garment(body, garment, fit, scan, scan_labels, label, loops, cfg);
    if (!r.warning.empty()) std::cerr << "warning: " << r.warning << '\n';

    TriMesh registered = garment.mesh;
    registered.vertices = r.vertices;
    ensure_parent(out);
    save_obj(registered, out);
    if (!out_figure.empty()) {
      DressedFigure fig;
      fig.beta = fit.params.beta;
      fig.poses = {fit.params.theta};
      fig.trans = fit.params.trans;
      fig.skin_displacements = fit.skin_displacements;
      fig.garments.push_back({garment, r.displacements});
      ensure_parent(out_figure);
      save_figure(fig, out_figure, model);
    }

    Json iterations = Json::array();
    for (const auto& it : r.iterations) {
      Json e = energy_json(it.energy);
      e["iteration"] = it.iteration;
      e["step"] = it.step;
      iterations.push_back(e);
    }
    return {{"garment", garment.name},
            {"label", label},
            {"loop_pairing", pairing},
            {"boundary_residual", r.boundary_residual},
            {"converged", r.converged},
            {"warning", r.warning},
            {"initial_energy", energy_json(r.initial_energy)},
            {"iterations", iterations},
            {"final_inside_count",
             r.iterations.empty() ? r.initial_energy.inside_count : r.iterations.back().energy.inside_count},
            {"displacements", points_summary(r.displacements)}};
  }
};

// ----------------------------------------------------------------- fit-pca
struct FitPca {
  std::vector<std::string> figures, meshes;
  std::string garment_class, model, out;
  int components = 35;
  double residual_cap = 0.01;

  Json run() const {
    std::vector<Points> samples;
    for (const auto& path : meshes) samples.push_back(load_obj(path).vertices);
    for (const auto& path : figures) {
      const LoadedFigure loaded = load_figure(path);
      const BodyModel body = model_for(model, loaded.model_path, "fit-pca");
      bool found = false;
      for (const auto& layer : loaded.figure.garments) {
        if (layer.garment.name != garment_class) continue;
        samples.push_back(unposed_garment_shape(body, layer.garment, loaded.figure.beta,
                                                PoseMatrix::Zero(body.joint_count(), 3), layer.displacements));
        found = true;
        break;
      }
      if (!found) throw Error(path + ": no garment of class '" + garment_class + "'");
    }
    PcaFitResult fit = fit_pca(samples, components, garment_class);
    fit.space.residual_cap = residual_cap;
    if (!fit.warning.empty()) std::cerr << "warning: " << fit.warning << '\n';
    ensure_parent(out);
    write_json(shape_space_to_json(fit.space), out);

    Json encodings = Json::array();
    for (const auto& s : samples) {
      const Encoding e = encode(fit.space, s);
      encodings.push_back({{"clipped", e.clipped}, {"residual_max", e.residual.rows() ? e.residual.rowwise().norm().maxCoeff() : 0.0}});
    }
    return {{"samples", samples.size()},
            {"components", fit.space.component_count()},
            {"warning", fit.warning},
            {"singular_values", std::vector<double>(fit.space.singular_values.data(),
                                                    fit.space.singular_values.data() + fit.space.singular_values.size())},
            {"encodings", encodings}};
  }
};

// ----------------------------------------------------------------- segment
struct Segment {
  std::string body, unaries, regions, out, scan, scan_out;
  double kappa = 1.0, lambda_prior = 1.0, lambda_pair = 0.5;

  Json run() const {
    const TriMesh mesh = load_obj(body);
    MrfProblem problem;
    problem.edges = unique_edges(mesh);
    problem.unary = read_table(unaries);
    if (problem.unary.rows() != mesh.vertex_count()) {
      throw Error(unaries + ": " + std::to_string(problem.unary.rows()) + " rows for " +
                  std::to_string(mesh.vertex_count()) + " body vertices");
    }
    problem.lambda_prior = lambda_prior;
    problem.lambda_pair = lambda_pair;
    if (!regions.empty()) {
      const Json doc = read_json(regions);
      if (!doc.contains("regions") || !doc["regions"].is_array()) throw Error(regions + ": missing field 'regions'");
      std::vector<GarmentPrior> priors;
      std::vector<int> prior_labels;
      for (const auto& r : doc["regions"]) {
        if (!r.contains("label") || !r.contains("vertices")) {
          throw Error(regions + ": each region needs 'label' and 'vertices'");
        }
        prior_labels.push_back(r["label"].get<int>());
        priors.push_back(build_prior(mesh, r["vertices"].get<std::vector<int>>(), kappa));
      }
      problem.prior = prior_cost_table(priors, prior_labels, problem.label_count());
    }
    const MrfSolution sol = solve_mrf(problem);
    ensure_parent(out);
    write_labels(sol.labels, out);
    Json report{{"energy", sol.energy}, {"best_start", sol.best_start}, {"start_energies", sol.start_energies}};
    if (!scan.empty()) {
      if (scan_out.empty()) throw CLI::ValidationError("--scan-out", "required with --scan");
      const LabelTransfer t = transfer_labels(mesh, sol.labels, load_obj(scan));
      ensure_parent(scan_out);
      write_labels(t.labels, scan_out);
      report["transfer_flagged"] = t.flagged;
    }
    return report;
  }
};

// ---------------------------------------------------------------- retarget
struct Retarget {
  std::string source, target, strategy = "body-aware", model, out;

  Json run() const {
    const LoadedFigure src = load_figure(source);
    const LoadedFigure dst = load_figure(target);
    const BodyModel body = model_for(model, src.model_path, "retarget");
    const RetargetReport rep = retarget_pipeline(body, src.figure, dst.figure, parse_strategy(strategy));
    ensure_parent(out);
    save_figure(rep.figure, out, model.empty() ? src.model_path : fs::path(model));
    Json garments = Json::array();
    for (const auto& g : rep.garments) {
      garments.push_back({{"name", g.name}, {"inside_count", g.inside_count}, {"interp_energy", g.interp_energy}});
    }
    return {{"strategy", strategy}, {"garments", garments}};
  }
};

// ------------------------------------------------------------------ render
struct Render {
  std::string figure, model, camera, size = "512x512", out;
  int frame = 0;

  Json run() const {
    const auto [w, h] = parse_size(size);
    const LoadedFigure loaded = load_figure(figure);
    const BodyModel body = model_for(model, loaded.model_path, "render");
    loaded.figure.validate(body);
    const Camera cam = camera.empty() ? look_at({0.0, 0.9, 3.5}, {0.0, 0.9, 0.0}, {0.0, 1.0, 0.0}, w, h)
                                      : camera_from_json(read_json(camera), w, h, camera);
    const LabelImage image = rasterize_labels(dress(body, loaded.figure, frame), cam, w, h);
    ensure_parent(out);
    write_label_png(image, out);
    fs::path sidecar(out);
    sidecar.replace_extension(".json");
    write_json(label_image_sidecar(image), sidecar);
    std::map<int, long> histogram;
    for (int l : image.labels) ++histogram[l];
    Json counts;
    for (const auto& [l, c] : histogram) counts[std::to_string(l)] = c;
    return {{"width", w}, {"height", h}, {"frame", frame}, {"pixel_counts", counts}};
  }
};

// ---------------------------------------------------------------- evaluate
struct Evaluate {
  std::string pred, gt, model, out;
  std::vector<std::string> garments;

  Json run() const {
    const LoadedFigure p = load_figure(pred);
    const LoadedFigure g = load_figure(gt);
    const BodyModel body = model_for(model, g.model_path, "evaluate");
    p.figure.validate(body);
    g.figure.validate(body);
    const int frames = std::min(p.figure.frame_count(), g.figure.frame_count());
    std::vector<std::vector<LabeledMesh>> pi, gi;
    for (int f = 0; f < frames; ++f) {
      pi.push_back(dress(body, p.figure, f));
      gi.push_back(dress(body, g.figure, f));
    }
    Json metrics;
    std::set<std::string> names(garments.begin(), garments.end());
    if (names.empty())
      for (const auto& layer : g.figure.garments) names.insert(layer.garment.name);
    double sum = 0.0;
    for (const auto& name : names) {
      const double e = garment_error(pi, gi, name);
      metrics["symmetric_error"][name] = e;
      sum += e;
    }
    metrics["symmetric_error_mean"] = names.empty() ? 0.0 : sum / static_cast<double>(names.size());
    metrics["frames"] = frames;
    const bool same_layers = p.figure.garments.size() == g.figure.garments.size();
    bool same_topology = same_layers;
    for (size_t k = 0; same_topology && k < g.figure.garments.size(); ++k) {
      same_topology = p.figure.garments[k].garment.vertex_count() == g.figure.garments[k].garment.vertex_count();
    }
    if (same_topology) {
      metrics["loss_3d_tpose"] = loss_3d_tpose(body, p.figure, g.figure);
      if (p.figure.frame_count() == g.figure.frame_count()) {
        metrics["loss_3d_posed"] = loss_3d_posed(body, p.figure, g.figure);
      }
    }
    if (p.figure.frame_count() == g.figure.frame_count()) {
      const IntermediateLosses l = intermediate_losses(p.figure, g.figure);
      metrics["loss_theta"] = l.theta;
      metrics["loss_beta"] = l.beta;
    }
    ensure_parent(out);
    write_json(metrics, out);
    return metrics;
  }
};

// ---------------------------------------------------------------- geodesic
struct Geodesic {
  std::string mesh, out;
  std::vector<int> sources;

  Json run() const {
    const TriMesh m = load_obj(mesh);
    const std::vector<double> d = geodesic_distance(m, sources);
    ensure_parent(out);
    write_values(d, out);
    double finite_max = 0.0;
    for (double x : d)
      if (std::isfinite(x)) finite_max = std::max(finite_max, x);
    return {{"vertices", m.vertex_count()}, {"max_distance", finite_max}};
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Layered garment engine: synthetic wardrobes, dressing, registration, shape spaces, "
               "segmentation, retargeting, rendering and evaluation."};
  app.require_subcommand(1);
  app.add_option("--seed", globals.seed, "Seed for every stochastic step")->capture_default_str();
  app.add_option("--threads", globals.threads, "Worker threads (computation is single-threaded)")
      ->check(CLI::PositiveNumber);
  app.add_flag("-v,--verbose", globals.verbose, "Progress messages on stderr");
  app.add_option("--report", globals.report, "Write machine-readable JSON diagnostics here");

  GenBody gen_body;
  auto* c_gen_body = app.add_subcommand("gen-body", "Generate a synthetic body model");
  c_gen_body->add_option("--shapes", gen_body.shapes, "Shape components")->check(CLI::PositiveNumber);
  c_gen_body->add_option("--joints", gen_body.joints, "Joint count (2..16)")->check(CLI::Range(2, 16));
  c_gen_body->add_option("--out", gen_body.out, "Body model JSON")->required();
  c_gen_body->add_option("--obj", gen_body.obj, "Also write the template mesh as OBJ");

  GenWardrobe gen_wardrobe;
  auto* c_gen_wardrobe = app.add_subcommand("gen-wardrobe", "Generate a synthetic five-class wardrobe with subjects");
  c_gen_wardrobe->add_option("--out", gen_wardrobe.out, "Output directory")->required();
  c_gen_wardrobe->add_option("--subjects", gen_wardrobe.subjects, "Dressed subjects")->check(CLI::PositiveNumber);
  c_gen_wardrobe->add_option("--frames", gen_wardrobe.frames, "Frames per subject")->check(CLI::PositiveNumber);

  Dress dress_cmd;
  auto* c_dress = app.add_subcommand("dress", "Pose a dressed figure and write one OBJ per layer");
  c_dress->add_option("--figure", dress_cmd.figure, "Figure JSON")->required();
  c_dress->add_option("--model", dress_cmd.model, "Body model JSON (overrides the figure's)");
  c_dress->add_option("--frame", dress_cmd.frame, "Frame index");
  c_dress->add_option("--out", dress_cmd.out, "Output directory")->required();

  Register reg;
  auto* c_reg = app.add_subcommand("register", "Register a garment template to a labeled target surface");
  c_reg->add_option("--model", reg.model, "Body model JSON")->required();
  c_reg->add_option("--template", reg.templ, "Garment template JSON")->required();
  c_reg->add_option("--body-fit", reg.body_fit, "Body fit JSON")->required();
  c_reg->add_option("--target", reg.target, "Target OBJ")->required();
  c_reg->add_option("--labels", reg.labels, "Per-vertex target labels")->required();
  c_reg->add_option("--label", reg.label, "Label of the garment in the target");
  c_reg->add_option("--config", reg.config, "key = value registration config");
  c_reg->add_option("--target-loops", reg.target_loops, "JSON array: target loop index per template loop");
  c_reg->add_option("--out", reg.out, "Registered garment OBJ")->required();
  c_reg->add_option("--out-figure", reg.out_figure, "Also write a figure with the registered garment");

  FitPca fit;
  auto* c_fit = app.add_subcommand("fit-pca", "Fit a PCA shape space over unposed garments");
  c_fit->add_option("--figures", fit.figures, "Figure JSONs; the garment of --class is unposed");
  c_fit->add_option("--meshes", fit.meshes, "Unposed garment OBJs");
  c_fit->add_option("--class", fit.garment_class, "Garment class")->required();
  c_fit->add_option("--model", fit.model, "Body model JSON (overrides the figures')");
  c_fit->add_option("--components", fit.components, "Component count")->check(CLI::NonNegativeNumber);
  c_fit->add_option("--residual-cap", fit.residual_cap, "Residual cap in meters")->check(CLI::NonNegativeNumber);
  c_fit->add_option("--out", fit.out, "Shape-space JSON")->required();

  Segment seg;
  auto* c_seg = app.add_subcommand("segment", "Label body vertices with a prior-regularized MRF");
  c_seg->add_option("--body", seg.body, "Body OBJ")->required();
  c_seg->add_option("--unaries", seg.unaries, "Unary cost table")->required();
  c_seg->add_option("--regions", seg.regions, "Garment prior regions JSON");
  c_seg->add_option("--kappa", seg.kappa, "Prior cost per meter")->check(CLI::NonNegativeNumber);
  c_seg->add_option("--lambda-prior", seg.lambda_prior, "Prior weight")->check(CLI::NonNegativeNumber);
  c_seg->add_option("--lambda-pair", seg.lambda_pair, "Potts weight")->check(CLI::NonNegativeNumber);
  c_seg->add_option("--out", seg.out, "Body labels output")->required();
  c_seg->add_option("--scan", seg.scan, "Scan OBJ aligned with the body; labels are transferred");
  c_seg->add_option("--scan-out", seg.scan_out, "Scan labels output");

  Retarget ret;
  auto* c_ret = app.add_subcommand("retarget", "Move every garment of a source figure onto a target body");
  c_ret->add_option("--source", ret.source, "Source figure JSON")->required();
  c_ret->add_option("--target", ret.target, "Target figure JSON")->required();
  c_ret->add_option("--strategy", ret.strategy, "naive or body-aware")
      ->check(CLI::IsMember({"naive", "body-aware"}));
  c_ret->add_option("--model", ret.model, "Body model JSON (overrides the figure's)");
  c_ret->add_option("--out", ret.out, "Output figure JSON")->required();

  Render render;
  auto* c_render = app.add_subcommand("render", "Rasterize a semantic label image");
  c_render->add_option("--figure", render.figure, "Figure JSON")->required();
  c_render->add_option("--model", render.model, "Body model JSON (overrides the figure's)");
  c_render->add_option("--camera", render.camera, "Camera JSON");
  c_render->add_option("--size", render.size, "WIDTHxHEIGHT");
  c_render->add_option("--frame", render.frame, "Frame index");
  c_render->add_option("--out", render.out, "Output PNG")->required();

  Evaluate eval;
  auto* c_eval = app.add_subcommand("evaluate", "Compare a predicted figure with ground truth");
  c_eval->add_option("--pred", eval.pred, "Predicted figure JSON")->required();
  c_eval->add_option("--gt", eval.gt, "Ground-truth figure JSON")->required();
  c_eval->add_option("--model", eval.model, "Body model JSON (overrides the figures')");
  c_eval->add_option("--garment", eval.garments, "Restrict to these garments");
  c_eval->add_option("--out", eval.out, "Metrics JSON")->required();

  Geodesic geo;
  auto* c_geo = app.add_subcommand("geodesic", "Heat-method geodesic distances from source vertices");
  c_geo->add_option("--mesh", geo.mesh, "Mesh OBJ")->required();
  c_geo->add_option("--sources", geo.sources, "Source vertex ids")->required()->delimiter(',');
  c_geo->add_option("--out", geo.out, "Distances, one per line")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    Json report;
    std::string command;
    if (c_gen_body->parsed()) {
      command = "gen-body", report = gen_body.run();
    } else if (c_gen_wardrobe->parsed()) {
      command = "gen-wardrobe", report = gen_wardrobe.run();
    } else if (c_dress->parsed()) {
      command = "dress", report = dress_cmd.run();
    } else if (c_reg->parsed()) {
      command = "register", report = reg.run();
    } else if (c_fit->parsed()) {
      command = "fit-pca", report = fit.run();
    } else if (c_seg->parsed()) {
      command = "segment", report = seg.run();
    } else if (c_ret->parsed()) {
      command = "retarget", report = ret.run();
    } else if (c_render->parsed()) {
      command = "render", report = render.run();
    } else if (c_eval->parsed()) {
      command = "evaluate", report = eval.run();
    } else if (c_geo->parsed()) {
      command = "geodesic", report = geo.run();
    }
    if (!globals.report.empty()) {
      Json doc{{"command", command}, {"seed", globals.seed}, {"threads", globals.threads}, {"result", report}};
      ensure_parent(globals.report);
      write_json(doc, globals.report);
    }
    return 0;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const Json::exception& e) {
    std::cerr << "error: malformed JSON input: " << e.what() << '\n';
    return 1;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
