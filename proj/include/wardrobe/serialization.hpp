#pragma once

#include "wardrobe/body_model.hpp"
#include "wardrobe/evaluation.hpp"
#include "wardrobe/garment.hpp"
#include "wardrobe/registration.hpp"
#include "wardrobe/shape_space.hpp"

#include <json.hpp>

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace wardrobe {

using Json = nlohmann::json;

Json read_json(const std::filesystem::path& path);
/// Compact, deterministic output.
void write_json(const Json& doc, const std::filesystem::path& path);

/// Dense arrays as {"shape": [...], "data": [...]} in row-major order.
Json matrix_to_json(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_json(const Json& j, const std::string& context);

Json body_model_to_json(const BodyModel& model);
BodyModel body_model_from_json(const Json& j, const std::string& context = "body model");
void save_body_model(const BodyModel& model, const std::filesystem::path& path);
BodyModel load_body_model(const std::filesystem::path& path);

Json params_to_json(const BodyParams& params);
BodyParams params_from_json(const Json& j, const std::string& context);

/// Body fit file: BodyParams fields plus optional "skin_displacements".
Json fit_to_json(const BodyFit& fit);
BodyFit fit_from_json(const Json& j, const std::string& context);

/// Garment JSON with its mesh in a sibling OBJ (`<stem>.obj`), referenced by a
/// path relative to the JSON file.
void save_garment(const Garment& garment, const std::filesystem::path& path);
Garment load_garment(const std::filesystem::path& path);

/// Figure JSON. Garments are written next to the figure as
/// `<stem>.garment<k>.json` and referenced by relative path; `model_path` is
/// stored relative to the figure file.
void save_figure(const DressedFigure& figure, const std::filesystem::path& path,
                 const std::filesystem::path& model_path);

struct LoadedFigure {
  DressedFigure figure;
  std::filesystem::path model_path;  // resolved against the figure's directory; empty if absent
};
LoadedFigure load_figure(const std::filesystem::path& path);

Json shape_space_to_json(const PcaShapeSpace& space);
PcaShapeSpace shape_space_from_json(const Json& j, const std::string& context);

/// {"focal", "cx", "cy", "rotation", "translation"} or {"eye", "target", "up"}
/// (look-at form, intrinsics from the image size).
Json camera_to_json(const Camera& camera);
Camera camera_from_json(const Json& j, int width, int height, const std::string& context);

/// Sidecar describing a label image: size, legend and camera.
Json label_image_sidecar(const LabelImage& image);

/// One integer per line.
std::vector<int> read_labels(const std::filesystem::path& path);
void write_labels(const std::vector<int>& labels, const std::filesystem::path& path);

/// Whitespace-separated numeric table, one row per line.
Eigen::MatrixXd read_table(const std::filesystem::path& path);
void write_values(const std::vector<double>& values, const std::filesystem::path& path);

/// `key = value` lines; `#` starts a comment; `[section]` headers are ignored.
std::map<std::string, std::string> read_key_values(const std::filesystem::path& path);
RegistrationConfig registration_config_from(const std::map<std::string, std::string>& values,
                                            const std::string& context);

}  // namespace wardrobe
