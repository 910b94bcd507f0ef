#pragma once

#include "wardrobe/body_model.hpp"
#include "wardrobe/mesh.hpp"

#include <optional>
#include <string>
#include <vector>

namespace wardrobe {

/// The five built-in garment classes.
const std::vector<std::string>& garment_classes();

/// Fixed-topology garment template. Each garment vertex is associated with
/// exactly one body vertex through `indicator`. Texture UVs live in mesh.uvs;
/// `texture` is the image handle (a path), never pixel data.
struct Garment {
  std::string name;
  TriMesh mesh;
  std::vector<int> indicator;
  std::vector<Loop> boundary_loops;
  std::optional<std::string> texture;

  [[nodiscard]] int vertex_count() const { return mesh.vertex_count(); }

  /// Throws Error on a bad mesh, an indicator of the wrong length or out of
  /// [0, body_vertex_count), or loops that are not closed boundary cycles.
  void validate(int body_vertex_count) const;
};

/// A garment together with its displacement field D^g (m_g x 3).
struct GarmentLayer {
  Garment garment;
  Points displacements;
};

/// Body parameters over one or more frames plus the clothing layers.
struct DressedFigure {
  Eigen::VectorXd beta;
  std::vector<PoseMatrix> poses;  // one per frame
  Eigen::Vector3d trans = Eigen::Vector3d::Zero();
  Points skin_displacements;      // n x 3, or empty for none
  std::vector<GarmentLayer> garments;

  [[nodiscard]] int frame_count() const { return static_cast<int>(poses.size()); }
  [[nodiscard]] BodyParams params(int frame) const;

  void validate(const BodyModel& model) const;
};

/// One mesh of a dressed figure with its semantic label (0 skin, g = 1..L garments).
struct LabeledMesh {
  std::string name;
  int label = 0;
  TriMesh mesh;
};

/// Skinning weights of the associated body vertices, m_g x K.
Eigen::MatrixXd garment_weights(const BodyModel& model, const Garment& garment);

/// D^g = G - I^g shaped_template(beta, 0, 0) for unposed garment vertices G.
Points garment_displacements(const BodyModel& model, const Garment& garment, const Points& unposed_vertices,
                             const Eigen::VectorXd& beta);

/// I^g shaped_template(beta, theta, 0) + D^g.
Points unposed_garment_shape(const BodyModel& model, const Garment& garment, const Eigen::VectorXd& beta,
                             const PoseMatrix& theta, const Points& displacements);

/// Garment vertices skinned with the associated body vertices' weights.
Points pose_garment(const BodyModel& model, const Garment& garment, const BodyParams& params,
                    const Points& displacements);

/// Posed garment back to D^g: unposes with the garment weights and the
/// indicator's pose offsets, then subtracts the shaped body under it.
Points unpose_garment(const BodyModel& model, const Garment& garment, const BodyParams& params,
                      const Points& posed_vertices);

/// Posed body followed by each posed garment, in listed order.
std::vector<LabeledMesh> dress(const BodyModel& model, const DressedFigure& figure, int frame);

/// Dressed figure at zero pose and zero translation.
std::vector<LabeledMesh> dress_canonical(const BodyModel& model, const DressedFigure& figure);

/// Concatenates meshes into one; per-vertex labels are returned alongside.
struct MergedMesh {
  TriMesh mesh;
  std::vector<int> vertex_labels;
};
MergedMesh merge_meshes(const std::vector<LabeledMesh>& meshes);

/// Copy of `target` carrying `source`'s texture handle and UVs. Both must be
/// the same class with identical faces and UV layout.
Garment transfer_texture(const Garment& source, const Garment& target);

/// Garment carved from the body template: faces whose vertices all satisfy
/// `mask`, cleaned to a single manifold piece, pushed `offset` meters along
/// the vertex normals. The indicator maps each garment vertex to its nearest
/// template vertex (lowest index on ties).
Garment carve_garment(const BodyModel& model, const std::string& name, const std::vector<char>& vertex_mask,
                      double offset = 0.003);

/// One of garment_classes() carved from the synthetic body by joint-region rules.
Garment make_garment_template(const BodyModel& model, const std::string& garment_class, double offset = 0.003);

}  // namespace wardrobe
