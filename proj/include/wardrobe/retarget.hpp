#pragma once

#include "wardrobe/garment.hpp"

#include <string>
#include <vector>

namespace wardrobe {

enum class RetargetStrategy { Naive, BodyAware };

RetargetStrategy parse_strategy(const std::string& name);
std::string to_string(RetargetStrategy strategy);

struct RetargetedGarment {
  Points displacements;  // D^g against the target beta
  Points posed;          // on the target body at `params`
};

/// Reuses the source displacements D^{s,g} unchanged on the target body.
RetargetedGarment retarget_naive(const BodyModel& model, const DressedFigure& source, int garment_index,
                                 const BodyParams& target_params);

/// Nearest source-body vertex I_k of each unposed garment vertex (lowest index
/// on ties). Brute force up to 1e6 pairs, k-d tree above; both agree exactly.
std::vector<int> nearest_body_vertices(const Points& garment, const Points& body);

/// Substitutes v - S^s_{I_k} + S^t_{I_k} in unposed space, re-extracts D^g
/// against the target body and reposes with the template indicator.
/// `target_skin` are the target's skin displacements (may be empty).
RetargetedGarment retarget_body_aware(const BodyModel& model, const DressedFigure& source, int garment_index,
                                      const BodyParams& target_params, const Points& target_skin = Points());

struct GarmentDiagnostics {
  std::string name;
  int inside_count = 0;
  double interp_energy = 0.0;
};

struct RetargetReport {
  DressedFigure figure;
  std::vector<GarmentDiagnostics> garments;
};

/// Moves every source garment onto the target body (its beta, poses, trans
/// and skin). Diagnostics are measured on frame 0 against the posed target body.
RetargetReport retarget_pipeline(const BodyModel& model, const DressedFigure& source, const DressedFigure& target,
                                 RetargetStrategy strategy, double interp_weight = 25.0);

}  // namespace wardrobe
