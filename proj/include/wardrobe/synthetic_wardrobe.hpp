#pragma once

#include "wardrobe/body_model.hpp"
#include "wardrobe/garment.hpp"
#include "wardrobe/registration.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace wardrobe {

/// One synthetic dressed subject with everything a registration or
/// segmentation run needs as ground truth.
struct WardrobeSubject {
  DressedFigure figure;          // ground-truth body and garments, all frames
  BodyFit fit;                   // frame 0 body parameters
  MergedMesh scan;               // dressed frame 0; labels 0 skin, k = garment k
  std::vector<int> body_labels;  // per body vertex: 0 skin, 1 upper clothes, 2 pants
  Eigen::MatrixXd unaries;       // n x 3 noisy costs for body_labels
};

struct SyntheticWardrobe {
  BodyModel model;
  std::map<std::string, Garment> templates;  // one per garment class
  std::vector<WardrobeSubject> subjects;
};

/// Body model, the five garment templates, and `subject_count` subjects with
/// random shapes and poses, each wearing pants (short, long in turn) under an
/// upper garment (shirt, t-shirt, coat in turn), both with smooth random
/// outward displacements. Same seed, same result.
SyntheticWardrobe make_synthetic_wardrobe(std::uint64_t seed, int subject_count = 2, int frame_count = 2);

/// Body vertex sets covered by the upper-body (t-shirt) and lower-body
/// (short-pants) templates; used as segmentation prior regions.
std::vector<std::vector<int>> template_regions(const std::map<std::string, Garment>& templates);

}  // namespace wardrobe
