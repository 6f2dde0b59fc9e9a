#pragma once

#include "salmap/context.hpp"
#include "salmap/lut.hpp"
#include "salmap/raster.hpp"

namespace salmap {

struct FusionParams {
  double w1 = 0.5;  // contrast weight
  double w2 = 0.5;  // color weight
};

struct CenterPriorParams {
  double sigma_sq = 40.0;
  bool enabled = true;
};

struct PipelineParams {
  int block_size = 16;
  double p = 4.0;  // hue exponent
  FusionParams fusion;
  CenterPriorParams center;
  bool smooth = true;
  int smooth_size = 20;
};

// w1 * s_cn + w2 * s_cl, pointwise. Weights must be non-negative with a
// positive sum.
SaliencyMap fuse_color_contrast(const SaliencyMap& s_cn, const SaliencyMap& s_cl,
                                const FusionParams& p);

// Pointwise product.
SaliencyMap fuse_semantic(const SaliencyMap& s_sege, const SaliencyMap& s_cncl);

// Center-prior weight at row x, column y of an M-row, N-column map:
// 2 + exp(-D^2 / (sigma_sq * max(M, N))) with D measured from the continuous
// center (M/2, N/2). Range (2, 3].
double center_prior_weight(int x, int y, int M, int N, double sigma_sq);

// normalize(map * f), f as above (computed separably per row/column).
SaliencyMap center_prior(const SaliencyMap& map, const CenterPriorParams& p);

struct PipelineResult {
  SaliencyMap final;
  SaliencyMap s_cn;    // normalized contrast feature
  SaliencyMap s_cl;    // normalized color feature
  SaliencyMap s_sege;  // semantic LUT map
  SaliencyMap s_cncl;  // fused contrast+color
  Context context = Context::Others;
};

// Full chain: HSV conversion, the three feature maps, both fusions, optional
// center prior and smoothing, final normalization.
PipelineResult run_pipeline(const RgbImage& img, const LabelMap& labels, const PipelineParams& p,
                            const LutBank& bank, const Mlp& model, bool user_lut = false);

}  // namespace salmap
