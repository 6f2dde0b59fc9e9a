#include "salmap/pipeline.hpp"

#include <cmath>
#include <vector>

#include "salmap/color.hpp"
#include "salmap/features.hpp"
#include "salmap/kernels.hpp"
#include "salmap/rasterops.hpp"

namespace salmap {
namespace {

void check_fusion(const FusionParams& p) {
  if (!(p.w1 >= 0.0) || !(p.w2 >= 0.0)) throw Error("fusion weights must be non-negative");
  if (!(p.w1 + p.w2 > 0.0)) throw Error("fusion weights must not both be zero");
}

}  // namespace

SaliencyMap fuse_color_contrast(const SaliencyMap& s_cn, const SaliencyMap& s_cl,
                                const FusionParams& p) {
  check_fusion(p);
  require_same_dims(s_cn, s_cl, "fuse_color_contrast");
  SaliencyMap out(s_cn.width, s_cn.height);
  kernels::active_table().blend(s_cn.data.data(), s_cl.data.data(), s_cn.size(), p.w1, p.w2,
                                out.data.data());
  return out;
}

SaliencyMap fuse_semantic(const SaliencyMap& s_sege, const SaliencyMap& s_cncl) {
  require_same_dims(s_sege, s_cncl, "fuse_semantic");
  SaliencyMap out(s_sege.width, s_sege.height);
  kernels::active_table().multiply(s_sege.data.data(), s_cncl.data.data(), s_sege.size(),
                                   out.data.data());
  return out;
}

double center_prior_weight(int x, int y, int M, int N, double sigma_sq) {
  if (!(sigma_sq > 0.0)) throw Error("sigma_sq must be positive");
  const double dx = x - M / 2.0;
  const double dy = y - N / 2.0;
  const double d_sq = dx * dx + dy * dy;
  const double denom = sigma_sq * static_cast<double>(M > N ? M : N);
  return 2.0 + std::exp(-d_sq / denom);
}

SaliencyMap center_prior(const SaliencyMap& map, const CenterPriorParams& p) {
  if (!(p.sigma_sq > 0.0)) throw Error("sigma_sq must be positive");
  const int M = map.height;  // rows
  const int N = map.width;   // columns
  const double denom = p.sigma_sq * static_cast<double>(M > N ? M : N);
  std::vector<double> row_f(M), col_f(N);
  for (int r = 0; r < M; ++r) {
    const double d = r - M / 2.0;
    row_f[r] = std::exp(-(d * d) / denom);
  }
  for (int c = 0; c < N; ++c) {
    const double d = c - N / 2.0;
    col_f[c] = std::exp(-(d * d) / denom);
  }
  SaliencyMap weighted(map.width, map.height);
  kernels::active_table().center_weight(map.data.data(), map.width, map.height, col_f.data(),
                                        row_f.data(), weighted.data.data());
  return normalize(weighted);
}

PipelineResult run_pipeline(const RgbImage& img, const LabelMap& labels, const PipelineParams& p,
                            const LutBank& bank, const Mlp& model, bool user_lut) {
  require_same_dims(img, labels, "run_pipeline");
  const HsvImage hsv = rgb_to_hsv(img);

  PipelineResult r;
  r.s_cn = contrast_saliency(hsv, p.block_size);
  r.s_cl = color_saliency(hsv, p.p);
  auto [sege, ctx] = semantic_saliency(labels, bank, model, user_lut);
  r.s_sege = std::move(sege);
  r.context = ctx;
  r.s_cncl = fuse_color_contrast(r.s_cn, r.s_cl, p.fusion);

  SaliencyMap map = fuse_semantic(r.s_sege, r.s_cncl);
  if (p.center.enabled) map = center_prior(map, p.center);
  if (p.smooth) map = mean_filter(map, p.smooth_size);
  r.final = normalize(map);
  return r;
}

}  // namespace salmap
