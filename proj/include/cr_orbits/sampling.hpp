#pragma once

// Deterministic random draws of vectors, group elements, normal-form specs and
// structured coordinates, for the verification sweeps and tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Core>

#include "cr_orbits/classification.hpp"
#include "cr_orbits/lie_model.hpp"

namespace cr {

/// Non-zero random blocks are rescaled to at least this norm, so CR verdicts never sit on the
/// membership threshold.
inline constexpr double kMinComponent = 0.05;

class Sampler
{
public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin() { return integer(0, 1) == 1; }
  double sign() { return coin() ? 1.0 : -1.0; }

  Eigen::VectorXd vector(Eigen::Index size, double scale = 1.0)
  {
    Eigen::VectorXd v(size);
    for (Eigen::Index i = 0; i < size; ++i) { v(i) = uniform(-scale, scale); }
    return v;
  }

  /// Random vector whose norm lies in [kMinComponent, scale * sqrt(size)].
  Eigen::VectorXd nonzero_block(Eigen::Index size, double scale = 1.0)
  {
    if (size == 0) { throw InvalidInput("nonzero_block: empty block"); }
    Eigen::VectorXd v = vector(size, scale);
    while (v.norm() < 1e-3) { v = vector(size, scale); }
    if (v.norm() < kMinComponent) { v *= kMinComponent / v.norm(); }
    return v;
  }

  Eigen::VectorXd unit(Eigen::Index size)
  {
    Eigen::VectorXd v(size);
    for (Eigen::Index i = 0; i < size; ++i) { v(i) = std::normal_distribution<double>()(rng_); }
    while (v.norm() < 1e-6) { v = unit(size); }
    return v.normalized();
  }

  AlgVec algvec(ModelDim dim, double scale = 1.0) { return AlgVec(dim, vector(dim.real_dim(), scale)); }

  AlgVec unit_algvec(ModelDim dim) { return AlgVec(dim, unit(dim.real_dim())); }

  /// Exp(xi) with min_norm <= ||xi|| <= max_norm.
  GroupElement element(ModelDim dim, double max_norm = 2.0, double min_norm = 0.0)
  {
    return GroupElement::exp(AlgVec(dim, unit(dim.real_dim()) * uniform(min_norm, max_norm)));
  }

  /// A valid spec of the given kind in dimension n, uniformly over admissible (dim_c, dim_r).
  SubalgebraSpec spec(Kind kind, ModelDim dim)
  {
    std::vector<SubalgebraSpec> all = all_specs(kind, dim);
    return all[static_cast<std::size_t>(integer(0, static_cast<int>(all.size()) - 1))];
  }

  /// Structured coordinates (b, T, W, y) with the blocks that decide CR-ness drawn zero (cr = true)
  /// or non-zero (cr = false). Non-CR draws exist only for AR with dim_r >= 1 and ACRZ with c' != 0.
  StructuredCoords coords(const SubalgebraSpec & spec, bool cr = true, double scale = 1.0)
  {
    StructuredCoords s;
    const Eigen::Index nt = spec.dim_r;
    const Eigen::Index nw = 2 * (spec.model.alpha_dim() - spec.dim_c - spec.dim_r);
    s.b = uniform(-scale, scale);
    s.y = uniform(-scale, scale);
    s.T = (nt > 0 && coin()) ? nonzero_block(nt, scale) : Eigen::VectorXd::Zero(nt);
    s.W = (nw > 0 && coin()) ? nonzero_block(nw, scale) : Eigen::VectorXd::Zero(nw);
    if (spec.kind == Kind::AR) {
      s.T = cr ? Eigen::VectorXd::Zero(nt) : nonzero_block(nt, scale);
    } else if (spec.kind == Kind::ACRZ) {
      s.W = cr ? Eigen::VectorXd::Zero(nw) : nonzero_block(nw, scale);
    } else if (!cr) {
      throw InvalidInput("Sampler::coords: every orbit of kind R or CRZ is CR");
    }
    return s;
  }

  /// Coordinates of a CR orbit whose congruence scalars equal `key`, with the parameters the key
  /// does not see (b, directions, signs, the remaining blocks) drawn at random.
  StructuredCoords coords_with_key(const SubalgebraSpec & spec, const std::vector<double> & key)
  {
    StructuredCoords s = coords(spec, true);
    const Eigen::Index nt = spec.dim_r;
    const Eigen::Index nw = s.W.size();
    s.b = uniform(-1.5, 1.5);
    switch (spec.kind) {
      case Kind::R: s.T = unit(nt) * (key.at(0) / rho(-s.b / 2.0)); break;
      case Kind::CRZ: break;
      case Kind::AR:
        // The slice point of Exp(bB + W + yZ) is Exp(rho(-b/2) W + rho(-b) y Z).
        s.W = (nw > 0 ? unit(nw) : Eigen::VectorXd::Zero(0)) * (key.at(0) / rho(-s.b / 2.0));
        s.y = sign() * key.at(1) / rho(-s.b);
        break;
      case Kind::ACRZ: s.T = (nt > 0 ? unit(nt) : Eigen::VectorXd::Zero(0)) * (key.at(0) / rho(-s.b / 2.0)); break;
    }
    return s;
  }

  static std::vector<SubalgebraSpec> all_specs(Kind kind, ModelDim dim)
  {
    std::vector<SubalgebraSpec> out;
    for (int c = 0; c <= dim.alpha_dim(); ++c) {
      for (int r = 0; c + r <= dim.alpha_dim(); ++r) {
        const SubalgebraSpec s{kind, c, r, dim};
        try {
          s.validate();
          out.push_back(s);
        } catch (const InvalidInput &) {
        }
      }
    }
    return out;
  }

  std::mt19937_64 & engine() { return rng_; }

private:
  std::mt19937_64 rng_;
};

inline constexpr Kind kAllKinds[] = {Kind::R, Kind::CRZ, Kind::AR, Kind::ACRZ};

/// Whether `spec` admits orbits that are not CR.
inline bool has_non_cr_orbits(const SubalgebraSpec & spec)
{
  if (spec.kind == Kind::AR) { return spec.dim_r > 0; }
  if (spec.kind == Kind::ACRZ) { return spec.dim_c + spec.dim_r < spec.model.alpha_dim(); }
  return false;
}

}  // namespace cr
