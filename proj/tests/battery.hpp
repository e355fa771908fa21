#pragma once

// Models shared by the unit and acceptance tests.

#include <string>
#include <vector>

#include "mpx/models.hpp"
#include "oracles.hpp"

namespace battery {

using mpx::Distribution;
using mpx::kNegInf;
using mpx::MaxPlusMatrix;
using mpx::ModelSpec;

inline std::string source_path(const std::string& rel) { return std::string(MPX_SOURCE_DIR) + "/" + rel; }

inline oracle::Mat to_oracle(const MaxPlusMatrix& a) {
  oracle::Mat m(a.dim(), oracle::Vec(a.dim()));
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) m[i][j] = a(i, j);
  return m;
}

inline MaxPlusMatrix from_oracle(const oracle::Mat& m) {
  std::vector<double> e;
  for (const auto& row : m) e.insert(e.end(), row.begin(), row.end());
  return MaxPlusMatrix(m.size(), std::move(e));
}

inline ModelSpec d1_gaussian(std::uint64_t seed = 11) {
  return mpx::make_entrywise_model(1, {Distribution::normal(0.0, 1.0)}, seed);
}

inline ModelSpec example1_uniform(std::uint64_t seed = 1) {
  const auto u = Distribution::uniform(0.0, 1.0);
  return mpx::make_example1_model({u, u, u, u, u}, seed);
}

inline ModelSpec finite2x2(std::uint64_t seed = 7) {
  return mpx::make_finite_support_model({MaxPlusMatrix{{1, kNegInf}, {0, 2}}, MaxPlusMatrix::constant(2, 0)},
                                        {0.4, 0.6}, seed);
}

inline ModelSpec entrywise3(std::uint64_t seed = 5) {
  const auto u = Distribution::uniform(0.0, 2.0);
  return mpx::make_entrywise_model(3, {u, std::nullopt, u,  //
                                       u, u, std::nullopt,  //
                                       u, u, u},
                                   seed);
}

inline ModelSpec markov2(std::uint64_t seed = 9) {
  auto calm = mpx::detail::make_finite_support({MaxPlusMatrix{{0, 1}, {1, 0}}, MaxPlusMatrix::constant(2, 0)},
                                               {0.5, 0.5}, 2);
  auto busy = mpx::detail::make_entrywise(2, {Distribution::uniform(0.0, 3.0), Distribution::uniform(0.0, 1.0),
                                              Distribution::uniform(0.0, 1.0), Distribution::uniform(0.0, 3.0)});
  return mpx::make_markov_model(2, {{0.9, 0.1}, {0.3, 0.7}}, {calm, busy}, seed);
}

/// Two rank-1 atoms whose images differ, with ξ identically 0: σ = 0.
inline ModelSpec degenerate_pair(std::uint64_t seed = 13) {
  return mpx::make_finite_support_model({MaxPlusMatrix{{0, 0}, {-1, -1}}, MaxPlusMatrix{{-1, -1}, {0, 0}}},
                                        {0.5, 0.5}, seed);
}

inline ModelSpec identity_zeros(std::uint64_t seed = 17) {
  return mpx::make_finite_support_model({MaxPlusMatrix::identity(2), MaxPlusMatrix::constant(2, 0)}, {0.5, 0.5},
                                        seed);
}

struct Named {
  std::string name;
  ModelSpec spec;
};

inline std::vector<Named> all() {
  return {{"d1_gaussian", d1_gaussian()}, {"example1", example1_uniform()}, {"finite2x2", finite2x2()},
          {"entrywise3", entrywise3()},   {"markov2", markov2()},           {"degenerate_pair", degenerate_pair()}};
}

}  // namespace battery
