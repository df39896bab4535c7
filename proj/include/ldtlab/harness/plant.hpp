#pragma once

#include "ldtlab/harness/config.hpp"
#include "ldtlab/ldt.hpp"

#include <vector>

// Noisy instance generation.
namespace ldtlab::harness {

struct PlantedInstance {
    PointsTable f;
    std::vector<MultiPoly> truth; // planted polynomials, in planting order
    std::uint64_t changed = 0;    // points not carrying a planted value
};

// Deterministic per (cfg, seed). Random polynomials have uniform
// coefficients over all monomials of total degree <= d.
//   exact              f = Q.
//   random_corrupt     ceil(delta q^m) distinct points moved to a uniform
//                      different value.
//   planted_agreement  ceil(eps q^m) points carry Q; the rest are uniform
//                      values redrawn while they equal Q.
//   mixture            consecutive blocks of ceil(w_i q^m) shuffled points
//                      carry Q_i; the remainder is uniform noise.
//   structured_rows    ceil(eps q) hyperplanes x_0 = c carry Q; every other
//                      hyperplane carries its own random polynomial, so
//                      lines inside hyperplanes always look consistent.
// Throws ConfigError on infeasible parameters.
PlantedInstance plant_instance(const ExperimentConfig& cfg, std::uint64_t seed);

MultiPoly random_polynomial(std::uint32_t q, std::size_t m, unsigned d, std::uint64_t seed,
                            std::uint64_t substream);

} // namespace ldtlab::harness
