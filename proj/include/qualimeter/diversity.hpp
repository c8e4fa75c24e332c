#pragma once

#include <string>
#include <vector>

#include "qualimeter/core.hpp"

namespace qualimeter::diversity {

enum class DistanceMode { Structural, Weighted };

struct PopulationMember {
    std::string id;       // unique within the population
    double frequency = 0; // relative frequency x_i, in [0,1]
    QualityModel model;
};

struct ModelPopulation {
    std::vector<PopulationMember> members;
};

// Pairwise model distance in [0,1]. Structural mode is the Jaccard distance
// over characteristic path sets; weighted mode is the mean absolute
// difference of path weight products over the path-set union. Symmetric,
// zero on structurally identical models.
double model_distance(const QualityModel& a, const QualityModel& b,
                      DistanceMode mode);

// Nucleotide-diversity style degree: pi = sum over ordered pairs (i,j) of
// x_i * x_j * d(i,j), with d(i,i) = 0.
double polymorphism_degree(const ModelPopulation& pop, DistanceMode mode);

// Population file: one `<frequency> <model-file-path>` entry per line,
// `#` comments. Frequencies renormalized when their sum lies in
// [0.99, 1.01], rejected otherwise.
ModelPopulation load_population(const std::string& path);

DistanceMode distance_mode_from(const std::string& name);

} // namespace qualimeter::diversity
