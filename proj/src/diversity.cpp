#include "qualimeter/diversity.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "qualimeter/qmdl.hpp"

namespace qualimeter::diversity {

namespace {

void path_weights(const Characteristic& node, const std::string& prefix,
                  double acc, std::map<std::string, double>& out) {
    for (const auto& child : node.children) {
        std::string path = prefix.empty() ? child.name : prefix + "/" + child.name;
        double w = acc * child.weight;
        out[path] = w;
        path_weights(child, path, w, out);
    }
}

void require_hierarchical(const QualityModel& m) {
    if (m.organization != Organization::Hierarchical)
        throw Error(Errc::UnsupportedOrganization,
                    "model '" + m.id + "' is not hierarchical");
}

} // namespace

double model_distance(const QualityModel& a, const QualityModel& b,
                      DistanceMode mode) {
    require_hierarchical(a);
    require_hierarchical(b);
    if (mode == DistanceMode::Structural) {
        auto pa = model_paths(a);
        auto pb = model_paths(b);
        std::set<std::string> uni = pa;
        uni.insert(pb.begin(), pb.end());
        if (uni.empty()) return 0.0; // two single-root models
        size_t inter = 0;
        for (const auto& p : pa) inter += pb.count(p);
        return 1.0 - double(inter) / double(uni.size());
    }
    std::map<std::string, double> wa, wb;
    path_weights(a.root, "", 1.0, wa);
    path_weights(b.root, "", 1.0, wb);
    std::set<std::string> uni;
    for (const auto& [p, w] : wa) uni.insert(p);
    for (const auto& [p, w] : wb) uni.insert(p);
    if (uni.empty()) return 0.0;
    double acc = 0;
    for (const auto& p : uni) {
        double va = wa.count(p) ? wa.at(p) : 0.0;
        double vb = wb.count(p) ? wb.at(p) : 0.0;
        acc += std::fabs(va - vb);
    }
    return acc / double(uni.size());
}

double polymorphism_degree(const ModelPopulation& pop, DistanceMode mode) {
    if (pop.members.empty())
        throw Error(Errc::BadPopulation, "population has no members");
    std::set<std::string> ids;
    double fsum = 0;
    for (const auto& m : pop.members) {
        if (!ids.insert(m.id).second)
            throw Error(Errc::BadPopulation,
                        "duplicate population member id '" + m.id + "'");
        if (m.frequency < 0 || m.frequency > 1)
            throw Error(Errc::BadPopulation,
                        "frequency of '" + m.id + "' outside [0,1]");
        fsum += m.frequency;
    }
    if (std::fabs(fsum - 1.0) > 1e-9)
        throw Error(Errc::BadPopulation, "member frequencies must sum to 1");

    // pairwise distances computed once per unordered pair, summed in fixed
    // (i,j) order for determinism
    size_t n = pop.members.size();
    double pi = 0;
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 1; j < n; ++j) {
            double d = model_distance(pop.members[i].model, pop.members[j].model,
                                      mode);
            pi += 2.0 * pop.members[i].frequency * pop.members[j].frequency * d;
        }
    }
    return pi;
}

ModelPopulation load_population(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw Error(Errc::IoError, "cannot open population file '" + path + "'");
    std::filesystem::path base = std::filesystem::path(path).parent_path();

    ModelPopulation pop;
    std::string line;
    int lineno = 0;
    double fsum = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream ls(line);
        double freq;
        std::string model_path;
        if (!(ls >> freq))
            throw Error(Errc::BadPopulation,
                        "line " + std::to_string(lineno) +
                            ": expected <frequency> <model-file>");
        if (!(ls >> model_path))
            throw Error(Errc::BadPopulation,
                        "line " + std::to_string(lineno) + ": missing model path");
        if (freq < 0)
            throw Error(Errc::BadPopulation,
                        "line " + std::to_string(lineno) + ": negative frequency");

        std::filesystem::path resolved(model_path);
        if (resolved.is_relative()) resolved = base / resolved;
        std::ifstream mf(resolved);
        if (!mf)
            throw Error(Errc::IoError,
                        "cannot open model file '" + resolved.string() + "'");
        std::stringstream text;
        text << mf.rdbuf();

        PopulationMember member;
        member.frequency = freq;
        member.model = qmdl::parse(text.str());
        member.id = member.model.id + "#" + std::to_string(pop.members.size());
        fsum += freq;
        pop.members.push_back(std::move(member));
    }
    if (pop.members.empty())
        throw Error(Errc::BadPopulation, "population file lists no members");
    if (fsum < 0.99 || fsum > 1.01)
        throw Error(Errc::BadPopulation,
                    "member frequencies sum to " + std::to_string(fsum) +
                        ", expected within [0.99, 1.01]");
    for (auto& m : pop.members) m.frequency /= fsum;
    return pop;
}

DistanceMode distance_mode_from(const std::string& name) {
    if (name == "structural") return DistanceMode::Structural;
    if (name == "weighted") return DistanceMode::Weighted;
    throw Error(Errc::BadPopulation, "unknown distance mode '" + name + "'");
}

} // namespace qualimeter::diversity
