#include "osmfix/alignment.hpp"

#include <algorithm>
#include <cmath>

#include "osmfix/errors.hpp"

namespace osmfix {

namespace {

constexpr double kMeanProbFloor = 1e-6;

// mean_prob of the mask translated by (dx, dy), without copying the bits.
double mean_prob_shifted(const Mask& mask, const ProbMap& map, int dx, int dy) {
    double sum = 0.0;
    size_t n = 0;
    for (int ry = 0; ry < mask.height; ++ry) {
        const uint8_t* row = mask.bits.data() + static_cast<size_t>(ry) * mask.width;
        const int y = mask.y0 + ry + dy;
        const int xbase = mask.x0 + dx;
        if (y < 0 || y >= map.height) {
            for (int rx = 0; rx < mask.width; ++rx) n += row[rx];
            continue;
        }
        const float* mrow = map.values.data() + static_cast<size_t>(y) * map.width;
        for (int rx = 0; rx < mask.width; ++rx) {
            if (!row[rx]) continue;
            const int x = xbase + rx;
            if (x >= 0 && x < map.width) sum += mrow[x];
            ++n;
        }
    }
    if (n == 0) throw EmptyMask("mask has no set bits");
    return sum / static_cast<double>(n);
}

// Fixed evaluation window for the windowed unary modes: the union-mask
// bounding box dilated by the maximum displacement magnitude per axis.
PixelRect site_window(const BuildingGroup& site, const DisplacementDomain& dom) {
    const int pad_x = std::max(std::abs(dom.min_x), std::abs(dom.max_x));
    const int pad_y = std::max(std::abs(dom.min_y), std::abs(dom.max_y));
    return {site.union_mask.x0 - pad_x, site.union_mask.y0 - pad_y,
            site.union_mask.width + 2 * pad_x, site.union_mask.height + 2 * pad_y};
}

struct Candidate {
    double energy = 0.0;
    Displacement d;
};

bool better(const Candidate& a, const Candidate& b) {
    if (a.energy != b.energy) return a.energy < b.energy;
    const long na = static_cast<long>(a.d.dx) * a.d.dx + static_cast<long>(a.d.dy) * a.d.dy;
    const long nb = static_cast<long>(b.d.dx) * b.d.dx + static_cast<long>(b.d.dy) * b.d.dy;
    if (na != nb) return na < nb;
    if (a.d.dx != b.d.dx) return a.d.dx < b.d.dx;
    return a.d.dy < b.d.dy;
}

} // namespace

double DisplacementDomain::normalizer() const {
    return std::hypot(static_cast<double>(max_x - min_x), static_cast<double>(max_y - min_y));
}

void DisplacementDomain::validate() const {
    if (min_x > max_x || min_y > max_y)
        throw InconsistentState("displacement domain is empty");
    if (!contains({0, 0}))
        throw InconsistentState("displacement domain must contain (0,0)");
}

double unary_energy(const BuildingGroup& site, const Displacement& d, const ProbMap& map,
                    const AlignConfig& config) {
    switch (config.unary) {
        case UnaryMode::correlation: {
            const double m = mean_prob_shifted(site.union_mask, map, d.dx, d.dy);
            return -std::log(std::max(m, kMeanProbFloor));
        }
        case UnaryMode::abs_difference:
            return abs_difference(shift(site.union_mask, d), map, site_window(site, config.domain));
        case UnaryMode::mutual_info:
            return -mutual_info(shift(site.union_mask, d), map, site_window(site, config.domain));
    }
    throw InconsistentState("unknown unary mode");
}

double pairwise_energy(const Displacement& di, const Displacement& dj, double beta, double Z) {
    if (!(Z > 0.0)) throw InconsistentState("pairwise normalizer must be positive");
    return beta * std::hypot(static_cast<double>(di.dx - dj.dx),
                             static_cast<double>(di.dy - dj.dy)) / Z;
}

double site_energy(int i, const Displacement& d, const std::vector<Displacement>& current,
                   const GroupGraph& graph, const ProbMap& map, const AlignConfig& config) {
    const double Z = config.domain.normalizer();
    double e = unary_energy(graph.groups[i], d, map, config);
    for (int j : graph.neighbors[i]) e += pairwise_energy(d, current[j], config.beta, Z);
    return e;
}

namespace {

// Per-site table of unary energies over the whole domain, indexed by
// (dy - min_y) * width + (dx - min_x). Built with unary_energy itself so the
// cached values are bit-identical to direct evaluation.
std::vector<double> unary_table(const BuildingGroup& site, const ProbMap& map,
                                const AlignConfig& config) {
    const DisplacementDomain& dom = config.domain;
    std::vector<double> table(dom.size());
    size_t idx = 0;
    for (int dy = dom.min_y; dy <= dom.max_y; ++dy)
        for (int dx = dom.min_x; dx <= dom.max_x; ++dx)
            table[idx++] = unary_energy(site, {dx, dy}, map, config);
    return table;
}

size_t domain_index(const DisplacementDomain& dom, const Displacement& d) {
    return static_cast<size_t>(d.dy - dom.min_y) * dom.width() + (d.dx - dom.min_x);
}

Candidate best_of_table(const std::vector<double>& table, const DisplacementDomain& dom) {
    Candidate best{table[domain_index(dom, {0, 0})], {0, 0}};
    size_t idx = 0;
    for (int dy = dom.min_y; dy <= dom.max_y; ++dy) {
        for (int dx = dom.min_x; dx <= dom.max_x; ++dx) {
            const Candidate c{table[idx++], {dx, dy}};
            if (better(c, best)) best = c;
        }
    }
    return best;
}

} // namespace

std::vector<Displacement> init_alignment(const GroupGraph& graph, const ProbMap& map,
                                         const AlignConfig& config) {
    config.domain.validate();
    std::vector<Displacement> out;
    out.reserve(graph.groups.size());
    for (const BuildingGroup& g : graph.groups) {
        const auto table = unary_table(g, map, config);
        out.push_back(best_of_table(table, config.domain).d);
    }
    return out;
}

AlignmentResult icm_align(const GroupGraph& graph, const ProbMap& map, const AlignConfig& config) {
    config.domain.validate();
    if (config.max_iters < 1) throw InconsistentState("max_iters must be at least 1");
    const DisplacementDomain& dom = config.domain;
    const double Z = dom.normalizer();
    const size_t n = graph.groups.size();

    std::vector<std::vector<double>> tables;
    tables.reserve(n);
    for (const BuildingGroup& g : graph.groups) tables.push_back(unary_table(g, map, config));

    AlignmentResult res;
    res.displacement.resize(n);
    for (size_t i = 0; i < n; ++i)
        res.displacement[i] = best_of_table(tables[i], dom).d;

    auto pairwise_sum = [&](size_t i, const Displacement& d) {
        double s = 0.0;
        for (int j : graph.neighbors[i])
            s += pairwise_energy(d, res.displacement[j], config.beta, Z);
        return s;
    };
    auto total_energy = [&]() {
        double t = 0.0;
        for (size_t i = 0; i < n; ++i)
            t += tables[i][domain_index(dom, res.displacement[i])] +
                 pairwise_sum(i, res.displacement[i]);
        return t;
    };

    res.energy_trace.push_back(total_energy());
    for (int sweep = 0; sweep < config.max_iters; ++sweep) {
        size_t changed = 0;
        for (size_t i = 0; i < n; ++i) {
            const double cur =
                tables[i][domain_index(dom, res.displacement[i])] + pairwise_sum(i, res.displacement[i]);
            Candidate best{cur, res.displacement[i]};
            size_t idx = 0;
            for (int dy = dom.min_y; dy <= dom.max_y; ++dy) {
                for (int dx = dom.min_x; dx <= dom.max_x; ++dx) {
                    Candidate c{tables[i][idx++], {dx, dy}};
                    c.energy += pairwise_sum(i, c.d);
                    if (better(c, best)) best = c;
                }
            }
            if (best.energy < cur) {
                res.displacement[i] = best.d;
                ++changed;
            }
        }
        res.energy_trace.push_back(total_energy());
        ++res.iterations_run;
        if (changed == 0) {
            res.converged = true;
            break;
        }
    }

    res.unary.resize(n);
    for (size_t i = 0; i < n; ++i)
        res.unary[i] = tables[i][domain_index(dom, res.displacement[i])];
    res.total_energy = res.energy_trace.back();
    return res;
}

std::vector<Footprint> apply_alignment(const std::vector<Footprint>& footprints,
                                       const GroupGraph& graph, const AlignmentResult& result) {
    if (result.displacement.size() != graph.groups.size())
        throw InconsistentState("alignment result does not match the group graph");
    std::vector<int> site_of(footprints.size(), -1);
    for (const BuildingGroup& g : graph.groups) {
        for (int idx : g.member_indices) {
            if (idx < 0 || static_cast<size_t>(idx) >= footprints.size())
                throw InconsistentState("group member index out of range");
            site_of[idx] = g.id;
        }
    }
    std::vector<Footprint> out;
    out.reserve(footprints.size());
    for (size_t i = 0; i < footprints.size(); ++i) {
        if (site_of[i] < 0)
            throw InconsistentState("footprint '" + footprints[i].id + "' has no group displacement");
        Footprint f = footprints[i];
        f.polygon = shift(f.polygon, result.displacement[site_of[i]]);
        f.source = Source::aligned;
        out.push_back(std::move(f));
    }
    return out;
}

AlignOutcome align_footprints(const std::vector<Footprint>& footprints, const ProbMap& map,
                              const AlignConfig& config) {
    AlignOutcome out;
    std::vector<BuildingGroup> groups =
        config.site_mode == SiteMode::groups
            ? group_buildings(footprints, map, config.link_distance_m)
            : singleton_groups(footprints);
    out.graph = build_graph(std::move(groups), config.knn);
    out.result = icm_align(out.graph, map, config);
    out.aligned = apply_alignment(footprints, out.graph, out.result);
    return out;
}

} // namespace osmfix
