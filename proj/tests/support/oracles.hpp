#pragma once

// Independent oracles used to freeze expected values. Everything here is
// deliberately written from the definitions, not from the library code.

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "ontomesh/ontology.hpp"
#include "ontomesh/text.hpp"

namespace oracles {

// Full-matrix Wagner-Fischer, no rolling rows.
inline std::size_t levenshtein(const std::string& a, const std::string& b) {
    std::vector<std::vector<std::size_t>> d(a.size() + 1,
                                            std::vector<std::size_t>(b.size() + 1, 0));
    for (std::size_t i = 0; i <= a.size(); ++i) {
        d[i][0] = i;
    }
    for (std::size_t j = 0; j <= b.size(); ++j) {
        d[0][j] = j;
    }
    for (std::size_t i = 1; i <= a.size(); ++i) {
        for (std::size_t j = 1; j <= b.size(); ++j) {
            std::size_t cost = a[i - 1] == b[j - 1] ? 0 : 1;
            d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1, d[i - 1][j - 1] + cost});
        }
    }
    return d[a.size()][b.size()];
}

inline double lexical(const std::string& raw_a, const std::string& raw_b) {
    std::string a = ontomesh::normalize_label(raw_a);
    std::string b = ontomesh::normalize_label(raw_b);
    if (a == b) {
        return 1.0;
    }
    return 1.0 - static_cast<double>(levenshtein(a, b)) /
                     static_cast<double>(std::max(a.size(), b.size()));
}

// Ancestor set by repeated relaxation over the full edge list until fixpoint.
inline std::set<std::string> ancestors(const ontomesh::ontology& model,
                                       const std::string& class_id) {
    std::set<std::string> reach;
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& [id, cls] : model.classes) {
            if (id != class_id && !reach.contains(id)) {
                continue;
            }
            for (const auto& parent : cls.parents) {
                if (parent != class_id && reach.insert(parent).second) {
                    changed = true;
                }
            }
        }
    }
    reach.erase(class_id);
    return reach;
}

// Pairwise-connectivity fixpoint simulated on explicit (string-keyed) pairs.
struct flood_result {
    std::map<std::pair<std::string, std::string>, double> scores;
};

inline flood_result flood(const ontomesh::ontology& a, const ontomesh::ontology& b,
                          const std::map<std::pair<std::string, std::string>, double>& seed,
                          double epsilon, int max_iterations) {
    using pair_key = std::pair<std::string, std::string>;
    struct edge {
        pair_key from;
        pair_key to;
        std::string kind;
    };
    std::vector<edge> edges;
    auto class_edges = [](const ontomesh::ontology& model, const std::string& kind)
        -> std::vector<std::pair<std::string, std::string>> {
        std::vector<std::pair<std::string, std::string>> out;
        if (kind == "subclass") {
            for (const auto& [id, cls] : model.classes) {
                for (const auto& parent : cls.parents) {
                    out.emplace_back(id, parent);
                }
            }
        } else {
            for (const auto& [id, prop] : model.properties) {
                if (!ontomesh::is_datatype_tag(prop.range) &&
                    ontomesh::normalize_label(prop.label) == kind) {
                    out.emplace_back(prop.domain, prop.range);
                }
            }
            std::sort(out.begin(), out.end());
            out.erase(std::unique(out.begin(), out.end()), out.end());
        }
        return out;
    };

    std::set<std::string> kinds{"subclass"};
    std::set<std::string> labels_a, labels_b;
    for (const auto& [id, prop] : a.properties) {
        if (!ontomesh::is_datatype_tag(prop.range)) {
            labels_a.insert(ontomesh::normalize_label(prop.label));
        }
    }
    for (const auto& [id, prop] : b.properties) {
        if (!ontomesh::is_datatype_tag(prop.range)) {
            labels_b.insert(ontomesh::normalize_label(prop.label));
        }
    }
    for (const auto& label : labels_a) {
        if (labels_b.contains(label)) {
            kinds.insert(label);
        }
    }
    for (const auto& kind : kinds) {
        for (const auto& [af, at] : class_edges(a, kind)) {
            for (const auto& [bf, bt] : class_edges(b, kind)) {
                edges.push_back({{af, bf}, {at, bt}, kind});
            }
        }
    }
    std::map<std::pair<pair_key, std::string>, int> outdeg;
    for (const auto& e : edges) {
        ++outdeg[{e.from, e.kind}];
    }

    flood_result result;
    auto current = seed;
    for (int iteration = 0; iteration < max_iterations; ++iteration) {
        auto next = seed;
        for (const auto& e : edges) {
            next[e.to] += current[e.from] / outdeg[{e.from, e.kind}];
        }
        double grid_max = 0.0;
        for (const auto& [key, value] : next) {
            grid_max = std::max(grid_max, value);
        }
        if (grid_max > 0.0) {
            for (auto& [key, value] : next) {
                value /= grid_max;
            }
        }
        double residual = 0.0;
        for (const auto& [key, value] : next) {
            residual = std::max(residual, std::abs(value - current[key]));
        }
        current = next;
        if (residual < epsilon) {
            break;
        }
    }
    result.scores = current;
    return result;
}

// Plain element-counting set arithmetic for the instance estimators.
inline double set_similarity(const std::set<std::string>& a, const std::set<std::string>& b,
                             const std::string& mode) {
    if (a.empty() && b.empty()) {
        return 0.0;
    }
    std::size_t inter = 0;
    for (const auto& x : a) {
        if (b.contains(x)) {
            ++inter;
        }
    }
    std::set<std::string> uni = a;
    uni.insert(b.begin(), b.end());
    if (mode == "jaccard") {
        return uni.empty() ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni.size());
    }
    if (mode == "symmetric") {
        return 2.0 * static_cast<double>(inter) / static_cast<double>(a.size() + b.size());
    }
    // inclusion
    return a.empty() ? 0.0 : static_cast<double>(inter) / static_cast<double>(a.size());
}

} // namespace oracles
