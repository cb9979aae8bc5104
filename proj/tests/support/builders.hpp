#pragma once

// Small fixture builders shared by the test suites.

#include <map>
#include <random>
#include <string>
#include <vector>

#include "ontomesh/ontology.hpp"

namespace builders {

inline void cls(ontomesh::ontology& m, const std::string& id, const std::string& label,
                std::vector<std::string> parents = {}) {
    ontomesh::class_def c;
    c.id = id;
    c.label = label;
    c.parents = std::move(parents);
    m.classes.emplace(id, std::move(c));
}

inline void prop(ontomesh::ontology& m, const std::string& id, const std::string& domain,
                 const std::string& range, const std::string& label = "") {
    ontomesh::property_def p;
    p.id = id;
    p.label = label.empty() ? id : label;
    p.domain = domain;
    p.range = range;
    m.properties.emplace(id, std::move(p));
}

inline void inst(ontomesh::ontology& m, const std::string& id, const std::string& class_id,
                 std::map<std::string, std::vector<std::string>> values = {}) {
    ontomesh::instance_def i;
    i.id = id;
    i.class_id = class_id;
    i.values = std::move(values);
    m.instances.emplace(id, std::move(i));
}

inline ontomesh::ontology named(const std::string& name) {
    ontomesh::ontology m;
    m.name = name;
    return m;
}

// Random valid ontology: parents only point at earlier classes, so the result
// is acyclic by construction.
inline ontomesh::ontology random_model(std::mt19937& rng, const std::string& name,
                                       int max_classes = 8) {
    static const std::vector<std::string> words = {
        "Product", "Bolt",  "Order", "Factory", "Widget", "Gadget", "Frame",
        "Panel",   "Motor", "Gear",  "Valve",   "Pump",   "Crate",  "Label"};
    static const std::vector<std::string> prop_words = {"produces", "partOf", "weight",
                                                        "price", "linkedTo"};
    auto pick = [&](const std::vector<std::string>& pool) {
        return pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)];
    };

    ontomesh::ontology m = named(name);
    int n_classes = std::uniform_int_distribution<int>(1, max_classes)(rng);
    std::vector<std::string> ids;
    for (int i = 0; i < n_classes; ++i) {
        std::string id = "C" + std::to_string(i);
        std::vector<std::string> parents;
        if (i > 0) {
            int n_parents = std::uniform_int_distribution<int>(0, 2)(rng);
            for (int p = 0; p < n_parents; ++p) {
                parents.push_back(ids[std::uniform_int_distribution<std::size_t>(
                    0, ids.size() - 1)(rng)]);
            }
            std::sort(parents.begin(), parents.end());
            parents.erase(std::unique(parents.begin(), parents.end()), parents.end());
        }
        cls(m, id, pick(words) + std::to_string(i % 5), parents);
        ids.push_back(id);
    }

    int n_props = std::uniform_int_distribution<int>(0, 4)(rng);
    for (int i = 0; i < n_props; ++i) {
        bool datatype = std::uniform_int_distribution<int>(0, 1)(rng) == 0;
        std::string range =
            datatype ? pick({"string", "integer", "decimal"}) : pick(ids);
        prop(m, "p" + std::to_string(i), pick(ids), range, pick(prop_words));
    }

    int n_insts = std::uniform_int_distribution<int>(0, 6)(rng);
    std::vector<std::string> inst_ids;
    for (int i = 0; i < n_insts; ++i) {
        inst_ids.push_back("i" + std::to_string(i));
    }
    for (int i = 0; i < n_insts; ++i) {
        std::map<std::string, std::vector<std::string>> values;
        for (const auto& [pid, p] : m.properties) {
            if (std::uniform_int_distribution<int>(0, 2)(rng) != 0) {
                continue;
            }
            std::vector<std::string> vals;
            if (p.range == "string") {
                vals.push_back("text");
            } else if (p.range == "integer") {
                vals.push_back(std::to_string(std::uniform_int_distribution<int>(0, 99)(rng)));
            } else if (p.range == "decimal") {
                vals.push_back(std::to_string(std::uniform_int_distribution<int>(0, 99)(rng)) +
                               ".5");
            } else if (!inst_ids.empty()) {
                vals.push_back(inst_ids[std::uniform_int_distribution<std::size_t>(
                    0, inst_ids.size() - 1)(rng)]);
            }
            if (!vals.empty()) {
                values[pid] = vals;
            }
        }
        inst(m, inst_ids[i], pick(ids), values);
    }
    return m;
}

} // namespace builders
