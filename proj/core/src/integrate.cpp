#include "ontomesh/integrate.hpp"

#include <algorithm>

#include <json.hpp>

#include "ontomesh/errors.hpp"
#include "ontomesh/text.hpp"

namespace ontomesh {

using ordered_json = nlohmann::ordered_json;

void aggregation_policy::validate_and_normalize() {
    if (threshold <= 0.0 || threshold > 1.0) {
        fail(errc::invalid_policy, "threshold must lie in (0, 1]");
    }
    if (tie_break != "score-row-col") {
        fail(errc::invalid_policy, "unknown tie-break rule '" + tie_break + "'");
    }
    double total = 0.0;
    for (const auto& [name, weight] : weights) {
        if (weight < 0.0) {
            fail(errc::invalid_policy, "negative weight for '" + name + "'");
        }
        if (!is_estimator_name(name)) {
            fail(errc::invalid_policy, "weight names unknown estimator '" + name + "'");
        }
        total += weight;
    }
    if (total <= 0.0) {
        fail(errc::invalid_policy, "at least one weight must be positive");
    }
    for (auto& [name, weight] : weights) {
        weight /= total;
    }
}

alignment load_alignment(std::string_view bytes) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(bytes);
    } catch (const nlohmann::json::exception& ex) {
        fail(errc::parse_error, ex.what());
    }
    if (!doc.is_object() || !doc.contains("pairs") || !doc["pairs"].is_array()) {
        fail(errc::parse_error, "alignment document: missing 'pairs' array");
    }
    alignment pairs;
    for (const auto& pair : doc["pairs"]) {
        if (!pair.is_array() || pair.size() != 2 || !pair[0].is_string() || !pair[1].is_string()) {
            fail(errc::parse_error, "alignment pair must be a [classA, classB] array");
        }
        pairs.emplace_back(pair[0].get<std::string>(), pair[1].get<std::string>());
    }
    return pairs;
}

std::string save_alignment(const alignment& pairs) {
    auto sorted = pairs;
    std::sort(sorted.begin(), sorted.end());
    ordered_json doc;
    ordered_json list = ordered_json::array();
    for (const auto& [a, b] : sorted) {
        list.push_back(ordered_json::array({a, b}));
    }
    doc["pairs"] = std::move(list);
    return doc.dump(2) + "\n";
}

// ============================================================================
// Aggregation and selection
// ============================================================================

similarity_matrix aggregate_matrices(const std::vector<similarity_matrix>& matrices,
                                     const aggregation_policy& policy) {
    if (matrices.empty()) {
        fail(errc::empty_input, "no matrices to aggregate");
    }
    const similarity_matrix& first = matrices.front();
    for (const auto& matrix : matrices) {
        if (matrix.rows != first.rows || matrix.cols != first.cols) {
            fail(errc::dimension_mismatch,
                 "matrix '" + matrix.estimator + "' disagrees on the class frame");
        }
    }
    double present_weight = 0.0;
    for (const auto& matrix : matrices) {
        auto it = policy.weights.find(matrix.estimator);
        present_weight += it == policy.weights.end() ? 0.0 : it->second;
    }
    if (present_weight <= 0.0) {
        fail(errc::invalid_policy, "no aggregated matrix carries positive weight");
    }

    similarity_matrix out;
    out.rows = first.rows;
    out.cols = first.cols;
    out.estimator = "aggregate";
    out.scores.assign(first.scores.size(), 0.0);
    for (const auto& matrix : matrices) {
        auto it = policy.weights.find(matrix.estimator);
        double weight = it == policy.weights.end() ? 0.0 : it->second / present_weight;
        if (weight == 0.0) {
            continue;
        }
        for (std::size_t x = 0; x < out.scores.size(); ++x) {
            out.scores[x] += weight * matrix.scores[x];
        }
        out.flags.insert(matrix.flags.begin(), matrix.flags.end());
    }
    return out;
}

std::vector<match> select_matches(const similarity_matrix& matrix, double threshold) {
    struct cell {
        double score;
        std::size_t r, c;
    };
    std::vector<cell> cells;
    for (std::size_t r = 0; r < matrix.rows.size(); ++r) {
        for (std::size_t c = 0; c < matrix.cols.size(); ++c) {
            if (matrix.at(r, c) >= threshold) {
                cells.push_back({matrix.at(r, c), r, c});
            }
        }
    }
    std::sort(cells.begin(), cells.end(), [&](const cell& x, const cell& y) {
        if (x.score != y.score) {
            return x.score > y.score;
        }
        if (matrix.rows[x.r] != matrix.rows[y.r]) {
            return matrix.rows[x.r] < matrix.rows[y.r];
        }
        return matrix.cols[x.c] < matrix.cols[y.c];
    });
    std::vector<bool> row_used(matrix.rows.size(), false);
    std::vector<bool> col_used(matrix.cols.size(), false);
    std::vector<match> matches;
    for (const auto& cell : cells) {
        if (row_used[cell.r] || col_used[cell.c]) {
            continue;
        }
        row_used[cell.r] = true;
        col_used[cell.c] = true;
        matches.push_back({matrix.rows[cell.r], matrix.cols[cell.c], cell.score});
    }
    return matches;
}

// ============================================================================
// Command construction
// ============================================================================

// B-class ids in topological order, parents first, ties by id.
static std::vector<std::string> topo_order(const ontology& model) {
    std::map<std::string, std::size_t> remaining;
    std::map<std::string, std::vector<std::string>> children;
    for (const auto& [id, cls] : model.classes) {
        remaining[id] = cls.parents.size();
        for (const auto& parent : cls.parents) {
            children[parent].push_back(id);
        }
    }
    std::set<std::string> ready;
    for (const auto& [id, count] : remaining) {
        if (count == 0) {
            ready.insert(id);
        }
    }
    std::vector<std::string> order;
    while (!ready.empty()) {
        std::string id = *ready.begin();
        ready.erase(ready.begin());
        order.push_back(id);
        for (const auto& child : children[id]) {
            if (--remaining[child] == 0) {
                ready.insert(child);
            }
        }
    }
    return order;
}

std::vector<integration_command> build_commands(const std::vector<match>& matches,
                                                const ontology& model_a,
                                                const ontology& model_b) {
    std::map<std::string, const match*> by_b;
    for (const auto& m : matches) {
        if (!model_a.classes.contains(m.class_a)) {
            fail(errc::unknown_class, "match names unknown A class '" + m.class_a + "'");
        }
        if (!model_b.classes.contains(m.class_b)) {
            fail(errc::unknown_class, "match names unknown B class '" + m.class_b + "'");
        }
        if (!by_b.emplace(m.class_b, &m).second) {
            fail(errc::invalid_command, "B class '" + m.class_b + "' matched twice");
        }
    }
    std::set<std::string> seen_a;
    for (const auto& m : matches) {
        if (!seen_a.insert(m.class_a).second) {
            fail(errc::invalid_command, "A class '" + m.class_a + "' matched twice");
        }
    }

    std::vector<integration_command> commands;
    for (const auto& b_id : topo_order(model_b)) {
        auto it = by_b.find(b_id);
        if (it != by_b.end()) {
            commands.push_back({integration_command::kind_t::merge, it->second->class_a, b_id,
                                it->second->score});
        } else {
            commands.push_back({integration_command::kind_t::copy, "", b_id, 0.0});
        }
    }
    return commands;
}

// ============================================================================
// Merge execution
// ============================================================================

static std::string free_id(const std::string& wanted, const auto& taken) {
    if (!taken.contains(wanted)) {
        return wanted;
    }
    for (int n = 2;; ++n) {
        std::string candidate = wanted + "_" + std::to_string(n);
        if (!taken.contains(candidate)) {
            return candidate;
        }
    }
}

// True if `candidate` is `cls` or one of its descendants in `model`; adopting
// such a parent would close a subclass cycle.
static bool reaches(const ontology& model, const std::string& candidate, const std::string& cls) {
    if (candidate == cls) {
        return true;
    }
    return model.classes.contains(candidate) &&
           subclass_closure(model, candidate).contains(cls);
}

integration_result execute_integration(const ontology& model_a, const ontology& model_b,
                                       const std::vector<integration_command>& commands) {
    integration_result result;
    result.merged = model_a;
    ontology& merged = result.merged;

    // B class id -> id in the merged model
    std::map<std::string, std::string> class_map;
    for (const auto& command : commands) {
        const auto b_it = model_b.classes.find(command.class_b);
        if (b_it == model_b.classes.end()) {
            fail(errc::invalid_command, "command names unknown B class '" + command.class_b + "'");
        }
        const class_def& b_cls = b_it->second;

        if (command.kind == integration_command::kind_t::merge) {
            auto a_it = merged.classes.find(command.class_a);
            if (a_it == merged.classes.end()) {
                fail(errc::invalid_command,
                     "merge targets unknown A class '" + command.class_a + "'");
            }
            if (!class_map.emplace(command.class_b, command.class_a).second) {
                fail(errc::invalid_command, "B class '" + command.class_b + "' handled twice");
            }
            class_def& target = a_it->second;
            if (b_cls.label != target.label &&
                std::find(target.aliases.begin(), target.aliases.end(), b_cls.label) ==
                    target.aliases.end()) {
                target.aliases.push_back(b_cls.label);
                std::sort(target.aliases.begin(), target.aliases.end());
            }
            // The merged class keeps both hierarchies: adopt the B parents that
            // resolved earlier, unless doing so would close a cycle.
            for (const auto& b_parent : b_cls.parents) {
                auto mapped = class_map.find(b_parent);
                if (mapped == class_map.end()) {
                    fail(errc::invalid_command, "merge of '" + command.class_b +
                                                    "' precedes its parent '" + b_parent + "'");
                }
                const std::string& parent_id = mapped->second;
                if (std::find(target.parents.begin(), target.parents.end(), parent_id) !=
                    target.parents.end()) {
                    continue;
                }
                if (reaches(merged, parent_id, target.id)) {
                    continue;
                }
                target.parents.push_back(parent_id);
                std::sort(target.parents.begin(), target.parents.end());
            }
        } else {
            std::string new_id = free_id(command.class_b, merged.classes);
            if (!class_map.emplace(command.class_b, new_id).second) {
                fail(errc::invalid_command, "B class '" + command.class_b + "' handled twice");
            }
            class_def copy;
            copy.id = new_id;
            copy.label = b_cls.label;
            for (const auto& b_parent : b_cls.parents) {
                auto mapped = class_map.find(b_parent);
                if (mapped == class_map.end()) {
                    fail(errc::invalid_command, "copy of '" + command.class_b +
                                                    "' precedes its parent '" + b_parent + "'");
                }
                copy.parents.push_back(mapped->second);
            }
            std::sort(copy.parents.begin(), copy.parents.end());
            copy.parents.erase(std::unique(copy.parents.begin(), copy.parents.end()),
                               copy.parents.end());
            merged.classes.emplace(new_id, std::move(copy));
        }
    }
    for (const auto& [b_id, _] : model_b.classes) {
        if (!class_map.contains(b_id)) {
            fail(errc::invalid_command, "no command covers B class '" + b_id + "'");
        }
    }

    // Carry over B properties; identical definitions collapse, id clashes get
    // a numeric suffix.
    std::map<std::string, std::string> property_map;
    for (const auto& [b_id, b_prop] : model_b.properties) {
        property_def carried;
        carried.label = b_prop.label;
        carried.domain = class_map.at(b_prop.domain);
        carried.range = is_datatype_tag(b_prop.range) ? b_prop.range : class_map.at(b_prop.range);
        auto existing = merged.properties.find(b_id);
        if (existing != merged.properties.end() && existing->second.label == carried.label &&
            existing->second.domain == carried.domain && existing->second.range == carried.range) {
            property_map[b_id] = b_id;
            continue;
        }
        carried.id = free_id(b_id, merged.properties);
        property_map[b_id] = carried.id;
        merged.properties.emplace(carried.id, std::move(carried));
    }

    // Instance identity across ontologies is the normalized id; first pass
    // decides which B instances collapse into A ones.
    std::map<std::string, std::string> identity_of_a;
    for (const auto& [a_id, _] : model_a.instances) {
        identity_of_a.emplace(normalize_label(a_id), a_id);
    }
    std::map<std::string, std::string> instance_map;
    for (const auto& [b_id, b_inst] : model_b.instances) {
        auto same = identity_of_a.find(normalize_label(b_id));
        if (same != identity_of_a.end()) {
            instance_map[b_id] = same->second;
            ++result.deduplicated_instances;
            continue;
        }
        std::string new_id = free_id(b_id, merged.instances);
        instance_map[b_id] = new_id;
        instance_def placeholder;
        placeholder.id = new_id;
        merged.instances.emplace(new_id, std::move(placeholder));
    }
    for (const auto& [b_id, b_inst] : model_b.instances) {
        const std::string& target_id = instance_map.at(b_id);
        if (model_a.instances.contains(target_id)) {
            continue; // deduplicated: the A instance stays as-is
        }
        instance_def& target = merged.instances.at(target_id);
        target.class_id = class_map.at(b_inst.class_id);
        for (const auto& [b_prop, values] : b_inst.values) {
            const std::string& prop_id = property_map.at(b_prop);
            bool class_ranged = !is_datatype_tag(merged.properties.at(prop_id).range);
            std::vector<std::string> carried;
            for (const auto& value : values) {
                carried.push_back(class_ranged ? instance_map.at(value) : value);
            }
            std::sort(carried.begin(), carried.end());
            carried.erase(std::unique(carried.begin(), carried.end()), carried.end());
            target.values[prop_id] = std::move(carried);
        }
    }

    validate(merged); // a failure here is a defect in the merge, not an input error
    return result;
}

// ============================================================================
// Quality
// ============================================================================

quality_report evaluate_quality(const alignment& obtained, const alignment& gold) {
    quality_report report;
    report.obtained = obtained;
    report.expected = gold;
    std::sort(report.obtained.begin(), report.obtained.end());
    std::sort(report.expected.begin(), report.expected.end());
    std::set_intersection(report.obtained.begin(), report.obtained.end(),
                          report.expected.begin(), report.expected.end(),
                          std::back_inserter(report.correct));

    if (report.expected.empty()) {
        report.unconditional = 1.0;
        report.flags.insert("empty-gold");
    } else {
        report.unconditional =
            static_cast<double>(report.correct.size()) / static_cast<double>(report.expected.size());
    }
    if (report.obtained.empty()) {
        report.conditional = 1.0;
        report.flags.insert("zero-obtained");
    } else {
        report.conditional =
            static_cast<double>(report.correct.size()) / static_cast<double>(report.obtained.size());
    }
    return report;
}

// ============================================================================
// Pipeline
// ============================================================================

pipeline_result integrate_pipeline(const ontology& model_a, const ontology& model_b,
                                   const std::vector<std::string>& estimators,
                                   const aggregation_policy& policy,
                                   const estimator_config& config) {
    if (estimators.empty()) {
        fail(errc::empty_input, "estimator list is empty");
    }
    aggregation_policy normalized = policy;
    normalized.validate_and_normalize();

    pipeline_result result;
    for (const auto& estimator : estimators) {
        result.matrices.push_back(estimate_matrix(estimator, model_a, model_b, config));
    }
    result.aggregate = aggregate_matrices(result.matrices, normalized);
    result.matches = select_matches(result.aggregate, normalized.threshold);
    result.commands = build_commands(result.matches, model_a, model_b);
    integration_result executed = execute_integration(model_a, model_b, result.commands);
    result.merged = std::move(executed.merged);
    result.deduplicated_instances = executed.deduplicated_instances;
    return result;
}

} // namespace ontomesh
