#include "ontomesh/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include <json.hpp>

#include "ontomesh/errors.hpp"
#include "ontomesh/text.hpp"

namespace ontomesh {

using ordered_json = nlohmann::ordered_json;

bool is_estimator_name(std::string_view name) {
    for (auto known : kEstimatorNames) {
        if (name == known) {
            return true;
        }
    }
    return false;
}

// ============================================================================
// Synonym dictionary
// ============================================================================

synonym_dictionary::synonym_dictionary(const std::vector<std::vector<std::string>>& groups) {
    // Union-find over words so overlapping groups collapse into one.
    std::map<std::string, std::string> parent;
    auto find = [&](std::string word) {
        while (parent.at(word) != word) {
            word = parent.at(word);
        }
        return word;
    };
    for (const auto& group : groups) {
        std::string anchor;
        for (const auto& raw : group) {
            std::string word = normalize_label(raw);
            if (word.empty()) {
                continue;
            }
            parent.try_emplace(word, word);
            if (anchor.empty()) {
                anchor = word;
            } else {
                parent[find(word)] = find(anchor);
            }
        }
    }
    std::map<std::string, int> root_ids;
    for (const auto& [word, _] : parent) {
        std::string root = find(word);
        auto [it, inserted] = root_ids.try_emplace(root, static_cast<int>(root_ids.size()));
        word_to_group_[word] = it->second;
    }
}

bool synonym_dictionary::same_group(std::string_view word_a, std::string_view word_b) const {
    auto a = word_to_group_.find(normalize_label(word_a));
    if (a == word_to_group_.end()) {
        return false;
    }
    auto b = word_to_group_.find(normalize_label(word_b));
    return b != word_to_group_.end() && a->second == b->second;
}

std::vector<std::vector<std::string>> synonym_dictionary::groups() const {
    std::map<int, std::vector<std::string>> by_group;
    for (const auto& [word, group] : word_to_group_) {
        by_group[group].push_back(word); // words arrive sorted from the map
    }
    std::vector<std::vector<std::string>> out;
    for (auto& [_, words] : by_group) {
        out.push_back(std::move(words));
    }
    std::sort(out.begin(), out.end());
    return out;
}

synonym_dictionary load_dictionary(std::string_view bytes) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(bytes);
    } catch (const nlohmann::json::exception& ex) {
        fail(errc::parse_error, ex.what());
    }
    if (!doc.is_object() || !doc.contains("groups") || !doc["groups"].is_array()) {
        fail(errc::parse_error, "dictionary document: missing 'groups' array");
    }
    std::vector<std::vector<std::string>> groups;
    for (const auto& group : doc["groups"]) {
        if (!group.is_array()) {
            fail(errc::parse_error, "dictionary group must be an array of words");
        }
        std::vector<std::string> words;
        for (const auto& word : group) {
            if (!word.is_string()) {
                fail(errc::parse_error, "dictionary word must be a string");
            }
            words.push_back(word.get<std::string>());
        }
        groups.push_back(std::move(words));
    }
    return synonym_dictionary(groups);
}

std::string save_dictionary(const synonym_dictionary& dict) {
    ordered_json doc;
    doc["groups"] = dict.groups();
    return doc.dump(2) + "\n";
}

// ============================================================================
// Upper map
// ============================================================================

bool upper_map::is_ancestor(const std::string& ancestor, const std::string& category) const {
    std::string current = category;
    while (true) {
        auto it = categories.find(current);
        if (it == categories.end() || it->second.empty()) {
            return false;
        }
        if (it->second == ancestor) {
            return true;
        }
        current = it->second;
    }
}

upper_map load_upper_map(std::string_view bytes) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(bytes);
    } catch (const nlohmann::json::exception& ex) {
        fail(errc::parse_error, ex.what());
    }
    if (!doc.is_object() || !doc.contains("categories") || !doc["categories"].is_array() ||
        !doc.contains("anchors") || !doc["anchors"].is_object()) {
        fail(errc::parse_error, "upper-map document: need 'categories' array and 'anchors' object");
    }
    upper_map map;
    for (const auto& record : doc["categories"]) {
        if (!record.is_object() || !record.contains("id") || !record["id"].is_string()) {
            fail(errc::parse_error, "upper-map category record: missing 'id'");
        }
        std::string id = record["id"].get<std::string>();
        std::string parent;
        if (record.contains("parent") && record["parent"].is_string()) {
            parent = record["parent"].get<std::string>();
        }
        map.categories[id] = parent;
    }
    for (const auto& [id, parent] : map.categories) {
        if (!parent.empty() && !map.categories.contains(parent)) {
            fail(errc::validation_error,
                 "upper category '" + id + "' references unknown parent '" + parent + "'");
        }
    }
    for (const auto& [token, category] : doc["anchors"].items()) {
        if (!category.is_string()) {
            fail(errc::parse_error, "upper-map anchor target must be a string");
        }
        std::string target = category.get<std::string>();
        if (!map.categories.contains(target)) {
            fail(errc::validation_error,
                 "anchor '" + token + "' targets unknown category '" + target + "'");
        }
        map.anchors[normalize_label(token)] = target;
    }
    return map;
}

std::string save_upper_map(const upper_map& map) {
    ordered_json doc;
    ordered_json categories = ordered_json::array();
    for (const auto& [id, parent] : map.categories) {
        ordered_json record;
        record["id"] = id;
        if (!parent.empty()) {
            record["parent"] = parent;
        }
        categories.push_back(std::move(record));
    }
    doc["categories"] = std::move(categories);
    doc["anchors"] = map.anchors;
    return doc.dump(2) + "\n";
}

// ============================================================================
// Pairwise estimators
// ============================================================================

double lexical_similarity(std::string_view label_a, std::string_view label_b) {
    if (label_a.empty() || label_b.empty()) {
        fail(errc::empty_label, "lexical similarity needs non-empty labels");
    }
    std::string a = normalize_label(label_a);
    std::string b = normalize_label(label_b);
    if (a == b) {
        return 1.0;
    }
    std::size_t longest = std::max(a.size(), b.size());
    if (longest == 0) {
        return 1.0;
    }
    double distance = static_cast<double>(levenshtein_distance(a, b));
    return 1.0 - distance / static_cast<double>(longest);
}

double dictionary_similarity(std::string_view label_a, std::string_view label_b,
                             const synonym_dictionary& dict) {
    if (label_a.empty() || label_b.empty()) {
        fail(errc::empty_label, "dictionary similarity needs non-empty labels");
    }
    if (normalize_label(label_a) == normalize_label(label_b) ||
        dict.same_group(label_a, label_b)) {
        return 1.0;
    }
    return lexical_similarity(label_a, label_b);
}

// Greedy best-first pairing of two label sets at lexical similarity >= 0.8.
// Tie-break is on the unordered label pair so the count is symmetric.
static std::size_t greedy_pair_count(const std::set<std::string>& side_a,
                                     const std::set<std::string>& side_b) {
    struct candidate {
        double score;
        std::string lo, hi;
        const std::string* a;
        const std::string* b;
    };
    std::vector<candidate> candidates;
    for (const auto& la : side_a) {
        for (const auto& lb : side_b) {
            double score = lexical_similarity(la, lb);
            if (score >= 0.8) {
                candidates.push_back({score, std::min(la, lb), std::max(la, lb), &la, &lb});
            }
        }
    }
    std::sort(candidates.begin(), candidates.end(), [](const candidate& x, const candidate& y) {
        if (x.score != y.score) {
            return x.score > y.score;
        }
        if (x.lo != y.lo) {
            return x.lo < y.lo;
        }
        return x.hi < y.hi;
    });
    std::set<const std::string*> used;
    std::size_t pairs = 0;
    for (const auto& c : candidates) {
        if (used.contains(c.a) || used.contains(c.b)) {
            continue;
        }
        used.insert(c.a);
        used.insert(c.b);
        ++pairs;
    }
    return pairs;
}

double structural_similarity(const ontology& model_a, const std::string& class_a,
                             const ontology& model_b, const std::string& class_b) {
    class_signature sig_a = neighborhood(model_a, class_a);
    class_signature sig_b = neighborhood(model_b, class_b);
    std::size_t size_a =
        sig_a.parent_labels.size() + sig_a.child_labels.size() + sig_a.property_labels.size();
    std::size_t size_b =
        sig_b.parent_labels.size() + sig_b.child_labels.size() + sig_b.property_labels.size();
    if (size_a + size_b == 0) {
        return 0.0;
    }
    std::size_t matched = greedy_pair_count(sig_a.parent_labels, sig_b.parent_labels) +
                          greedy_pair_count(sig_a.child_labels, sig_b.child_labels) +
                          greedy_pair_count(sig_a.property_labels, sig_b.property_labels);
    return 2.0 * static_cast<double>(matched) / static_cast<double>(size_a + size_b);
}

double instance_similarity(const std::set<std::string>& ext_a,
                           const std::set<std::string>& ext_b, instance_mode mode) {
    if (ext_a.empty() && ext_b.empty()) {
        return 0.0;
    }
    std::vector<std::string> common;
    std::set_intersection(ext_a.begin(), ext_a.end(), ext_b.begin(), ext_b.end(),
                          std::back_inserter(common));
    double inter = static_cast<double>(common.size());
    switch (mode) {
        case instance_mode::jaccard: {
            double uni = static_cast<double>(ext_a.size() + ext_b.size()) - inter;
            return uni == 0.0 ? 0.0 : inter / uni;
        }
        case instance_mode::symmetric:
            return 2.0 * inter / static_cast<double>(ext_a.size() + ext_b.size());
        case instance_mode::inclusion:
            return ext_a.empty() ? 0.0 : inter / static_cast<double>(ext_a.size());
    }
    return 0.0;
}

std::set<std::string> instance_extension(const ontology& model, const std::string& class_id) {
    std::set<std::string> extension;
    for (const auto& id : instances_of(model, class_id, /*transitive=*/true)) {
        extension.insert(normalize_label(id));
    }
    return extension;
}

// Anchor a class into the upper hierarchy: first anchored token of its own
// label, then of ancestor labels walked nearest-first (ties by id).
static std::optional<std::string> anchor_class(const ontology& model, const std::string& class_id,
                                               const upper_map& map) {
    auto try_label = [&](const std::string& label) -> std::optional<std::string> {
        for (const auto& token : split_label_tokens(label)) {
            auto it = map.anchors.find(token);
            if (it != map.anchors.end()) {
                return it->second;
            }
        }
        return std::nullopt;
    };
    if (auto hit = try_label(model.classes.at(class_id).label)) {
        return hit;
    }
    std::set<std::string> seen{class_id};
    std::deque<std::string> frontier{class_id};
    while (!frontier.empty()) {
        std::string current = std::move(frontier.front());
        frontier.pop_front();
        // parents are sorted, so same-distance ancestors are visited by id
        for (const auto& parent : model.classes.at(current).parents) {
            if (!seen.insert(parent).second) {
                continue;
            }
            if (auto hit = try_label(model.classes.at(parent).label)) {
                return hit;
            }
            frontier.push_back(parent);
        }
    }
    return std::nullopt;
}

upper_opinion upper_anchor_similarity(const ontology& model_a, const std::string& class_a,
                                      const ontology& model_b, const std::string& class_b,
                                      const upper_map& map) {
    if (!model_a.classes.contains(class_a)) {
        fail(errc::unknown_class, "no class '" + class_a + "' in '" + model_a.name + "'");
    }
    if (!model_b.classes.contains(class_b)) {
        fail(errc::unknown_class, "no class '" + class_b + "' in '" + model_b.name + "'");
    }
    auto cat_a = anchor_class(model_a, class_a, map);
    auto cat_b = anchor_class(model_b, class_b, map);
    if (!cat_a || !cat_b) {
        return {0.0, false};
    }
    if (*cat_a == *cat_b) {
        return {1.0, true};
    }
    if (map.is_ancestor(*cat_a, *cat_b) || map.is_ancestor(*cat_b, *cat_a)) {
        return {0.5, true};
    }
    return {0.0, true};
}

// ============================================================================
// Similarity flooding
// ============================================================================

namespace {

struct pair_graph {
    // incoming[x] lists (source pair, weight) edges feeding pair x
    std::vector<std::vector<std::pair<std::size_t, double>>> incoming;
};

using edge_list = std::vector<std::pair<std::size_t, std::size_t>>; // (from, to) class indices

// Directed class edges of one edge kind within one ontology.
static edge_list subclass_edges(const ontology& model, const std::map<std::string, std::size_t>& index) {
    edge_list edges;
    for (const auto& [id, cls] : model.classes) {
        for (const auto& parent : cls.parents) {
            edges.emplace_back(index.at(id), index.at(parent));
        }
    }
    return edges;
}

static std::map<std::string, edge_list> property_edges(const ontology& model,
                                                       const std::map<std::string, std::size_t>& index) {
    std::map<std::string, edge_list> by_label;
    for (const auto& [id, prop] : model.properties) {
        if (is_datatype_tag(prop.range) || !model.classes.contains(prop.range)) {
            continue;
        }
        by_label[normalize_label(prop.label)].emplace_back(index.at(prop.domain),
                                                           index.at(prop.range));
    }
    for (auto& [label, edges] : by_label) {
        std::sort(edges.begin(), edges.end());
        edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    }
    return by_label;
}

// One edge kind contributes pair edges (a,b) -> (a',b') for every a->a' in A
// and b->b' in B; each such edge weighs 1/outdegree of (a,b) within the kind.
static void add_kind(pair_graph& graph, const edge_list& edges_a, const edge_list& edges_b,
                     std::size_t cols) {
    if (edges_a.empty() || edges_b.empty()) {
        return;
    }
    std::map<std::size_t, std::size_t> outdeg_a, outdeg_b;
    for (const auto& [from, to] : edges_a) {
        ++outdeg_a[from];
    }
    for (const auto& [from, to] : edges_b) {
        ++outdeg_b[from];
    }
    for (const auto& [a_from, a_to] : edges_a) {
        for (const auto& [b_from, b_to] : edges_b) {
            std::size_t source = a_from * cols + b_from;
            std::size_t target = a_to * cols + b_to;
            double weight = 1.0 / static_cast<double>(outdeg_a[a_from] * outdeg_b[b_from]);
            graph.incoming[target].emplace_back(source, weight);
        }
    }
}

} // namespace

similarity_matrix similarity_flooding(const ontology& model_a, const ontology& model_b,
                                      const flooding_params& params,
                                      const estimator_config& config) {
    if (params.epsilon <= 0.0 || params.max_iterations < 1) {
        fail(errc::invalid_policy, "flooding needs epsilon > 0 and max_iterations >= 1");
    }
    if (!is_estimator_name(params.seed_matrix) || params.seed_matrix == "flooding") {
        fail(errc::seed_estimator_unavailable,
             "'" + params.seed_matrix + "' cannot seed the flooding grid");
    }

    similarity_matrix seed = estimate_matrix(params.seed_matrix, model_a, model_b, config);
    const std::size_t rows = seed.rows.size();
    const std::size_t cols = seed.cols.size();
    const std::size_t cells = rows * cols;

    std::map<std::string, std::size_t> index_a, index_b;
    for (std::size_t i = 0; i < rows; ++i) {
        index_a[seed.rows[i]] = i;
    }
    for (std::size_t j = 0; j < cols; ++j) {
        index_b[seed.cols[j]] = j;
    }

    pair_graph graph;
    graph.incoming.resize(cells);
    add_kind(graph, subclass_edges(model_a, index_a), subclass_edges(model_b, index_b), cols);
    auto props_a = property_edges(model_a, index_a);
    auto props_b = property_edges(model_b, index_b);
    for (const auto& [label, edges_a] : props_a) {
        auto it = props_b.find(label);
        if (it != props_b.end()) {
            add_kind(graph, edges_a, it->second, cols);
        }
    }

    similarity_matrix result = seed;
    result.estimator = "flooding";
    std::vector<double> current = seed.scores;
    std::vector<double> next(cells);
    bool capped = true;
    for (int iteration = 0; iteration < params.max_iterations; ++iteration) {
        double grid_max = 0.0;
        for (std::size_t x = 0; x < cells; ++x) {
            double value = seed.scores[x];
            for (const auto& [source, weight] : graph.incoming[x]) {
                value += current[source] * weight;
            }
            next[x] = value;
            grid_max = std::max(grid_max, value);
        }
        if (grid_max > 0.0) {
            for (auto& value : next) {
                value /= grid_max;
            }
        }
        double residual = 0.0;
        for (std::size_t x = 0; x < cells; ++x) {
            residual = std::max(residual, std::abs(next[x] - current[x]));
        }
        current.swap(next);
        if (residual < params.epsilon) {
            capped = false;
            break;
        }
    }
    if (capped) {
        result.flags.insert("iteration-cap");
    }
    result.scores = std::move(current);
    return result;
}

// ============================================================================
// Matrix fill
// ============================================================================

similarity_matrix estimate_matrix(const std::string& estimator, const ontology& model_a,
                                  const ontology& model_b, const estimator_config& config) {
    if (!is_estimator_name(estimator)) {
        fail(errc::unknown_estimator, "'" + estimator + "' is not an estimator");
    }
    if (estimator == "flooding") {
        return similarity_flooding(model_a, model_b, config.flooding, config);
    }

    similarity_matrix matrix;
    matrix.estimator = estimator;
    for (const auto& [id, _] : model_a.classes) {
        matrix.rows.push_back(id);
    }
    for (const auto& [id, _] : model_b.classes) {
        matrix.cols.push_back(id);
    }
    matrix.scores.assign(matrix.rows.size() * matrix.cols.size(), 0.0);

    std::vector<std::set<std::string>> ext_a, ext_b;
    if (estimator.starts_with("instance-")) {
        for (const auto& id : matrix.rows) {
            ext_a.push_back(instance_extension(model_a, id));
        }
        for (const auto& id : matrix.cols) {
            ext_b.push_back(instance_extension(model_b, id));
        }
    }

    bool all_covered = true;
    for (std::size_t r = 0; r < matrix.rows.size(); ++r) {
        const class_def& cls_a = model_a.classes.at(matrix.rows[r]);
        for (std::size_t c = 0; c < matrix.cols.size(); ++c) {
            const class_def& cls_b = model_b.classes.at(matrix.cols[c]);
            double score = 0.0;
            if (estimator == "lexical") {
                score = lexical_similarity(cls_a.label, cls_b.label);
            } else if (estimator == "dictionary") {
                score = dictionary_similarity(cls_a.label, cls_b.label, config.dictionary);
            } else if (estimator == "structural") {
                score = structural_similarity(model_a, cls_a.id, model_b, cls_b.id);
            } else if (estimator == "instance-jaccard") {
                score = instance_similarity(ext_a[r], ext_b[c], instance_mode::jaccard);
            } else if (estimator == "instance-symmetric") {
                score = instance_similarity(ext_a[r], ext_b[c], instance_mode::symmetric);
            } else if (estimator == "instance-inclusion") {
                score = instance_similarity(ext_a[r], ext_b[c], instance_mode::inclusion);
            } else if (estimator == "upper") {
                upper_opinion opinion =
                    upper_anchor_similarity(model_a, cls_a.id, model_b, cls_b.id, config.upper);
                score = opinion.score;
                all_covered = all_covered && opinion.covered;
            }
            matrix.at(r, c) = score;
        }
    }
    if (estimator == "upper" && !all_covered) {
        matrix.flags.insert("partial-coverage");
    }
    return matrix;
}

} // namespace ontomesh
