#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ontomesh/ontology.hpp"

namespace ontomesh {

// ============================================================================
// Matrix and estimator configuration
// ============================================================================

/// Scores for all class pairs of two ontologies; rows follow canonical
/// (sorted-id) class order of A, cols of B. Every score lies in [0, 1].
struct similarity_matrix {
    std::vector<std::string> rows;
    std::vector<std::string> cols;
    std::vector<double> scores; // row-major, rows.size() * cols.size()
    std::string estimator;
    // "iteration-cap": flooding stopped on the iteration limit.
    // "partial-coverage": some cells had no anchor opinion and were scored 0.
    std::set<std::string> flags;

    double at(std::size_t r, std::size_t c) const { return scores[r * cols.size() + c]; }
    double& at(std::size_t r, std::size_t c) { return scores[r * cols.size() + c]; }

    bool operator==(const similarity_matrix&) const = default;
};

/// Synonym groups; overlapping groups are unioned at load so membership is
/// symmetric and transitive.
class synonym_dictionary {
public:
    synonym_dictionary() = default;
    explicit synonym_dictionary(const std::vector<std::vector<std::string>>& groups);

    bool same_group(std::string_view word_a, std::string_view word_b) const;
    std::vector<std::vector<std::string>> groups() const;
    bool empty() const { return word_to_group_.empty(); }

private:
    std::map<std::string, int> word_to_group_;
};

synonym_dictionary load_dictionary(std::string_view bytes);
std::string save_dictionary(const synonym_dictionary& dict);

/// Small upper-category hierarchy with label-token anchors, used to map
/// classes from different ontologies into one shared vocabulary.
struct upper_map {
    std::map<std::string, std::string> categories; // category id -> parent ("" = root)
    std::map<std::string, std::string> anchors;    // lowercase token -> category id

    bool contains_category(const std::string& id) const { return categories.contains(id); }
    /// True iff `ancestor` is reachable from `category` via parent links.
    bool is_ancestor(const std::string& ancestor, const std::string& category) const;
};

upper_map load_upper_map(std::string_view bytes);
std::string save_upper_map(const upper_map& map);

struct flooding_params {
    double epsilon = 1e-4;
    int max_iterations = 100;
    std::string seed_matrix = "lexical";
};

struct estimator_config {
    synonym_dictionary dictionary;
    upper_map upper;
    flooding_params flooding;
};

inline constexpr std::string_view kEstimatorNames[] = {
    "lexical",          "dictionary",         "structural",         "flooding",
    "instance-jaccard", "instance-symmetric", "instance-inclusion", "upper",
};

bool is_estimator_name(std::string_view name);

// ============================================================================
// Pairwise estimators
// ============================================================================

/// Normalized edit similarity: 1 - lev(norm(a), norm(b)) / max(|norm(a)|, |norm(b)|).
/// Symmetric; 1.0 exactly when the normalized labels are equal.
double lexical_similarity(std::string_view label_a, std::string_view label_b);

/// 1.0 when the normalized labels are equal or share a synonym group,
/// otherwise the lexical score. Never below lexical_similarity.
double dictionary_similarity(std::string_view label_a, std::string_view label_b,
                             const synonym_dictionary& dict);

/// Dice overlap of the two structural signatures: 2|M| / (|Sa| + |Sb|), where M
/// greedily pairs signature labels (per component) at lexical similarity >= 0.8.
/// Two empty signatures score 0.0.
double structural_similarity(const ontology& model_a, const std::string& class_a,
                             const ontology& model_b, const std::string& class_b);

enum class instance_mode { jaccard, symmetric, inclusion };

/// Set arithmetic over instance extensions; `inclusion` is asymmetric
/// (|A∩B| / |A|). Both sets empty scores 0.0 in every mode.
double instance_similarity(const std::set<std::string>& ext_a,
                           const std::set<std::string>& ext_b, instance_mode mode);

/// Transitive extension of a class with ids lowered to the cross-ontology
/// identity key.
std::set<std::string> instance_extension(const ontology& model, const std::string& class_id);

struct upper_opinion {
    double score = 0.0;
    bool covered = false; // false when either class found no anchor
};

/// Anchors both classes into the upper-category hierarchy by label token
/// (falling back to ancestor labels): same category 1.0, one an ancestor of
/// the other 0.5, unrelated 0.0, unanchored no-opinion.
upper_opinion upper_anchor_similarity(const ontology& model_a, const std::string& class_a,
                                      const ontology& model_b, const std::string& class_b,
                                      const upper_map& map);

// ============================================================================
// Whole-matrix estimators
// ============================================================================

/// Fixpoint propagation over the pairwise-connectivity graph of the two
/// ontologies, seeded from `params.seed_matrix` and normalized by the grid
/// maximum each round.
similarity_matrix similarity_flooding(const ontology& model_a, const ontology& model_b,
                                      const flooding_params& params,
                                      const estimator_config& config = {});

/// Fills the full |A| x |B| grid with the named estimator.
similarity_matrix estimate_matrix(const std::string& estimator, const ontology& model_a,
                                  const ontology& model_b, const estimator_config& config = {});

} // namespace ontomesh
