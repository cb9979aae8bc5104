#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ontomesh/ontology.hpp"
#include "ontomesh/similarity.hpp"

namespace ontomesh {

// ============================================================================
// Policy and commands
// ============================================================================

/// Which estimator matrices count, and how much; weights are normalized to
/// sum 1 when validated.
struct aggregation_policy {
    std::map<std::string, double> weights;
    double threshold = 0.7;       // tau in (0, 1]
    std::string tie_break = "score-row-col";

    /// Throws errc::invalid_policy unless at least one weight is positive,
    /// none is negative and threshold lies in (0, 1]; normalizes weights.
    void validate_and_normalize();
};

struct match {
    std::string class_a;
    std::string class_b;
    double score = 0.0;

    bool operator==(const match&) const = default;
};

struct integration_command {
    enum class kind_t { merge, copy };
    kind_t kind;
    std::string class_a; // merge only
    std::string class_b; // merged or copied B-side class
    double score = 0.0;  // merge only
    // Copies always originate from the B side; A is the base model.

    bool operator==(const integration_command&) const = default;
};

using alignment = std::vector<std::pair<std::string, std::string>>;

alignment load_alignment(std::string_view bytes);
std::string save_alignment(const alignment& pairs);

// ============================================================================
// Pipeline stages
// ============================================================================

/// Cell-wise weighted average of matrices sharing one row/col frame; weights
/// are renormalized over the matrices actually present (absent estimators
/// contribute weight 0). Output is tagged "aggregate".
similarity_matrix aggregate_matrices(const std::vector<similarity_matrix>& matrices,
                                     const aggregation_policy& policy);

/// Greedy one-to-one assignment: repeatedly take the best remaining cell with
/// score >= threshold; ties break by (score desc, row id asc, col id asc).
std::vector<match> select_matches(const similarity_matrix& matrix, double threshold);

/// One Merge per match plus one Copy per unmatched B class, ordered so B-side
/// parents always precede their children.
std::vector<integration_command> build_commands(const std::vector<match>& matches,
                                                const ontology& model_a,
                                                const ontology& model_b);

struct integration_result {
    ontology merged;
    std::size_t deduplicated_instances = 0;
};

/// Executes the command list starting from model_a. Merges keep the A label
/// and record the B label as an alias; copies re-map parents through earlier
/// merges; instances sharing the identity key are deduplicated.
integration_result execute_integration(const ontology& model_a, const ontology& model_b,
                                       const std::vector<integration_command>& commands);

struct quality_report {
    double unconditional = 0.0; // correct / expected
    double conditional = 0.0;   // correct / obtained
    alignment obtained;
    alignment expected;
    alignment correct;
    // "empty-gold" / "zero-obtained": the corresponding ratio was reported as
    // 1.0 by convention because its denominator was empty.
    std::set<std::string> flags;
};

quality_report evaluate_quality(const alignment& obtained, const alignment& gold);

struct pipeline_result {
    ontology merged;
    std::vector<integration_command> commands;
    std::vector<similarity_matrix> matrices; // one per requested estimator
    similarity_matrix aggregate;
    std::vector<match> matches;
    std::size_t deduplicated_instances = 0;
};

/// estimate -> aggregate -> select -> build -> execute, returning every
/// intermediate artifact.
pipeline_result integrate_pipeline(const ontology& model_a, const ontology& model_b,
                                   const std::vector<std::string>& estimators,
                                   const aggregation_policy& policy,
                                   const estimator_config& config = {});

} // namespace ontomesh
