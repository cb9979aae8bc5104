#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ontomesh/integrate.hpp"
#include "ontomesh/ontology.hpp"
#include "ontomesh/similarity.hpp"

namespace ontomesh {

/// The shipped demo pair: one ontology for factories and products, one for
/// products and orders, plus the artifacts needed to integrate and score them.
struct demo_fixture {
    ontology factories;
    ontology orders;
    alignment gold;
    synonym_dictionary synonyms;
    upper_map upper;
};

enum class fixture_scale { small, medium };

/// Deterministic fixture construction; the same (scale, flag) always yields
/// byte-identical files. convergent_naming adds same-named but semantically
/// different leaf products on both sides to provoke excessive adjustments.
demo_fixture generate_fixture(fixture_scale scale, bool convergent_naming);

/// Writes factories.onto.json, orders.onto.json, gold.align.json,
/// synonyms.dict.json and upper.upper.json into `dir` in canonical form.
void write_fixture(const demo_fixture& fixture, const std::filesystem::path& dir);

/// The matching policy the demo pair is built for: lexical plus flooding.
aggregation_policy demo_policy();
std::vector<std::string> demo_estimators();

struct producer_constraint {
    enum class op_t { le, ge, eq };
    std::string property; // property id on the producing instance
    op_t op = op_t::le;
    std::string value; // compared numerically when both sides parse as numbers
};

/// Producing instances whose produces-like property (found by label) yields an
/// instance of `product_class`, transitively; constraints filter on literal
/// property values.
std::vector<std::string> find_producers(const ontology& merged, const std::string& product_class,
                                        const std::vector<producer_constraint>& constraints = {});

/// Sibling classes plus classes whose label-or-alias identity overlaps the
/// queried class, ordered by lexical similarity to its label, descending.
std::vector<std::string> find_substitutes(const ontology& merged,
                                          const std::string& product_class);

} // namespace ontomesh
