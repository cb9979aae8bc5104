#include "ontomesh/demo.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>

#include "ontomesh/errors.hpp"
#include "ontomesh/text.hpp"

namespace ontomesh {

namespace {

void add_class(ontology& model, const std::string& id, const std::string& label,
               std::vector<std::string> parents = {}) {
    class_def cls;
    cls.id = id;
    cls.label = label;
    cls.parents = std::move(parents);
    std::sort(cls.parents.begin(), cls.parents.end());
    model.classes.emplace(id, std::move(cls));
}

void add_property(ontology& model, const std::string& id, const std::string& domain,
                  const std::string& range) {
    property_def prop;
    prop.id = id;
    prop.label = id;
    prop.domain = domain;
    prop.range = range;
    model.properties.emplace(id, std::move(prop));
}

void add_instance(ontology& model, const std::string& id, const std::string& class_id,
                  std::map<std::string, std::vector<std::string>> values = {}) {
    instance_def inst;
    inst.id = id;
    inst.class_id = class_id;
    inst.values = std::move(values);
    for (auto& [prop, vals] : inst.values) {
        std::sort(vals.begin(), vals.end());
    }
    model.instances.emplace(id, std::move(inst));
}

ontology build_factories(fixture_scale scale, bool convergent) {
    ontology model;
    model.name = "factories";

    add_class(model, "Factory", "Factory");
    add_class(model, "SteelFactory", "SteelFactory", {"Factory"});
    add_class(model, "ToolFactory", "ToolFactory", {"Factory"});
    add_class(model, "Location", "Location");

    // Product taxonomy. The fastener category carries most of the leaves so
    // the flooding signal on its cross-ontology pair is strong.
    add_class(model, "Product", "Product");
    add_class(model, "Fastener", "Fastener", {"Product"});
    add_class(model, "HandTool", "HandTool", {"Product"});
    add_class(model, "Material", "Material", {"Product"});
    for (const char* leaf : {"Bolt", "Nut", "Screw", "Rivet", "Dowel", "Clamp"}) {
        add_class(model, leaf, leaf, {"Fastener"});
    }
    for (const char* leaf : {"Hammer", "Wrench", "Plier"}) {
        add_class(model, leaf, leaf, {"HandTool"});
    }
    add_class(model, "SteelRod", "SteelRod", {"Material"});
    add_class(model, "CopperWire", "CopperWire", {"Material"});
    if (convergent) {
        // Flat washer: a fastener, sharing its name with the pressure washer
        // tool on the orders side.
        add_class(model, "Washer", "Washer", {"Fastener"});
    }
    if (scale == fixture_scale::medium) {
        add_class(model, "PowerTool", "PowerTool", {"Product"});
        for (const char* leaf : {"Drill", "Sander", "Grinder"}) {
            add_class(model, leaf, leaf, {"PowerTool"});
        }
        for (const char* leaf : {"Anchor", "Stud"}) {
            add_class(model, leaf, leaf, {"Fastener"});
        }
        add_class(model, "Granulate", "Granulate", {"Material"});
    }

    add_property(model, "produces", "Factory", "Product");
    add_property(model, "locatedIn", "Factory", "Location");
    add_property(model, "offerPrice", "Factory", "decimal");
    add_property(model, "leadTimeDays", "Factory", "integer");
    add_property(model, "requiresSemiProduct", "Product", "Product");
    add_property(model, "qualityGrade", "Product", "string");

    add_instance(model, "krakow", "Location");
    add_instance(model, "warsaw", "Location");
    add_instance(model, "boltWorks", "SteelFactory",
                 {{"produces", {"boltM8", "nutM8"}},
                  {"locatedIn", {"krakow"}},
                  {"offerPrice", {"10.0"}},
                  {"leadTimeDays", {"5"}}});
    add_instance(model, "fastenerPlant", "SteelFactory",
                 {{"produces", {"boltM10", "screwM5"}},
                  {"locatedIn", {"warsaw"}},
                  {"offerPrice", {"20.0"}},
                  {"leadTimeDays", {"3"}}});
    add_instance(model, "toolForge", "ToolFactory",
                 {{"produces", {"hammerStd", "wrenchStd"}},
                  {"locatedIn", {"krakow"}},
                  {"offerPrice", {"15.5"}},
                  {"leadTimeDays", {"7"}}});
    add_instance(model, "boltM8", "Bolt",
                 {{"requiresSemiProduct", {"steelRod40"}}, {"qualityGrade", {"A"}}});
    add_instance(model, "boltM10", "Bolt",
                 {{"requiresSemiProduct", {"steelRod40"}}, {"qualityGrade", {"B"}}});
    add_instance(model, "nutM8", "Nut", {{"qualityGrade", {"A"}}});
    add_instance(model, "screwM5", "Screw", {{"requiresSemiProduct", {"copperWire2"}}});
    add_instance(model, "hammerStd", "Hammer");
    add_instance(model, "wrenchStd", "Wrench");
    add_instance(model, "steelRod40", "SteelRod");
    add_instance(model, "copperWire2", "CopperWire");
    if (convergent) {
        add_instance(model, "washerFlat10", "Washer", {{"qualityGrade", {"A"}}});
    }
    if (scale == fixture_scale::medium) {
        add_instance(model, "powerForge", "ToolFactory",
                     {{"produces", {"drillD12", "sanderS2"}},
                      {"locatedIn", {"warsaw"}},
                      {"offerPrice", {"32.0"}},
                      {"leadTimeDays", {"10"}}});
        add_instance(model, "drillD12", "Drill");
        add_instance(model, "sanderS2", "Sander");
        add_instance(model, "anchorA3", "Anchor",
                     {{"requiresSemiProduct", {"steelRod40"}}});
        add_instance(model, "granulateG1", "Granulate");
    }
    return model;
}

ontology build_orders(fixture_scale scale, bool convergent) {
    ontology model;
    model.name = "orders";

    add_class(model, "Product", "Product");
    // Same taxonomy as the factories side, under slightly different category
    // names: "Fastening" stays out of lexical reach of "Fastener" while their
    // shared leaves pull them together through flooding.
    add_class(model, "Fastening", "Fastening", {"Product"});
    add_class(model, "HandTools", "HandTools", {"Product"});
    for (const char* leaf : {"Bolt", "Nut", "Screw", "Rivet", "Dowel", "Clamp"}) {
        add_class(model, leaf, leaf, {"Fastening"});
    }
    for (const char* leaf : {"Hammer", "Wrench", "Plier"}) {
        add_class(model, leaf, leaf, {"HandTools"});
    }
    add_class(model, "Order", "Order");
    if (convergent) {
        // Pressure washer: a tool, not the factories side's flat washer.
        add_class(model, "Washer", "Washer", {"HandTools"});
    }
    if (scale == fixture_scale::medium) {
        add_class(model, "PowerTools", "PowerTools", {"Product"});
        for (const char* leaf : {"Drill", "Sander", "Grinder"}) {
            add_class(model, leaf, leaf, {"PowerTools"});
        }
        for (const char* leaf : {"Anchor", "Stud"}) {
            add_class(model, leaf, leaf, {"Fastening"});
        }
    }

    add_property(model, "orderedProduct", "Order", "Product");
    add_property(model, "quantity", "Order", "integer");
    add_property(model, "deadline", "Order", "string");
    add_property(model, "maxPrice", "Order", "decimal");

    add_instance(model, "boltM8", "Bolt");
    add_instance(model, "screwM5", "Screw");
    add_instance(model, "hammerStd", "Hammer");
    add_instance(model, "nutM6", "Nut");
    add_instance(model, "plierBent", "Plier");
    add_instance(model, "order1001", "Order",
                 {{"orderedProduct", {"boltM8"}},
                  {"quantity", {"500"}},
                  {"deadline", {"2026-09-15"}},
                  {"maxPrice", {"12.5"}}});
    add_instance(model, "order1002", "Order",
                 {{"orderedProduct", {"hammerStd"}},
                  {"quantity", {"20"}},
                  {"deadline", {"2026-10-01"}},
                  {"maxPrice", {"18.0"}}});
    if (convergent) {
        add_instance(model, "washerJet5", "Washer");
    }
    if (scale == fixture_scale::medium) {
        add_instance(model, "drillD12", "Drill");
        add_instance(model, "studS8", "Stud");
        add_instance(model, "order1003", "Order",
                     {{"orderedProduct", {"drillD12"}},
                      {"quantity", {"4"}},
                      {"deadline", {"2026-11-20"}},
                      {"maxPrice", {"45.0"}}});
    }
    return model;
}

alignment build_gold(fixture_scale scale) {
    alignment gold = {
        {"Product", "Product"}, {"Fastener", "Fastening"}, {"HandTool", "HandTools"},
        {"Bolt", "Bolt"},       {"Nut", "Nut"},            {"Screw", "Screw"},
        {"Rivet", "Rivet"},     {"Dowel", "Dowel"},        {"Clamp", "Clamp"},
        {"Hammer", "Hammer"},   {"Wrench", "Wrench"},      {"Plier", "Plier"},
    };
    if (scale == fixture_scale::medium) {
        gold.insert(gold.end(), {{"PowerTool", "PowerTools"},
                                 {"Drill", "Drill"},
                                 {"Sander", "Sander"},
                                 {"Grinder", "Grinder"},
                                 {"Anchor", "Anchor"},
                                 {"Stud", "Stud"}});
    }
    std::sort(gold.begin(), gold.end());
    return gold;
}

synonym_dictionary build_synonyms() {
    return synonym_dictionary({{"factory", "plant", "works"},
                               {"product", "commodity", "goods"},
                               {"order", "purchase"},
                               {"location", "site"},
                               {"tool", "implement"}});
}

upper_map build_upper() {
    upper_map map;
    map.categories["entity"] = "";
    map.categories["object"] = "entity";
    map.categories["process"] = "entity";
    map.categories["artifact"] = "object";
    map.categories["organization"] = "object";
    for (const char* token : {"factory", "plant", "works", "forge"}) {
        map.anchors[token] = "organization";
    }
    for (const char* token : {"product", "fastener", "fastening", "bolt", "nut", "screw",
                              "rivet", "dowel", "clamp", "washer", "hammer", "wrench", "plier",
                              "tool", "tools", "material", "drill", "sander", "grinder",
                              "anchor", "stud", "granulate"}) {
        map.anchors[token] = "artifact";
    }
    map.anchors["order"] = "process";
    map.anchors["purchase"] = "process";
    map.anchors["location"] = "object";
    return map;
}

} // namespace

demo_fixture generate_fixture(fixture_scale scale, bool convergent_naming) {
    demo_fixture fixture;
    fixture.factories = build_factories(scale, convergent_naming);
    fixture.orders = build_orders(scale, convergent_naming);
    fixture.gold = build_gold(scale);
    fixture.synonyms = build_synonyms();
    fixture.upper = build_upper();
    validate(fixture.factories);
    validate(fixture.orders);
    return fixture;
}

static void write_file(const std::filesystem::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        fail(errc::io_error, "cannot write '" + path.string() + "'");
    }
    out << bytes;
}

void write_fixture(const demo_fixture& fixture, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    write_file(dir / "factories.onto.json", save_ontology(fixture.factories));
    write_file(dir / "orders.onto.json", save_ontology(fixture.orders));
    write_file(dir / "gold.align.json", save_alignment(fixture.gold));
    write_file(dir / "synonyms.dict.json", save_dictionary(fixture.synonyms));
    write_file(dir / "upper.upper.json", save_upper_map(fixture.upper));
}

aggregation_policy demo_policy() {
    aggregation_policy policy;
    policy.weights = {{"lexical", 0.6}, {"flooding", 0.4}};
    policy.threshold = 0.7;
    return policy;
}

std::vector<std::string> demo_estimators() {
    return {"lexical", "flooding"};
}

// ============================================================================
// Queries
// ============================================================================

static bool numeric_compare(const std::string& lhs, const std::string& rhs,
                            producer_constraint::op_t op) {
    char* end_l = nullptr;
    char* end_r = nullptr;
    double l = std::strtod(lhs.c_str(), &end_l);
    double r = std::strtod(rhs.c_str(), &end_r);
    bool numeric = end_l == lhs.c_str() + lhs.size() && end_r == rhs.c_str() + rhs.size() &&
                   !lhs.empty() && !rhs.empty();
    switch (op) {
        case producer_constraint::op_t::le:
            return numeric ? l <= r : lhs <= rhs;
        case producer_constraint::op_t::ge:
            return numeric ? l >= r : lhs >= rhs;
        case producer_constraint::op_t::eq:
            return numeric ? l == r : lhs == rhs;
    }
    return false;
}

std::vector<std::string> find_producers(const ontology& merged, const std::string& product_class,
                                        const std::vector<producer_constraint>& constraints) {
    if (!merged.classes.contains(product_class)) {
        fail(errc::unknown_class, "no class '" + product_class + "' in '" + merged.name + "'");
    }
    std::vector<std::string> produces_ids;
    for (const auto& [id, prop] : merged.properties) {
        if (normalize_label(prop.label) == "produces") {
            produces_ids.push_back(id);
        }
    }
    if (produces_ids.empty()) {
        fail(errc::unknown_property, "'" + merged.name + "' has no produces-like property");
    }

    std::vector<std::string> producers;
    for (const auto& [id, inst] : merged.instances) {
        bool produces_match = false;
        for (const auto& prop_id : produces_ids) {
            auto values = inst.values.find(prop_id);
            if (values == inst.values.end()) {
                continue;
            }
            for (const auto& value : values->second) {
                if (merged.instances.contains(value) &&
                    is_instance_of(merged, value, product_class)) {
                    produces_match = true;
                    break;
                }
            }
            if (produces_match) {
                break;
            }
        }
        if (!produces_match) {
            continue;
        }
        bool keep = true;
        for (const auto& constraint : constraints) {
            auto values = inst.values.find(constraint.property);
            bool satisfied = false;
            if (values != inst.values.end()) {
                for (const auto& value : values->second) {
                    if (numeric_compare(value, constraint.value, constraint.op)) {
                        satisfied = true;
                        break;
                    }
                }
            }
            if (!satisfied) {
                keep = false;
                break;
            }
        }
        if (keep) {
            producers.push_back(id);
        }
    }
    return producers;
}

std::vector<std::string> find_substitutes(const ontology& merged,
                                          const std::string& product_class) {
    auto cls_it = merged.classes.find(product_class);
    if (cls_it == merged.classes.end()) {
        fail(errc::unknown_class, "no class '" + product_class + "' in '" + merged.name + "'");
    }
    const class_def& cls = cls_it->second;

    std::set<std::string> identity;
    identity.insert(normalize_label(cls.label));
    for (const auto& alias : cls.aliases) {
        identity.insert(normalize_label(alias));
    }

    // The identity set pulls in classes that denote the same concept under a
    // merged alias; their siblings count as substitutes too.
    std::set<std::string> roots{product_class};
    for (const auto& [id, other] : merged.classes) {
        if (id == product_class) {
            continue;
        }
        std::set<std::string> other_identity;
        other_identity.insert(normalize_label(other.label));
        for (const auto& alias : other.aliases) {
            other_identity.insert(normalize_label(alias));
        }
        for (const auto& key : identity) {
            if (other_identity.contains(key)) {
                roots.insert(id);
                break;
            }
        }
    }

    std::set<std::string> parents;
    for (const auto& root : roots) {
        for (const auto& parent : merged.classes.at(root).parents) {
            parents.insert(parent);
        }
    }

    std::set<std::string> result(roots.begin(), roots.end());
    result.erase(product_class);
    for (const auto& [id, other] : merged.classes) {
        if (id == product_class) {
            continue;
        }
        for (const auto& parent : other.parents) {
            if (parents.contains(parent)) {
                result.insert(id);
                break;
            }
        }
    }

    std::vector<std::string> ordered(result.begin(), result.end());
    std::sort(ordered.begin(), ordered.end(), [&](const std::string& x, const std::string& y) {
        double sx = lexical_similarity(merged.classes.at(x).label, cls.label);
        double sy = lexical_similarity(merged.classes.at(y).label, cls.label);
        if (sx != sy) {
            return sx > sy;
        }
        return x < y;
    });
    return ordered;
}

} // namespace ontomesh
