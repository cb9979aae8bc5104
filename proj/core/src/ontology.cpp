#include "ontomesh/ontology.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>

#include <json.hpp>

#include "ontomesh/errors.hpp"

namespace ontomesh {

using ordered_json = nlohmann::ordered_json;

const char* errc_name(errc code) {
    switch (code) {
        case errc::parse_error:                return "parse-error";
        case errc::validation_error:           return "validation-error";
        case errc::cycle_error:                return "cycle-error";
        case errc::unknown_class:              return "unknown-class";
        case errc::unknown_instance:           return "unknown-instance";
        case errc::unknown_property:           return "unknown-property";
        case errc::empty_label:                return "empty-label";
        case errc::unknown_estimator:          return "unknown-estimator";
        case errc::seed_estimator_unavailable: return "seed-estimator-unavailable";
        case errc::dimension_mismatch:         return "dimension-mismatch";
        case errc::empty_input:                return "empty-input";
        case errc::invalid_policy:             return "invalid-policy";
        case errc::invalid_command:            return "invalid-command";
        case errc::duplicate_node:             return "duplicate-node";
        case errc::stale_correlation:          return "stale-correlation";
        case errc::io_error:                   return "io-error";
        case errc::network_error:              return "network-error";
    }
    return "error";
}

bool is_datatype_tag(std::string_view range) {
    for (auto tag : kDatatypeTags) {
        if (range == tag) {
            return true;
        }
    }
    return false;
}

// ============================================================================
// Validation
// ============================================================================

static bool parses_as_integer(const std::string& text) {
    if (text.empty()) {
        return false;
    }
    std::size_t start = (text[0] == '-' || text[0] == '+') ? 1 : 0;
    if (start == text.size()) {
        return false;
    }
    return std::all_of(text.begin() + static_cast<std::ptrdiff_t>(start), text.end(),
                       [](unsigned char c) { return c >= '0' && c <= '9'; });
}

static bool parses_as_decimal(const std::string& text) {
    if (text.empty()) {
        return false;
    }
    const char* begin = text.c_str();
    char* end = nullptr;
    errno = 0;
    std::strtod(begin, &end);
    return errno == 0 && end == begin + text.size();
}

// DFS over parent edges; on a back edge, reconstructs the cycle for the error.
static void check_acyclic(const ontology& model) {
    enum class mark { white, grey, black };
    std::map<std::string, mark> marks;
    for (const auto& [id, cls] : model.classes) {
        marks[id] = mark::white;
    }

    std::vector<std::string> path;
    // Iterative DFS with an explicit path so the cycle can be reported.
    struct frame {
        const class_def* cls;
        std::size_t next_parent;
    };
    for (const auto& [root_id, root_cls] : model.classes) {
        if (marks[root_id] != mark::white) {
            continue;
        }
        std::vector<frame> stack;
        stack.push_back({&root_cls, 0});
        marks[root_id] = mark::grey;
        path.push_back(root_id);
        while (!stack.empty()) {
            frame& top = stack.back();
            if (top.next_parent == top.cls->parents.size()) {
                marks[top.cls->id] = mark::black;
                path.pop_back();
                stack.pop_back();
                continue;
            }
            const std::string& parent = top.cls->parents[top.next_parent++];
            mark m = marks.at(parent);
            if (m == mark::grey) {
                auto it = std::find(path.begin(), path.end(), parent);
                std::string cycle;
                for (; it != path.end(); ++it) {
                    cycle += *it;
                    cycle += " -> ";
                }
                cycle += parent;
                fail(errc::cycle_error, "subclass cycle: " + cycle);
            }
            if (m == mark::white) {
                marks[parent] = mark::grey;
                path.push_back(parent);
                stack.push_back({&model.classes.at(parent), 0});
            }
        }
    }
}

void validate(const ontology& model) {
    for (const auto& [id, cls] : model.classes) {
        if (id.empty() || cls.id.empty()) {
            fail(errc::validation_error, "class with empty id");
        }
        if (cls.label.empty()) {
            fail(errc::validation_error, "class '" + id + "' has an empty label");
        }
        for (const auto& parent : cls.parents) {
            if (!model.classes.contains(parent)) {
                fail(errc::validation_error,
                     "class '" + id + "' references unknown parent '" + parent + "'");
            }
            if (parent == id) {
                fail(errc::cycle_error, "subclass cycle: " + id + " -> " + id);
            }
        }
    }
    check_acyclic(model);

    for (const auto& [id, prop] : model.properties) {
        if (id.empty()) {
            fail(errc::validation_error, "property with empty id");
        }
        if (!model.classes.contains(prop.domain)) {
            fail(errc::validation_error,
                 "property '" + id + "' has unknown domain '" + prop.domain + "'");
        }
        if (!is_datatype_tag(prop.range) && !model.classes.contains(prop.range)) {
            fail(errc::validation_error,
                 "property '" + id + "' has unknown range '" + prop.range + "'");
        }
    }

    for (const auto& [id, inst] : model.instances) {
        if (id.empty()) {
            fail(errc::validation_error, "instance with empty id");
        }
        if (!model.classes.contains(inst.class_id)) {
            fail(errc::validation_error,
                 "instance '" + id + "' references unknown class '" + inst.class_id + "'");
        }
        for (const auto& [prop_id, vals] : inst.values) {
            auto prop_it = model.properties.find(prop_id);
            if (prop_it == model.properties.end()) {
                fail(errc::validation_error,
                     "instance '" + id + "' references unknown property '" + prop_id + "'");
            }
            const property_def& prop = prop_it->second;
            for (const auto& value : vals) {
                if (is_datatype_tag(prop.range)) {
                    bool ok = prop.range == "string" ||
                              (prop.range == "integer" && parses_as_integer(value)) ||
                              (prop.range == "decimal" && parses_as_decimal(value));
                    if (!ok) {
                        fail(errc::validation_error,
                             "instance '" + id + "' value '" + value + "' under '" + prop_id +
                                 "' does not parse as " + prop.range);
                    }
                } else if (!model.instances.contains(value)) {
                    fail(errc::validation_error,
                         "instance '" + id + "' value '" + value + "' under '" + prop_id +
                             "' names no instance");
                }
            }
        }
    }
}

// ============================================================================
// Load / save
// ============================================================================

static std::string require_string(const ordered_json& record, const char* key,
                                  const std::string& where) {
    if (!record.contains(key) || !record[key].is_string()) {
        fail(errc::parse_error, where + ": missing or non-string field '" + key + "'");
    }
    return record[key].get<std::string>();
}

static std::vector<std::string> read_string_array(const ordered_json& value,
                                                  const std::string& where) {
    if (!value.is_array()) {
        fail(errc::parse_error, where + ": expected an array of strings");
    }
    std::vector<std::string> out;
    for (const auto& item : value) {
        if (!item.is_string()) {
            fail(errc::parse_error, where + ": expected an array of strings");
        }
        out.push_back(item.get<std::string>());
    }
    return out;
}

ontology load_ontology(std::string_view bytes) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(bytes);
    } catch (const nlohmann::json::exception& ex) {
        fail(errc::parse_error, ex.what());
    }
    if (!doc.is_object()) {
        fail(errc::parse_error, "document root must be an object");
    }

    ontology model;
    model.name = require_string(doc, "name", "document");

    if (!doc.contains("classes") || !doc["classes"].is_array()) {
        fail(errc::parse_error, "document: missing 'classes' array");
    }
    for (const auto& record : doc["classes"]) {
        class_def cls;
        cls.id = require_string(record, "id", "class record");
        cls.label = require_string(record, "label", "class '" + cls.id + "'");
        if (!record.contains("parents")) {
            fail(errc::parse_error, "class '" + cls.id + "': missing 'parents'");
        }
        cls.parents = read_string_array(record["parents"], "class '" + cls.id + "' parents");
        if (record.contains("aliases")) {
            cls.aliases = read_string_array(record["aliases"], "class '" + cls.id + "' aliases");
        }
        std::sort(cls.parents.begin(), cls.parents.end());
        cls.parents.erase(std::unique(cls.parents.begin(), cls.parents.end()), cls.parents.end());
        std::sort(cls.aliases.begin(), cls.aliases.end());
        cls.aliases.erase(std::unique(cls.aliases.begin(), cls.aliases.end()), cls.aliases.end());
        if (model.classes.contains(cls.id)) {
            fail(errc::validation_error, "duplicate class id '" + cls.id + "'");
        }
        model.classes.emplace(cls.id, std::move(cls));
    }

    if (!doc.contains("properties") || !doc["properties"].is_array()) {
        fail(errc::parse_error, "document: missing 'properties' array");
    }
    for (const auto& record : doc["properties"]) {
        property_def prop;
        prop.id = require_string(record, "id", "property record");
        prop.label = require_string(record, "label", "property '" + prop.id + "'");
        prop.domain = require_string(record, "domain", "property '" + prop.id + "'");
        prop.range = require_string(record, "range", "property '" + prop.id + "'");
        if (model.properties.contains(prop.id)) {
            fail(errc::validation_error, "duplicate property id '" + prop.id + "'");
        }
        model.properties.emplace(prop.id, std::move(prop));
    }

    if (!doc.contains("instances") || !doc["instances"].is_array()) {
        fail(errc::parse_error, "document: missing 'instances' array");
    }
    for (const auto& record : doc["instances"]) {
        instance_def inst;
        inst.id = require_string(record, "id", "instance record");
        inst.class_id = require_string(record, "class", "instance '" + inst.id + "'");
        if (record.contains("values")) {
            if (!record["values"].is_object()) {
                fail(errc::parse_error, "instance '" + inst.id + "': 'values' must be an object");
            }
            for (const auto& [prop_id, vals] : record["values"].items()) {
                auto list = read_string_array(vals, "instance '" + inst.id + "' values");
                std::sort(list.begin(), list.end());
                list.erase(std::unique(list.begin(), list.end()), list.end());
                inst.values.emplace(prop_id, std::move(list));
            }
        }
        if (model.instances.contains(inst.id)) {
            fail(errc::validation_error, "duplicate instance id '" + inst.id + "'");
        }
        model.instances.emplace(inst.id, std::move(inst));
    }

    validate(model);
    return model;
}

std::string save_ontology(const ontology& model) {
    ordered_json doc;
    doc["name"] = model.name;

    ordered_json classes = ordered_json::array();
    for (const auto& [id, cls] : model.classes) {
        ordered_json record;
        record["id"] = cls.id;
        record["label"] = cls.label;
        auto parents = cls.parents;
        std::sort(parents.begin(), parents.end());
        record["parents"] = parents;
        if (!cls.aliases.empty()) {
            auto aliases = cls.aliases;
            std::sort(aliases.begin(), aliases.end());
            record["aliases"] = aliases;
        }
        classes.push_back(std::move(record));
    }
    doc["classes"] = std::move(classes);

    ordered_json properties = ordered_json::array();
    for (const auto& [id, prop] : model.properties) {
        ordered_json record;
        record["id"] = prop.id;
        record["label"] = prop.label;
        record["domain"] = prop.domain;
        record["range"] = prop.range;
        properties.push_back(std::move(record));
    }
    doc["properties"] = std::move(properties);

    ordered_json instances = ordered_json::array();
    for (const auto& [id, inst] : model.instances) {
        ordered_json record;
        record["id"] = inst.id;
        record["class"] = inst.class_id;
        ordered_json values = ordered_json::object();
        for (const auto& [prop_id, vals] : inst.values) {
            auto sorted = vals;
            std::sort(sorted.begin(), sorted.end());
            values[prop_id] = sorted;
        }
        record["values"] = std::move(values);
        instances.push_back(std::move(record));
    }
    doc["instances"] = std::move(instances);

    return doc.dump(2) + "\n";
}

// ============================================================================
// Reasoning
// ============================================================================

static const class_def& require_class(const ontology& model, const std::string& class_id) {
    auto it = model.classes.find(class_id);
    if (it == model.classes.end()) {
        fail(errc::unknown_class, "no class '" + class_id + "' in '" + model.name + "'");
    }
    return it->second;
}

std::set<std::string> subclass_closure(const ontology& model, const std::string& class_id) {
    require_class(model, class_id);
    std::set<std::string> closure;
    std::vector<std::string> pending{class_id};
    while (!pending.empty()) {
        std::string current = std::move(pending.back());
        pending.pop_back();
        for (const auto& parent : model.classes.at(current).parents) {
            if (closure.insert(parent).second) {
                pending.push_back(parent);
            }
        }
    }
    closure.erase(class_id);
    return closure;
}

bool is_instance_of(const ontology& model, const std::string& instance_id,
                    const std::string& class_id) {
    auto it = model.instances.find(instance_id);
    if (it == model.instances.end()) {
        fail(errc::unknown_instance, "no instance '" + instance_id + "' in '" + model.name + "'");
    }
    require_class(model, class_id);
    if (it->second.class_id == class_id) {
        return true;
    }
    return subclass_closure(model, it->second.class_id).contains(class_id);
}

std::set<std::string> instances_of(const ontology& model, const std::string& class_id,
                                   bool transitive) {
    require_class(model, class_id);
    std::set<std::string> result;
    for (const auto& [id, inst] : model.instances) {
        if (inst.class_id == class_id ||
            (transitive && subclass_closure(model, inst.class_id).contains(class_id))) {
            result.insert(id);
        }
    }
    return result;
}

class_signature neighborhood(const ontology& model, const std::string& class_id) {
    const class_def& cls = require_class(model, class_id);
    class_signature sig;
    for (const auto& parent : cls.parents) {
        sig.parent_labels.insert(model.classes.at(parent).label);
    }
    for (const auto& [id, other] : model.classes) {
        if (std::find(other.parents.begin(), other.parents.end(), class_id) !=
            other.parents.end()) {
            sig.child_labels.insert(other.label);
        }
    }
    auto ancestors = subclass_closure(model, class_id);
    for (const auto& [id, prop] : model.properties) {
        if (prop.domain == class_id || ancestors.contains(prop.domain)) {
            sig.property_labels.insert(prop.label);
        }
    }
    return sig;
}

} // namespace ontomesh
