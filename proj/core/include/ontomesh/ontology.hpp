#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace ontomesh {

// ============================================================================
// Data model
// ============================================================================
//
// An ontology is a named graph of classes, properties and instances. The class
// and property definitions form the terminology (persistent, hierarchy-bearing)
// half; the instances form the assertional half. A loaded ontology is an
// immutable value: every operation below is a pure read.

struct class_def {
    std::string id;
    std::string label;
    std::vector<std::string> parents;
    // Labels a class absorbed from its merge partners; empty for plain classes.
    std::vector<std::string> aliases;

    bool operator==(const class_def&) const = default;
};

struct property_def {
    std::string id;
    std::string label;
    std::string domain; // class id
    std::string range;  // class id or datatype tag
    bool operator==(const property_def&) const = default;
};

struct instance_def {
    std::string id;
    std::string class_id;
    // property id -> values; a value is an instance id when the property range
    // is a class, otherwise a literal in the range's datatype.
    std::map<std::string, std::vector<std::string>> values;

    bool operator==(const instance_def&) const = default;
};

struct ontology {
    std::string name;
    std::map<std::string, class_def> classes;
    std::map<std::string, property_def> properties;
    std::map<std::string, instance_def> instances;

    bool operator==(const ontology&) const = default;
};

inline constexpr std::string_view kDatatypeTags[] = {"string", "integer", "decimal"};

bool is_datatype_tag(std::string_view range);

// ============================================================================
// File format (.onto.json)
// ============================================================================

/// Parses and validates a UTF-8 ontology document.
/// Throws: errc::parse_error, errc::validation_error, errc::cycle_error.
ontology load_ontology(std::string_view bytes);

/// Canonical serialization: entries sorted by id, stable key order, UTF-8,
/// trailing newline. load(save(m)) == m and save is idempotent through load.
std::string save_ontology(const ontology& model);

/// Enforces every model invariant; load_ontology runs this before returning.
void validate(const ontology& model);

// ============================================================================
// Reasoning
// ============================================================================

/// All ancestors of `class_id` under the transitive parent closure, excluding
/// the class itself.
std::set<std::string> subclass_closure(const ontology& model, const std::string& class_id);

/// True iff the instance's declared class equals `class_id` or subsumes it
/// through the parent closure.
bool is_instance_of(const ontology& model, const std::string& instance_id,
                    const std::string& class_id);

/// Instances declared exactly in `class_id`, or (transitive) in it and any of
/// its descendants.
std::set<std::string> instances_of(const ontology& model, const std::string& class_id,
                                   bool transitive);

/// Structural signature of a class: parent labels, child labels, and the
/// labels of properties whose domain is the class or one of its ancestors.
struct class_signature {
    std::set<std::string> parent_labels;
    std::set<std::string> child_labels;
    std::set<std::string> property_labels;

    bool operator==(const class_signature&) const = default;
};

class_signature neighborhood(const ontology& model, const std::string& class_id);

} // namespace ontomesh
