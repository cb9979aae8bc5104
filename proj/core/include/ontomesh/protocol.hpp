#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

namespace ontomesh {

// ============================================================================
// Messages and wire format
// ============================================================================

enum class message_type {
    register_node,
    node_list,
    ontology_request,
    ontology_response,
    enqueue,
    integration_done,
    ack,
    error,
};

std::string_view message_type_name(message_type type);
message_type parse_message_type(std::string_view name);

/// Protocol frame body. The payload shape depends on the type: ontology bytes
/// for OntologyResponse, the node list for NodeList, error text for Error.
struct node_message {
    message_type type = message_type::ack;
    std::string sender;
    std::string correlation;
    nlohmann::ordered_json payload = nlohmann::ordered_json::object();
};

std::string encode_message(const node_message& message);
node_message decode_message(std::string_view body); // throws errc::parse_error

/// 4-byte big-endian unsigned length, then the UTF-8 body.
std::string encode_frame(std::string_view body);

/// Incremental decoder for stream transports.
class frame_reader {
public:
    void feed(const char* data, std::size_t size);
    /// Next complete body, if one is buffered.
    std::optional<std::string> next();

private:
    std::string buffer_;
};

// ============================================================================
// Repository
// ============================================================================

/// Node registry held by the designated registry node; preserves registration
/// order.
class repository {
public:
    /// Throws errc::duplicate_node when the id is taken.
    void register_node(const std::string& id, const std::string& address);
    const std::vector<std::pair<std::string, std::string>>& nodes() const { return nodes_; }
    bool contains(const std::string& id) const;

private:
    std::vector<std::pair<std::string, std::string>> nodes_;
};

} // namespace ontomesh
