#include "ontomesh/protocol.hpp"

#include "ontomesh/errors.hpp"

namespace ontomesh {

std::string_view message_type_name(message_type type) {
    switch (type) {
        case message_type::register_node:     return "Register";
        case message_type::node_list:         return "NodeList";
        case message_type::ontology_request:  return "OntologyRequest";
        case message_type::ontology_response: return "OntologyResponse";
        case message_type::enqueue:           return "Enqueue";
        case message_type::integration_done:  return "IntegrationDone";
        case message_type::ack:               return "Ack";
        case message_type::error:             return "Error";
    }
    return "Unknown";
}

message_type parse_message_type(std::string_view name) {
    if (name == "Register")         return message_type::register_node;
    if (name == "NodeList")         return message_type::node_list;
    if (name == "OntologyRequest")  return message_type::ontology_request;
    if (name == "OntologyResponse") return message_type::ontology_response;
    if (name == "Enqueue")          return message_type::enqueue;
    if (name == "IntegrationDone")  return message_type::integration_done;
    if (name == "Ack")              return message_type::ack;
    if (name == "Error")            return message_type::error;
    fail(errc::parse_error, "unknown message type '" + std::string(name) + "'");
}

std::string encode_message(const node_message& message) {
    nlohmann::ordered_json body;
    body["type"] = message_type_name(message.type);
    body["sender"] = message.sender;
    body["correlation"] = message.correlation;
    body["payload"] = message.payload;
    return body.dump();
}

node_message decode_message(std::string_view body) {
    nlohmann::ordered_json doc;
    try {
        doc = nlohmann::ordered_json::parse(body);
    } catch (const nlohmann::json::exception& ex) {
        fail(errc::parse_error, ex.what());
    }
    if (!doc.is_object() || !doc.contains("type") || !doc["type"].is_string() ||
        !doc.contains("sender") || !doc["sender"].is_string() ||
        !doc.contains("correlation") || !doc["correlation"].is_string()) {
        fail(errc::parse_error, "message body needs type, sender and correlation strings");
    }
    node_message message;
    message.type = parse_message_type(doc["type"].get<std::string>());
    message.sender = doc["sender"].get<std::string>();
    message.correlation = doc["correlation"].get<std::string>();
    if (doc.contains("payload")) {
        message.payload = doc["payload"];
    }
    switch (message.type) {
        case message_type::node_list:
        case message_type::ontology_request:
        case message_type::ontology_response:
        case message_type::enqueue:
        case message_type::integration_done:
            if (message.correlation.empty()) {
                fail(errc::parse_error, "query-flow message without correlation");
            }
            break;
        default:
            break;
    }
    return message;
}

std::string encode_frame(std::string_view body) {
    std::string frame;
    frame.reserve(body.size() + 4);
    std::uint32_t length = static_cast<std::uint32_t>(body.size());
    frame.push_back(static_cast<char>((length >> 24) & 0xff));
    frame.push_back(static_cast<char>((length >> 16) & 0xff));
    frame.push_back(static_cast<char>((length >> 8) & 0xff));
    frame.push_back(static_cast<char>(length & 0xff));
    frame.append(body);
    return frame;
}

void frame_reader::feed(const char* data, std::size_t size) {
    buffer_.append(data, size);
}

std::optional<std::string> frame_reader::next() {
    if (buffer_.size() < 4) {
        return std::nullopt;
    }
    auto byte = [&](std::size_t i) { return static_cast<std::uint32_t>(static_cast<unsigned char>(buffer_[i])); };
    std::uint32_t length = (byte(0) << 24) | (byte(1) << 16) | (byte(2) << 8) | byte(3);
    if (buffer_.size() < 4 + static_cast<std::size_t>(length)) {
        return std::nullopt;
    }
    std::string body = buffer_.substr(4, length);
    buffer_.erase(0, 4 + static_cast<std::size_t>(length));
    return body;
}

void repository::register_node(const std::string& id, const std::string& address) {
    if (contains(id)) {
        fail(errc::duplicate_node, "node id '" + id + "' already registered");
    }
    nodes_.emplace_back(id, address);
}

bool repository::contains(const std::string& id) const {
    for (const auto& [known, _] : nodes_) {
        if (known == id) {
            return true;
        }
    }
    return false;
}

} // namespace ontomesh
