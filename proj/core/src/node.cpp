#include "ontomesh/node.hpp"

#include <chrono>

#include "ontomesh/errors.hpp"

namespace ontomesh {

static std::int64_t now_ms() {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::system_clock::now().time_since_epoch())
        .count();
}

std::string event_signature(const node_event& event) {
    return event.event + "|" + event.correlation + "|" + event.detail;
}

std::string event_log_line(const node_event& event) {
    nlohmann::ordered_json record;
    record["ts"] = event.timestamp_ms;
    record["node"] = event.node;
    record["event"] = event.event;
    record["correlation"] = event.correlation;
    if (!event.detail.empty()) {
        record["detail"] = event.detail;
    }
    return record.dump();
}

std::uint64_t message_counters::total_sent() const {
    std::uint64_t total = 0;
    for (const auto& [type, count] : sent) {
        total += count;
    }
    return total;
}

queued_job integration_queue::pop() {
    queued_job job = std::move(pending_.front());
    pending_.pop_front();
    return job;
}

// ============================================================================
// node
// ============================================================================

node::node(node_options options, transport& network)
    : options_(std::move(options)), network_(network) {
    validate(options_.model);
    options_.policy.validate_and_normalize();
}

void node::log(const std::string& event, const std::string& correlation,
               const std::string& detail) {
    events_.push_back({now_ms(), options_.id, event, correlation, detail});
}

std::string node::fresh_correlation(const std::string& tag) {
    return options_.id + "-" + tag + std::to_string(++correlation_seq_);
}

void node::send_to(const std::string& address, node_message message) {
    message.sender = options_.id;
    ++counters_.sent[std::string(message_type_name(message.type))];
    try {
        network_.send(address, encode_message(message));
    } catch (const std::exception& ex) {
        log("send-failed", message.correlation, address + ": " + ex.what());
    }
}

void node::dispatch_local(node_message message) {
    message.sender = options_.id;
    ++counters_.sent[std::string(message_type_name(message.type))];
    local_inbox_.push_back(std::move(message));
}

void node::drain() {
    if (draining_) {
        return;
    }
    draining_ = true;
    while (!local_inbox_.empty()) {
        node_message message = std::move(local_inbox_.front());
        local_inbox_.pop_front();
        process(message);
    }
    draining_ = false;
}

void node::handle_frame(const std::string& body) {
    std::lock_guard lock(mutex_);
    node_message message;
    try {
        message = decode_message(body);
    } catch (const error& ex) {
        log("frame-rejected", "", ex.what());
        return;
    }
    handle_message(message);
}

void node::handle_message(const node_message& message) {
    std::lock_guard lock(mutex_);
    process(message);
    drain();
}

void node::process(const node_message& message) {
    ++counters_.received[std::string(message_type_name(message.type))];
    switch (message.type) {
        case message_type::register_node:
            if (options_.is_registry) {
                serve_registry(message);
            } else {
                log("misdirected", message.correlation, "Register sent to non-registry");
            }
            break;
        case message_type::node_list:
            if (message.payload.contains("nodes")) {
                handle_node_list_response(message);
            } else if (options_.is_registry) {
                serve_registry(message);
            } else {
                log("misdirected", message.correlation, "NodeList request sent to non-registry");
            }
            break;
        case message_type::ontology_request: {
            log("request-received", message.correlation, message.sender);
            node_message response = handle_ontology_request(message);
            std::string reply_to = message.payload.value("reply_to", std::string());
            if (reply_to.empty()) {
                auto it = peer_addresses_.find(message.sender);
                if (it != peer_addresses_.end()) {
                    reply_to = it->second;
                }
            }
            if (reply_to.empty()) {
                log("error", message.correlation, "no reply address for '" + message.sender + "'");
            } else {
                log("response-sent", message.correlation, message.sender);
                send_to(reply_to, std::move(response));
            }
            break;
        }
        case message_type::ontology_response:
            handle_ontology_response(message);
            break;
        case message_type::enqueue:
            handle_enqueue(message);
            break;
        case message_type::integration_done:
            handle_integration_done(message);
            break;
        case message_type::ack:
            if (!registered_) {
                registered_ = true;
                log("registered", message.correlation);
            }
            break;
        case message_type::error: {
            log("error-received", message.correlation,
                message.payload.value("text", std::string()));
            auto query = queries_.find(message.correlation);
            if (query != queries_.end() && !query->second.complete) {
                ++query->second.failed;
                if (query->second.done + query->second.failed >= query->second.expected) {
                    query->second.complete = true;
                    log("query-complete", message.correlation);
                }
            }
            break;
        }
    }
}

// --- registry role ----------------------------------------------------------

void node::serve_registry(const node_message& message) {
    if (message.type == message_type::register_node) {
        std::string id = message.payload.value("id", message.sender);
        std::string address = message.payload.value("address", std::string());
        try {
            repository_.register_node(id, address);
        } catch (const error& ex) {
            log("register-rejected", message.correlation, id);
            send_to(address, {message_type::error, "", message.correlation,
                              nlohmann::ordered_json{{"text", ex.what()}}});
            return;
        }
        peer_addresses_[id] = address;
        log("node-registered", message.correlation, id);
        send_to(address, {message_type::ack, "", message.correlation,
                          nlohmann::ordered_json::object()});
        return;
    }
    // NodeList request
    nlohmann::ordered_json nodes = nlohmann::ordered_json::array();
    for (const auto& [id, address] : repository_.nodes()) {
        nodes.push_back({{"id", id}, {"address", address}});
    }
    auto requester = peer_addresses_.find(message.sender);
    if (requester == peer_addresses_.end()) {
        log("error", message.correlation, "node-list request from unregistered node");
        return;
    }
    log("node-list-served", message.correlation, message.sender);
    send_to(requester->second, {message_type::node_list, "", message.correlation,
                                nlohmann::ordered_json{{"nodes", std::move(nodes)}}});
}

// --- query role ---------------------------------------------------------------

void node::register_with_registry() {
    std::lock_guard lock(mutex_);
    std::string correlation = fresh_correlation("reg");
    if (options_.is_registry) {
        repository_.register_node(options_.id, options_.address);
        peer_addresses_[options_.id] = options_.address;
        registered_ = true;
        log("registered", correlation);
        return;
    }
    log("register-sent", correlation);
    send_to(options_.registry_address,
            {message_type::register_node, "", correlation,
             nlohmann::ordered_json{{"id", options_.id}, {"address", options_.address}}});
}

std::string node::submit_query() {
    std::lock_guard lock(mutex_);
    std::string correlation = fresh_correlation("q");
    queries_[correlation] = {};
    log("query-submitted", correlation);
    send_to(options_.registry_address,
            {message_type::node_list, "", correlation, nlohmann::ordered_json::object()});
    drain();
    return correlation;
}

void node::handle_node_list_response(const node_message& message) {
    auto query = queries_.find(message.correlation);
    if (query == queries_.end()) {
        log("stale-correlation-dropped", message.correlation, "NodeList");
        return;
    }
    if (!query->second.node_list_pending) {
        return;
    }
    query->second.node_list_pending = false;

    std::vector<std::pair<std::string, std::string>> peers;
    if (message.payload.contains("nodes") && message.payload["nodes"].is_array()) {
        for (const auto& record : message.payload["nodes"]) {
            std::string id = record.value("id", std::string());
            std::string address = record.value("address", std::string());
            peer_addresses_[id] = address;
            if (id != options_.id) {
                peers.emplace_back(id, address);
            }
        }
    }
    query->second.expected = peers.size();
    if (peers.empty()) {
        query->second.complete = true;
        log("no-other-nodes", message.correlation);
        log("query-complete", message.correlation);
        return;
    }
    for (const auto& [id, address] : peers) {
        log("request-sent", message.correlation, id);
        send_to(address, {message_type::ontology_request, "", message.correlation,
                          nlohmann::ordered_json{{"reply_to", options_.address}}});
    }
}

// --- container / integrating roles -------------------------------------------

node_message node::handle_ontology_request(const node_message& request) {
    std::lock_guard lock(mutex_);
    // The integrating role is spawned inside this instance: the request hop to
    // it and the ontology hop back are ledger entries, not network frames.
    counters_.sent["InternalHop"] += 2;
    node_message response;
    response.correlation = request.correlation;
    try {
        std::string bytes = save_ontology(options_.model);
        response.type = message_type::ontology_response;
        response.payload = nlohmann::ordered_json{{"ontology", std::move(bytes)}};
    } catch (const std::exception& ex) {
        response.type = message_type::error;
        response.payload = nlohmann::ordered_json{{"text", ex.what()}};
    }
    return response;
}

void node::handle_ontology_response(const node_message& message) {
    auto query = queries_.find(message.correlation);
    if (query == queries_.end()) {
        log("stale-correlation-dropped", message.correlation, message.sender);
        return;
    }
    log("response-received", message.correlation, message.sender);
    std::string bytes = message.payload.value("ontology", std::string());
    try {
        load_ontology(bytes);
    } catch (const error& ex) {
        log("invalid-payload", message.correlation,
            message.sender + ": " + ex.what());
        ++query->second.failed;
        if (!query->second.complete &&
            query->second.done + query->second.failed >= query->second.expected) {
            query->second.complete = true;
            log("query-complete", message.correlation);
        }
        return;
    }
    dispatch_local({message_type::enqueue, "", message.correlation,
                    nlohmann::ordered_json{{"ontology", std::move(bytes)},
                                           {"origin", message.sender}}});
}

void node::handle_enqueue(const node_message& message) {
    queued_job job;
    job.correlation = message.correlation;
    job.ontology_bytes = message.payload.value("ontology", std::string());
    job.origin = message.payload.value("origin", message.sender);
    queue_.push(std::move(job));
    log("enqueued", message.correlation, message.payload.value("origin", message.sender));
    run_queue_locked();
}

void node::enqueue_job(queued_job job) {
    std::lock_guard lock(mutex_);
    dispatch_local({message_type::enqueue, "", job.correlation,
                    nlohmann::ordered_json{{"ontology", job.ontology_bytes},
                                           {"origin", job.origin}}});
    drain();
}

void node::run_integration_loop() {
    std::lock_guard lock(mutex_);
    run_queue_locked();
    drain();
}

// Pops one job at a time; |active| <= 1 holds between every pair of events.
void node::run_queue_locked() {
    while (!queue_.active() && !queue_.empty()) {
        queued_job job = queue_.pop();
        queue_.set_active(true);
        log("integration-start", job.correlation, job.origin);
        bool ok = true;
        std::string detail;
        std::size_t merged_classes = 0;
        try {
            ontology incoming = load_ontology(job.ontology_bytes);
            pipeline_result result =
                integrate_pipeline(options_.model, incoming, options_.estimators,
                                   options_.policy, options_.estimator_cfg);
            merged_classes = result.merged.classes.size();
            options_.model = std::move(result.merged); // knowledge accumulates
        } catch (const std::exception& ex) {
            ok = false;
            detail = ex.what();
        }
        queue_.set_active(false);
        dispatch_local({message_type::integration_done, "", job.correlation,
                        nlohmann::ordered_json{{"origin", job.origin},
                                               {"ok", ok},
                                               {"classes", merged_classes},
                                               {"message", detail}}});
        drain();
    }
}

void node::handle_integration_done(const node_message& message) {
    bool ok = message.payload.value("ok", false);
    std::string origin = message.payload.value("origin", std::string());
    log("integration-done", message.correlation, origin + (ok ? ":ok" : ":failed"));
    auto query = queries_.find(message.correlation);
    if (query == queries_.end() || query->second.complete) {
        return;
    }
    if (ok) {
        ++query->second.done;
    } else {
        ++query->second.failed;
    }
    if (query->second.done + query->second.failed >= query->second.expected) {
        query->second.complete = true;
        log("query-complete", message.correlation);
    }
}

// --- observers ------------------------------------------------------------

ontology node::local_model() const {
    std::lock_guard lock(mutex_);
    return options_.model;
}

std::size_t node::queue_size() const {
    std::lock_guard lock(mutex_);
    return queue_.size();
}

std::vector<std::string> node::event_signatures() const {
    std::lock_guard lock(mutex_);
    std::vector<std::string> out;
    out.reserve(events_.size());
    for (const auto& event : events_) {
        out.push_back(event_signature(event));
    }
    return out;
}

std::vector<std::string> node::event_log_lines() const {
    std::lock_guard lock(mutex_);
    std::vector<std::string> out;
    out.reserve(events_.size());
    for (const auto& event : events_) {
        out.push_back(event_log_line(event));
    }
    return out;
}

message_counters node::counters() const {
    std::lock_guard lock(mutex_);
    return counters_;
}

void node::reset_counters() {
    std::lock_guard lock(mutex_);
    counters_ = {};
}

bool node::registered() const {
    std::lock_guard lock(mutex_);
    return registered_;
}

bool node::query_complete(const std::string& correlation) const {
    std::lock_guard lock(mutex_);
    auto it = queries_.find(correlation);
    return it != queries_.end() && it->second.complete;
}

std::size_t node::done_count(const std::string& correlation) const {
    std::lock_guard lock(mutex_);
    auto it = queries_.find(correlation);
    return it == queries_.end() ? 0 : it->second.done;
}

std::size_t node::failed_count(const std::string& correlation) const {
    std::lock_guard lock(mutex_);
    auto it = queries_.find(correlation);
    return it == queries_.end() ? 0 : it->second.failed;
}

message_counters total_ledger(const std::vector<const node*>& nodes) {
    message_counters total;
    for (const node* n : nodes) {
        message_counters c = n->counters();
        for (const auto& [type, count] : c.sent) {
            total.sent[type] += count;
        }
        for (const auto& [type, count] : c.received) {
            total.received[type] += count;
        }
    }
    return total;
}

} // namespace ontomesh
