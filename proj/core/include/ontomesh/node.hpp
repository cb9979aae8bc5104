#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <mutex>
#include <set>
#include <string>
#include <vector>

#include "ontomesh/integrate.hpp"
#include "ontomesh/ontology.hpp"
#include "ontomesh/protocol.hpp"
#include "ontomesh/similarity.hpp"
#include "ontomesh/transport.hpp"

namespace ontomesh {

struct node_event {
    std::int64_t timestamp_ms = 0;
    std::string node;
    std::string event;
    std::string correlation;
    std::string detail;
};

/// "event|correlation|detail" — the transport-independent part of an event.
std::string event_signature(const node_event& event);
std::string event_log_line(const node_event& event);

struct message_counters {
    std::map<std::string, std::uint64_t> sent;
    std::map<std::string, std::uint64_t> received;

    std::uint64_t total_sent() const;
};

struct queued_job {
    std::string correlation;
    std::string ontology_bytes;
    std::string origin;
};

/// FIFO of pending integrations; at most one job is in flight at any time.
class integration_queue {
public:
    void push(queued_job job) { pending_.push_back(std::move(job)); }
    bool empty() const { return pending_.empty(); }
    std::size_t size() const { return pending_.size(); }
    queued_job pop();
    bool active() const { return active_; }
    void set_active(bool active) { active_ = active; }

private:
    std::deque<queued_job> pending_;
    bool active_ = false;
};

struct node_options {
    std::string id;
    std::string address;          // own transport address
    std::string registry_address; // where Register/NodeList go
    bool is_registry = false;
    ontology model;
    std::vector<std::string> estimators{"lexical"};
    aggregation_policy policy{{{"lexical", 1.0}}, 0.7};
    estimator_config estimator_cfg;
};

/// One program instance: holds the local ontology, answers ontology requests,
/// queues incoming ontologies and integrates them one at a time. The reactor
/// processes one message at a time; transports may call handle_frame from any
/// thread.
class node {
public:
    node(node_options options, transport& network);

    // --- wire entry -----------------------------------------------------
    void handle_frame(const std::string& body);

    // --- operations -----------------------------------------------------
    /// Sends Register to the registry (the registry node registers locally).
    void register_with_registry();

    /// Starts a query flow: asks the repository for the node list, then
    /// requests every other node's ontology. Returns the correlation id.
    std::string submit_query();

    /// Serves the current local model with the request's correlation.
    node_message handle_ontology_request(const node_message& request);

    /// Scripted access: enqueue a job directly and drain the queue.
    void enqueue_job(queued_job job);
    void run_integration_loop();

    // --- observers --------------------------------------------------------
    const std::string& id() const { return options_.id; }
    const std::string& address() const { return options_.address; }
    ontology local_model() const;
    std::size_t queue_size() const;
    const std::vector<node_event>& events() const { return events_; }
    std::vector<std::string> event_signatures() const;
    std::vector<std::string> event_log_lines() const;
    message_counters counters() const;
    void reset_counters();

    bool registered() const;
    bool query_complete(const std::string& correlation) const;
    std::size_t done_count(const std::string& correlation) const;
    std::size_t failed_count(const std::string& correlation) const;

    repository& repo() { return repository_; } // registry role only

private:
    struct query_state {
        bool node_list_pending = true;
        std::size_t expected = 0;
        std::size_t done = 0;
        std::size_t failed = 0;
        bool complete = false;
    };

    void handle_message(const node_message& message);
    void process(const node_message& message);
    void handle_node_list_response(const node_message& message);
    void handle_ontology_response(const node_message& message);
    void handle_enqueue(const node_message& message);
    void handle_integration_done(const node_message& message);
    void serve_registry(const node_message& message);

    void send_to(const std::string& address, node_message message);
    void dispatch_local(node_message message);
    void drain();
    void run_queue_locked();
    void log(const std::string& event, const std::string& correlation,
             const std::string& detail = "");
    std::string fresh_correlation(const std::string& tag);

    node_options options_;
    transport& network_;
    repository repository_;
    integration_queue queue_;
    std::map<std::string, query_state> queries_;
    std::map<std::string, std::string> peer_addresses_;
    message_counters counters_;
    std::vector<node_event> events_;
    std::deque<node_message> local_inbox_;
    bool draining_ = false;
    bool registered_ = false;
    std::uint64_t correlation_seq_ = 0;
    mutable std::recursive_mutex mutex_;
};

/// Aggregated send counts over a set of nodes (the simulation-wide ledger).
message_counters total_ledger(const std::vector<const node*>& nodes);

} // namespace ontomesh
