#pragma once

#include <atomic>
#include <cstddef>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace ontomesh {

/// Frame delivery surface shared by the deterministic in-process network and
/// the stream-socket network. Addresses are opaque strings (node ids on the
/// simulated network, host:port on sockets).
class transport {
public:
    virtual ~transport() = default;
    virtual void send(const std::string& to_address, std::string body) = 0;
};

using frame_handler = std::function<void(const std::string& body)>;

// ============================================================================
// Deterministic in-process network
// ============================================================================

/// Single global FIFO: frames are delivered one at a time in send order, so a
/// scripted scenario always produces the same event log.
class sim_network : public transport {
public:
    void attach(const std::string& address, frame_handler handler);
    void send(const std::string& to_address, std::string body) override;

    /// Delivers queued frames (and any frames those deliveries produce) until
    /// the network is quiet.
    void run_until_idle();

    std::size_t dropped_frames() const { return dropped_; }

private:
    std::map<std::string, frame_handler> handlers_;
    std::deque<std::pair<std::string, std::string>> in_flight_;
    std::size_t dropped_ = 0;
    bool delivering_ = false;
};

// ============================================================================
// Stream-socket network
// ============================================================================

/// Length-prefixed frames over TCP. One instance serves one node: it listens
/// on `listen_address` and keeps one outbound connection per destination so
/// frames to a peer arrive in send order.
class socket_transport : public transport {
public:
    explicit socket_transport(std::string listen_address);
    ~socket_transport() override;

    socket_transport(const socket_transport&) = delete;
    socket_transport& operator=(const socket_transport&) = delete;

    void attach(frame_handler handler);
    /// Binds and starts the accept loop. Throws errc::network_error when the
    /// address is taken or cannot be resolved.
    void start();
    void stop();

    /// Resolved listen address (real port when 0 was requested).
    const std::string& address() const { return address_; }

    void send(const std::string& to_address, std::string body) override;

private:
    void accept_loop();
    void reader_loop(int fd);
    int connect_to(const std::string& address);

    std::string address_;
    frame_handler handler_;
    int listen_fd_ = -1;
    std::atomic<bool> running_{false};
    std::thread accept_thread_;
    std::mutex mutex_; // guards readers_ and outbound_
    std::vector<std::thread> readers_;
    std::map<std::string, int> outbound_;
};

} // namespace ontomesh
