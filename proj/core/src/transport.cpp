#include "ontomesh/transport.hpp"

#include <cstring>

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include "ontomesh/errors.hpp"
#include "ontomesh/protocol.hpp"

namespace ontomesh {

// ============================================================================
// sim_network
// ============================================================================

void sim_network::attach(const std::string& address, frame_handler handler) {
    handlers_[address] = std::move(handler);
}

void sim_network::send(const std::string& to_address, std::string body) {
    in_flight_.emplace_back(to_address, std::move(body));
}

void sim_network::run_until_idle() {
    if (delivering_) {
        return; // a handler sent while we are already draining; outer loop picks it up
    }
    delivering_ = true;
    while (!in_flight_.empty()) {
        auto [address, body] = std::move(in_flight_.front());
        in_flight_.pop_front();
        auto it = handlers_.find(address);
        if (it == handlers_.end()) {
            ++dropped_;
            continue;
        }
        it->second(body);
    }
    delivering_ = false;
}

// ============================================================================
// socket_transport
// ============================================================================

namespace {

struct parsed_address {
    std::string host;
    std::uint16_t port;
};

parsed_address parse_address(const std::string& address) {
    auto colon = address.rfind(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == address.size()) {
        fail(errc::network_error, "address '" + address + "' is not host:port");
    }
    int port = 0;
    try {
        port = std::stoi(address.substr(colon + 1));
    } catch (const std::exception&) {
        fail(errc::network_error, "bad port in '" + address + "'");
    }
    if (port < 0 || port > 65535) {
        fail(errc::network_error, "bad port in '" + address + "'");
    }
    return {address.substr(0, colon), static_cast<std::uint16_t>(port)};
}

sockaddr_in resolve(const parsed_address& parsed) {
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(parsed.port);
    if (inet_pton(AF_INET, parsed.host.c_str(), &addr.sin_addr) == 1) {
        return addr;
    }
    addrinfo hints{};
    hints.ai_family = AF_INET;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* results = nullptr;
    if (getaddrinfo(parsed.host.c_str(), nullptr, &hints, &results) != 0 || results == nullptr) {
        fail(errc::network_error, "cannot resolve host '" + parsed.host + "'");
    }
    addr.sin_addr = reinterpret_cast<sockaddr_in*>(results->ai_addr)->sin_addr;
    freeaddrinfo(results);
    return addr;
}

bool write_all(int fd, const char* data, std::size_t size) {
    std::size_t written = 0;
    while (written < size) {
        ssize_t n = ::send(fd, data + written, size - written, MSG_NOSIGNAL);
        if (n <= 0) {
            return false;
        }
        written += static_cast<std::size_t>(n);
    }
    return true;
}

} // namespace

socket_transport::socket_transport(std::string listen_address)
    : address_(std::move(listen_address)) {}

socket_transport::~socket_transport() {
    stop();
}

void socket_transport::attach(frame_handler handler) {
    handler_ = std::move(handler);
}

void socket_transport::start() {
    parsed_address parsed = parse_address(address_);
    sockaddr_in addr = resolve(parsed);

    listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (listen_fd_ < 0) {
        fail(errc::network_error, "socket() failed");
    }
    int one = 1;
    ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
    if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
        ::close(listen_fd_);
        listen_fd_ = -1;
        fail(errc::network_error, "cannot bind '" + address_ + "'");
    }
    if (::listen(listen_fd_, 16) != 0) {
        ::close(listen_fd_);
        listen_fd_ = -1;
        fail(errc::network_error, "listen() failed on '" + address_ + "'");
    }
    sockaddr_in bound{};
    socklen_t len = sizeof(bound);
    ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&bound), &len);
    address_ = parsed.host + ":" + std::to_string(ntohs(bound.sin_port));

    running_ = true;
    accept_thread_ = std::thread([this] { accept_loop(); });
}

void socket_transport::stop() {
    if (!running_.exchange(false)) {
        return;
    }
    if (listen_fd_ >= 0) {
        ::shutdown(listen_fd_, SHUT_RDWR);
        ::close(listen_fd_);
        listen_fd_ = -1;
    }
    if (accept_thread_.joinable()) {
        accept_thread_.join();
    }
    std::vector<std::thread> readers;
    {
        std::lock_guard lock(mutex_);
        readers.swap(readers_);
        for (auto& [address, fd] : outbound_) {
            ::close(fd);
        }
        outbound_.clear();
    }
    for (auto& reader : readers) {
        if (reader.joinable()) {
            reader.join();
        }
    }
}

void socket_transport::accept_loop() {
    while (running_) {
        int fd = ::accept(listen_fd_, nullptr, nullptr);
        if (fd < 0) {
            if (running_) {
                continue;
            }
            break;
        }
        std::lock_guard lock(mutex_);
        if (!running_) {
            ::close(fd);
            break;
        }
        readers_.emplace_back([this, fd] { reader_loop(fd); });
    }
}

void socket_transport::reader_loop(int fd) {
    frame_reader frames;
    char buffer[4096];
    while (running_) {
        ssize_t n = ::recv(fd, buffer, sizeof(buffer), 0);
        if (n <= 0) {
            break;
        }
        frames.feed(buffer, static_cast<std::size_t>(n));
        while (auto body = frames.next()) {
            if (handler_) {
                handler_(*body);
            }
        }
    }
    ::close(fd);
}

int socket_transport::connect_to(const std::string& address) {
    sockaddr_in addr = resolve(parse_address(address));
    int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0) {
        fail(errc::network_error, "socket() failed");
    }
    if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
        ::close(fd);
        fail(errc::network_error, "cannot connect to '" + address + "'");
    }
    int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
    return fd;
}

void socket_transport::send(const std::string& to_address, std::string body) {
    std::string frame = encode_frame(body);
    std::lock_guard lock(mutex_);
    auto it = outbound_.find(to_address);
    if (it == outbound_.end()) {
        it = outbound_.emplace(to_address, connect_to(to_address)).first;
    }
    if (!write_all(it->second, frame.data(), frame.size())) {
        // peer dropped the cached connection; retry on a fresh one
        ::close(it->second);
        it->second = connect_to(to_address);
        if (!write_all(it->second, frame.data(), frame.size())) {
            ::close(it->second);
            outbound_.erase(it);
            fail(errc::network_error, "cannot send to '" + to_address + "'");
        }
    }
}

} // namespace ontomesh
