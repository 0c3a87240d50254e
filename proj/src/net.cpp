#include "ohmscope/net.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cmath>
#include <cstring>
#include <utility>

#include "ohmscope/errors.hpp"

namespace ohmscope {

namespace {

sockaddr_in make_address(const std::string& host, uint16_t port) {
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1)
        throw TransportError("bad IPv4 address: " + host);
    return addr;
}

timeval to_timeval(double seconds) {
    timeval tv{};
    tv.tv_sec = static_cast<time_t>(seconds);
    tv.tv_usec = static_cast<suseconds_t>((seconds - std::floor(seconds)) * 1e6);
    return tv;
}

}  // namespace

TcpStream::TcpStream(TcpStream&& other) noexcept
    : fd_(std::exchange(other.fd_, -1)), buffer_(std::move(other.buffer_)) {}

TcpStream& TcpStream::operator=(TcpStream&& other) noexcept {
    if (this != &other) {
        close();
        fd_ = std::exchange(other.fd_, -1);
        buffer_ = std::move(other.buffer_);
    }
    return *this;
}

TcpStream::~TcpStream() { close(); }

TcpStream TcpStream::connect(const std::string& host, uint16_t port, double timeout_seconds) {
    int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0) throw TransportError(std::string("socket: ") + std::strerror(errno));
    TcpStream stream(fd);

    sockaddr_in addr = make_address(host, port);
    timeval tv = to_timeval(timeout_seconds);
    ::setsockopt(fd, SOL_SOCKET, SO_SNDTIMEO, &tv, sizeof(tv));
    if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0)
        throw TransportError("connect to " + host + ":" + std::to_string(port) + ": " +
                             std::strerror(errno));
    stream.set_receive_timeout(timeout_seconds);
    return stream;
}

void TcpStream::set_receive_timeout(double seconds) {
    timeval tv = to_timeval(seconds);
    ::setsockopt(fd_, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof(tv));
}

void TcpStream::send_line(const std::string& line) {
    std::string wire = line + "\n";
    std::size_t sent = 0;
    while (sent < wire.size()) {
        ssize_t n = ::send(fd_, wire.data() + sent, wire.size() - sent, MSG_NOSIGNAL);
        if (n <= 0) throw TransportError(std::string("send: ") + std::strerror(errno));
        sent += static_cast<std::size_t>(n);
    }
}

bool TcpStream::try_recv_line(std::string& line) {
    while (true) {
        std::size_t pos = buffer_.find('\n');
        if (pos != std::string::npos) {
            line = buffer_.substr(0, pos);
            buffer_.erase(0, pos + 1);
            if (!line.empty() && line.back() == '\r') line.pop_back();
            return true;
        }
        char chunk[4096];
        ssize_t n = ::recv(fd_, chunk, sizeof(chunk), 0);
        if (n == 0) {
            if (!buffer_.empty()) {  // peer closed mid-line
                line = std::exchange(buffer_, std::string());
                return true;
            }
            return false;
        }
        if (n < 0) {
            if (errno == EAGAIN || errno == EWOULDBLOCK)
                throw TransportError("receive timeout");
            throw TransportError(std::string("recv: ") + std::strerror(errno));
        }
        buffer_.append(chunk, static_cast<std::size_t>(n));
    }
}

std::string TcpStream::recv_line() {
    std::string line;
    if (!try_recv_line(line)) throw TransportError("connection closed by peer");
    return line;
}

void TcpStream::close() {
    if (fd_ >= 0) {
        ::close(fd_);
        fd_ = -1;
    }
    buffer_.clear();
}

TcpListener::TcpListener(const std::string& host, uint16_t port) {
    fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd_ < 0) throw TransportError(std::string("socket: ") + std::strerror(errno));
    int one = 1;
    ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
    sockaddr_in addr = make_address(host, port);
    if (::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
        int err = errno;
        ::close(fd_);
        fd_ = -1;
        throw TransportError("bind " + host + ":" + std::to_string(port) + ": " +
                             std::strerror(err));
    }
    if (::listen(fd_, 8) != 0) {
        int err = errno;
        ::close(fd_);
        fd_ = -1;
        throw TransportError(std::string("listen: ") + std::strerror(err));
    }
    sockaddr_in bound{};
    socklen_t len = sizeof(bound);
    ::getsockname(fd_, reinterpret_cast<sockaddr*>(&bound), &len);
    port_ = ntohs(bound.sin_port);
}

TcpListener::~TcpListener() { close(); }

TcpStream TcpListener::accept(int poll_ms) {
    pollfd pfd{fd_, POLLIN, 0};
    int rc = ::poll(&pfd, 1, poll_ms);
    if (rc < 0) throw TransportError(std::string("poll: ") + std::strerror(errno));
    if (rc == 0) return TcpStream();
    int client = ::accept(fd_, nullptr, nullptr);
    if (client < 0) throw TransportError(std::string("accept: ") + std::strerror(errno));
    return TcpStream(client);
}

void TcpListener::close() {
    if (fd_ >= 0) {
        ::close(fd_);
        fd_ = -1;
    }
}

}  // namespace ohmscope
