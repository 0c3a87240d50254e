#pragma once

#include <cstdint>
#include <string>

namespace ohmscope {

// Line-oriented blocking TCP stream. Lines are '\n'-terminated on the wire;
// recv strips the terminator (and a trailing '\r' if present).
class TcpStream {
  public:
    TcpStream() = default;
    explicit TcpStream(int fd) : fd_(fd) {}
    TcpStream(TcpStream&& other) noexcept;
    TcpStream& operator=(TcpStream&& other) noexcept;
    TcpStream(const TcpStream&) = delete;
    TcpStream& operator=(const TcpStream&) = delete;
    ~TcpStream();

    static TcpStream connect(const std::string& host, uint16_t port, double timeout_seconds);

    void set_receive_timeout(double seconds);
    void send_line(const std::string& line);
    std::string recv_line();                // throws TransportError on EOF or timeout
    bool try_recv_line(std::string& line);  // false on orderly EOF
    bool open() const { return fd_ >= 0; }
    void close();

  private:
    int fd_ = -1;
    std::string buffer_;
};

class TcpListener {
  public:
    // port 0 binds an ephemeral port; the bound port is reported by port().
    TcpListener(const std::string& host, uint16_t port);
    TcpListener(const TcpListener&) = delete;
    TcpListener& operator=(const TcpListener&) = delete;
    ~TcpListener();

    uint16_t port() const { return port_; }
    // Waits up to poll_ms for a connection; returns an unconnected stream on
    // timeout so callers can poll a stop flag between waits.
    TcpStream accept(int poll_ms);
    void close();

  private:
    int fd_ = -1;
    uint16_t port_ = 0;
};

}  // namespace ohmscope
