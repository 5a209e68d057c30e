// Copyright 2026 The pdlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <atomic>
#include <boost/asio.hpp>
#include <deque>
#include <map>

#include "pdlab/error.hpp"
#include "pdlab/server/channel_server.hpp"

namespace pdlab::server {

namespace asio = boost::asio;
using asio::ip::tcp;
using session::ClientMessage;

namespace {
constexpr std::size_t kMaxLine = 64 * 1024;
}

struct ChannelServer::Impl : std::enable_shared_from_this<ChannelServer::Impl> {
  struct Connection : std::enable_shared_from_this<Connection> {
    Connection(tcp::socket s, std::weak_ptr<Impl> owner) : socket(std::move(s)), buffer(kMaxLine), server(owner) {}

    tcp::socket socket;
    asio::streambuf buffer;
    std::deque<std::string> outgoing;
    std::weak_ptr<Impl> server;
    std::shared_ptr<session::Session> session;
    std::string participant;
    bool closed = false;

    void read() {
      asio::async_read_until(socket, buffer, '\n', [self = shared_from_this()](boost::system::error_code ec, std::size_t n) {
        if (ec) return self->close();
        std::string line(asio::buffers_begin(self->buffer.data()), asio::buffers_begin(self->buffer.data()) + n);
        self->buffer.consume(n);
        while (!line.empty() && (line.back() == '\n' || line.back() == '\r')) line.pop_back();
        if (!line.empty()) {
          if (auto srv = self->server.lock()) srv->on_line(self, line);
        }
        if (!self->closed) self->read();
      });
    }

    void send(std::string line) {
      if (closed) return;
      outgoing.push_back(std::move(line) + "\n");
      if (outgoing.size() == 1) write_next();
    }

    void write_next() {
      asio::async_write(socket, asio::buffer(outgoing.front()), [self = shared_from_this()](boost::system::error_code ec, std::size_t) {
        if (ec) return self->close();
        self->outgoing.pop_front();
        if (!self->outgoing.empty()) self->write_next();
      });
    }

    void close() {
      if (closed) return;
      closed = true;
      boost::system::error_code ignored;
      socket.shutdown(tcp::socket::shutdown_both, ignored);
      socket.close(ignored);
      if (auto srv = server.lock()) srv->on_closed(shared_from_this());
    }
  };

  Impl(asio::io_context& io, session::SessionManager& m, const std::string& host, unsigned short port,
       std::chrono::milliseconds t)
      : io(io),
        manager(m),
        acceptor(io, tcp::endpoint(asio::ip::make_address(host), port)),
        timer(io),
        tick(t),
        bound_port(acceptor.local_endpoint().port()) {}

  asio::io_context& io;
  session::SessionManager& manager;
  tcp::acceptor acceptor;
  asio::steady_timer timer;
  std::chrono::milliseconds tick;
  unsigned short bound_port;
  std::map<std::pair<std::string, std::string>, std::weak_ptr<Connection>> routes;
  std::atomic<bool> wake_pending{false};
  bool stopped = false;

  void begin() {
    std::weak_ptr<Impl> weak = shared_from_this();
    manager.set_wakeup([weak, &io = io] {
      auto self = weak.lock();
      if (!self || self->wake_pending.exchange(true)) return;
      asio::post(io, [weak] {
        if (auto s = weak.lock()) {
          s->wake_pending = false;
          s->pump_all();
        }
      });
    });
    accept();
    schedule_tick();
  }

  void accept() {
    acceptor.async_accept([self = shared_from_this()](boost::system::error_code ec, tcp::socket socket) {
      if (ec) return;
      std::make_shared<Connection>(std::move(socket), self)->read();
      self->accept();
    });
  }

  void schedule_tick() {
    timer.expires_after(tick);
    timer.async_wait([weak = std::weak_ptr<Impl>(shared_from_this())](boost::system::error_code ec) {
      auto self = weak.lock();
      if (ec || !self || self->stopped) return;
      self->pump_all();
      self->schedule_tick();
    });
  }

  void pump_all() {
    const auto now = manager.now();
    for (const auto& s : manager.sessions()) {
      s->pump(now);
      for (auto& out : s->drain_outbox()) {
        const auto it = routes.find({s->id(), out.participant});
        if (it == routes.end()) continue;
        if (auto conn = it->second.lock()) conn->send(session::encode(out.message));
      }
    }
  }

  void reply_error(const std::shared_ptr<Connection>& c, Errc code, const std::string& what,
                   const std::optional<std::string>& ref) {
    c->send(session::encode(session::server::error(to_string(code), what, ref)));
  }

  void on_line(const std::shared_ptr<Connection>& c, const std::string& line) {
    ClientMessage msg;
    try {
      msg = session::parse_client_message(line);
    } catch (const Error& e) {
      reply_error(c, e.code(), e.what(), std::nullopt);
      if (!c->session) c->close();
      return;
    }
    const auto* join = std::get_if<session::client::Join>(&msg.body);
    if (!c->session) {
      if (!join) {
        reply_error(c, Errc::ProtocolError, "the first message must be a join", msg.id);
        return c->close();
      }
      auto binding = manager.resolve(join->token);
      if (!binding) {
        reply_error(c, Errc::UnknownSession, "unknown join token", msg.id);
        return c->close();
      }
      c->session = binding->session;
      c->participant = binding->participant;
      auto& slot = routes[{c->session->id(), c->participant}];
      if (auto old = slot.lock(); old && old != c) {
        old->session.reset();  // the replaced connection must not report a disconnect
        old->close();
      }
      slot = c;
    } else if (join) {
      reply_error(c, Errc::ProtocolError, "already joined", msg.id);
      return;
    }
    c->session->post(c->participant, std::move(msg));
    pump_all();
  }

  void on_closed(const std::shared_ptr<Connection>& c) {
    if (!c->session) return;
    const auto key = std::pair{c->session->id(), c->participant};
    const auto it = routes.find(key);
    if (it != routes.end() && it->second.lock() == c) {
      routes.erase(it);
      c->session->post_disconnect(c->participant);
    }
  }

  void stop() {
    if (stopped) return;
    stopped = true;
    manager.set_wakeup({});
    boost::system::error_code ignored;
    acceptor.close(ignored);
    timer.cancel();
    for (auto& [_, weak] : routes) {
      if (auto c = weak.lock()) {
        c->session.reset();
        c->close();
      }
    }
    routes.clear();
  }
};

ChannelServer::ChannelServer(asio::io_context& io, session::SessionManager& manager, const std::string& host,
                             unsigned short port, std::chrono::milliseconds tick)
    : impl_(std::make_shared<Impl>(io, manager, host, port, tick)) {
  impl_->begin();
}

// Call stop() and let the io_context drain before destroying the server.
ChannelServer::~ChannelServer() { impl_->manager.set_wakeup({}); }

unsigned short ChannelServer::port() const { return impl_->bound_port; }

void ChannelServer::stop() {
  asio::post(impl_->io, [impl = impl_] { impl->stop(); });
}

}  // namespace pdlab::server
