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

#include <boost/asio.hpp>
#include <chrono>
#include <filesystem>
#include <thread>

#include "doctest.h"
#include "httplib.h"
#include "pdlab/server/channel_server.hpp"
#include "pdlab/session/harness.hpp"

using namespace pdlab;
using namespace pdlab::session;
using nlohmann::json;
namespace asio = boost::asio;
using asio::ip::tcp;

namespace {

game::EpochMs wall_ms() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::system_clock::now().time_since_epoch())
      .count();
}

struct LiveServer {
  asio::io_context io;
  PoolExecutor pool{2};
  SessionManager manager{pool, std::nullopt, wall_ms, 42};
  std::unique_ptr<pdlab::server::ChannelServer> channel;
  std::unique_ptr<pdlab::server::AdminApi> admin;
  std::thread io_thread;
  asio::executor_work_guard<asio::io_context::executor_type> guard = asio::make_work_guard(io);

  LiveServer() {
    channel = std::make_unique<pdlab::server::ChannelServer>(io, manager, "127.0.0.1", 0, std::chrono::milliseconds{20});
    admin = std::make_unique<pdlab::server::AdminApi>(manager, "127.0.0.1", 0);
    io_thread = std::thread([this] { io.run(); });
  }
  ~LiveServer() {
    admin->stop();
    channel->stop();
    guard.reset();
    io_thread.join();
  }
};

struct LineClient {
  asio::io_context io;
  tcp::socket socket{io};
  asio::streambuf buf;

  explicit LineClient(unsigned short port) { socket.connect({asio::ip::make_address("127.0.0.1"), port}); }
  void send(const std::string& line) { asio::write(socket, asio::buffer(line + "\n")); }
  std::optional<std::string> next() {
    boost::system::error_code ec;
    const auto n = asio::read_until(socket, buf, '\n', ec);
    if (ec) return std::nullopt;
    std::string line(asio::buffers_begin(buf.data()), asio::buffers_begin(buf.data()) + n - 1);
    buf.consume(n);
    return line;
  }
};

json fast_config(const std::string& pairing, int rounds) {
  return {{"rounds", rounds},
          {"timers", {{"compose", 0.4}, {"read", 0.05}, {"decide", 0.4}, {"results", 0.05}}},
          {"questionnaire_timeout", 5},
          {"treatment", {{"pairing", pairing}}},
          {"seed", 3}};
}

// Plays a participant over a real socket until session_complete.
std::vector<ServerMessage> play(unsigned short port, const std::string& token, const std::string& participant,
                                const SessionConfig& cfg) {
  LineClient c(port);
  ScriptedBehavior b;
  b.delay = std::chrono::milliseconds{0};
  ScriptedClient script(participant, b, cfg);
  c.send(encode(ClientMessage{std::nullopt, client::Join{token}}));
  while (auto line = c.next()) {
    const auto m = parse_server_message(*line);
    for (const auto& a : script.react(m, wall_ms())) {
      if (a.message) c.send(encode(*a.message));
    }
    if (m.type == "session_complete") break;
  }
  return script.received();
}

}  // namespace

TEST_CASE("live server runs sessions end to end over TCP and HTTP") {
  LiveServer srv;
  httplib::Client http("127.0.0.1", srv.admin->port());

  auto res = http.Post("/sessions", json{{"config", fast_config("HH", 1)}, {"participants", 2}}.dump(), "application/json");
  REQUIRE(res);
  REQUIRE(res->status == 201);
  const auto hh = json::parse(res->body);
  CHECK(hh["tokens"].size() == 2);

  res = http.Post("/sessions", json{{"config", fast_config("HF", 2)}, {"roster", {"solo"}}}.dump(), "application/json");
  REQUIRE(res);
  REQUIRE(res->status == 201);
  const auto hf = json::parse(res->body);

  res = http.Post("/sessions", json{{"config", fast_config("HH", 1)}, {"participants", 3}}.dump(), "application/json");
  REQUIRE(res);
  CHECK(res->status == 400);
  CHECK(json::parse(res->body)["error"] == "ConfigInvalid");
  res = http.Get("/sessions/nope");
  REQUIRE(res);
  CHECK(res->status == 404);

  const std::string hh_id = hh["session_id"], hf_id = hf["session_id"];
  const auto hh_cfg = parse_config(fast_config("HH", 1));
  const auto hf_cfg = parse_config(fast_config("HF", 2));

  std::vector<std::vector<ServerMessage>> logs(3);
  std::vector<std::thread> players;
  players.emplace_back([&] { logs[0] = play(srv.channel->port(), hh["tokens"]["p01"], "p01", hh_cfg); });
  players.emplace_back([&] { logs[1] = play(srv.channel->port(), hh["tokens"]["p02"], "p02", hh_cfg); });
  players.emplace_back([&] { logs[2] = play(srv.channel->port(), hf["tokens"]["solo"], "solo", hf_cfg); });

  // Start once everyone has joined.
  for (int i = 0; i < 500; ++i) {
    const auto a = srv.manager.status(hh_id), b = srv.manager.status(hf_id);
    int connected = 0;
    for (const auto& s : {a, b}) {
      for (const auto& p : s["participants"]) connected += p["connected"].get<bool>();
    }
    if (connected == 3) break;
    std::this_thread::sleep_for(std::chrono::milliseconds(10));
  }
  res = http.Post("/export", json{{"session_ids", {hh_id}}, {"out_dir", "/tmp/pdlab_never"}}.dump(), "application/json");
  REQUIRE(res);
  CHECK(res->status == 409);
  REQUIRE(http.Post("/sessions/" + hh_id + "/start")->status == 200);
  REQUIRE(http.Post("/sessions/" + hf_id + "/start")->status == 200);
  CHECK(http.Post("/sessions/" + hf_id + "/start")->status == 409);
  for (auto& t : players) t.join();

  for (const auto& log : logs) {
    REQUIRE_FALSE(log.empty());
    CHECK(log.front().type == "welcome");
    CHECK(log.back().type == "session_complete");
  }
  CHECK(srv.manager.find(hh_id)->phase() == Phase::Complete);
  CHECK(srv.manager.find(hf_id)->phase() == Phase::Complete);
  const auto hf_result = srv.manager.find(hf_id)->result();
  CHECK(hf_result.interactions.size() == 2);
  CHECK(replay(srv.manager.find(hf_id)->events()) == hf_result);

  const auto out = std::filesystem::temp_directory_path() / "pdlab_server_export";
  std::filesystem::remove_all(out);
  res = http.Post("/export", json{{"session_ids", {hh_id, hf_id}}, {"out_dir", out.string()}}.dump(), "application/json");
  REQUIRE(res);
  CHECK(res->status == 200);
  CHECK(std::filesystem::exists(out / "interactions.csv"));

  res = http.Get("/sessions");
  REQUIRE(res);
  CHECK(json::parse(res->body).size() == 2);
}

TEST_CASE("channel rejects bad joins and replaces a reconnecting participant") {
  LiveServer srv;
  const auto created = srv.manager.create(parse_config(fast_config("HH", 1)), {"a", "b"});

  {
    LineClient c(srv.channel->port());
    c.send(R"({"v":1,"type":"choice","choice":"A"})");
    const auto reply = parse_server_message(*c.next());
    CHECK(reply.type == "error");
    CHECK(reply.body["code"] == "ProtocolError");
    CHECK_FALSE(c.next().has_value());  // closed
  }
  {
    LineClient c(srv.channel->port());
    c.send(encode(ClientMessage{std::nullopt, client::Join{"not-a-token"}}));
    CHECK(parse_server_message(*c.next()).body["code"] == "UnknownSession");
  }

  LineClient first(srv.channel->port());
  first.send(encode(ClientMessage{std::nullopt, client::Join{created.tokens.at("a")}}));
  CHECK(parse_server_message(*first.next()).type == "welcome");
  first.send("garbage");
  CHECK(parse_server_message(*first.next()).body["code"] == "ProtocolError");

  LineClient second(srv.channel->port());
  second.send(encode(ClientMessage{std::nullopt, client::Join{created.tokens.at("a")}}));
  CHECK(parse_server_message(*second.next()).type == "welcome");
  CHECK_FALSE(first.next().has_value());

  srv.manager.start(created.session_id);
  // The live connection receives the instructions after start.
  bool saw_quiz = false;
  for (int i = 0; i < 3 && !saw_quiz; ++i) {
    auto line = second.next();
    REQUIRE(line);
    saw_quiz = parse_server_message(*line).type == "quiz";
  }
  CHECK(saw_quiz);
  const auto events = srv.manager.find(created.session_id)->events();
  CHECK(std::none_of(events.begin(), events.end(),
                     [](const EventRecord& e) { return e.kind == EventKind::ParticipantDisconnected; }));
}
