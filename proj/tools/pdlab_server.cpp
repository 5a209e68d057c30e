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
#include <iostream>

#include "CLI11.hpp"
#include "pdlab/server/channel_server.hpp"

int main(int argc, char** argv) {
  CLI::App app{"pdlab experiment server: participant channels plus admin API"};
  std::string host = "127.0.0.1";
  unsigned short channel_port = 7400;
  int admin_port = 7401;
  std::string log_dir = "logs";
  unsigned threads = 4;
  std::uint64_t token_seed = std::random_device{}();
  app.add_option("--host", host, "Bind address");
  app.add_option("--channel-port", channel_port, "TCP port for participant channels (0 picks one)");
  app.add_option("--admin-port", admin_port, "HTTP port for the admin API (0 picks one)");
  app.add_option("--log-dir", log_dir, "Directory for per-session event logs");
  app.add_option("--threads", threads, "Worker threads for agent backend calls")->check(CLI::Range(1u, 256u));
  app.add_option("--token-seed", token_seed, "Seed for join token generation");
  CLI11_PARSE(app, argc, argv);

  try {
    std::filesystem::create_directories(log_dir);
    boost::asio::io_context io;
    pdlab::session::PoolExecutor pool(threads);
    pdlab::session::SessionManager manager(
        pool, std::filesystem::path(log_dir),
        [] {
          return std::chrono::duration_cast<std::chrono::milliseconds>(
                     std::chrono::system_clock::now().time_since_epoch())
              .count();
        },
        token_seed);
    pdlab::server::ChannelServer channel(io, manager, host, channel_port);
    pdlab::server::AdminApi admin(manager, host, admin_port);
    std::cout << "channel listening on " << host << ":" << channel.port() << "\n"
              << "admin API on http://" << host << ":" << admin.port() << std::endl;

    boost::asio::signal_set signals(io, SIGINT, SIGTERM);
    signals.async_wait([&](const boost::system::error_code&, int) {
      admin.stop();
      channel.stop();
      io.stop();
    });
    io.run();
  } catch (const std::exception& e) {
    std::cerr << "pdlab-server: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
