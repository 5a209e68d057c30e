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

#include <boost/asio/post.hpp>
#include <boost/asio/thread_pool.hpp>

#include "pdlab/session/session.hpp"

namespace pdlab::session {

struct PoolExecutor::Impl {
  explicit Impl(std::size_t threads) : pool(threads) {}
  boost::asio::thread_pool pool;
};

PoolExecutor::PoolExecutor(std::size_t threads) : impl_(std::make_unique<Impl>(threads == 0 ? 1 : threads)) {}

PoolExecutor::~PoolExecutor() { impl_->pool.join(); }

void PoolExecutor::submit(std::function<void()> task) { boost::asio::post(impl_->pool, std::move(task)); }

}  // namespace pdlab::session
