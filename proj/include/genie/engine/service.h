// Copyright 2026 the genie authors
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

#pragma once

#include <memory>
#include <string>

namespace genie::engine {

class Engine;

/// JSON-over-HTTP front end. Queries run on a pool of `workers` threads;
/// their epochs are kept in memory for polling.
class Service {
 public:
  Service(Engine &engine, int workers);
  ~Service();
  Service(const Service &) = delete;
  Service &operator=(const Service &) = delete;

  /// Binds the listening socket; port 0 picks a free one. Returns the port.
  int bind(const std::string &host, int port);
  /// Serves until stop(). Requires bind().
  void run();
  void start();  // run() on a background thread
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace genie::engine
