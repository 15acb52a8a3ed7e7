// SPDX-License-Identifier: Apache-2.0
// Reference agent speaking the harness wire protocol over stdio or HTTP.
// Answers from the gold outputs of a dataset directory, or with empty
// outputs (--null).

#include <iostream>
#include <memory>
#include <string>

#include <CLI11.hpp>
#include <httplib.h>

#include "tripdiag/harness.hpp"

using namespace tripdiag;

int main(int argc, char** argv) {
  CLI::App app{"Oracle agent for tripdiag runs"};
  std::string cases_dir;
  bool null_mode = false;
  int port = 0;
  app.add_option("--cases", cases_dir, "Dataset directory written by gen-data");
  app.add_flag("--null", null_mode, "Answer every case with an empty output");
  app.add_option("--http", port, "Serve POST / on this port instead of stdio")->check(CLI::Range(1, 65535));
  CLI11_PARSE(app, argc, argv);

  std::unique_ptr<harness::Agent> agent;
  try {
    if (null_mode) {
      agent = std::make_unique<harness::NullAgent>();
    } else {
      if (cases_dir.empty()) {
        std::cerr << "oracle_agent: --cases is required unless --null is given\n";
        return 1;
      }
      agent = std::make_unique<harness::OracleAgent>(harness::read_dataset(cases_dir).cases);
    }
  } catch (const Error& e) {
    std::cerr << "oracle_agent: " << e.what() << "\n";
    return 2;
  }

  auto answer = [&](const std::string& text) {
    const auto req = json::parse(text, nullptr, false);
    if (req.is_discarded() || !req.is_object()) return json{{"case_id", ""}, {"output", json::object()}};
    return agent->call(req);
  };

  if (port) {
    httplib::Server server;
    server.Post("/", [&](const httplib::Request& rq, httplib::Response& rs) {
      rs.set_content(answer(rq.body).dump(), "application/json");
    });
    if (!server.listen("127.0.0.1", port)) {
      std::cerr << "oracle_agent: cannot listen on port " << port << "\n";
      return 3;
    }
    return 0;
  }

  std::string line;
  while (std::getline(std::cin, line)) {
    if (line.empty()) continue;
    std::cout << answer(line).dump() << "\n" << std::flush;
  }
  return 0;
}
