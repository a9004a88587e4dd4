// SPDX-License-Identifier: Apache-2.0
// Reference agents as a stand-alone process speaking the line protocol on
// stdin/stdout. One process handles one case.
#include <iostream>

#include "CLI11.hpp"
#include "irbench/harness/agents.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Reference investigation agents"};
  std::string kind;
  std::string corpus;
  std::uint64_t seed = 0;
  app.add_option("kind", kind, "Agent kind")
      ->required()
      ->check(CLI::IsMember(irbench::harness::reference_agent_names()));
  app.add_option("--corpus", corpus, "Corpus directory (oracle only)");
  app.add_option("--seed", seed, "Seed for the random agent");
  CLI11_PARSE(app, argc, argv);

  try {
    std::ios::sync_with_stdio(false);
    irbench::harness::StreamChannel channel(std::cin, std::cout);
    irbench::harness::make_reference_agent(kind, corpus, seed)(channel);
  } catch (const std::exception& e) {
    std::cerr << "irbench-agent: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
