#include "fqrigid/commands.hpp"

#include <iostream>

int main(int argc, char **argv) {
  using namespace fqrigid;
  ExperimentConfig cfg;
  try {
    cfg = parse_config(argc, argv);
  } catch (const Error &e) {
    std::cerr << "fqrigid: " << e.what() << "\n";
    return 2;
  }
  if (cfg.help) {
    std::cout << *cfg.help;
    return 0;
  }
  try {
    return emit_report(run_command(cfg), cfg.out, std::cout);
  } catch (const Error &e) {
    std::cerr << "fqrigid: " << e.what() << "\n";
    return e.code() == ErrorCode::IoFailure ? 3 : 2;
  }
}
