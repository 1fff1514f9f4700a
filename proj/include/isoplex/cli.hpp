#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "isoplex/driver.hpp"

namespace isoplex {

/// Exit codes shared by all subcommands.
enum ExitCode : int {
    exit_ok = 0,
    exit_input_error = 1,
    exit_budget_exhausted = 2,
    exit_rejected = 3,
};

struct RunConfig {
    std::string input;        // polynomial file
    std::string certificate;  // verify / topo
    std::string out_dir = ".";
    std::string off_path;     // topo: optional mesh output
    SolveParams params;
    bool json = false;
    bool verify = true;
    // bench
    std::vector<std::string> inputs;
    std::string random_spec;  // "<nvars>:<d1>,<d2>,..."
    int samples = 20;
};

int cmd_solve(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_topo(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_bench(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Parses the command line and dispatches; never throws.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace isoplex
