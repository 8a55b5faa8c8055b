#pragma once

#include <ostream>

namespace gsense::app {

/// Parses arguments, runs one subcommand and writes its CSV. Returns 0 on
/// success, 2 for usage errors and 1 for numeric failures.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gsense::app
