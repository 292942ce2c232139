#pragma once

// Command-line front end: one subcommand per pipeline stage, JSON on stdout.

#include <iosfwd>
#include <string>
#include <vector>

#include "fftower/json_io.hpp"

namespace fftower {

namespace cli_detail {

std::string poly_text(const Poly& f);
std::string basis_text(const BasisElement& b);
GroupElement parse_element(const std::string& text, int levels);
// Writes {"error", "detail"} and returns the exit code for the error.
int report_error(const Error& e, std::ostream& out);

}  // namespace cli_detail

// Runs one command. args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace fftower
