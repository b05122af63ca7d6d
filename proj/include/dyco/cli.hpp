#ifndef DYCO_CLI_HPP
#define DYCO_CLI_HPP

#include "dyco/error.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace dyco {

enum ExitCode : int { exit_ok = 0, exit_failure = 1, exit_usage = 2, exit_backend = 3 };

/// 1: the protocol or a verification rejected the input; 2: bad
/// arguments, configuration or input files; 3: a backend gave up.
int exit_code_for(Errc code) noexcept;

/// The whole command-line tool; args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace dyco

#endif // DYCO_CLI_HPP
