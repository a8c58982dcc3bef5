#ifndef BINET_CLI_HPP
#define BINET_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace binet {

/// Runs one `binet` subcommand (args excludes the program name). Returns the
/// exit status: 0 success, 1 parse/validation failure, 2 step limit reached.
int run_command(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace binet

#endif
