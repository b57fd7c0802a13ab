#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace flatsc {

/// Runs one subcommand. args excludes the program name. Returns 0 on
/// success, 1 on a domain error, 2 on a usage error; errors are written to
/// `err` as {"error": code, "detail": text}.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Splits "ID,ID,..." where ids themselves contain commas.
std::vector<std::string> split_ids(const std::string& text);

}  // namespace flatsc
