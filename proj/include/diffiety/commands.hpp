#pragma once

#include <optional>
#include <string>
#include <vector>

#include "diffiety/report.hpp"

namespace diffiety {

struct CommandOptions {
  int order = 8;
  std::optional<int> max_level;
  std::vector<std::string> assume;
  std::optional<std::string> lagrangian; // expression or the id of a named one
  std::vector<std::string> components;   // "coordinate=expr"
  bool prolong_field = false;
  std::optional<std::string> z;
  std::vector<std::string> p, zr;
  std::vector<std::string> targets; // "j:k1,k2", 1-based
  std::optional<std::string> F, f;
};

/// 8, or DIFFIETY_ORDER when set to a nonnegative integer.
int default_order();

const std::vector<std::string>& command_names();

/// Runs one command. Library errors become exit code 2 with the message as a
/// diagnostic; verdict commands use 0/1 for true/false.
Report dispatch(const std::string& command, const std::vector<std::string>& files, const CommandOptions& opt);

} // namespace diffiety
