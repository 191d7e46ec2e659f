#pragma once

#include <string>
#include <vector>

#include "diffiety/one_form.hpp"
#include "json.hpp"

namespace diffiety {

using Json = nlohmann::ordered_json;

/// Result of one command: echo, structured results and diagnostics.
struct Report {
  std::string command;
  std::vector<std::string> args;
  Json results = Json::object();
  std::vector<std::string> diagnostics;
  int exit_code = 0;

  Json to_json() const;
  static Report from_json(const Json& j);
  std::string render_json() const;
  std::string render_text() const;
  bool operator==(const Report& o) const;
};

/// Coordinate name as written in problem files ("u[2]", "w", "x").
std::string coordinate_name(AtomId a);
/// [[coordinate, coefficient], ...] in column order, the x-differential last.
Json form_json(const Diffiety& d, const OneForm& theta);
Json forms_json(const Diffiety& d, const std::vector<OneForm>& forms);

} // namespace diffiety
