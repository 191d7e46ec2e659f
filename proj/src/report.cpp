#include <algorithm>
#include <sstream>

#include "diffiety/report.hpp"

namespace diffiety {

Json Report::to_json() const {
  Json j;
  j["schema"] = 1;
  j["command"] = command;
  j["args"] = args;
  j["results"] = results;
  j["diagnostics"] = diagnostics;
  j["exit_code"] = exit_code;
  return j;
}

Report Report::from_json(const Json& j) {
  if (!j.is_object() || j.value("schema", 0) != 1) throw MalformedInput("report JSON needs \"schema\": 1");
  Report r;
  r.command = j.at("command").get<std::string>();
  r.args = j.at("args").get<std::vector<std::string>>();
  r.results = j.at("results");
  r.diagnostics = j.at("diagnostics").get<std::vector<std::string>>();
  r.exit_code = j.at("exit_code").get<int>();
  return r;
}

std::string Report::render_json() const { return to_json().dump(2) + "\n"; }

namespace {

std::string scalar(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

bool is_pair_table(const Json& v) {
  return v.is_array() && std::all_of(v.begin(), v.end(), [](const Json& e) {
           return e.is_array() && e.size() == 2 && e[0].is_string() && e[1].is_string();
         });
}

void render(std::ostringstream& out, const Json& v, int indent) {
  std::string pad(static_cast<std::size_t>(indent), ' ');
  if (v.is_object()) {
    for (const auto& [k, x] : v.items()) {
      if (x.is_object() || (x.is_array() && !x.empty())) {
        out << pad << k << ":\n";
        render(out, x, indent + 2);
      } else {
        out << pad << k << ": " << (x.is_array() ? "[]" : scalar(x)) << "\n";
      }
    }
  } else if (is_pair_table(v) && !v.empty()) {
    out << pad;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) out << " + ";
      out << "(" << v[i][1].get<std::string>() << ") d" << v[i][0].get<std::string>();
    }
    out << "\n";
  } else if (v.is_array()) {
    for (const auto& x : v) {
      if (x.is_object() || (x.is_array() && !is_pair_table(x))) {
        out << pad << "-\n";
        render(out, x, indent + 2);
      } else if (is_pair_table(x)) {
        if (x.empty())
          out << pad << "- 0\n";
        else
          render(out, x, indent);
      } else {
        out << pad << "- " << scalar(x) << "\n";
      }
    }
  } else {
    out << pad << scalar(v) << "\n";
  }
}

} // namespace

std::string Report::render_text() const {
  std::ostringstream out;
  out << "command: " << command;
  for (const auto& a : args) out << " " << a;
  out << "\n";
  render(out, results, 0);
  for (const auto& d : diagnostics) out << "note: " << d << "\n";
  return out.str();
}

bool Report::operator==(const Report& o) const {
  return command == o.command && args == o.args && results == o.results && diagnostics == o.diagnostics &&
         exit_code == o.exit_code;
}

std::string coordinate_name(AtomId a) { return Expr::atom(a).str(); }

Json form_json(const Diffiety& d, const OneForm& theta) {
  std::vector<AtomId> cols;
  for (const auto& [c, a] : theta.terms()) cols.push_back(c);
  std::sort(cols.begin(), cols.end(), [&d](AtomId a, AtomId b) {
    if (a == d.x() || b == d.x()) return b == d.x() && a != d.x();
    bool ca = d.is_coordinate(a), cb = d.is_coordinate(b);
    if (ca != cb) return ca;
    if (!ca) return coordinate_name(a) < coordinate_name(b);
    return d.column_less(a, b);
  });
  Json out = Json::array();
  for (AtomId c : cols) out.push_back(Json::array({coordinate_name(c), theta.coefficient(c).str()}));
  return out;
}

Json forms_json(const Diffiety& d, const std::vector<OneForm>& forms) {
  Json out = Json::array();
  for (const auto& f : forms) out.push_back(form_json(d, f));
  return out;
}

} // namespace diffiety
