#include "bb84/attack_file.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace bb84 {
namespace {

double require_number(const nlohmann::json& j, const std::string& key) {
  if (!j.contains(key) || !j.at(key).is_number()) {
    throw std::invalid_argument("attack file: missing numeric field \"" + key + "\"");
  }
  return j.at(key).get<double>();
}

bool has_all(const nlohmann::json& j, std::initializer_list<const char*> keys) {
  for (const char* k : keys) {
    if (!j.contains(k)) return false;
  }
  return true;
}

}  // namespace

AttackFile parse_attack_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("attack file: ") + e.what());
  }
  if (!j.is_object() || !j.contains("type") || !j.at("type").is_string()) {
    throw std::invalid_argument("attack file: expected an object with a \"type\" string");
  }
  const std::string type = j.at("type").get<std::string>();

  AttackFile out;
  if (type == "incoherent") {
    out.incoherent = new_params(require_number(j, "D"), require_number(j, "D1"));
  } else if (type == "coherent") {
    if (has_all(j, {"A", "A1", "A2", "B", "B1", "B2", "B3", "C", "C1", "C2"})) {
      CoherentParams p{};
      p.A = require_number(j, "A");
      p.A1 = require_number(j, "A1");
      p.A2 = require_number(j, "A2");
      p.B = require_number(j, "B");
      p.B1 = require_number(j, "B1");
      p.B2 = require_number(j, "B2");
      p.B3 = require_number(j, "B3");
      p.C = require_number(j, "C");
      p.C1 = require_number(j, "C1");
      p.C2 = require_number(j, "C2");
      out.coherent = from_ten(p);
    } else {
      out.coherent = from_free(require_number(j, "B"), require_number(j, "C"),
                               require_number(j, "A1"), require_number(j, "B2"),
                               require_number(j, "C1"));
    }
  } else {
    throw std::invalid_argument("attack file: unknown type \"" + type + "\"");
  }
  return out;
}

AttackFile load_attack_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("attack file: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_attack_json(buf.str());
}

}  // namespace bb84
