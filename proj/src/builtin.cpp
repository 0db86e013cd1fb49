#include "tubespec/builtin.hpp"

#include <map>

namespace tubespec {

namespace {

const std::map<std::string, std::string>& table() {
  static const std::map<std::string, std::string> t = {
      {"E1", R"({"n":1,"m":1,"N":1,"field":{"kind":"rational"},
                 "a":[[[{"sin":[1]}]]]})"},
      {"E2", R"({"n":1,"m":2,"N":1,"field":{"kind":"quadratic","d":5},
                 "a":[[[{"sin":[1]}],[{"sin":[1],"scale":{"p":"1/2","q":"1/2"}}]]]})"},
      {"E3", R"({"n":2,"m":2,"N":1,"field":{"kind":"quadratic","d":2},
                 "a":[[[{"cos":[1,0]}],[{"cos":[1,0],"scale":{"p":"0","q":"1"}}]]],
                 "W":[[0,1]]})"},
      {"E4", R"({"n":1,"m":2,"N":1,"field":{"kind":"rational"},
                 "a":[[[{"sin":[1]}],[{"sin":[1],"scale":"1/2"}]]]})"},
      {"E5", R"({"n":1,"m":2,"N":2,"field":{"kind":"rational"},
                 "a":[[[{"sin":[1]}],[]],[[],[{"cos":[2]}]]],
                 "W":[[0],[1]]})"},
      {"E6", R"({"n":1,"m":3,"N":1,"field":{"kind":"rational"},
                 "a":[[[{"sin":[1]}],[{"cos":[1]}],[{"sin":[1]},{"cos":[1]}]]]})"},
  };
  return t;
}

}  // namespace

std::vector<std::string> builtin_names() {
  std::vector<std::string> names;
  for (const auto& [k, v] : table()) names.push_back(k);
  names.push_back("liouville");
  return names;
}

json builtin_operator_json(const std::string& name) {
  if (name == "liouville") {
    return json::parse(std::string(R"({"n":1,"m":2,"N":1,"field":{"kind":"float","tol":1e-12},
                 "a":[[[{"sin":[1]}],[{"sin":[1],"scale":")") +
                       kLiouvilleAlpha + R"("}]]]})");
  }
  auto it = table().find(name);
  if (it == table().end()) throw ConfigError("unknown builtin operator '" + name + "'");
  return json::parse(it->second);
}

OperatorSpec builtin_operator(const std::string& name) { return operator_spec_from_json(builtin_operator_json(name)); }

}  // namespace tubespec
