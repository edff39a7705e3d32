#include "combdim/constants.hpp"

#include "combdim/errors.hpp"
#include "json.hpp"
#include "json_io.hpp"

namespace combdim {

ConstantsConfig default_constants() {
  ConstantsConfig c;
  // Default-suite maxima (minima) times 1.1 (0.9).
  c.main_theorem_K_pin = 1.28;   // measured 1.1610
  c.dudley_K_pin = 0.97;         // measured 0.8792
  c.vc_integral_K_pin = 0.99;    // measured 0.8985
  c.elton_c_pin = 0.52;          // measured 0.5787
  return c;
}

namespace {

template <typename Fn>
void for_each_field(ConstantsConfig& c, Fn&& fn) {
  fn("main_theorem_c", c.main_theorem_c);
  fn("dudley_lower_c", c.dudley_lower_c);
  fn("vc_lower_c", c.vc_lower_c);
  fn("regression_slack", c.regression_slack);
  fn("main_theorem_K_pin", c.main_theorem_K_pin);
  fn("dudley_K_pin", c.dudley_K_pin);
  fn("vc_integral_K_pin", c.vc_integral_K_pin);
  fn("elton_c_pin", c.elton_c_pin);
}

}  // namespace

ConstantsConfig constants_from_json(const std::string& json_text, ConstantsConfig base) {
  const auto doc = detail::parse_document(json_text, "constants");
  if (!doc.is_object()) throw ParseError("constants: expected a JSON object");
  for (const auto& [key, value] : doc.items()) {
    bool known = false;
    for_each_field(base, [&](const char* name, double& field) {
      if (key == name) {
        field = detail::parse_number(value, std::string("constants.") + name);
        known = true;
      }
    });
    if (!known) throw ParseError("constants: unknown key '" + key + "'");
  }
  return base;
}

std::string constants_to_json(const ConstantsConfig& constants) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::object();
  ConstantsConfig copy = constants;
  for_each_field(copy, [&](const char* name, double& field) { doc[name] = field; });
  return doc.dump();
}

}  // namespace combdim
