#ifndef COMBDIM_CONSTANTS_HPP
#define COMBDIM_CONSTANTS_HPP

// Absolute constants left unspecified by the inequalities, in one place.
// The *_pin values are regression ceilings measured on the fixed-seed suites
// (see tests/acceptance) and already include the 10% slack.

#include <string>

namespace combdim {

struct ConstantsConfig {
  // Scale factor c of vc(A, c t) in the entropy bound; 1/7 from the
  // discretisation step.
  double main_theorem_c = 1.0 / 7.0;
  // Lower limit c E / sqrt(n) of the Dudley integral and c E / n of the vc
  // integral.
  double dudley_lower_c = 0.1;
  double vc_lower_c = 0.1;
  double regression_slack = 0.10;
  // Measured maxima (K) and minima (c) on the development suites, slack applied.
  double main_theorem_K_pin = 0.0;
  double dudley_K_pin = 0.0;
  double vc_integral_K_pin = 0.0;
  double elton_c_pin = 0.0;
};

// Defaults with the pinned values filled in.
ConstantsConfig default_constants();

// Applies the keys present in a JSON object (same names as the fields);
// unknown keys throw ParseError.
ConstantsConfig constants_from_json(const std::string& json_text, ConstantsConfig base = default_constants());
std::string constants_to_json(const ConstantsConfig& constants);

}  // namespace combdim

#endif  // COMBDIM_CONSTANTS_HPP
