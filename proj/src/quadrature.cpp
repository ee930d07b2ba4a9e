#include "cfem/element.hpp"

#include <string>

namespace cfem {

namespace {

// Weights sum to the reference area 1/2.
void centroid(QuadratureRule& r, double w) { r.points.push_back({1.0 / 3.0, 1.0 / 3.0, w}); }

void orbit3(QuadratureRule& r, double a, double w) {
  const double c = 1.0 - 2.0 * a;
  r.points.push_back({a, a, w});
  r.points.push_back({a, c, w});
  r.points.push_back({c, a, w});
}

void orbit6(QuadratureRule& r, double a, double b, double w) {
  const double c = 1.0 - a - b;
  r.points.push_back({a, b, w});
  r.points.push_back({b, a, w});
  r.points.push_back({a, c, w});
  r.points.push_back({c, a, w});
  r.points.push_back({b, c, w});
  r.points.push_back({c, b, w});
}

std::vector<QuadratureRule> build_rules() {
  std::vector<QuadratureRule> rules;

  QuadratureRule r1{1, {}};
  centroid(r1, 0.5);
  rules.push_back(r1);

  QuadratureRule r2{2, {}};
  orbit3(r2, 1.0 / 6.0, 1.0 / 6.0);
  rules.push_back(r2);

  QuadratureRule r4{4, {}};
  orbit3(r4, 0.44594849091596488632, 0.11169079483900573285);
  orbit3(r4, 0.09157621350977074346, 0.054975871827660933819);
  rules.push_back(r4);

  QuadratureRule r5{5, {}};
  centroid(r5, 0.1125);
  orbit3(r5, 0.1012865073234563388, 0.062969590272413576298);
  orbit3(r5, 0.47014206410511508977, 0.066197076394253090369);
  rules.push_back(r5);

  QuadratureRule r6{6, {}};
  orbit3(r6, 0.06308901449150222834, 0.02542245318510340846);
  orbit3(r6, 0.24928674517091042129, 0.058393137863189683013);
  orbit6(r6, 0.053145049844816947353, 0.31035245103378440542, 0.041425537809186787597);
  rules.push_back(r6);

  QuadratureRule r8{8, {}};
  centroid(r8, 0.072157803838893584126);
  orbit3(r8, 0.45929258829272315603, 0.047545817133642312397);
  orbit3(r8, 0.17056930775176020662, 0.051608685267359125141);
  orbit3(r8, 0.050547228317030975458, 0.016229248811599040155);
  orbit6(r8, 0.0083947774099576053372, 0.26311282963463811342, 0.013615157087217497132);
  rules.push_back(r8);

  return rules;
}

const std::vector<QuadratureRule>& rules() {
  static const std::vector<QuadratureRule> table = build_rules();
  return table;
}

}  // namespace

const QuadratureRule& quadrature_rule(int min_degree) {
  for (const auto& r : rules()) {
    if (r.degree >= min_degree) return r;
  }
  throw Error("quadrature degree " + std::to_string(min_degree) + " not available (max " +
              std::to_string(max_quadrature_degree()) + ")");
}

int max_quadrature_degree() { return rules().back().degree; }

}  // namespace cfem
