#include "hyperlim/state.hpp"

#include <cmath>

#include "hyperlim/quadrature.hpp"

namespace hyperlim {

double total_variation(const GridFunction& g) {
  KahanSum tv;
  const int n = g.size();
  for (int j = 0; j < n; ++j) {
    auto cur = g.at(j);
    const double* prev = (j == 0) ? g.left_state.data() : g.at(j - 1).data();
    for (int k = 0; k < g.dim; ++k) tv.add(std::abs(cur[k] - prev[k]));
  }
  return tv.value();
}

double total_variation(const LatticeState& s) {
  KahanSum tv;
  const int n = s.size();
  for (int k = 0; k < n; ++k) {
    auto cur = s.at(k);
    const double* prev = (k == 0) ? s.left_state.data() : s.at(k - 1).data();
    for (int c = 0; c < s.dim; ++c) tv.add(std::abs(cur[c] - prev[c]));
  }
  return tv.value();
}

Vec mass_above_left(const GridFunction& g) {
  Vec mass(g.dim, 0.0);
  std::vector<KahanSum> acc(g.dim);
  const int n = g.size();
  for (int j = 0; j < n; ++j) {
    auto u = g.at(j);
    for (int k = 0; k < g.dim; ++k) acc[k].add(u[k] - g.left_state[k]);
  }
  for (int k = 0; k < g.dim; ++k) mass[k] = acc[k].value() * g.dx;
  return mass;
}

Vec mass_above_left(const LatticeState& s) {
  Vec mass(s.dim, 0.0);
  std::vector<KahanSum> acc(s.dim);
  const int n = s.size();
  for (int k = 0; k < n; ++k) {
    auto u = s.at(k);
    for (int c = 0; c < s.dim; ++c) acc[c].add(u[c] - s.left_state[c]);
  }
  for (int c = 0; c < s.dim; ++c) mass[c] = acc[c].value();
  return mass;
}

}  // namespace hyperlim
