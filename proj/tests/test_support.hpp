#pragma once

// Brute-force oracles and fixtures shared by the test binaries. Everything
// here is deliberately naive: enumeration over {0,1}^n, no BDD machinery.

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "bddcut/bdd.hpp"
#include "bddcut/lifting.hpp"
#include "bddcut/model.hpp"

namespace bddcut::testing {

inline std::vector<BitVector> all_points(int n) {
  std::vector<BitVector> out;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t code = 0; code < total; ++code) {
    BitVector x(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) x[i] = static_cast<std::uint8_t>((code >> (n - 1 - i)) & 1U);
    out.push_back(std::move(x));
  }
  return out;
}

inline std::vector<BitVector> brute_feasible(const SocConstraint& c) {
  std::vector<BitVector> out;
  for (BitVector& x : all_points(c.num_vars())) {
    // Straight from the definition, independent of model::evaluate.
    double lin = 0.0;
    for (int i = 0; i < c.num_vars(); ++i) lin += c.a()[i] * x[i];
    double root = 0.0;
    if (c.kind() == ConstraintKind::kDiagonalKnapsack) {
      double s = 0.0;
      for (int i = 0; i < c.num_vars(); ++i) s += c.d(i, i) * c.d(i, i) * x[i];
      root = std::sqrt(s);
    } else if (c.kind() == ConstraintKind::kGeneral) {
      double s = 0.0;
      for (int k = 0; k < c.num_rows(); ++k) {
        double q = -c.h()[k];
        for (int i = 0; i < c.num_vars(); ++i) q += c.d(k, i) * x[i];
        s += q * q;
      }
      root = std::sqrt(s);
    }
    if (lin + c.omega() * root <= c.b() + 1e-9) out.push_back(std::move(x));
  }
  return out;
}

inline double dot(const std::vector<double>& pi, const BitVector& x) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += pi[i] * x[i];
  return s;
}

// max pi.x over points with x_i = value; -inf when none.
inline double conditional_max(const std::vector<BitVector>& points,
                              const std::vector<double>& pi, int i, int value) {
  double best = -std::numeric_limits<double>::infinity();
  for (const BitVector& x : points) {
    if (x[i] == value) best = std::max(best, dot(pi, x));
  }
  return best;
}

inline double overall_max(const std::vector<BitVector>& points, const std::vector<double>& pi) {
  double best = -std::numeric_limits<double>::infinity();
  for (const BitVector& x : points) best = std::max(best, dot(pi, x));
  return best;
}

// Knapsack 7x1 + 5x2 + 4x3 + x4 <= 8.
inline SocConstraint knapsack4() { return SocConstraint::linear({7, 5, 4, 1}, 8); }

// Reduced diagram drawn for the knapsack: r; u1 u2; u3 u4; u5; t.
inline Bdd knapsack4_reduced() {
  LayeredGraph g;
  g.num_vars = 4;
  g.layers = {
      {{0, 1}},                       // r: 0 -> u1, 1 -> u2
      {{0, 1}, {1, kNoNode}},         // u1: 0 -> u3, 1 -> u4; u2: 0 -> u4
      {{0, 0}, {0, kNoNode}},         // u3: both -> u5; u4: 0 -> u5
      {{0, 0}},                       // u5: both -> t
  };
  return Bdd::from_layers(g);
}

// Non-reduced twin: r; u1' u2'; u3' u4' u5'; u6'; t.
inline Bdd knapsack4_unreduced() {
  LayeredGraph g;
  g.num_vars = 4;
  g.layers = {
      {{0, 1}},
      {{0, 1}, {2, kNoNode}},
      {{0, 0}, {0, kNoNode}, {0, kNoNode}},
      {{0, 0}},
  };
  return Bdd::from_layers(g);
}

// 3x1 + x2 + x3 + ||(x1 + x2 + 2x3, x1 + 3x2 - x3 + 3)|| <= 8.
inline SocConstraint conic3() {
  return SocConstraint::general({3, 1, 1}, 2,
                                {{0, 0, 1}, {0, 1, 1}, {0, 2, 2}, {1, 0, 1}, {1, 1, 3}, {1, 2, -1}},
                                {0, -3}, 1.0, 8.0);
}

// 5x1 + 2x2 + 3x3 <= 6.
inline SocConstraint knapsack3() { return SocConstraint::linear({5, 2, 3}, 6); }

inline SocConstraint random_linear(int n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> coef(-10, 30);
  std::vector<double> a(static_cast<std::size_t>(n));
  double pos = 0.0;
  for (double& v : a) {
    v = coef(rng);
    pos += std::max(0.0, v);
  }
  std::uniform_real_distribution<double> frac(0.2, 0.7);
  return SocConstraint::linear(std::move(a), std::floor(frac(rng) * pos));
}

inline SocConstraint random_soc_k(int n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> t_pick(1, 3);
  const Instance inst = generate_soc_k(n, 1, static_cast<double>(2 * t_pick(rng) - 1),
                                       0.1 * t_pick(rng) + 0.15, rng());
  return inst.constraints[0];
}

inline SocConstraint random_soc_cc(int n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(1, 3);
  const Instance inst =
      generate_soc_cc(n, 1, static_cast<double>(2 * pick(rng) - 1), 0.1 * pick(rng), rng());
  return inst.constraints[0];
}

// Random layered diagram (not necessarily reduced); may prune to empty.
inline Bdd random_bdd(int n, int max_width, std::mt19937_64& rng, double arc_prob = 0.75) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  LayeredGraph g;
  g.num_vars = n;
  std::vector<int> sizes(static_cast<std::size_t>(n) + 1, 1);
  std::uniform_int_distribution<int> width(1, max_width);
  for (int i = 1; i < n; ++i) sizes[i] = width(rng);
  g.layers.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    std::uniform_int_distribution<int> target(0, sizes[i + 1] - 1);
    for (int u = 0; u < sizes[i]; ++u) {
      std::array<int, 2> ch{kNoNode, kNoNode};
      for (int v = 0; v < 2; ++v) {
        if (u01(rng) < arc_prob) ch[v] = target(rng);
      }
      g.layers[i].push_back(ch);
    }
  }
  return Bdd::from_layers(g);
}

// Non-reduced copy with the same point set: every node of layers 1..n-1 is
// duplicated with probability p and its incoming arcs are split at random
// between the copies.
inline Bdd de_reduce(const Bdd& bdd, std::mt19937_64& rng, double p = 0.5) {
  LayeredGraph g = bdd.to_layers();
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int i = 1; i < g.num_vars; ++i) {
    const int original = static_cast<int>(g.layers[i].size());
    for (int u = 0; u < original; ++u) {
      if (u01(rng) >= p) continue;
      const int copy = static_cast<int>(g.layers[i].size());
      g.layers[i].push_back(g.layers[i][u]);
      for (auto& ch : g.layers[i - 1]) {
        for (int& c : ch) {
          if (c == u && u01(rng) < 0.5) c = copy;
        }
      }
    }
  }
  return Bdd::from_layers(g);
}

inline std::vector<double> random_point(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::vector<double> x(static_cast<std::size_t>(n));
  for (double& v : x) v = u01(rng);
  return x;
}

inline std::vector<double> to_real(const BitVector& x) { return {x.begin(), x.end()}; }

}  // namespace bddcut::testing
