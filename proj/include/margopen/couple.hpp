#ifndef MARGOPEN_COUPLE_HPP
#define MARGOPEN_COUPLE_HPP

#include <algorithm>
#include <cstddef>
#include <utility>
#include <vector>

#include "error.hpp"
#include "measure.hpp"
#include "refine.hpp"

namespace margopen {

struct MarginalPair {
  Measure mu;
  Measure nu;
  friend bool operator==(const MarginalPair&, const MarginalPair&) = default;
};

/// The marginal map λ ↦ (pr₁λ, pr₂λ).
inline MarginalPair marginal_pair(const JointMeasure& lambda) {
  return {push_proj(lambda, Axis::first), push_proj(lambda, Axis::second)};
}

/// Canonical δ < ε for the preimage construction: ε/2.
inline Rational admissible_delta(const Rational& eps) {
  if (!(eps > 0)) throw Error(ErrorKind::parameter, "admissible_delta needs eps > 0");
  return eps / 2;
}

/// How the two per-cell mass ratios combine into α. Only `min` is correct;
/// `max` exists so the certifier's detection power can be exercised.
enum class AlphaRule { min, max };

struct CellCoefficients {
  Rational alpha_prime;
  Rational alpha_dblprime;
  Rational alpha;
  friend bool operator==(const CellCoefficients&, const CellCoefficients&) = default;
};

/// Everything the preimage construction computed, indexed by grid cell
/// (see Grid::index). lambda == lambda_tilde + remainder_coupling.
struct PreimageReport {
  JointMeasure lambda;
  std::vector<CellCoefficients> alphas;
  JointMeasure lambda_tilde;
  Measure mu_remainder;
  Measure nu_remainder;
  JointMeasure remainder_coupling;
  std::vector<Rational> cell_drops;  // λ(W_qs) − λ⁰(W_qs)
};

/// Builds a joint probability measure with marginals exactly (μ, ν) that
/// loses little mass on any grid cell relative to λ⁰.
///
/// Per cell W_qs = W'_q × W''_s with λ⁰(W_qs) > 0:
///   α'  = λ⁰(W_qs)·μ(W'_q)/μ⁰(W'_q),   α'' = λ⁰(W_qs)·ν(W''_s)/ν⁰(W''_s),
///   α   = min(α', α''),
///   λ_qs = α·(μ|W'_q / μ(W'_q)) ⊗ (ν|W''_s / ν(W''_s)).
/// Cells with λ⁰(W_qs) = 0 get α = 0. The leftover marginals
/// μ̃ = μ − pr₁Σλ_qs and ν̃ = ν − pr₂Σλ_qs are nonnegative with equal mass and
/// are coupled by couple_mass. Mass outside the grid only reaches λ through
/// that remainder coupling.
inline PreimageReport construct_preimage(const JointMeasure& lambda0, const Grid& grid, const Measure& mu,
                                         const Measure& nu, AlphaRule rule = AlphaRule::min) {
  auto require_probability = [](const Rational& m, const char* what) {
    if (m != 1) throw Error(ErrorKind::mass, std::string(what) + " has mass " + to_string(m) + ", expected 1");
  };
  require_probability(mass(lambda0), "lambda0");
  require_probability(mass(mu), "mu");
  require_probability(mass(nu), "nu");
  const MarginalPair base = marginal_pair(lambda0);
  const Plane plane{mu.domain().space, nu.domain().space};

  std::vector<Rational> mu_col, mu0_col, nu_row, nu0_row;
  std::vector<Measure> mu_parts, nu_parts;
  for (const auto& col : grid.cols()) {
    mu_col.push_back(eval(mu, col));
    mu0_col.push_back(eval(base.mu, col));
    mu_parts.push_back(restrict(mu, col));
  }
  for (const auto& row : grid.rows()) {
    nu_row.push_back(eval(nu, row));
    nu0_row.push_back(eval(base.nu, row));
    nu_parts.push_back(restrict(nu, row));
  }

  std::vector<CellCoefficients> alphas(grid.cell_count());
  std::vector<Rational> base_cell(grid.cell_count());
  std::vector<std::pair<Rational, JointMeasure>> pieces;
  for (std::size_t q = 0; q < grid.cols().size(); ++q) {
    for (std::size_t s = 0; s < grid.rows().size(); ++s) {
      const std::size_t c = grid.index(q, s);
      base_cell[c] = eval(lambda0, grid.cell(q, s));
      if (base_cell[c] == 0) continue;
      if (mu0_col[q] == 0 || nu0_row[s] == 0) {
        throw Error(ErrorKind::internal_consistency, "cell carries mass but its projection does not");
      }
      auto& a = alphas[c];
      a.alpha_prime = base_cell[c] * mu_col[q] / mu0_col[q];
      a.alpha_dblprime = base_cell[c] * nu_row[s] / nu0_row[s];
      a.alpha = rule == AlphaRule::min ? std::min(a.alpha_prime, a.alpha_dblprime)
                                       : std::max(a.alpha_prime, a.alpha_dblprime);
      if (a.alpha == 0) continue;
      if (mu_col[q] == 0 || nu_row[s] == 0) {
        throw Error(ErrorKind::hypothesis, "positive cell coefficient over a marginal with no mass in the cell");
      }
      pieces.emplace_back(Rational(1), scale(tensor(scale(mu_parts[q], 1 / mu_col[q]), scale(nu_parts[s], 1 / nu_row[s])),
                                             a.alpha));
    }
  }

  JointMeasure lambda_tilde = linear_combine(pieces, plane).to_measure();

  auto remainder = [](const Measure& m, const Measure& used, const char* what) {
    try {
      return linear_combine<Line>({{Rational(1), m}, {Rational(-1), used}}).to_measure();
    } catch (const Error& e) {
      throw Error(ErrorKind::hypothesis, std::string(what) + " remainder is negative (" + e.what() + ")");
    }
  };
  Measure mu_rem = remainder(mu, push_proj(lambda_tilde, Axis::first), "first");
  Measure nu_rem = remainder(nu, push_proj(lambda_tilde, Axis::second), "second");

  JointMeasure rest = couple_mass(mu_rem, nu_rem);
  JointMeasure lambda = add(lambda_tilde, rest);

  std::vector<Rational> drops(grid.cell_count());
  for (std::size_t c = 0; c < grid.cell_count(); ++c) drops[c] = eval(lambda, grid.cell(c)) - base_cell[c];

  return PreimageReport{std::move(lambda),  std::move(alphas), std::move(lambda_tilde), std::move(mu_rem),
                        std::move(nu_rem), std::move(rest),   std::move(drops)};
}

}  // namespace margopen

#endif  // MARGOPEN_COUPLE_HPP
