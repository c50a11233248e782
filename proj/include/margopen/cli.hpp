#ifndef MARGOPEN_CLI_HPP
#define MARGOPEN_CLI_HPP

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "document.hpp"

namespace margopen::cli {

/// Exit codes: success (and, for certify/check, everything held).
inline constexpr int exit_ok = 0;
/// A certifier violation or a failed lemma check.
inline constexpr int exit_violation = 1;
/// Unreadable input, schema errors, bad flags, failed preconditions.
inline constexpr int exit_input = 2;

/// Parses "lo:hi,lo:hi,..." into a canonical interval set; "" is the empty set.
inline IntervalSet parse_interval_list(const std::string& text, const std::string& flag) {
  std::vector<Interval> ivs;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t comma = text.find(',', start);
    std::string piece = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    std::size_t colon = piece.find(':');
    if (colon == std::string::npos) throw Error(ErrorKind::schema, flag + ": expected lo:hi, got \"" + piece + "\"");
    try {
      ivs.emplace_back(parse_rational(piece.substr(0, colon)), parse_rational(piece.substr(colon + 1)));
    } catch (const Error& e) {
      throw Error(ErrorKind::schema, flag + ": " + e.what());
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return IntervalSet::canonicalize(std::move(ivs));
}

namespace detail {

inline Rational flag_rational(const std::string& text, const std::string& flag) {
  try {
    return parse_rational(text);
  } catch (const Error& e) {
    throw Error(ErrorKind::schema, flag + ": " + e.what());
  }
}

inline AlphaRule alpha_rule(const std::string& s) { return s == "max" ? AlphaRule::max : AlphaRule::min; }

template <class F>
auto read(const std::string& path, F&& reader) {
  try {
    return reader(doc::load(path));
  } catch (const Error& e) {
    throw Error(e.kind(), path + ": " + e.what());
  }
}

}  // namespace detail

/// Runs one subcommand. argv[0] is the program name.
inline int dispatch(const std::vector<std::string>& argv, std::ostream& out = std::cout,
                    std::ostream& err = std::cerr) {
  CLI::App app{"Exact couplings with prescribed marginals near a reference joint measure"};
  app.require_subcommand(1);
  std::string output;
  app.add_option("-o,--output", output, "Write the result document here instead of stdout");

  std::string joint_path, mu_path, nu_path, grid_path, sets_path, eps_text, eps2_text, rule = "min";
  std::string v_text, vp_text, w_text, wp_text;
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
  int lemma = 4;
  int axis = 1;

  auto* marginals = app.add_subcommand("marginals", "Marginals (pr1, pr2) of a joint measure");
  marginals->add_option("joint", joint_path, "joint_measure document")->required();

  auto* tensor_cmd = app.add_subcommand("tensor", "Independent coupling of two probability measures");
  tensor_cmd->add_option("mu", mu_path, "measure document")->required();
  tensor_cmd->add_option("nu", nu_path, "measure document")->required();

  auto* couple = app.add_subcommand("couple", "Preimage of (mu, nu) near lambda0 over a grid");
  couple->add_option("lambda0", joint_path, "joint_measure document")->required();
  couple->add_option("grid", grid_path, "grid document")->required();
  couple->add_option("mu", mu_path, "measure document")->required();
  couple->add_option("nu", nu_path, "measure document")->required();
  couple->add_option("--alpha-rule", rule, "min (correct) or max (mutation control)")
      ->check(CLI::IsMember({"min", "max"}));

  auto* refine = app.add_subcommand("refine", "Grid refinement of disjoint open sets");
  refine->add_option("lambda0", joint_path, "joint_measure document")->required();
  refine->add_option("sets", sets_path, "box_sets document")->required();
  refine->add_option("--eps0", eps_text, "Neighborhood radius, exact rational")->required();

  auto* certify = app.add_subcommand("certify", "Randomized openness certification");
  certify->add_option("lambda0", joint_path, "joint_measure document")->required();
  certify->add_option("sets", sets_path, "box_sets document")->required();
  certify->add_option("--eps", eps_text, "Neighborhood radius, exact rational")->required();
  certify->add_option("--trials", trials, "Number of trials")->check(CLI::PositiveNumber);
  certify->add_option("--seed", seed, "64-bit seed");
  certify->add_option("--alpha-rule", rule, "min (correct) or max (mutation control)")
      ->check(CLI::IsMember({"min", "max"}));

  auto* check = app.add_subcommand("check", "Validate the cylinder-difference inequalities on a joint measure");
  check->add_option("lambda", joint_path, "joint_measure document")->required();
  check->add_option("--lemma", lemma, "4 or 5")->required()->check(CLI::IsMember({4, 5}));
  check->add_option("--v", v_text, "V as lo:hi[,lo:hi...]; use --v=... for negative bounds")->required();
  check->add_option("--v-prime", vp_text, "V' as lo:hi[,...]")->required();
  check->add_option("--w", w_text, "W as lo:hi[,...]")->required();
  check->add_option("--w-prime", wp_text, "W' as lo:hi[,...] (with --lemma 5)");
  check->add_option("--eps", eps_text, "epsilon, or epsilon_1 with --lemma 5")->required();
  check->add_option("--eps2", eps2_text, "epsilon_2 (with --lemma 5)");
  check->add_option("--axis", axis, "with --lemma 4: 1 when V, V' live on X, 2 when on Y")->check(CLI::IsMember({1, 2}));

  std::vector<const char*> args;
  for (const auto& a : argv) args.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(args.size()), args.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return exit_input;
  }

  auto emit = [&](const doc::json& j) {
    if (output.empty()) {
      out << doc::dump(j);
      return;
    }
    std::ofstream f(output);
    if (!f) throw Error(ErrorKind::schema, "cannot write " + output);
    f << doc::dump(j);
  };

  try {
    if (marginals->parsed()) {
      auto lambda = detail::read(joint_path, doc::read_joint_document);
      emit(doc::marginal_pair_document(marginal_pair(lambda)));
      return exit_ok;
    }
    if (tensor_cmd->parsed()) {
      auto mu = detail::read(mu_path, doc::read_measure_document);
      auto nu = detail::read(nu_path, doc::read_measure_document);
      emit(doc::joint_document(tensor(mu, nu)));
      return exit_ok;
    }
    if (couple->parsed()) {
      auto lambda0 = detail::read(joint_path, doc::read_joint_document);
      auto grid = detail::read(grid_path, doc::read_grid_document);
      auto mu = detail::read(mu_path, doc::read_measure_document);
      auto nu = detail::read(nu_path, doc::read_measure_document);
      auto report = construct_preimage(lambda0, grid, mu, nu, detail::alpha_rule(rule));
      emit(doc::preimage_report_document(report, grid));
      return exit_ok;
    }
    if (refine->parsed()) {
      auto lambda0 = detail::read(joint_path, doc::read_joint_document);
      auto sets = detail::read(sets_path, doc::read_box_sets_document);
      emit(doc::refine_result_document(refine_grid(lambda0, sets, detail::flag_rational(eps_text, "--eps0"))));
      return exit_ok;
    }
    if (certify->parsed()) {
      auto lambda0 = detail::read(joint_path, doc::read_joint_document);
      auto sets = detail::read(sets_path, doc::read_box_sets_document);
      CertifyOptions opts;
      opts.rule = detail::alpha_rule(rule);
      auto report =
          certify_openness(lambda0, sets, detail::flag_rational(eps_text, "--eps"), trials, Seed{seed}, opts);
      emit(doc::cert_report_document(report));
      return report.passed() ? exit_ok : exit_violation;
    }
    if (check->parsed()) {
      auto lambda = detail::read(joint_path, doc::read_joint_document);
      const auto v = parse_interval_list(v_text, "--v");
      const auto vp = parse_interval_list(vp_text, "--v-prime");
      const auto w = parse_interval_list(w_text, "--w");
      const auto eps = detail::flag_rational(eps_text, "--eps");
      LemmaCheck result;
      if (lemma == 4) {
        result = check_lemma4(lambda, v, vp, w, eps, axis == 1 ? Axis::first : Axis::second);
      } else {
        if (eps2_text.empty()) throw Error(ErrorKind::schema, "--eps2 is required with --lemma 5");
        result = check_lemma5(lambda, v, vp, w, parse_interval_list(wp_text, "--w-prime"), eps,
                              detail::flag_rational(eps2_text, "--eps2"));
      }
      emit(doc::lemma_check_document(lemma, result));
      return result.ok ? exit_ok : exit_violation;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_input;
  }
  return exit_input;
}

}  // namespace margopen::cli

#endif  // MARGOPEN_CLI_HPP
