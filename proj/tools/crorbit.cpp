// crorbit: classify subgroup orbits, decide congruence, print the moduli space
// and run the verification sweeps. JSON on stdout, diagnostics on stderr.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#if __has_include(<CLI/CLI.hpp>)
#include <CLI/CLI.hpp>
#else
#include <CLI11.hpp>
#endif

#include "cr_orbits/json_io.hpp"

namespace {

// sysexits-style codes.
constexpr int kExitCr         = 0;
constexpr int kExitFalse      = 1;
constexpr int kExitNotCr      = 3;
constexpr int kExitUsage      = 64;
constexpr int kExitDataErr    = 65;
constexpr int kExitInvalid    = 66;
constexpr int kExitSoftware   = 70;

using cr::io::json;

int fail(int code, const std::string & msg)
{
  std::cerr << "crorbit: " << msg << '\n';
  return code;
}

json read_json(const std::string & path)
{
  std::ifstream in(path);
  if (!in) { throw cr::InvalidInput("cannot open '" + path + "'"); }
  std::stringstream buf;
  buf << in.rdbuf();
  return json::parse(buf.str());
}

void emit(const json & j) { std::cout << j.dump(2) << '\n'; }

// Maps exceptions onto exit codes; `body` returns the success-path code.
template <typename F>
int guarded(F && body)
{
  try {
    return body();
  } catch (const json::parse_error & e) {
    return fail(kExitDataErr, std::string("malformed JSON: ") + e.what());
  } catch (const cr::InternalInconsistency & e) {
    return fail(kExitSoftware, std::string("internal error: ") + e.what());
  } catch (const cr::Error & e) {
    return fail(kExitInvalid, std::string("invalid input: ") + e.what());
  } catch (const json::exception & e) {
    return fail(kExitInvalid, std::string("invalid input: ") + e.what());
  } catch (const std::exception & e) {
    return fail(kExitSoftware, std::string("internal error: ") + e.what());
  }
}

int cmd_classify(const std::string & path)
{
  return guarded([&] {
    const cr::io::Scenario sc = cr::io::scenario_from_json(read_json(path));
    const cr::io::Report rep  = cr::io::build_report(sc);
    emit(cr::io::to_json(rep));
    return rep.orbit.is_cr ? kExitCr : kExitNotCr;
  });
}

int cmd_congruent(const std::string & p1, const std::string & p2)
{
  return guarded([&] {
    const cr::OrbitQuery q1 = cr::io::scenario_query(cr::io::scenario_from_json(read_json(p1)));
    const cr::OrbitQuery q2 = cr::io::scenario_query(cr::io::scenario_from_json(read_json(p2)));
    for (const cr::OrbitQuery * q : {&q1, &q2}) {
      if (!cr::classify_orbit(*q).is_cr) { throw cr::NotCR("congruence is decided for CR orbits only"); }
    }
    const cr::CongruenceDecision d = cr::are_congruent(q1, q2);
    emit(cr::io::to_json(d));
    return d.congruent ? kExitCr : kExitFalse;
  });
}

int cmd_moduli(int n)
{
  return guarded([&] {
    emit(cr::io::moduli_to_json(n));
    return kExitCr;
  });
}

int cmd_verify(const std::string & suite, std::uint64_t seed, int trials)
{
  const auto & names = cr::verify_suites();
  if (std::find(names.begin(), names.end(), suite) == names.end()) {
    return fail(kExitUsage, "unknown suite '" + suite + "'");
  }
  if (trials < 0) { return fail(kExitUsage, "--trials must be >= 0"); }
  return guarded([&] {
    const auto reports = cr::run_verify(suite, {seed, trials});
    json suites        = json::array();
    bool all_passed    = true;
    for (const auto & r : reports) {
      suites.push_back(cr::io::to_json(r));
      all_passed = all_passed && r.passed();
      for (const auto & p : r.properties) {
        if (!p.passed()) { std::cerr << "crorbit: FAIL " << r.suite << "/" << p.name << '\n'; }
      }
    }
    emit(json{{"seed", seed}, {"passed", all_passed}, {"suites", suites}});
    return all_passed ? kExitCr : kExitFalse;
  });
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"CR orbits of subgroups of AN in complex hyperbolic space"};
  app.require_subcommand(1);

  std::string file, file2, suite = "all";
  int n = 0, trials = 0;
  std::uint64_t seed = 42;

  auto * classify = app.add_subcommand("classify", "Classify the orbit described by a scenario file");
  classify->add_option("file", file, "Scenario JSON")->required();

  auto * congruent = app.add_subcommand("congruent", "Decide whether two CR orbits are congruent");
  congruent->add_option("file1", file, "First scenario JSON")->required();
  congruent->add_option("file2", file2, "Second scenario JSON")->required();

  auto * moduli = app.add_subcommand("moduli", "Print the moduli space of congruence classes");
  moduli->add_option("--n", n, "Complex dimension n")->required();

  auto * verify = app.add_subcommand("verify", "Run the randomized verification suites");
  verify->add_option("--suite", suite, "algebra, connection, curvature, theoremA, lemmas4x, congruence or all");
  verify->add_option("--seed", seed, "Random seed");
  verify->add_option("--trials", trials, "Trials per property (0 keeps the defaults)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp & e) {
    return app.exit(e);
  } catch (const CLI::ParseError & e) {
    app.exit(e);
    return kExitUsage;
  }

  if (*classify) { return cmd_classify(file); }
  if (*congruent) { return cmd_congruent(file, file2); }
  if (*moduli) { return cmd_moduli(n); }
  if (*verify) { return cmd_verify(suite, seed, trials); }
  return kExitUsage;
}
