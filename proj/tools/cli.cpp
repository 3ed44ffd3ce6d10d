#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "kbo/counting.hpp"
#include "kbo/encodings.hpp"
#include "kbo/error.hpp"
#include "kbo/oracle.hpp"
#include "kbo/solver.hpp"

namespace kbo::cli {

namespace {

struct Input {
  std::string sig;
  std::string formula;
  std::string formula_file;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void add_sig(CLI::App* cmd, Input& in) {
  cmd->add_option("--sig", in.sig, "signature file")->required();
}

void add_formula(CLI::App* cmd, Input& in) {
  auto* text = cmd->add_option("--formula", in.formula, "constraint text");
  auto* file = cmd->add_option("--formula-file", in.formula_file, "file holding the constraint");
  text->excludes(file);
}

bool has_formula(const Input& in) { return !in.formula.empty() || !in.formula_file.empty(); }

Formula load_formula(const Input& in, const KboParams& p) {
  if (!has_formula(in)) throw Error(ErrorCode::InvalidArgument, "a constraint is required (--formula or --formula-file)");
  if (!in.formula_file.empty()) return parse_formula(read_file(in.formula_file), p);
  return parse_formula(in.formula, p);
}

void print_witness(std::ostream& out, const KboParams& p, const Substitution& s, const Formula& f) {
  for (const auto& v : vars_of(f)) out << v << " := " << to_string(p, s.at(v)) << '\n';
}

void collect_vars(const ArithFormula& f, std::set<std::string>& out) {
  if (f.kind() == ArithFormula::Kind::Atom) {
    for (const auto& [v, c] : f.as_atom().left.coeffs) out.insert(v);
    for (const auto& [v, c] : f.as_atom().right.coeffs) out.insert(v);
    return;
  }
  for (const auto& c : f.children()) collect_vars(c, out);
}

int report(const Error& e, std::ostream& err) {
  for (const auto& d : e.diagnostics()) err << "error: " << error_code_name(d.code) << ": " << d.message << '\n';
  const bool limit = e.code() == ErrorCode::ResourceLimit || e.code() == ErrorCode::WitnessSearchExhausted;
  return limit ? kResourceLimit : kInputError;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Knuth-Bendix order constraint solver", "kbo"};
  app.require_subcommand(1);
  Input in;
  std::vector<std::string> terms;
  Weight weight = 0, cap = 0, n = 0, max_weight = 0;
  std::size_t max_f_height = 0, max_branches = 1'000'000;
  std::string var = "x", eqns;
  bool trace = false;

  auto* validate = app.add_subcommand("validate", "check a signature (and optionally a constraint)");
  add_sig(validate, in);
  add_formula(validate, in);

  auto* compare = app.add_subcommand("compare", "compare two ground terms");
  add_sig(compare, in);
  compare->add_option("terms", terms, "T1 T2")->required()->expected(2);

  auto* solve_cmd = app.add_subcommand("solve", "decide a constraint and print a witness");
  add_sig(solve_cmd, in);
  add_formula(solve_cmd, in);
  solve_cmd->add_flag("--trace", trace, "print each transformation step on stderr");
  solve_cmd->add_option("--max-branches", max_branches, "search budget")->capture_default_str();

  auto* count = app.add_subcommand("count", "min(cap, number of ground terms of a weight)");
  add_sig(count, in);
  count->add_option("--weight", weight)->required()->check(CLI::NonNegativeNumber);
  count->add_option("--cap", cap)->required()->check(CLI::NonNegativeNumber);

  auto* least = app.add_subcommand("at-least", "arithmetic formula for 'at least N terms of weight x'");
  add_sig(least, in);
  least->add_option("--n", n)->required()->check(CLI::NonNegativeNumber);
  least->add_option("--var", var, "name of the weight variable")->capture_default_str();

  auto* dio = app.add_subcommand("encode-dio", "encode equations 'x1 + x2 + 3 = x0; ...'");
  dio->add_option("equations", eqns)->required();

  auto* oracle = app.add_subcommand("oracle", "brute-force search within a bound");
  add_sig(oracle, in);
  add_formula(oracle, in);
  oracle->add_option("--max-weight", max_weight)->required()->check(CLI::NonNegativeNumber);
  oracle->add_option("--max-f-height", max_f_height)->capture_default_str();

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(std::move(rev));
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    err << "error: " << e.what() << "\nrun 'kbo --help' for usage\n";
    return kInputError;
  }

  try {
    if (*dio) {
      auto sys = parse_dio(eqns);
      out << print_signature(dio_signature());
      out << print_formula(encode_dio(sys), dio_signature()) << '\n';
      return kOk;
    }

    const KboParams p = load_signature_file(in.sig);

    if (*validate) {
      out << "OK " << class_name(classify(p)) << '\n';
      if (has_formula(in)) out << print_formula(load_formula(in, p), p) << '\n';
      return kOk;
    }
    if (*compare) {
      const Term s = parse_term(terms[0], p), t = parse_term(terms[1], p);
      if (!s.is_ground() || !t.is_ground()) throw Error(ErrorCode::InvalidArgument, "compare needs ground terms");
      out << order_name(kbo_compare(p, s, t)) << '\n';
      return kOk;
    }
    if (*solve_cmd) {
      const Formula f = load_formula(in, p);
      SolveOptions opts;
      opts.max_branches = max_branches;
      if (trace) opts.trace = [&err](const std::string& line) { err << line << '\n'; };
      const Verdict v = solve(f, p, opts);
      if (!v.sat) {
        out << "UNSAT\n";
        return kNo;
      }
      out << "SAT\n";
      print_witness(out, p, v.witness, f);
      return kOk;
    }
    if (*count) {
      const Weight c = classify(p) == SignatureClass::Branching ? tnt(cap, weight, p) : count_weight(p, weight, cap);
      out << c << '\n';
      return kOk;
    }
    if (*least) {
      const ArithFormula f = at_least(n, p, lin_var(var), "n_");
      std::set<std::string> bound;
      collect_vars(f, bound);
      bound.erase(var);
      if (!bound.empty()) {
        out << "exists";
        for (const auto& b : bound) out << ' ' << b;
        out << ":\n";
      }
      out << print_arith(f) << '\n';
      return kOk;
    }
    if (*oracle) {
      const Formula f = load_formula(in, p);
      const OracleResult r = brute_force_check(f, p, EnumBound{max_weight, max_f_height});
      if (!r.sat) {
        out << "NONE\n";
        return kNo;
      }
      out << "SAT\n";
      print_witness(out, p, r.witness, f);
      return kOk;
    }
  } catch (const Error& e) {
    return report(e, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}

}  // namespace kbo::cli
