#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "gapjohn/commands.hpp"
#include "gapjohn/errors.hpp"

namespace {

using namespace gapjohn;

enum Exit { kOk = 0, kAuditFailed = 1, kPrecondition = 2, kCap = 3, kParse = 4, kInternal = 5 };

std::string read_input(const std::string& path) {
  std::ostringstream buf;
  if (path.empty() || path == "-") {
    buf << std::cin.rdbuf();
  } else {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot read " + path);
    buf << in.rdbuf();
  }
  return buf.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path);
  out << text;
}

Rational rational_flag(const std::string& text, const char* name) {
  try {
    return parse_rational(text);
  } catch (const Error&) {
    throw ParseError(std::string("--") + name + ": not a rational number: " + text);
  }
}

const std::map<std::string, std::string> kHelp{
    {"properize", "t-proper Q with Image(P) <= Image(Q) <= Image(P_{lambda t}); input: group, progression"},
    {"john", "t-proper Q with Image(Q) <= Image(P) <= Image(Q_lambda); input: group, progression"},
    {"john-outer", "outer properization without the already-proper shortcut"},
    {"discrete-john", "progression inside a symmetric polytope and lattice; input: polytope, lattice"},
    {"cover", "translates covering P_t by P (or P_{t'} by Q_2 with an \"inner\" progression)"},
    {"coalesce", "proper Q with Image(Q) <= l Image(P) <= K Image(Q)"},
    {"sumset-structure", "x + Q <= lA <= x' + K Q for a set A; input: group, set"},
    {"sarkozy", "whether lA is a coset of <A - A>; input: group, set"},
    {"demo-counterexample", "image of ((n/2, n), (1, n)) and the Freiman-homomorphism check"},
};

int fail(int code, const std::string& what) {
  std::cerr << "gapjohn: " << what << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certified John-type structure for progressions and sumsets"};
  app.require_subcommand(1);

  std::string t = "1", t_prime = "1", threshold = "8", in_path, out_path;
  CommandOptions o;
  std::vector<CLI::App*> subs;
  auto add_common = [&](CLI::App* s) {
    s->add_option("--in", in_path, "input JSON document (default: standard input)");
    s->add_option("--out", out_path, "output file (default: standard output)");
    s->add_option("--cap", o.cap, "enumeration budget")->check(CLI::PositiveNumber);
  };
  for (const auto& name : kCommands) {
    auto* s = app.add_subcommand(name, kHelp.at(name));
    add_common(s);
    s->add_option("--t", t, "dilation parameter");
    s->add_option("--t-prime", t_prime, "second dilation parameter (cover with an inner progression)");
    s->add_option("--l", o.l, "number of summands")->check(CLI::PositiveNumber);
    s->add_option("--d", o.d, "dimension parameter")->check(CLI::NonNegativeNumber);
    s->add_option("--retry-limit", o.retry_limit, "retry limit for outer properization")->check(CLI::PositiveNumber);
    s->add_option("--seed", o.seed, "seed for randomized choices");
    s->add_option("--threshold", threshold, "hypothesis gate constant T");
    s->add_option("--n", o.n, "size parameter of demo-counterexample");
    subs.push_back(s);
  }
  auto* verify = app.add_subcommand("verify", "re-check a certificate with the brute-force oracle");
  add_common(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kParse;
  }

  try {
    if (verify->parsed()) {
      const Json cert = parse_document(read_input(in_path));
      const AuditReport report = audit_certificate(cert, o.cap);
      write_output(out_path, dump_document(to_json(report)));
      return report.passed ? kOk : kAuditFailed;
    }
    const auto* sub = app.get_subcommands().front();
    o.t = rational_flag(t, "t");
    o.t_prime = rational_flag(t_prime, "t-prime");
    o.threshold = rational_flag(threshold, "threshold");
    Json input = Json::object();
    if (sub->get_name() != "demo-counterexample" || !in_path.empty()) input = parse_document(read_input(in_path));
    write_output(out_path, dump_document(run_command(sub->get_name(), input, o)));
    return kOk;
  } catch (const ParseError& e) {
    return fail(kParse, e.what());
  } catch (const PreconditionError& e) {
    return fail(kPrecondition, e.what());
  } catch (const CapExceeded& e) {
    return fail(kCap, e.what());
  } catch (const Error& e) {
    return fail(kInternal, e.what());
  } catch (const std::exception& e) {
    return fail(kInternal, e.what());
  }
}
