// ats: build, verify and classify graded algebras with involution and their
// triple systems from job files. Exit status: 0 all checks pass, 1 a check
// failed, 2 the job could not run (bad flags, bad config, limits).

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "ats/job.hpp"

namespace {

struct Flags {
  std::vector<std::string> configs;
  std::string json_path;
  std::optional<uint64_t> seed;
  std::optional<int> max_dim;
  bool verify = false;
  bool serial = false;
  bool quiet = false;
};

void add_common(CLI::App* sub, Flags& f, bool two) {
  if (two)
    sub->add_option("configs", f.configs, "the two label configs")->required()->expected(2);
  else
    sub->add_option("config", f.configs, "job config")->required()->expected(1);
  sub->add_option("--json", f.json_path, "write the JSON report here");
  sub->add_option("--seed", f.seed, "seed for randomized checks (overrides [job] seed)");
  sub->add_option("--max-dim", f.max_dim, "largest algebra dimension to build");
  sub->add_flag("--serial", f.serial, "run the serial reference kernels");
  sub->add_flag("-q,--quiet", f.quiet, "print only the final status line");
}

const char* describe(ats::Command c) {
  switch (c) {
    case ats::Command::Construct: return "build the configured algebra and print its shape";
    case ats::Command::Verify: return "run every structural check on the configured objects";
    case ats::Command::Envelope: return "build the envelope of the triple and check both round trips";
    case ats::Command::Triple: return "extract the triple system from degree -1";
    case ats::Command::CheckAt2: return "check the AT2 identities on the triple";
    case ats::Command::DecideIso: return "decide whether two labels give isomorphic algebras";
    case ats::Command::Census: return "classify all labels over the group up to a dimension";
  }
  return "";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graded algebras with involution and associative triple systems"};
  app.require_subcommand(1);
  Flags f;
  std::map<CLI::App*, ats::Command> subs;
  for (ats::Command c : {ats::Command::Construct, ats::Command::Verify, ats::Command::Envelope,
                         ats::Command::Triple, ats::Command::CheckAt2, ats::Command::DecideIso,
                         ats::Command::Census}) {
    CLI::App* s = app.add_subcommand(ats::command_name(c), describe(c));
    add_common(s, f, c == ats::Command::DecideIso);
    if (c == ats::Command::DecideIso) s->add_flag("--verify", f.verify, "certify the decision");
    subs[s] = c;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  ats::Command cmd{};
  for (const auto& [s, c] : subs)
    if (s->parsed()) cmd = c;

  try {
    std::vector<ats::JobConfig> cfgs;
    for (const auto& p : f.configs) cfgs.push_back(ats::load_config(p));
    ats::RunOptions opt;
    opt.seed = f.seed;
    opt.max_dim = f.max_dim;
    opt.verify = f.verify;
    opt.exec = f.serial ? ats::Exec::Serial : ats::Exec::Parallel;
    ats::JobResult r = ats::run_job(cmd, cfgs, opt);
    if (!f.quiet)
      for (const auto& l : r.lines) std::cout << l << "\n";
    std::cout << (r.ok ? "status: pass" : "status: fail") << "\n";
    if (!f.json_path.empty()) {
      std::ofstream out(f.json_path);
      if (!out) {
        std::cerr << "cannot write " << f.json_path << "\n";
        return 2;
      }
      out << r.report.dump(2) << "\n";
    }
    return r.ok ? 0 : 1;
  } catch (const ats::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
