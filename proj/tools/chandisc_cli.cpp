// chandisc: command-line front end for the channel discrimination library.
#include "chandisc/chandisc.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace chandisc;
using Json = nlohmann::ordered_json;

enum Exit { kOk = 0, kUsage = 2, kConsistency = 3, kUnsupported = 4 };

struct RunConfig {
  std::string family;
  std::string spec;
  int d = 0;
  int n = 0;
  int big_n = 0;
  int restarts = 32;
  std::uint64_t seed = 1;
  std::uint64_t samples = 100000;
  std::string format = "csv";
  std::string out;
  double tol = 0.0;  // 0 keeps library defaults
};

std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%#.9g", v);
  return buf;
}

// Values at roundoff level print as zero; residual columns keep full detail.
std::string value_str(double v) { return num(std::abs(v) < 1e-12 ? 0.0 : v); }

std::string normalize_family(std::string s) {
  for (char& c : s)
    if (c == '-') c = '_';
  return s;
}

ChannelPair build_instance(const RunConfig& cfg) {
  if (cfg.family.empty() == cfg.spec.empty()) throw Error("usage", "give exactly one of --family or --spec");
  if (!cfg.spec.empty()) return load_pair(cfg.spec);
  const Family f = family_from_name(normalize_family(cfg.family));
  switch (f) {
    case Family::werner_holevo:
      if (cfg.d < 2) throw Error("usage", "werner-holevo needs --d >= 2");
      return werner_holevo(cfg.d);
    case Family::weyl_flagged:
      if (cfg.d < 2) throw Error("usage", "weyl-flagged needs --d >= 2");
      return weyl_flagged(cfg.d);
    case Family::qubit_example: {
      const int big_n = cfg.n ? cfg.n : cfg.big_n;
      if (big_n != 2 && big_n != 3) throw Error("usage", "qubit-example needs --n 2 or --n 3");
      return qubit_example(big_n);
    }
    case Family::random_binary: {
      if (cfg.d < 2 || cfg.d % 2 != 0) throw Error("usage", "random-binary needs an even --d >= 2");
      if (cfg.big_n < 1) throw Error("usage", "random-binary needs --N >= 1");
      HaarSampler sampler{cfg.seed, cfg.d};
      std::vector<Matrix> us;
      for (int k = 0; k < cfg.big_n; ++k) us.push_back(sampler.next());
      return random_binary_channels(cfg.d, us);
    }
    default:
      throw Error("usage", "family '" + cfg.family + "' needs a --spec file");
  }
}

ChainOptions chain_options(const RunConfig& cfg) {
  ChainOptions o;
  o.seesaw.restarts = cfg.restarts;
  o.seesaw.seed = cfg.seed;
  if (cfg.tol > 0) {
    o.seesaw.stop = cfg.tol;
    o.seesaw.sdp.tol = cfg.tol;
  }
  return o;
}

// Output sink: --out path or stdout.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw Error("io", "cannot write " + path);
    }
  }
  std::ostream& os() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }
  void finish() {
    os().flush();
    if (!os()) throw Error("io", "write failed");
  }

 private:
  std::ofstream file_;
};

void write_chain(std::ostream& os, const ChainReport& rep, const std::string& format) {
  if (format == "json") {
    Json rows = Json::array();
    for (const NormEstimate& r : rep.rows) {
      const ChainBounds& b = rep.shown[norm_index(r.norm)];
      Json row = {{"norm", norm_name(r.norm)},
                  {"value", r.value},
                  {"direction", direction_name(r.direction)},
                  {"method", r.method},
                  {"restarts", r.restarts},
                  {"iterations", r.iterations},
                  {"residual", r.residual},
                  {"seconds", r.seconds},
                  {"restart_values", r.restart_values},
                  {"lower", std::isfinite(b.lower) ? Json(b.lower) : Json(nullptr)},
                  {"upper", b.upper},
                  {"lower_source", b.lower_source},
                  {"upper_source", b.upper_source}};
      rows.push_back(row);
    }
    os << rows.dump(2) << '\n';
    return;
  }
  os << "norm,value,direction,method,lower,upper,residual,wall_time\n";
  for (const NormEstimate& r : rep.rows) {
    const ChainBounds& b = rep.shown[norm_index(r.norm)];
    os << norm_name(r.norm) << ',' << value_str(r.value) << ',' << direction_name(r.direction) << ',' << r.method << ','
       << value_str(b.lower) << ',' << value_str(b.upper) << ',' << num(r.residual) << ',' << num(r.seconds) << '\n';
  }
}

int cmd_norms(const RunConfig& cfg) {
  const ChannelPair pair = build_instance(cfg);
  const ChainReport rep = norm_chain(pair, chain_options(cfg));
  Sink sink(cfg.out);
  write_chain(sink.os(), rep, cfg.format);
  sink.finish();
  return kOk;
}

int cmd_protocol(const RunConfig& cfg) {
  const ChannelPair pair = build_instance(cfg);
  const std::optional<ProtocolSetup> setup = family_protocol(pair);
  if (!setup) throw Error("unsupported", "no protocol registered for family " + std::string(family_name(pair.family)));
  const Matrix rho = projector(setup->input);
  const ProtocolReport rep = run_protocol(setup->protocol, make_instance(pair, rho));
  const NormEstimate bound = locc_lower_bound(setup->protocol, pair, rho);
  Sink sink(cfg.out);
  std::ostream& os = sink.os();
  if (cfg.format == "json") {
    const Json j = {{"family", std::string(family_name(pair.family))},
                    {"success", rep.success},
                    {"locc_lower_bound", bound.value},
                    {"transcripts", rep.transcripts}};
    os << j.dump(2) << '\n';
  } else {
    os << "family,success,locc_lower_bound,transcripts\n"
       << family_name(pair.family) << ',' << num(rep.success) << ',' << num(bound.value) << ',' << rep.transcripts
       << '\n';
  }
  sink.finish();
  return kOk;
}

struct HaarRow {
  int d;
  McEstimate mc;
  double sum;
  double asymptote;
};

HaarRow haar_row(int d, std::uint64_t samples, std::uint64_t seed) {
  Vector psi = Vector::Zero(d);
  psi(0) = 1.0;
  const McEstimate mc = mc_ne_integral(d, samples, psi, seed);
  return {d, mc, closed_form_sum(d), haar_asymptote(d)};
}

void write_haar(std::ostream& os, const std::vector<HaarRow>& rows, const std::string& format) {
  if (format == "json") {
    Json out = Json::array();
    for (const HaarRow& r : rows)
      out.push_back({{"d", r.d},
                     {"mc_integral", r.mc.estimate},
                     {"stderr", r.mc.standard_error},
                     {"samples", r.mc.samples},
                     {"closed_form_sum", r.sum},
                     {"asymptote", r.asymptote},
                     {"ratio", r.mc.estimate / r.sum}});
    os << out.dump(2) << '\n';
    return;
  }
  os << "d,mc_integral,stderr,closed_form_sum,asymptote,ratio\n";
  for (const HaarRow& r : rows)
    os << r.d << ',' << num(r.mc.estimate) << ',' << num(r.mc.standard_error) << ',' << num(r.sum) << ','
       << num(r.asymptote) << ',' << num(r.mc.estimate / r.sum) << '\n';
}

int cmd_haar(const RunConfig& cfg) {
  if (cfg.d < 2 || cfg.d % 2 != 0) throw Error("usage", "haar needs an even --d >= 2");
  const std::vector<HaarRow> rows{haar_row(cfg.d, cfg.samples, cfg.seed)};
  Sink sink(cfg.out);
  write_haar(sink.os(), rows, cfg.format);
  sink.finish();
  return kOk;
}

int cmd_export(const RunConfig& cfg) {
  if (cfg.out.empty()) throw Error("usage", "export needs --out");
  save_pair(build_instance(cfg), cfg.out);
  return kOk;
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream f(p);
  if (!f) throw Error("io", "cannot write " + p.string());
  f << text;
  if (!f) throw Error("io", "write failed for " + p.string());
}

int cmd_reproduce(const RunConfig& cfg) {
  namespace fs = std::filesystem;
  const fs::path dir = cfg.out.empty() ? fs::path("reproduction") : fs::path(cfg.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw Error("io", "cannot create " + dir.string());

  SeesawOptions o;
  o.restarts = cfg.restarts;
  o.seed = cfg.seed;
  SeesawOptions ppt_o = o;
  ppt_o.restarts = std::min(cfg.restarts, 4);

  std::ostringstream wh;
  wh << "d,ne,ppt,diamond,analytic\n";
  for (int d = 2; d <= 5; ++d) {
    const ChannelPair p = werner_holevo(d);
    wh << d << ',' << num(ne_norm(p, o).value) << ',' << num(ppt_norm(p, ppt_o).value) << ','
       << num(diamond_norm(p, o).value) << ',' << num(4.0 / (d + 1)) << '\n';
    std::cerr << "werner-holevo d=" << d << " done\n";
  }
  write_file(dir / "werner_holevo.csv", wh.str());

  std::ostringstream qb;
  qb << "N,ne,locc_lower,diamond,analytic_ne\n";
  for (int big_n : {2, 3}) {
    const ChannelPair p = qubit_example(big_n);
    const ProtocolSetup s = *family_protocol(p);
    qb << big_n << ',' << num(ne_norm(p, o).value) << ','
       << num(locc_lower_bound(s.protocol, p, projector(s.input)).value) << ',' << num(diamond_norm(p, o).value)
       << ',' << num(big_n == 2 ? std::sqrt(2.0) : 2.0 / std::sqrt(3.0)) << '\n';
  }
  write_file(dir / "qubit_examples.csv", qb.str());

  std::ostringstream wf;
  wf << "d,ne,bound,protocol_success\n";
  for (int d : {2, 3}) {
    const ChannelPair p = weyl_flagged(d);
    const ProtocolSetup s = flagged_protocol(p);
    const double success = run_protocol(s.protocol, make_instance(p, projector(s.input))).success;
    wf << d << ',' << num(ne_norm(p, o).value) << ',' << num(2.0 * std::sqrt(d / (d + 1.0))) << ',' << num(success)
       << '\n';
  }
  write_file(dir / "weyl_flagged.csv", wf.str());

  std::vector<HaarRow> rows;
  for (int d : {2, 4, 6, 8}) rows.push_back(haar_row(d, cfg.samples, cfg.seed));
  std::ostringstream hs;
  write_haar(hs, rows, "csv");
  write_file(dir / "haar.csv", hs.str());
  std::cout << "wrote " << dir.string() << '\n';
  return kOk;
}

int exit_code_for(const Error& e) {
  const std::string& c = e.code();
  if (c == "chain_violation") return kConsistency;
  if (c == "unsupported" || c == "not_perfectly_discriminable" || c == "not_orthogonal") return kUnsupported;
  return kUsage;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Channel discrimination norms, LOCC protocols and Haar studies"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_instance = [&](CLI::App* sub) {
    sub->add_option("--family", cfg.family, "werner-holevo | qubit-example | weyl-flagged | random-binary");
    sub->add_option("--spec", cfg.spec, "channel pair JSON file");
    sub->add_option("--d", cfg.d, "dimension");
    sub->add_option("--n", cfg.n, "qubit-example index");
    sub->add_option("--N", cfg.big_n, "number of unitaries");
  };
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", cfg.seed, "RNG seed");
    sub->add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", cfg.out, "output path");
  };

  CLI::App* norms = app.add_subcommand("norms", "all five norms of a channel pair");
  add_instance(norms);
  add_common(norms);
  norms->add_option("--restarts", cfg.restarts, "seesaw restarts")->check(CLI::PositiveNumber);
  norms->add_option("--tol", cfg.tol, "seesaw and SDP tolerance")->check(CLI::PositiveNumber);

  CLI::App* protocol = app.add_subcommand("protocol", "run the family's LOCC protocol");
  add_instance(protocol);
  add_common(protocol);

  CLI::App* haar = app.add_subcommand("haar", "Haar integral versus the closed-form sum");
  haar->add_option("--d", cfg.d, "even dimension")->required();
  haar->add_option("--samples", cfg.samples, "Monte-Carlo samples")->check(CLI::Range(1000, 1000000000));
  add_common(haar);

  CLI::App* reproduce = app.add_subcommand("reproduce", "write all reproduction tables to --out directory");
  reproduce->add_option("--restarts", cfg.restarts, "seesaw restarts")->check(CLI::PositiveNumber);
  reproduce->add_option("--seed", cfg.seed, "RNG seed");
  reproduce->add_option("--samples", cfg.samples, "Monte-Carlo samples")->check(CLI::Range(1000, 1000000000));
  reproduce->add_option("--out", cfg.out, "output directory");

  CLI::App* exp = app.add_subcommand("export", "write a channel pair to a JSON spec file");
  add_instance(exp);
  exp->add_option("--seed", cfg.seed, "RNG seed");
  exp->add_option("--out", cfg.out, "output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (norms->parsed()) return cmd_norms(cfg);
    if (protocol->parsed()) return cmd_protocol(cfg);
    if (haar->parsed()) return cmd_haar(cfg);
    if (reproduce->parsed()) return cmd_reproduce(cfg);
    if (exp->parsed()) return cmd_export(cfg);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConsistency;
  }
  return kUsage;
}
