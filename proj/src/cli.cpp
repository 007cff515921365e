#include "rmedge/cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "rmedge/acceptance.hpp"
#include "rmedge/ensembles.hpp"
#include "rmedge/error.hpp"
#include "rmedge/hardedge.hpp"
#include "rmedge/hill.hpp"
#include "rmedge/kernels.hpp"
#include "rmedge/linop.hpp"
#include "rmedge/painleve.hpp"

namespace rmedge::cli {

using nlohmann::json;
namespace fs = std::filesystem;

std::string to_json(const RunManifest& m) {
  json j;
  j["command"] = m.command;
  j["params"] = m.params;
  j["version"] = m.version;
  j["seed"] = m.seed ? json(*m.seed) : json(nullptr);
  j["wall_seconds"] = m.wall_seconds;
  j["outputs"] = m.outputs;
  return j.dump(2) + "\n";
}

RunManifest manifest_from_json(const std::string& text) {
  json j = json::parse(text);
  RunManifest m;
  m.command = j.at("command").get<std::string>();
  m.params = j.at("params").get<std::map<std::string, std::vector<std::string>>>();
  m.version = j.at("version").get<std::string>();
  if (!j.at("seed").is_null()) m.seed = j.at("seed").get<std::uint64_t>();
  m.wall_seconds = j.at("wall_seconds").get<double>();
  m.outputs = j.at("outputs").get<std::vector<std::string>>();
  return m;
}

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::string& path, const std::string& text) {
  fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream o(path, std::ios::binary);
  if (!o) throw std::runtime_error("cannot write " + path);
  o << text;
}

}  // namespace

RunManifest read_manifest(const std::string& path) { return manifest_from_json(slurp(path)); }

std::vector<std::string> manifest_args(const RunManifest& m) {
  std::vector<std::string> a = {m.command};
  for (const auto& [k, v] : m.params) {
    if (v.size() == 1) {
      a.push_back("--" + k + "=" + v[0]);
    } else {
      a.push_back("--" + k);
      a.insert(a.end(), v.begin(), v.end());
    }
  }
  return a;
}

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Shortest round-trip form, for file names.
std::string short_num(double v) {
  char buf[32];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r"), e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

bool has_flag(const std::vector<std::string>& args, const std::string& key) {
  return std::any_of(args.begin(), args.end(),
                     [&](const std::string& a) { return a == "--" + key || a.rfind("--" + key + "=", 0) == 0; });
}

// Removes --config PATH and splices its key=value lines in after the
// subcommand, skipping keys that are also given as flags.
std::vector<std::string> apply_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      args.erase(args.begin() + i, args.begin() + i + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + i);
      break;
    }
  }
  if (path.empty() || args.empty()) return args;
  std::istringstream in(slurp(path));
  std::vector<std::string> extra;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw CLI::ConversionError("config line without '=': " + line);
    std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (has_flag(args, key)) continue;
    std::istringstream vs(value);
    std::vector<std::string> parts;
    for (std::string w; vs >> w;) parts.push_back(w);
    if (parts.size() == 1) {
      extra.push_back("--" + key + "=" + parts[0]);
    } else {
      extra.push_back("--" + key);
      extra.insert(extra.end(), parts.begin(), parts.end());
    }
  }
  args.insert(args.begin() + 1, extra.begin(), extra.end());
  return args;
}

std::map<std::string, std::vector<std::string>> collect_params(const CLI::App* sub) {
  std::map<std::string, std::vector<std::string>> p;
  for (const CLI::Option* o : sub->get_options()) {
    if (o->get_lnames().empty() || o->get_lnames()[0] == "help") continue;
    const std::string& key = o->get_lnames()[0];
    if (o->count() > 0)
      p[key] = o->results();
    else if (!o->get_default_str().empty())
      p[key] = {o->get_default_str()};
  }
  return p;
}

std::string cache_dir() {
  if (const char* d = std::getenv("RMEDGE_CACHE_DIR"); d && *d) return d;
  if (const char* d = std::getenv("XDG_CACHE_HOME"); d && *d) return std::string(d) + "/rmedge";
  if (const char* d = std::getenv("HOME"); d && *d) return std::string(d) + "/.cache/rmedge";
  return "";
}

struct KernelArgs {
  std::string kernel = "sine";
  double t = 1.0, nu = 0.0;
  std::vector<std::string> interval;
  int n = 64;
};

void add_kernel_options(CLI::App* s, KernelArgs& k) {
  s->add_option("--kernel", k.kernel, "sine | airy | bessel")->check(CLI::IsMember({"sine", "airy", "bessel"}));
  s->add_option("--t", k.t, "sine kernel density parameter");
  s->add_option("--nu", k.nu, "Bessel order");
  CLI::Validator end(
      [](std::string& v) -> std::string {
        if (v == "inf" || v == "+inf" || v == "-inf") return "";
        double d;
        auto r = std::from_chars(v.data(), v.data() + v.size(), d);
        return r.ec == std::errc() && r.ptr == v.data() + v.size() ? "" : "not a number: " + v;
      },
      "NUMBER|inf");
  s->add_option("--interval", k.interval, "LO HI (HI may be inf)")->expected(2)->required()->check(end);
  s->add_option("--n", k.n, "quadrature nodes")->check(CLI::PositiveNumber);
}

double parse_end(const std::string& s) {
  if (s == "inf" || s == "+inf") return kInf;
  if (s == "-inf") return -kInf;
  double v = 0;
  std::from_chars(s.data(), s.data() + s.size(), v);
  return v;
}

struct Built {
  KernelSpec spec;
  Interval iv;
  DiscretizedOp op;
};

Built build_kernel(const KernelArgs& k) {
  Interval iv{parse_end(k.interval[0]), parse_end(k.interval[1])};
  KernelSpec spec = k.kernel == "sine" ? sine_kernel(k.t) : k.kernel == "airy" ? airy_kernel() : bessel_hard_kernel(k.nu);
  return {spec, iv, discretize(spec, iv, k.n)};
}

json interval_json(Interval iv) {
  auto end = [](double v) { return std::isinf(v) ? json(v > 0 ? "inf" : "-inf") : json(v); };
  return json::array({end(iv.lo), end(iv.hi)});
}

std::string tw_table(double t, const std::vector<double>& xs, int n) {
  auto p = tw_cdf(t, xs);
  auto d = tw_cdf_det(t, xs, n);
  std::string s = "x,F_painleve,F_det,gap\n";
  for (std::size_t i = 0; i < xs.size(); ++i)
    s += num(xs[i]) + "," + num(p.F_values[i]) + "," + num(d.F_values[i]) + "," +
         num(std::fabs(p.F_values[i] - d.F_values[i])) + "\n";
  return s;
}

}  // namespace

int run(const std::vector<std::string>& raw, std::ostream& out, std::ostream& err) {
  CLI::App app{"Random-matrix edge statistics from integrable kernels", "rmedge"};
  app.option_defaults()->always_capture_default();
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  std::string out_path;
  auto add_out = [&](CLI::App* s) { s->add_option("--out", out_path, "output file (default: stdout)"); };

  KernelArgs det_k;
  double det_z = 1.0;
  auto* det = app.add_subcommand("det", "Fredholm determinant det(I - z K) on an interval (JSON)");
  add_kernel_options(det, det_k);
  det->add_option("--z", det_z, "spectral parameter");
  add_out(det);

  KernelArgs gap_k;
  int gap_kmax = 3;
  std::string gap_format = "csv";
  auto* gap = app.add_subcommand("gap", "gap probabilities E(0..kmax) (CSV or JSON)");
  add_kernel_options(gap, gap_k);
  gap->add_option("--kmax", gap_kmax)->check(CLI::NonNegativeNumber);
  gap->add_option("--format", gap_format)->check(CLI::IsMember({"csv", "json"}));
  add_out(gap);

  double tw_t = 1.0, tw_xmin = -5, tw_xmax = 2, tw_step = 0.1;
  int tw_n = 80;
  bool tw_no_cache = false;
  auto* tw = app.add_subcommand("tw", "Tracy-Widom curve by the Painleve and determinant routes (CSV)");
  tw->add_option("--t", tw_t, "thinning parameter in (0, 1]");
  tw->add_option("--xmin", tw_xmin);
  tw->add_option("--xmax", tw_xmax);
  tw->add_option("--step", tw_step)->check(CLI::PositiveNumber);
  tw->add_option("--n", tw_n, "determinant quadrature nodes")->check(CLI::PositiveNumber);
  tw->add_flag("--no-cache", tw_no_cache, "skip the table cache");
  add_out(tw);

  HardEdgeConfig he_cfg{0.5, 0.0, 0.5};
  double he_z = 1.0;
  int he_n = 80;
  auto* he = app.add_subcommand("hardedge", "hard-edge determinant identity report (JSON)");
  he->add_option("--nu", he_cfg.nu);
  he->add_option("--a", he_cfg.a, "interval (0, a)");
  he->add_option("--ell", he_cfg.ell, "shift");
  he->add_option("--z", he_z);
  he->add_option("--n", he_n)->check(CLI::PositiveNumber);
  add_out(he);

  double hill_alpha = 1.0, hill_lmin = -5, hill_lmax = 50;
  int hill_count = 20, hill_samples = 200;
  auto* hill = app.add_subcommand("hill", "periodic spectrum and discriminant samples for alpha cos 2x (CSV)");
  hill->add_option("--alpha", hill_alpha);
  hill->add_option("--count", hill_count)->check(CLI::PositiveNumber);
  hill->add_option("--lambda-min", hill_lmin);
  hill->add_option("--lambda-max", hill_lmax);
  hill->add_option("--samples", hill_samples)->check(CLI::PositiveNumber);
  add_out(hill);

  double m_alpha = 1.0;
  int m_index = 1, m_n = 96, m_top = 3;
  auto* mat = app.add_subcommand("mathieu", "Mathieu kernel eigen-report (JSON)");
  mat->add_option("--alpha", m_alpha);
  mat->add_option("--index", m_index, "periodic spectrum index of a 2pi-periodic eigenvalue");
  mat->add_option("--n", m_n, "grid points on [0, 2pi)")->check(CLI::PositiveNumber);
  mat->add_option("--top", m_top, "eigenpairs checked")->check(CLI::PositiveNumber);
  add_out(mat);

  std::string s_ens = "gue";
  int s_n = 200, s_samples = 2000, s_kmax = 3, s_threads = 0, s_hn = 80;
  std::uint64_t s_seed = 1;
  double s_alpha = 0.0;
  auto* smp = app.add_subcommand("sample", "Monte Carlo soft-edge counts vs E(k) (CSV)");
  smp->add_option("--ensemble", s_ens)->check(CLI::IsMember({"gue", "wishart"}));
  smp->add_option("--n", s_n);
  smp->add_option("--samples", s_samples);
  smp->add_option("--seed", s_seed);
  smp->add_option("--alpha", s_alpha, "soft-edge threshold");
  smp->add_option("--kmax", s_kmax)->check(CLI::NonNegativeNumber);
  smp->add_option("--threads", s_threads, "0: all cores");
  smp->add_option("--hankel-n", s_hn, "quadrature nodes for the predicted E(k)")->check(CLI::PositiveNumber);
  add_out(smp);

  AcceptanceOptions v_opt;
  auto* ver = app.add_subcommand("verify", "run the acceptance suite");
  ver->add_option("--only", v_opt.only, "criterion ids");
  ver->add_option("--seed", v_opt.seed);
  ver->add_option("--threads", v_opt.threads);
  add_out(ver);

  std::string r_manifest;
  auto* rep = app.add_subcommand("replay", "re-run the command recorded in a manifest");
  rep->add_option("manifest", r_manifest)->required();
  add_out(rep);

  if (!raw.empty() && raw[0][0] != '-' && !app.get_subcommand_no_throw(raw[0])) {
    err << "rmedge: unknown subcommand " << raw[0] << "\n\n" << app.help();
    return 2;
  }
  std::vector<std::string> args;
  try {
    args = apply_config(raw);
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    err << "rmedge: " << e.what() << "\n\n" << app.help();
    return 2;
  } catch (const std::exception& e) {
    err << "rmedge: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  const CLI::App* sub = app.get_subcommands().front();
  auto t0 = std::chrono::steady_clock::now();
  std::vector<std::string> written;
  std::optional<std::uint64_t> seed;
  int code = 0;

  auto emit = [&](const std::string& text) {
    if (out_path.empty()) {
      out << text;
    } else {
      write_file(out_path, text);
      written.push_back(out_path);
    }
  };

  try {
    if (sub == rep) {
      RunManifest m = read_manifest(r_manifest);
      if (!out_path.empty()) m.params["out"] = {out_path};
      return run(manifest_args(m), out, err);
    } else if (sub == det) {
      Built b = build_kernel(det_k);
      json j = {{"kernel", b.spec.tag()}, {"interval", interval_json(b.iv)}, {"z", det_z},
                {"n", det_k.n},           {"det", fredholm_det(b.op, det_z)}};
      emit(j.dump(2) + "\n");
    } else if (sub == gap) {
      Built b = build_kernel(gap_k);
      auto g = gap_probs(b.op, gap_kmax);
      if (gap_format == "json") {
        json j = {{"kernel", b.spec.tag()}, {"interval", interval_json(b.iv)}, {"n", gap_k.n}, {"E", g.probs}};
        emit(j.dump(2) + "\n");
      } else {
        std::string s = "k,E\n";
        for (std::size_t k = 0; k < g.probs.size(); ++k) s += std::to_string(k) + "," + num(g.probs[k]) + "\n";
        emit(s);
      }
    } else if (sub == tw) {
      if (tw_xmax < tw_xmin) throw Error(ErrorKind::invalid_argument, "cli", "xmax < xmin");
      std::vector<double> xs;
      int steps = static_cast<int>(std::floor((tw_xmax - tw_xmin) / tw_step + 1e-9));
      for (int k = 0; k <= steps; ++k) xs.push_back(tw_xmin + k * tw_step);
      std::string dir = tw_no_cache ? "" : cache_dir();
      std::string cached;
      if (!dir.empty())
        cached = dir + "/tw_t" + short_num(tw_t) + "_x" + short_num(tw_xmin) + "_" + short_num(tw_xmax) + "_h" +
                 short_num(tw_step) + "_n" + std::to_string(tw_n) + ".csv";
      std::string table;
      if (!cached.empty() && fs::exists(cached)) {
        table = slurp(cached);
      } else {
        table = tw_table(tw_t, xs, tw_n);
        if (!cached.empty()) write_file(cached, table);
      }
      emit(table);
      if (!cached.empty()) written.push_back(cached);
    } else if (sub == he) {
      auto d = bessel_det_identity(he_cfg, he_z, he_n);
      json j = {{"nu", he_cfg.nu},  {"a", he_cfg.a},         {"ell", he_cfg.ell},       {"alpha", he_cfg.alpha()},
                {"z", he_z},         {"n", he_n},             {"det_kernel", d.lhs},     {"det_hankel", d.rhs},
                {"gap", d.gap}};
      emit(j.dump(2) + "\n");
    } else if (sub == hill) {
      if (hill_lmax <= hill_lmin) throw Error(ErrorKind::invalid_argument, "cli", "lambda-max <= lambda-min");
      auto sp = periodic_spectrum(hill_alpha, hill_count);
      std::string s = "kind,index,lambda,discriminant,period\n";
      for (std::size_t i = 0; i < sp.lambdas.size(); ++i)
        s += "spectrum," + std::to_string(i) + "," + num(sp.lambdas[i]) + "," +
             num(discriminant({hill_alpha, sp.lambdas[i]})) + "," +
             (sp.period_tags[i] == Period::pi_periodic ? "pi" : "2pi") + "\n";
      for (int i = 0; i < hill_samples; ++i) {
        double l = hill_samples == 1 ? hill_lmin : hill_lmin + (hill_lmax - hill_lmin) * i / (hill_samples - 1);
        s += "discriminant," + std::to_string(i) + "," + num(l) + "," + num(discriminant({hill_alpha, l})) + ",\n";
      }
      emit(s);
    } else if (sub == mat) {
      auto k = mathieu_tw_kernel(m_alpha, m_index);
      auto r = mathieu_eigencheck(*k, m_n, m_top);
      json items = json::array();
      for (const auto& it : r.items)
        items.push_back({{"eigenvalue", it.eigenvalue},
                         {"mu", it.mu},
                         {"residual", it.residual},
                         {"skipped", it.skipped},
                         {"tag", it.tag}});
      std::vector<double> top(r.eigenvalues.begin(), r.eigenvalues.begin() + std::min<std::size_t>(10, r.eigenvalues.size()));
      json j = {{"alpha", m_alpha},       {"index", m_index},   {"lambda", k->lambda},
                {"grid_n", m_n},          {"ode_residual", k->ode_residual},
                {"eigenvalues", top},     {"checks", items},    {"worst_residual", r.worst_residual}};
      emit(j.dump(2) + "\n");
    } else if (sub == smp) {
      seed = s_seed;
      Ensemble e = s_ens == "gue" ? Ensemble::gue : Ensemble::wishart;
      auto g = soft_edge_gap_counts(e, s_n, s_samples, s_alpha, s_seed, s_kmax, s_threads);
      // predicted E(k) only for the unitary class; the real Wishart edge is the orthogonal one
      std::vector<double> pred(g.probs.size(), std::nan(""));
      if (e == Ensemble::gue) {
        auto h = discretize(airy_hankel_symbol(s_alpha), {0, kInf}, s_hn);
        pred = gap_probs(symmetric_eigenvalues(h.matrix * h.matrix), s_kmax).probs;
        double rest = 1;
        for (int k = 0; k < s_kmax; ++k) rest -= pred[k];
        pred[s_kmax] = rest;
      }
      std::string s = "k,empirical,std_error,predicted\n";
      for (std::size_t k = 0; k < g.probs.size(); ++k)
        s += std::to_string(k) + "," + num(g.probs[k]) + "," + num(g.std_errors[k]) + "," + num(pred[k]) + "\n";
      emit(s);
    } else if (sub == ver) {
      seed = v_opt.seed;
      auto rows = run_acceptance(v_opt, [&](const AcceptanceRow& r) { out << format_row(r) << std::endl; });
      int failed = static_cast<int>(std::count_if(rows.begin(), rows.end(), [](const auto& r) { return !r.pass; }));
      out << (failed == 0 ? "all " + std::to_string(rows.size()) + " criteria passed"
                          : std::to_string(failed) + " of " + std::to_string(rows.size()) + " criteria failed")
          << "\n";
      if (!out_path.empty()) {
        json j = json::array();
        for (const auto& r : rows)
          j.push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail},
                       {"seconds", r.seconds}, {"budget", r.budget}});
        write_file(out_path, j.dump(2) + "\n");
        written.push_back(out_path);
      }
      code = failed == 0 ? 0 : 1;
    }
  } catch (const Error& e) {
    err << "rmedge: error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "rmedge: " << e.what() << "\n";
    return 1;
  }

  if (!out_path.empty()) {
    RunManifest m;
    m.command = sub->get_name();
    m.params = collect_params(sub);
    m.version = kVersion;
    m.seed = seed;
    m.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    m.outputs = written;
    try {
      write_file(out_path + ".manifest.json", to_json(m));
    } catch (const std::exception& e) {
      err << "rmedge: " << e.what() << "\n";
      return 1;
    }
  }
  return code;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace rmedge::cli
