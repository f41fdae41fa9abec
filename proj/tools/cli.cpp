#include "cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "shg/error.hpp"
#include "suites.hpp"

namespace shg::cli {

namespace {

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

Error config_error(const std::string& what) { return Error(ErrorKind::Config, what); }

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Region:
      return kRegionError;
    case ErrorKind::NonConvergence:
      return kNonConvergence;
    case ErrorKind::Internal:
      return kInternalError;
    case ErrorKind::Config:
    case ErrorKind::Domain:
    case ErrorKind::Pole:
    case ErrorKind::Coincidence:
      return kConfigError;
  }
  return kInternalError;
}

QuadratureSpec parse_quadrature(const nlohmann::json& q) {
  QuadratureSpec spec;
  spec.nodes = q.value("nodes", spec.nodes);
  spec.L = q.value("L", spec.L);
  spec.tol = q.value("tol", spec.tol);
  spec.panel_phase = q.value("panel_phase", spec.panel_phase);
  spec.max_panel_width = q.value("max_panel_width", spec.max_panel_width);
  spec.gap_width = q.value("gap_width", spec.gap_width);
  spec.threads = q.value("threads", spec.threads);
  const std::string shape = q.value("shape", std::string("lifted"));
  if (shape == "lifted")
    spec.shape = ContourShape::Lifted;
  else if (shape == "flat")
    spec.shape = ContourShape::Flat;
  else
    throw config_error("quadrature.shape must be lifted or flat");
  return spec;
}

CorrelatorRequest parse_request(const nlohmann::json& q, const RunConfig& cfg) {
  CorrelatorRequest req;
  req.params = cfg.params;
  req.k = q.at("k").get<int>();
  for (const auto& name : q.at("sequence")) req.operators.push_back(cfg.op(name.get<std::string>()));
  if (q.contains("points"))
    for (const auto& x : q.at("points")) {
      if (x.size() != 2) throw config_error("each point needs two coordinates");
      req.points.push_back({x.at(0).get<double>(), x.at(1).get<double>()});
    }
  req.r = q.at("r").get<std::vector<int>>();
  if (static_cast<int>(req.r.size()) != req.k - 1)
    throw config_error("request.r must have k-1 entries");
  if (static_cast<int>(req.operators.size()) != req.k)
    throw config_error("request.sequence must name k operators");
  if (q.contains("quadrature")) req.quad = parse_quadrature(q.at("quadrature"));
  if (q.contains("ladder")) {
    ContourLadder lad{req.k, std::vector<double>(CompositionVector::size_for(req.k), 0.0)};
    for (const auto& e : q.at("ladder")) {
      const auto blk = e.at("block").get<std::vector<int>>();
      if (blk.size() != 2 || !(req.k >= blk[0] && blk[0] > blk[1] && blk[1] >= 1))
        throw config_error("ladder block must be [b, a] with k >= b > a >= 1");
      lad.at(blk[0], blk[1]) = e.at("eta").get<double>();
    }
    req.ladder = lad;
  }
  if (q.contains("smearing"))
    for (const auto& g : q.at("smearing")) {
      const auto c = g.at("center").get<std::vector<double>>();
      const auto w = g.at("width").get<std::vector<double>>();
      if (c.size() != 2 || w.size() != 2) throw config_error("smearing needs 2-vectors");
      if (!(w[0] > 0.0 && w[1] > 0.0)) throw config_error("smearing widths must be positive");
      req.smearing.push_back({g.value("amplitude", 1.0), c[0], c[1], w[0], w[1]});
    }
  return req;
}

std::vector<suites::Report> run_suite(const std::string& name, const suites::Options& o,
                                      const RunConfig* cfg) {
  using namespace suites;
  if (name == "axioms") {
    if (cfg && !cfg->operators.empty()) return {axioms(o, cfg->operators, &cfg->params)};
    return {axioms(o)};
  }
  if (name == "kernels") return {kernels(o)};
  if (name == "cauchy") return {cauchy(o)};
  if (name == "chains") return {chains(o)};
  if (name == "contours") return {contours(o)};
  if (name == "smatrix") return {smatrix(o)};
  if (name == "barnes") return {barnes(o)};
  if (name == "minff") return {min_form_factor(o)};
  if (name == "compositions") return {compositions(o)};
  if (name == "bessel") return {bessel(o)};
  if (name == "representation") return {representation(o)};
  if (name == "symmetry") return {symmetry(o)};
  if (name == "all") {
    std::vector<Report> out;
    for (const char* n : {"smatrix", "barnes", "minff", "cauchy", "chains", "compositions",
                          "axioms", "kernels", "bessel", "contours", "representation",
                          "symmetry"}) {
      auto r = run_suite(n, o, cfg);
      out.insert(out.end(), r.begin(), r.end());
    }
    return out;
  }
  throw config_error("unknown suite " + name);
}

struct Globals {
  int threads = 1;
  double tol = 0.0;
  int nodes = 0;
  double L = 0.0;

  void apply(QuadratureSpec& q) const {
    q.threads = threads;
    if (tol > 0.0) q.tol = tol;
    if (nodes > 0) q.nodes = nodes;
    if (L > 0.0) q.L = L;
  }
};

int cmd_specfun(const std::string& what, std::vector<double> beta, double beta_im, double b,
                double mass, const std::string& grid, const std::vector<double>& sweep,
                std::ostream& out) {
  const auto params = make_model(b, mass);
  if (what == "g-funceq") {
    const auto pts = suites::barnes_grid(grid == "fine" ? suites::Grid::Fine
                                                        : suites::Grid::Coarse);
    double worst = 0.0;
    for (const auto& z : pts) worst = std::max(worst, suites::barnes_funceq_residual(z));
    out << "points " << pts.size() << "\n";
    out << "max_residual " << num(worst) << "\n";
    return worst < 1e-10 ? kOk : kCheckFailed;
  }
  if (!sweep.empty()) {
    const int count = static_cast<int>(sweep[2]);
    if (count < 1) throw config_error("--sweep needs a positive count");
    beta.clear();
    for (int i = 0; i < count; ++i)
      beta.push_back(count == 1 ? sweep[0] : sweep[0] + (sweep[1] - sweep[0]) * i / (count - 1));
  }
  const bool is_z = what == "log-g" || what == "log-gamma";
  out << (is_z ? "z_re z_im re im\n" : "beta_re beta_im re im\n");
  for (double x : beta) {
    const cplx arg(x, beta_im);
    cplx v;
    if (what == "s")
      v = s_matrix(arg, params);
    else if (what == "f")
      v = min_form_factor(arg, params);
    else if (what == "log-g")
      v = log_barnes_g(arg);
    else
      v = log_gamma(arg);
    out << num(arg.real()) << " " << num(arg.imag()) << " " << num(v.real()) << " "
        << num(v.imag()) << "\n";
  }
  return kOk;
}

int cmd_verify(const std::string& suite, const std::string& config, bool quick,
               const Globals& g, std::ostream& out) {
  RunConfig cfg;
  const RunConfig* pcfg = nullptr;
  if (!config.empty()) {
    cfg = load_config(config);
    pcfg = &cfg;
  }
  suites::Options o;
  o.quick = quick;
  o.threads = g.threads;
  bool ok = true;
  for (const auto& rep : run_suite(suite, o, pcfg)) {
    for (const auto& c : rep.checks) {
      char limit[32];
      std::snprintf(limit, sizeof limit, "%.1e", c.limit);
      out << (c.passed ? "PASS " : "FAIL ") << c.label << " " << num(c.value) << " < " << limit
          << "\n";
    }
    for (const auto& n : rep.notes) out << "note " << n << "\n";
    char buf[64];
    std::snprintf(buf, sizeof buf, " (%.2f s)", rep.seconds);
    out << "suite " << rep.name << ": " << (rep.passed() ? "PASS" : "FAIL") << buf << "\n";
    ok = ok && rep.passed();
  }
  return ok ? kOk : kCheckFailed;
}

int cmd_enumerate(int k, const std::vector<int>& r, std::vector<double> omegas,
                  std::ostream& out) {
  if (static_cast<int>(r.size()) != k - 1) throw config_error("--r must have k-1 entries");
  if (omegas.empty()) omegas.assign(k, 0.0);
  if (static_cast<int>(omegas.size()) != k) throw config_error("--omegas must have k entries");
  const auto rows = enumerate_compositions(k, r);
  out << "rows " << rows.size() << "\n";
  out << "composition,size,weight,phase_re,phase_im\n";
  for (const auto& n : rows) {
    double weight = 0.0;
    for (int b = 2; b <= k; ++b)
      for (int a = 1; a < b; ++a) weight += n.at(b, a) * omega_ba(b, a, omegas);
    const cplx phase = std::exp(cplx(0.0, -2.0 * std::numbers::pi * weight));
    out << n.to_string() << "," << n.total() << "," << num(weight) << "," << num(phase.real())
        << "," << num(phase.imag()) << "\n";
  }
  return kOk;
}

int cmd_eval_ff(const std::string& config, const std::string& name,
                const std::vector<double>& beta, std::vector<double> beta_im,
                std::ostream& out) {
  const auto cfg = load_config(config);
  const auto& op = cfg.op(name);
  if (beta_im.empty()) beta_im.assign(beta.size(), 0.0);
  if (beta_im.size() != beta.size()) throw config_error("--beta-im must match --beta");
  std::vector<cplx> args;
  for (std::size_t i = 0; i < beta.size(); ++i) args.emplace_back(beta[i], beta_im[i]);
  const cplx v = op.form_factor(args);
  out << op.name << " n=" << args.size() << " " << num(v.real()) << " " << num(v.imag()) << "\n";
  return kOk;
}

int cmd_correlator(const std::string& config, int mixed, bool smeared, std::string format,
                   std::string output, const Globals& g, std::ostream& out) {
  auto cfg = load_config(config);
  if (!cfg.has_request) throw config_error("config has no request section");
  auto& req = cfg.request;
  g.apply(req.quad);
  if (format.empty()) format = cfg.format;
  if (output.empty()) output = cfg.path;
  if (mixed < 0 || mixed > req.k) throw config_error("--mixed must lie in [1, k]");
  WrResult w;
  if (smeared) {
    if (req.smearing.empty()) throw config_error("--smeared needs request.smearing");
    w = smeared_correlator(req, mixed);
  } else {
    req.smearing.clear();
    w = mixed > 0 ? compute_W_r_mixed(req, mixed) : compute_W_r(req);
  }
  const std::string text = format_result(w, format);
  if (output.empty()) {
    out << text;
  } else {
    std::ofstream f(output);
    if (!f) throw config_error("cannot write " + output);
    f << text;
  }
  return kOk;
}

}  // namespace

const OperatorSpec& RunConfig::op(const std::string& name) const {
  const auto it = by_name.find(name);
  if (it == by_name.end()) throw config_error("unknown operator " + name);
  return operators[it->second];
}

RunConfig parse_config(const nlohmann::json& doc) {
  try {
    RunConfig cfg;
    const auto model = doc.value("model", nlohmann::json::object());
    cfg.params = make_model(model.value("b", 0.3), model.value("mass", 1.0));
    if (doc.contains("operators"))
      for (const auto& o : doc.at("operators")) {
        auto spec = operator_from_json(o, cfg.params);
        if (cfg.by_name.count(spec.name)) throw config_error("duplicate operator " + spec.name);
        cfg.by_name[spec.name] = cfg.operators.size();
        cfg.operators.push_back(std::move(spec));
      }
    if (doc.contains("request")) {
      cfg.request = parse_request(doc.at("request"), cfg);
      cfg.has_request = true;
    }
    if (doc.contains("output")) {
      cfg.format = doc.at("output").value("format", cfg.format);
      cfg.path = doc.at("output").value("path", cfg.path);
    }
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw config_error(std::string("config: ") + e.what());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Domain) throw config_error(e.what());
    throw;
  }
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw config_error("cannot read config " + path);
  nlohmann::json doc;
  try {
    f >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw config_error(std::string("config: ") + e.what());
  }
  return parse_config(doc);
}

std::string format_result(const WrResult& w, const std::string& format) {
  std::ostringstream s;
  if (format == "csv") {
    s << "composition,re(I_n),im(I_n),err,phase_re,phase_im\n";
    for (const auto& r : w.rows)
      s << r.n.to_string() << "," << num(r.I.real()) << "," << num(r.I.imag()) << ","
        << num(r.error) << "," << num(r.phase.real()) << "," << num(r.phase.imag()) << "\n";
    s << "total," << num(w.total.real()) << "," << num(w.total.imag()) << "," << num(w.error)
      << ",,\n";
  } else if (format == "json") {
    nlohmann::json doc;
    doc["rows"] = nlohmann::json::array();
    for (const auto& r : w.rows)
      doc["rows"].push_back({{"composition", r.n.to_string()},
                             {"n", r.n.n},
                             {"I", {r.I.real(), r.I.imag()}},
                             {"err", r.error},
                             {"phase", {r.phase.real(), r.phase.imag()}},
                             {"norm", r.norm},
                             {"contribution", {r.contribution.real(), r.contribution.imag()}}});
    doc["total"] = {w.total.real(), w.total.imag()};
    doc["error"] = w.error;
    s << doc.dump(2) << "\n";
  } else if (format == "text") {
    for (const auto& r : w.rows) {
      s << "composition " << r.n.to_string() << "\n";
      s << "  I_n          " << num(r.I.real()) << " " << num(r.I.imag()) << "\n";
      s << "  err          " << num(r.error) << "\n";
      s << "  phase        " << num(r.phase.real()) << " " << num(r.phase.imag()) << "\n";
      s << "  contribution " << num(r.contribution.real()) << " " << num(r.contribution.imag())
        << "\n";
    }
    s << "total " << num(w.total.real()) << " " << num(w.total.imag()) << "\n";
    s << "error " << num(w.error) << "\n";
  } else {
    throw config_error("unknown output format " + format);
  }
  return s.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sinh-Gordon form factors and truncated correlators", "shg"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--threads", g.threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--tol", g.tol, "quadrature relative tolerance")->check(CLI::PositiveNumber);
  app.add_option("--nodes", g.nodes, "Gauss-Legendre nodes per panel")->check(CLI::Range(4, 256));
  app.add_option("--L", g.L, "initial truncation half-width")->check(CLI::PositiveNumber);

  auto* sf = app.add_subcommand("specfun", "evaluate special functions");
  std::string what = "s";
  std::vector<double> beta{0.0};
  double beta_im = 0.0;
  double b = 0.3;
  double mass = 1.0;
  std::string grid = "coarse";
  std::vector<double> sweep;
  sf->add_option("--what", what)->check(CLI::IsMember({"s", "f", "log-g", "log-gamma", "g-funceq"}));
  sf->add_option("--beta", beta, "real parts of the arguments");
  sf->add_option("--beta-im", beta_im, "common imaginary part");
  sf->add_option("--b", b, "coupling in [0, 1/2]");
  sf->add_option("--mass", mass);
  sf->add_option("--grid", grid)->check(CLI::IsMember({"coarse", "fine"}));
  sf->add_option("--sweep", sweep, "LO HI COUNT over the real part")->expected(3);

  auto* vf = app.add_subcommand("verify", "run a verification suite");
  std::string suite;
  std::string vconfig;
  bool quick = false;
  vf->add_option("suite", suite)->required()->check(CLI::IsMember(
      {"axioms", "kernels", "cauchy", "chains", "contours", "smatrix", "barnes", "minff",
       "compositions", "bessel", "representation", "symmetry", "all"}));
  vf->add_option("--config", vconfig);
  vf->add_flag("--quick", quick);

  auto* ef = app.add_subcommand("enumerate", "list the compositions of a truncation vector");
  int k = 2;
  std::vector<int> r;
  std::vector<double> omegas;
  ef->add_option("--k", k)->required()->check(CLI::Range(2, 8));
  ef->add_option("--r", r)->required();
  ef->add_option("--omegas", omegas, "one locality index per operator");

  auto* ff = app.add_subcommand("eval-ff", "evaluate a configured form factor");
  std::string fconfig;
  std::string opname;
  std::vector<double> fbeta;
  std::vector<double> fbeta_im;
  ff->add_option("--config", fconfig)->required();
  ff->add_option("--operator", opname)->required();
  ff->add_option("--beta", fbeta)->required();
  ff->add_option("--beta-im", fbeta_im);

  auto* cf = app.add_subcommand("correlator", "compute a truncated correlator");
  std::string cconfig;
  int mixed = 0;
  bool smeared = false;
  std::string format;
  std::string output;
  cf->add_option("--config", cconfig)->required();
  cf->add_option("--mixed", mixed, "mixed representation index t");
  cf->add_flag("--smeared", smeared);
  cf->add_option("--format", format)->check(CLI::IsMember({"csv", "json", "text"}));
  cf->add_option("--output", output);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(std::move(rev));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  }

  try {
    if (sf->parsed()) return cmd_specfun(what, beta, beta_im, b, mass, grid, sweep, out);
    if (vf->parsed()) return cmd_verify(suite, vconfig, quick, g, out);
    if (ef->parsed()) return cmd_enumerate(k, r, omegas, out);
    if (ff->parsed()) return cmd_eval_ff(fconfig, opname, fbeta, fbeta_im, out);
    if (cf->parsed()) return cmd_correlator(cconfig, mixed, smeared, format, output, g, out);
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error (internal): " << e.what() << "\n";
    return kInternalError;
  }
  return kInternalError;
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, out, err);
}

}  // namespace shg::cli
