#include "cmcgraph/cli.hpp"

#include "cmcgraph/catalog.hpp"
#include "cmcgraph/estimates.hpp"
#include "cmcgraph/io.hpp"

#include <CLI11.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>

namespace cmc::cli {

namespace fs = std::filesystem;
namespace pt = boost::property_tree;
using nlohmann::json;

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\n\"");
  const auto e = s.find_last_not_of(" \t\r\n\"");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) {
    cur = trim(cur);
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

// Finite double; also accepts a ratio "a/b".
double parse_number(const std::string& raw, const std::string& key) {
  const std::string s = trim(raw);
  auto one = [&](const std::string& t) {
    double v = 0.0;
    const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || p != t.data() + t.size() || !std::isfinite(v)) {
      throw ConfigError("key '" + key + "': not a finite number: '" + raw + "'");
    }
    return v;
  };
  if (const auto slash = s.find('/'); slash != std::string::npos) {
    const double den = one(trim(s.substr(slash + 1)));
    if (den == 0.0) throw ConfigError("key '" + key + "': division by zero");
    return one(trim(s.substr(0, slash))) / den;
  }
  return one(s);
}

int parse_int(const std::string& raw, const std::string& key) {
  const double v = parse_number(raw, key);
  if (v != std::floor(v) || std::abs(v) > 1e9) throw ConfigError("key '" + key + "': not an integer: '" + raw + "'");
  return static_cast<int>(v);
}

std::vector<double> parse_numbers(const std::string& raw, const std::string& key) {
  std::vector<double> out;
  for (const auto& s : split(raw, ',')) out.push_back(parse_number(s, key));
  return out;
}

Signature parse_signature(const std::string& raw, const std::string& key) {
  const std::string s = trim(raw);
  if (s == "euclid" || s == "euclidean" || s == "+1" || s == "1") return Signature::Euclidean;
  if (s == "lorentz" || s == "lorentzian" || s == "-1") return Signature::Lorentzian;
  throw ConfigError("key '" + key + "': signature must be euclid or lorentz, got '" + raw + "'");
}

std::string fmt(double v) {
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + fmt(v[i]);
  return s;
}

const std::set<std::string> kCommands = {"solve", "verify", "catalog", "predicates", "sweep"};

const std::map<std::string, std::set<std::string>> kShapeKeys = {
    {"disk", {"shape", "center", "radius"}},
    {"rectangle", {"shape", "corner", "width", "height"}},
    {"polygon", {"shape", "vertices", "vertices_csv"}},
    {"implicit", {"shape", "family", "a", "b", "r0", "amplitude", "lobes"}},
};

const std::map<std::string, std::set<std::string>> kSectionKeys = {
    {"problem", {"H", "signature", "h", "boundary_data", "phi_samples"}},
    {"continuation",
     {"newton_tol", "max_newton_iters", "t_step_init", "t_step_min", "backtrack_factor", "max_backtracks",
      "spacelike_delta"}},
    {"output", {"dir"}},
    {"sweep", {"H_values", "signatures", "jobs"}},
    {"catalog", {"surface", "rho", "half_width", "c", "r_min", "extent", "samples"}},
};

std::vector<Point> read_vertices_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("key 'vertices_csv': cannot read '" + path + "'");
  std::vector<Point> pts;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    const auto cols = split(line, ',');
    if (cols.size() != 2) throw ConfigError("key 'vertices_csv': expected two columns in '" + line + "'");
    double x = 0, y = 0;
    const auto r1 = std::from_chars(cols[0].data(), cols[0].data() + cols[0].size(), x);
    const auto r2 = std::from_chars(cols[1].data(), cols[1].data() + cols[1].size(), y);
    const bool numeric = r1.ec == std::errc() && r2.ec == std::errc();
    if (!numeric) {
      if (first) {
        first = false;
        continue;  // header
      }
      throw ConfigError("key 'vertices_csv': non-numeric row '" + line + "'");
    }
    first = false;
    pts.emplace_back(x, y);
  }
  return pts;
}

Point parse_point(const std::string& raw, const std::string& key) {
  const auto v = parse_numbers(raw, key);
  if (v.size() != 2) throw ConfigError("key '" + key + "': expected two numbers 'x,y'");
  return {v[0], v[1]};
}

std::string get(const std::map<std::string, std::string>& m, const std::string& key, const std::string& fallback) {
  const auto it = m.find(key);
  return it == m.end() ? fallback : it->second;
}

}  // namespace

// ----------------------------------------------------------------- config --

std::map<std::string, std::string> parse_domain_spec(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string kind = trim(spec.substr(0, colon));
  const std::string args = colon == std::string::npos ? "" : spec.substr(colon + 1);
  const auto v = kind == "polygon" ? std::vector<double>{} : parse_numbers(args, "--domain");
  auto need = [&](std::size_t n) {
    if (v.size() != n) throw ConfigError("--domain " + kind + ": expected " + std::to_string(n) + " numbers");
  };
  if (kind == "disk") {
    if (v.empty()) return {{"shape", "disk"}, {"center", "0,0"}, {"radius", "1"}};
    need(3);
    return {{"shape", "disk"}, {"center", fmt(v[0]) + "," + fmt(v[1])}, {"radius", fmt(v[2])}};
  }
  if (kind == "rectangle") {
    need(4);
    return {{"shape", "rectangle"}, {"corner", fmt(v[0]) + "," + fmt(v[1])}, {"width", fmt(v[2])},
            {"height", fmt(v[3])}};
  }
  if (kind == "polygon") {
    if (trim(args).empty()) throw ConfigError("--domain polygon: expected a CSV path");
    return {{"shape", "polygon"}, {"vertices_csv", trim(args)}};
  }
  if (kind == "ellipse") {
    need(2);
    return {{"shape", "implicit"}, {"family", "ellipse"}, {"a", fmt(v[0])}, {"b", fmt(v[1])}};
  }
  if (kind == "star") {
    need(3);
    return {{"shape", "implicit"}, {"family", "star"}, {"r0", fmt(v[0])}, {"amplitude", fmt(v[1])},
            {"lobes", fmt(v[2])}};
  }
  throw ConfigError("--domain: unknown shape '" + kind + "'");
}

Domain build_domain(const std::map<std::string, std::string>& keys) {
  const std::string shape = get(keys, "shape", "");
  const auto allowed = kShapeKeys.find(shape);
  if (allowed == kShapeKeys.end()) throw ConfigError("key 'domain.shape': unknown shape '" + shape + "'");
  for (const auto& [k, _] : keys) {
    if (!allowed->second.contains(k)) throw ConfigError("key 'domain." + k + "': not valid for shape " + shape);
  }
  auto num = [&](const std::string& k, const std::string& fallback) {
    const std::string s = get(keys, k, fallback);
    if (s.empty()) throw ConfigError("key 'domain." + k + "': required for shape " + shape);
    return parse_number(s, "domain." + k);
  };
  try {
    if (shape == "disk") return Domain::disk(parse_point(get(keys, "center", "0,0"), "domain.center"), num("radius", "1"));
    if (shape == "rectangle")
      return Domain::rectangle(parse_point(get(keys, "corner", "0,0"), "domain.corner"), num("width", ""),
                               num("height", ""));
    if (shape == "polygon") {
      std::vector<Point> pts;
      if (keys.contains("vertices_csv")) {
        pts = read_vertices_csv(keys.at("vertices_csv"));
      } else {
        for (const auto& pair : split(get(keys, "vertices", ""), ';')) pts.push_back(parse_point(pair, "domain.vertices"));
      }
      return Domain::polygon(std::move(pts));
    }
    const std::string family = get(keys, "family", "");
    if (family == "ellipse") return Domain::ellipse(num("a", ""), num("b", ""));
    if (family == "star") return Domain::star(num("r0", "1"), num("amplitude", ""), parse_int(get(keys, "lobes", ""), "domain.lobes"));
    throw ConfigError("key 'domain.family': expected ellipse or star, got '" + family + "'");
  } catch (const GeometryError& e) {
    throw ConfigError(std::string("domain: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("domain: ") + e.what());
  }
}

BoundaryData build_boundary_data(const std::string& spec) {
  const std::string s = trim(spec);
  if (s == "zero") return zero_boundary;
  if (s.rfind("linear:", 0) == 0) {
    const auto v = parse_numbers(s.substr(7), "problem.boundary_data");
    if (v.size() != 3) throw ConfigError("key 'problem.boundary_data': linear needs a,b,c");
    return [a = v[0], b = v[1], c = v[2]](const Point& p) { return a + b * p.x() + c * p.y(); };
  }
  throw ConfigError("key 'problem.boundary_data': expected zero or linear:a,b,c, got '" + spec + "'");
}

RunConfig parse_config_text(const std::string& text, RunConfig cfg) {
  pt::ptree tree;
  try {
    std::istringstream is(text);
    pt::ini_parser::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config syntax: ") + e.message() + " at line " + std::to_string(e.line()));
  }
  bool domain_seen = false;
  for (const auto& [section, body] : tree) {
    if (body.empty()) {
      if (section != "command") throw ConfigError("key '" + section + "': unknown top-level key");
      cfg.command = trim(body.data());
      if (!kCommands.contains(cfg.command)) throw ConfigError("key 'command': unknown command '" + cfg.command + "'");
      continue;
    }
    if (section == "domain") {
      if (!domain_seen) cfg.domain.clear();
      domain_seen = true;
      for (const auto& [k, v] : body) cfg.domain[k] = trim(v.data());
      continue;
    }
    const auto allowed = kSectionKeys.find(section);
    if (allowed == kSectionKeys.end()) throw ConfigError("section '[" + section + "]': unknown section");
    for (const auto& [k, node] : body) {
      const std::string key = section + "." + k;
      if (!allowed->second.contains(k)) throw ConfigError("key '" + key + "': unknown key");
      const std::string v = trim(node.data());
      if (section == "problem") {
        if (k == "H") cfg.H = parse_number(v, key);
        else if (k == "signature") cfg.signature = parse_signature(v, key);
        else if (k == "h") cfg.h = parse_number(v, key);
        else if (k == "boundary_data") cfg.boundary_data = v;
        else cfg.phi_samples = parse_int(v, key);
      } else if (section == "continuation") {
        auto& c = cfg.continuation;
        if (k == "newton_tol") c.newton_tol = parse_number(v, key);
        else if (k == "max_newton_iters") c.max_newton_iters = parse_int(v, key);
        else if (k == "t_step_init") c.t_step_init = parse_number(v, key);
        else if (k == "t_step_min") c.t_step_min = parse_number(v, key);
        else if (k == "backtrack_factor") c.backtrack_factor = parse_number(v, key);
        else if (k == "max_backtracks") c.max_backtracks = parse_int(v, key);
        else c.spacelike_delta = parse_number(v, key);
      } else if (section == "output") {
        cfg.out_dir = v;
      } else if (section == "sweep") {
        if (k == "H_values") cfg.sweep_H = parse_numbers(v, key);
        else if (k == "signatures") {
          cfg.sweep_signatures.clear();
          for (const auto& s : split(v, ',')) cfg.sweep_signatures.push_back(parse_signature(s, key));
        } else cfg.jobs = parse_int(v, key);
      } else {
        auto& c = cfg.catalog;
        if (k == "surface") c.surface = v;
        else if (k == "rho") c.rho = parse_number(v, key);
        else if (k == "half_width") c.half_width = parse_number(v, key);
        else if (k == "c") c.c = parse_number(v, key);
        else if (k == "r_min") c.r_min = parse_number(v, key);
        else if (k == "extent") c.extent = parse_number(v, key);
        else c.samples = parse_int(v, key);
      }
    }
  }
  return cfg;
}

RunConfig load_config(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), std::move(base));
}

std::string to_ini(const RunConfig& cfg) {
  std::ostringstream os;
  os << "command = " << cfg.command << "\n\n[domain]\n";
  for (const auto& [k, v] : cfg.domain) os << k << " = " << v << "\n";
  os << "\n[problem]\nH = " << fmt(cfg.H) << "\nsignature = " << to_string(cfg.signature) << "\nh = " << fmt(cfg.h)
     << "\nboundary_data = " << cfg.boundary_data << "\nphi_samples = " << cfg.phi_samples << "\n";
  const auto& c = cfg.continuation;
  os << "\n[continuation]\nnewton_tol = " << fmt(c.newton_tol) << "\nmax_newton_iters = " << c.max_newton_iters
     << "\nt_step_init = " << fmt(c.t_step_init) << "\nt_step_min = " << fmt(c.t_step_min)
     << "\nbacktrack_factor = " << fmt(c.backtrack_factor) << "\nmax_backtracks = " << c.max_backtracks
     << "\nspacelike_delta = " << fmt(c.spacelike_delta) << "\n";
  os << "\n[output]\ndir = " << cfg.out_dir << "\n";
  os << "\n[sweep]\nH_values = " << join(cfg.sweep_H) << "\nsignatures = ";
  for (std::size_t i = 0; i < cfg.sweep_signatures.size(); ++i) os << (i ? "," : "") << to_string(cfg.sweep_signatures[i]);
  os << "\njobs = " << cfg.jobs << "\n";
  const auto& k = cfg.catalog;
  os << "\n[catalog]\nsurface = " << k.surface << "\nrho = " << fmt(k.rho) << "\nhalf_width = " << fmt(k.half_width)
     << "\nc = " << fmt(k.c) << "\nr_min = " << fmt(k.r_min) << "\nextent = " << fmt(k.extent)
     << "\nsamples = " << k.samples << "\n";
  return os.str();
}

// --------------------------------------------------------------- commands --

namespace {

void validate(const RunConfig& cfg) {
  if (!kCommands.contains(cfg.command)) throw ConfigError("key 'command': missing or unknown command '" + cfg.command + "'");
  if (!(cfg.h > 0.0)) throw ConfigError("key 'problem.h': must be > 0");
  if (cfg.phi_samples < 4) throw ConfigError("key 'problem.phi_samples': must be >= 4");
  if (cfg.jobs < 1) throw ConfigError("key 'sweep.jobs': must be >= 1");
  try {
    cfg.continuation.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config ") + e.what());
  }
  if (cfg.command == "sweep" && cfg.sweep_H.empty()) throw ConfigError("key 'sweep.H_values': required for sweep");
}

struct Context {
  const RunConfig& cfg;
  std::string hash;
  fs::path dir;
};

void write_common(const Context& ctx, const json& grid) {
  io::write_with_metadata(ctx.dir / "effective_config.ini", to_ini(ctx.cfg), io::metadata(grid, ctx.hash));
}

struct SolveResult {
  SolveOutcome outcome;
  SolvabilityReport predicates;
};

SolveResult solve_one(const RunConfig& cfg, const Domain& domain, double H, Signature sig) {
  SolveResult r{solve_dirichlet(domain, H, sig, build_boundary_data(cfg.boundary_data), cfg.h, cfg.continuation),
                solvability_predicates(domain, H, sig)};
  return r;
}

int exit_for(const SolveResult& r, bool checks_ok) {
  const bool predicted_fail = r.predicates.predicts_nonexistence(r.outcome.signature);
  if (r.outcome.converged()) return predicted_fail || !checks_ok ? kUnexpected : kOk;
  return predicted_fail ? kPredictedFailure : kUnexpected;
}

int cmd_solve(const Context& ctx, std::ostream& out, bool verify) {
  const RunConfig& cfg = ctx.cfg;
  const Domain domain = build_domain(cfg.domain);
  const SolveResult r = solve_one(cfg, domain, cfg.H, cfg.signature);
  const json grid = io::grid_json(*r.outcome.grid);
  const json meta = io::metadata(grid, ctx.hash);
  json outcome = io::to_json(r.outcome);
  outcome["predicates"] = io::to_json(r.predicates);
  outcome["predicted_nonexistence"] = r.predicates.predicts_nonexistence(cfg.signature);
  io::write_with_metadata(ctx.dir / "field.csv", io::field_csv(*r.outcome.grid, r.outcome.field), meta);
  io::write_with_metadata(ctx.dir / "outcome.json", outcome.dump(2) + "\n", meta);
  io::write_with_metadata(ctx.dir / "diagnostics.jsonl", io::diagnostics_jsonl(r.outcome), meta);
  write_common(ctx, grid);
  bool checks_ok = true;
  if (verify && r.outcome.converged()) {
    const EstimateReport rep = verify_solution(domain, r.outcome, build_boundary_data(cfg.boundary_data), cfg.phi_samples);
    io::write_with_metadata(ctx.dir / "report.json", io::to_json(rep).dump(2) + "\n", meta);
    checks_ok = rep.valid() && rep.all_pass();
    for (const auto& c : rep.checks) {
      out << "check name=" << c.name << " bound=" << fmt(c.bound) << " measured=" << fmt(c.measured)
          << " slack=" << fmt(c.slack) << " pass=" << (c.pass ? "true" : "false") << "\n";
    }
  }
  const int code = exit_for(r, checks_ok);
  out << "status=" << to_string(r.outcome.status) << " t=" << fmt(r.outcome.t_reached) << " reason=\""
      << r.outcome.reason << "\" exit=" << code << "\n";
  return code;
}

int cmd_predicates(const Context& ctx, std::ostream& out) {
  const Domain domain = build_domain(ctx.cfg.domain);
  const SolvabilityReport r = solvability_predicates(domain, ctx.cfg.H, ctx.cfg.signature);
  json j = io::to_json(r);
  j["signature"] = to_string(ctx.cfg.signature);
  j["domain"] = domain.describe();
  j["predicts_existence"] = r.predicts_existence(ctx.cfg.signature);
  j["predicts_nonexistence"] = r.predicts_nonexistence(ctx.cfg.signature);
  io::write_with_metadata(ctx.dir / "predicates.json", j.dump(2) + "\n", io::metadata(json::object(), ctx.hash));
  write_common(ctx, json::object());
  out << j.dump() << "\n";
  return kOk;
}

int cmd_catalog(const Context& ctx, std::ostream& out) {
  const RunConfig& cfg = ctx.cfg;
  const CatalogSettings& k = cfg.catalog;
  const json meta = io::metadata(json::object(), ctx.hash);
  std::ostringstream csv;
  csv.precision(17);
  json summary;
  try {
    if (k.surface == "profile" || k.surface == "barrier") {
      RotationalProfile prof;
      if (k.surface == "profile") {
        prof = integrate_profile(cfg.H, k.c, k.r_min);
        summary = io::to_json(prof);
      } else {
        const Domain domain = build_domain(cfg.domain);
        const double K = lorentz_diameter_bound(diameter(domain), cfg.H);
        Barrier b = barrier_for_domain(domain, cfg.H, K);
        summary = io::to_json(b.profile);
        summary["exterior_radius"] = b.exterior_radius;
        summary["diameter"] = b.diameter;
        summary["K"] = b.K;
        summary["w_at_exterior"] = b.w_at_exterior;
        prof = std::move(b.profile);
      }
      csv << "r,w,dw\n";
      for (std::size_t i = 0; i < prof.r_values.size(); ++i)
        csv << prof.r_values[i] << ',' << prof.w_values[i] << ',' << prof.dw_values[i] << '\n';
    } else {
      const double H = cfg.H;
      const ExactSurface s = k.surface == "euclid-cap"        ? euclidean_cap(H, k.rho)
                             : k.surface == "lorentz-cap"     ? lorentz_cap(H, k.rho)
                             : k.surface == "euclid-cylinder" ? euclidean_cylinder(H, k.half_width)
                             : k.surface == "lorentz-cylinder" ? lorentz_cylinder(H)
                             : k.surface == "hyperbolic-plane"
                                 ? hyperbolic_plane(H)
                                 : throw ConfigError("key 'catalog.surface': unknown surface '" + k.surface + "'");
      summary = {{"kind", to_string(s.kind())},       {"signature", to_string(s.signature())},
                 {"signed_H", s.signed_H()},          {"radius", s.radius()},
                 {"vertical_offset", s.vertical_offset()}};
      csv << "x,y,u\n";
      const int n = std::max(2, k.samples);
      for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
          const Point p(-k.extent + 2.0 * k.extent * i / (n - 1), -k.extent + 2.0 * k.extent * j / (n - 1));
          if (s.in_domain(p)) csv << p.x() << ',' << p.y() << ',' << s.value(p) << '\n';
        }
      }
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("catalog: ") + e.what());
  }
  io::write_with_metadata(ctx.dir / "catalog.csv", csv.str(), meta);
  io::write_with_metadata(ctx.dir / "catalog.json", summary.dump(2) + "\n", meta);
  write_common(ctx, json::object());
  out << summary.dump() << "\n";
  return kOk;
}

struct SweepRow {
  double H;
  Signature sig;
  std::string status;
  double sup_u = 0, max_du = 0;
  std::optional<double> diam_slack, strip_slack;
  bool matches = true;
  std::string error;
};

SweepRow sweep_one(const RunConfig& cfg, const Domain& domain, double H, Signature sig) {
  SweepRow row{H, sig, "error", 0.0, 0.0, {}, {}, true, {}};
  try {
    const SolveResult r = solve_one(cfg, domain, H, sig);
    const SolveOutcome& o = r.outcome;
    row.status = to_string(o.status);
    row.sup_u = o.field.values.size() ? o.field.values.cwiseAbs().maxCoeff() : 0.0;
    row.max_du = 1.0 - spacelike_margin(gradients(*o.grid, o.field));
    if (o.converged() && sig == Signature::Lorentzian) {
      auto [d, s] = check_height_lorentz(*o.grid, o.field, domain, H, build_boundary_data(cfg.boundary_data),
                                         cfg.phi_samples);
      row.diam_slack = d.slack;
      row.strip_slack = s.slack;
    }
    if (r.predicates.predicts_nonexistence(sig)) row.matches = !o.converged();
    else if (r.predicates.predicts_existence(sig)) row.matches = o.converged();
  } catch (const std::exception& e) {
    row.error = e.what();
    row.matches = false;
  }
  return row;
}

int cmd_sweep(const Context& ctx, std::ostream& out, std::ostream& err) {
  const RunConfig& cfg = ctx.cfg;
  const Domain domain = build_domain(cfg.domain);
  std::vector<std::pair<double, Signature>> tasks;
  const auto sigs = cfg.sweep_signatures.empty() ? std::vector<Signature>{cfg.signature} : cfg.sweep_signatures;
  for (Signature s : sigs)
    for (double H : cfg.sweep_H) tasks.emplace_back(H, s);
  std::vector<SweepRow> rows(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < tasks.size();) rows[i] = sweep_one(cfg, domain, tasks[i].first, tasks[i].second);
  };
  const int jobs = std::min<int>(cfg.jobs, static_cast<int>(tasks.size()));
  std::vector<std::future<void>> pool;
  for (int j = 1; j < jobs; ++j) pool.push_back(std::async(std::launch::async, worker));
  worker();
  for (auto& f : pool) f.get();

  std::ostringstream csv;
  csv.precision(17);
  csv << "H,signature,status,sup_u,max_du,diam_bound_slack,strip_bound_slack\n";
  bool all = true;
  for (const auto& r : rows) {
    csv << r.H << ',' << to_string(r.sig) << ',' << r.status << ',' << r.sup_u << ',' << r.max_du << ',';
    if (r.diam_slack) csv << *r.diam_slack;
    csv << ',';
    if (r.strip_slack) csv << *r.strip_slack;
    csv << '\n';
    if (!r.error.empty()) err << "error: kind=sweep-row H=" << fmt(r.H) << " reason=\"" << r.error << "\"\n";
    all = all && r.matches;
  }
  io::write_with_metadata(ctx.dir / "sweep.csv", csv.str(), io::metadata(json::object(), ctx.hash));
  write_common(ctx, json::object());
  out << csv.str();
  out << "rows=" << rows.size() << " all_match=" << (all ? "true" : "false") << "\n";
  return all ? kOk : kUnexpected;
}

std::string one_line(std::string s) {
  std::ranges::replace(s, '\n', ' ');
  std::ranges::replace(s, '"', '\'');
  return s;
}

}  // namespace

int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    validate(cfg);
    const Context ctx{cfg, io::fnv1a_hex(to_ini(cfg)), fs::path(cfg.out_dir)};
    if (cfg.command == "solve") return cmd_solve(ctx, out, false);
    if (cfg.command == "verify") return cmd_solve(ctx, out, true);
    if (cfg.command == "predicates") return cmd_predicates(ctx, out);
    if (cfg.command == "catalog") return cmd_catalog(ctx, out);
    return cmd_sweep(ctx, out, err);
  } catch (const ConfigError& e) {
    err << "error: kind=config reason=\"" << one_line(e.what()) << "\"\n";
    return kConfigError;
  } catch (const std::exception& e) {
    err << "error: kind=unexpected reason=\"" << one_line(e.what()) << "\"\n";
    return kUnexpected;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Constant-mean-curvature graph Dirichlet solver", "cmcgraph"};
  app.set_help_flag("--help", "print usage");
  app.fallthrough();
  app.require_subcommand(0, 1);
  std::string config_path, out_dir, signature, domain_spec, h_text, boundary;
  std::optional<double> H;
  std::optional<int> jobs;
  std::vector<double> H_values;
  std::string surface;
  std::optional<double> c_value;
  app.add_option("--config", config_path, "INI configuration file");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--h", h_text, "grid spacing (a number or a ratio like 1/64)");
  app.add_option("--H", H, "mean curvature");
  app.add_option("--signature", signature, "euclid or lorentz");
  app.add_option("--domain", domain_spec, "disk[:cx,cy,r] | rectangle:x,y,w,h | polygon:file.csv | ellipse:a,b | star:r0,amp,lobes");
  app.add_option("--jobs", jobs, "parallel solves for sweep");
  app.add_option("--boundary-data", boundary, "zero | linear:a,b,c");
  app.add_option("--H-values", H_values, "sweep values of H")->delimiter(',');
  app.add_option("--surface", surface, "catalog surface");
  app.add_option("--c", c_value, "catalog profile parameter c < 0");
  app.add_subcommand("solve", "solve the Dirichlet problem by continuation in H");
  app.add_subcommand("verify", "solve, then check the height and gradient estimates");
  app.add_subcommand("catalog", "tabulate an exact surface or a rotational profile");
  app.add_subcommand("predicates", "evaluate the solvability hypotheses for a domain");
  app.add_subcommand("sweep", "solve over a list of H values and signatures");

  std::vector<std::string> argv_store{"cmcgraph"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : argv_store) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: kind=config reason=\"" << one_line(e.what()) << "\"\n";
    return kConfigError;
  }

  RunConfig cfg;
  try {
    if (!config_path.empty()) cfg = load_config(config_path);
    if (!app.get_subcommands().empty()) cfg.command = app.get_subcommands().front()->get_name();
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (!h_text.empty()) cfg.h = parse_number(h_text, "--h");
    if (H) cfg.H = *H;
    if (!signature.empty()) cfg.signature = parse_signature(signature, "--signature");
    if (!domain_spec.empty()) cfg.domain = parse_domain_spec(domain_spec);
    if (jobs) cfg.jobs = *jobs;
    if (!boundary.empty()) cfg.boundary_data = boundary;
    if (!H_values.empty()) cfg.sweep_H = H_values;
    if (!surface.empty()) cfg.catalog.surface = surface;
    if (c_value) cfg.catalog.c = *c_value;
    if (!std::isfinite(cfg.H)) throw ConfigError("key 'problem.H': must be finite");
  } catch (const ConfigError& e) {
    err << "error: kind=config reason=\"" << one_line(e.what()) << "\"\n";
    return kConfigError;
  }
  return execute(cfg, out, err);
}

}  // namespace cmc::cli
