#include "cmcgraph/io.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace cmc::io {

namespace fs = std::filesystem;
using nlohmann::json;

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

void write_text_atomic(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw std::runtime_error("rename to " + path.string() + " failed: " + ec.message());
}

void write_with_metadata(const fs::path& path, const std::string& content, const json& meta) {
  write_text_atomic(path, content);
  json m = meta;
  m["file"] = path.filename().string();
  fs::path side = path;
  side += ".meta.json";
  write_text_atomic(side, m.dump(2) + "\n");
}

json grid_json(const Grid& grid) {
  return {{"origin", {grid.origin.x(), grid.origin.y()}},
          {"h", grid.h},
          {"nx", grid.nx},
          {"ny", grid.ny},
          {"unknowns", grid.unknown_count()},
          {"interior", grid.count(NodeClass::Interior)},
          {"irregular", grid.count(NodeClass::Irregular)},
          {"boundary_points", grid.boundary_points.size()}};
}

json metadata(const json& grid, const std::string& config_hash) {
  return {{"tool", "cmcgraph"}, {"tool_version", kToolVersion}, {"config_hash", config_hash}, {"grid", grid}};
}

std::string field_csv(const Grid& grid, const Field& field) {
  std::ostringstream os;
  os << std::setprecision(17) << "x,y,u\n";
  for (int k = 0; k < grid.unknown_count(); ++k) {
    const Point p = grid.unknown_position(k);
    os << p.x() << ',' << p.y() << ',' << field.values[k] << '\n';
  }
  for (std::size_t b = 0; b < grid.boundary_points.size(); ++b) {
    const Point& p = grid.boundary_points[b];
    os << p.x() << ',' << p.y() << ',' << field.boundary_values[static_cast<Eigen::Index>(b)] << '\n';
  }
  return os.str();
}

json to_json(const StepRecord& r) {
  return {{"type", "step"},           {"t", r.t},           {"newton_iters", r.newton_iters},
          {"residual_norm", r.residual_norm}, {"max_du", r.max_du}, {"spacelike_margin", r.spacelike_margin},
          {"min_lambda", r.min_lambda}};
}

json to_json(const IterationRecord& r) {
  return {{"type", "iteration"},        {"t", r.t},
          {"iter", r.iter},             {"residual_norm", r.residual_norm},
          {"step_norm", r.step_norm},   {"damping", r.damping},
          {"backtracks", r.backtracks}, {"accepted", r.accepted}};
}

json to_json(const SolveOutcome& o) {
  json j{{"status", to_string(o.status)},
         {"t_reached", o.t_reached},
         {"reason", o.reason},
         {"H", o.H},
         {"signature", to_string(o.signature)},
         {"newton_tol", o.newton_tol},
         {"final_residual", o.final_residual}};
  if (o.grid) {
    j["grid"] = grid_json(*o.grid);
    const auto g = gradients(*o.grid, o.field);
    j["max_du"] = 1.0 - spacelike_margin(g);
    j["spacelike_margin"] = spacelike_margin(g);
    j["sup_abs_u"] = o.field.values.size() ? o.field.values.cwiseAbs().maxCoeff() : 0.0;
  }
  if (o.signature == Signature::Lorentzian) j["min_accepted_margin"] = o.min_accepted_margin;
  json steps = json::array();
  for (const auto& r : o.diagnostics) steps.push_back(to_json(r));
  j["steps"] = std::move(steps);
  return j;
}

std::string diagnostics_jsonl(const SolveOutcome& o) {
  std::string out;
  std::size_t it = 0;
  // Interleave: iteration records of a t precede the step record closing it.
  for (const auto& s : o.diagnostics) {
    while (it < o.iterations.size() && o.iterations[it].t <= s.t) out += to_json(o.iterations[it++]).dump() + "\n";
    out += to_json(s).dump() + "\n";
  }
  while (it < o.iterations.size()) out += to_json(o.iterations[it++]).dump() + "\n";
  return out;
}

json to_json(const Check& c) {
  return {{"name", c.name}, {"bound", c.bound}, {"measured", c.measured},
          {"slack", c.slack}, {"tol", c.tol},   {"pass", c.pass}};
}

json to_json(const EstimateReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks) checks.push_back(to_json(c));
  return {{"context",
           {{"domain", r.context.domain},
            {"H", r.context.H},
            {"signature", to_string(r.context.signature)},
            {"h", r.context.h}}},
          {"checks", checks},
          {"all_pass", r.all_pass()},
          {"valid", r.valid()}};
}

json to_json(const SolvabilityReport& r) {
  return {{"H", r.H},
          {"serrin_ok", r.serrin_ok},
          {"t5_ok", r.t5_ok},
          {"necessary_ok", r.necessary_ok},
          {"disk_obstruction", r.disk_obstruction},
          {"lorentz_convex_ok", r.lorentz_convex_ok},
          {"lorentz_smooth_ok", r.lorentz_smooth_ok},
          {"strip_ok", r.strip_ok},
          {"inradius_estimate", r.inradius_estimate},
          {"geometry",
           {{"kappa_min", r.kappa_min},
            {"kappa_max", r.kappa_max},
            {"has_corners", r.has_corners},
            {"area", r.area},
            {"perimeter", r.perimeter},
            {"diameter", r.diameter},
            {"strip_width", r.strip_width},
            {"max_min_width", r.max_min_width},
            {"exterior_radius", r.exterior_radius},
            {"convex", r.convex}}}};
}

json to_json(const RotationalProfile& p) {
  return {{"H", p.H}, {"c", p.c}, {"r0", p.r0}, {"r_min", p.r_min()}, {"xi_estimate", p.xi_estimate},
          {"nodes", p.r_values.size()}};
}

}  // namespace cmc::io
