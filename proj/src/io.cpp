#include "dce/io.h"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "json.hpp"

namespace dce {

using json = nlohmann::ordered_json;

namespace {

[[noreturn]] void parse_error(int line, const std::string& what) {
  throw InputError("line " + std::to_string(line) + ": " + what);
}

Index parse_obj_index(const std::string& token, Index n_vertices, int line) {
  const std::string head = token.substr(0, token.find('/'));
  char* end = nullptr;
  const long v = std::strtol(head.c_str(), &end, 10);
  if (head.empty() || *end != '\0' || v == 0) parse_error(line, "bad vertex index '" + token + "'");
  const long idx = v > 0 ? v - 1 : n_vertices + v;
  if (idx < 0) parse_error(line, "vertex index out of range '" + token + "'");
  return static_cast<Index>(idx);
}

}  // namespace

MeshInput read_obj(std::istream& in) {
  MeshInput out;
  std::string raw;
  int line = 0;
  bool positions = true;
  while (std::getline(in, raw)) {
    ++line;
    std::istringstream s(raw);
    std::string tag;
    if (!(s >> tag) || tag[0] == '#') continue;
    if (tag == "v") {
      std::array<double, 3> p{};
      int read = 0;
      while (read < 3 && (s >> p[read])) ++read;
      if (read != 3) positions = false;
      out.positions.push_back(p);
      ++out.n_vertices;
    } else if (tag == "f") {
      std::vector<Index> face;
      std::string tok;
      while (s >> tok) face.push_back(parse_obj_index(tok, out.n_vertices, line));
      if (face.size() != 3) parse_error(line, "face with " + std::to_string(face.size()) + " vertices (triangles only)");
      out.faces.push_back(std::move(face));
    } else if (tag == "el") {
      std::string a, b;
      double len = 0.0;
      if (!(s >> a >> b >> len)) parse_error(line, "expected 'el <i> <j> <length>'");
      out.edge_lengths.emplace_back(parse_obj_index(a, out.n_vertices, line), parse_obj_index(b, out.n_vertices, line),
                                    len);
    }
  }
  if (out.faces.empty()) throw InputError("no faces in mesh input");
  for (const auto& f : out.faces)
    for (Index v : f)
      if (v >= out.n_vertices) throw InputError("face references vertex " + std::to_string(v + 1) + " which is not defined");
  if (!positions) out.positions.clear();
  return out;
}

MeshInput read_obj_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  return read_obj(in);
}

void write_obj(std::ostream& out, const Geometry& geometry) {
  char buf[128];
  for (const auto& p : geometry.positions) {
    std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", p[0], p[1], p[2]);
    out << buf;
  }
  for (const auto& f : geometry.faces) {
    out << 'f';
    for (Index v : f) out << ' ' << v + 1;
    out << '\n';
  }
}

PennerMetric input_metric(const Mesh& mesh, const MeshInput& input) {
  std::map<std::pair<Index, Index>, double> explicit_len;
  for (const auto& [a, b, len] : input.edge_lengths) {
    if (!(len > 0.0) || !std::isfinite(len)) throw InputError("non-positive edge length");
    explicit_len[{std::min(a, b), std::max(a, b)}] = len;
  }
  PennerMetric m;
  m.length.assign(mesh.n_halfedges(), 0.0);
  for (Index h = 0; h < mesh.n_halfedges(); ++h) {
    const Index a = mesh.from(h), b = mesh.to(h);
    if (auto it = explicit_len.find({std::min(a, b), std::max(a, b)}); it != explicit_len.end()) {
      m.length[h] = it->second;
    } else if (!input.positions.empty()) {
      const auto& p = input.positions[a];
      const auto& q = input.positions[b];
      m.length[h] = std::sqrt((p[0] - q[0]) * (p[0] - q[0]) + (p[1] - q[1]) * (p[1] - q[1]) + (p[2] - q[2]) * (p[2] - q[2]));
    } else {
      throw InputError("no length for edge " + std::to_string(a + 1) + "-" + std::to_string(b + 1));
    }
    if (!(m.length[h] > 0.0)) throw InputError("zero-length edge " + std::to_string(a + 1) + "-" + std::to_string(b + 1));
  }
  for (Index f : mesh.faces()) {
    const double a = m[f], b = m[mesh.next(f)], c = m[mesh.prev(f)];
    if (a >= b + c || b >= a + c || c >= a + b) {
      throw InputError("face at halfedge " + std::to_string(f) + " violates the triangle inequality");
    }
  }
  return m;
}

TargetSpec read_targets(std::istream& in) {
  TargetSpec spec;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (auto pos = raw.find('#'); pos != std::string::npos) raw.resize(pos);
    std::istringstream s(raw);
    std::string tag;
    if (!(s >> tag)) continue;
    Index idx = 0;
    double value = 0.0;
    if (!(s >> idx >> value) || idx < 0 || !std::isfinite(value)) parse_error(line, "expected '<v|k> <index> <radians>'");
    if (tag == "v") {
      spec.theta.emplace_back(idx, value);
    } else if (tag == "k") {
      spec.kappa.emplace_back(idx, value);
    } else {
      parse_error(line, "unknown target tag '" + tag + "'");
    }
  }
  return spec;
}

TargetSpec read_targets_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  return read_targets(in);
}

void write_targets(std::ostream& out, const std::vector<double>& theta_hat) {
  char buf[64];
  for (std::size_t i = 0; i < theta_hat.size(); ++i) {
    std::snprintf(buf, sizeof buf, "v %zu %.17g\n", i, theta_hat[i]);
    out << buf;
  }
}

std::vector<double> resolve_targets(const Mesh& mesh, const TargetSpec& spec) {
  std::vector<char> boundary(mesh.n_vertices(), 0);
  for (Index h = 0; h < mesh.n_halfedges(); ++h)
    if (!mesh.is_parked(h) && mesh.is_boundary(h)) boundary[mesh.to(h)] = 1;
  std::vector<double> theta(mesh.n_vertices());
  for (Index v = 0; v < mesh.n_vertices(); ++v) theta[v] = boundary[v] ? kPi : kTwoPi;
  auto check = [&](Index v) {
    if (v >= mesh.n_vertices()) throw InputError("target for vertex " + std::to_string(v) + " which does not exist");
  };
  for (const auto& [v, t] : spec.theta) {
    check(v);
    theta[v] = t;
  }
  for (const auto& [v, k] : spec.kappa) {
    check(v);
    theta[v] = (boundary[v] ? kPi : kTwoPi) - k;
  }
  for (Index v = 0; v < mesh.n_vertices(); ++v) {
    if (!(theta[v] > 0.0)) throw InputError("non-positive target angle at vertex " + std::to_string(v));
  }
  return theta;
}

void enforce_gauss_bonnet(const Mesh& mesh, std::vector<double>& theta_hat, double tolerance) {
  const double expected = total_angle_target(mesh);
  const double sum = std::accumulate(theta_hat.begin(), theta_hat.end(), 0.0);
  const double dev = sum - expected;
  if (std::abs(dev) > tolerance) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "targets violate Gauss-Bonnet: sum %.12g, expected %.12g, deviation %.6g", sum,
                  expected, dev);
    throw InputError(buf);
  }
  const double share = dev / static_cast<double>(theta_hat.size());
  for (double& t : theta_hat) t -= share;
}

std::string hex_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", x);
  return buf;
}

double parse_hex_double(const std::string& s) {
  char* end = nullptr;
  const double x = std::strtod(s.c_str(), &end);
  if (s.empty() || *end != '\0') throw InputError("malformed float '" + s + "'");
  return x;
}

namespace {

json flips_json(const FlipCounts& c) {
  return json{{"flips_111", c.standard}, {"flips_par", c.parallel}, {"flips_t", c.triangle_quad}, {"flips_q", c.quad_quad}};
}

FlipCounts flips_from(const json& j) {
  FlipCounts c;
  c.standard = j.at("flips_111").get<long long>();
  c.parallel = j.at("flips_par").get<long long>();
  c.triangle_quad = j.at("flips_t").get<long long>();
  c.quad_quad = j.at("flips_q").get<long long>();
  return c;
}

Termination termination_from(const std::string& s) {
  for (Termination t : {Termination::converged, Termination::max_steps, Termination::max_halvings,
                        Termination::min_decrement, Termination::linear_failure, Termination::flip_budget}) {
    if (s == to_string(t)) return t;
  }
  throw InputError("unknown termination '" + s + "'");
}

}  // namespace

std::string write_bundle(const ResultBundle& b) {
  json j;
  j["format"] = "dce-result";
  j["version"] = 1;
  j["kind"] = b.kind;
  j["n_vertices"] = b.n_vertices;
  j["faces"] = b.faces;
  j["face_edges"] = b.face_edges;
  json edges = json::array();
  for (std::size_t e = 0; e < b.edge_length.size(); ++e) {
    edges.push_back(json{{"v", b.edge_vertices[e]}, {"length", hex_double(b.edge_length[e])}, {"length_decimal", b.edge_length[e]}});
  }
  j["edges"] = std::move(edges);
  json u_hex = json::array(), u_dec = json::array();
  for (double x : b.u) {
    u_hex.push_back(hex_double(x));
    u_dec.push_back(x);
  }
  j["u"] = json{{"hex", std::move(u_hex)}, {"decimal", std::move(u_dec)}};
  if (!b.quad_diagonals.empty()) {
    json q = json::array();
    for (const auto& [f, len] : b.quad_diagonals) q.push_back(json{{"face", f}, {"length", hex_double(len)}, {"length_decimal", len}});
    j["quad_diagonals"] = std::move(q);
  }
  j["flip_summary"] = flips_json(b.flip_summary);
  if (b.has_report) {
    const SolverReport& r = b.report;
    json it = json::array();
    for (const IterationRecord& rec : r.iterations) {
      json x{{"step", rec.step}, {"max_error", rec.max_error}, {"halvings", rec.halvings}};
      x.update(flips_json(rec.flips));
      x["decrement"] = rec.decrement;
      x["step_size"] = rec.step_size;
      x["linear_residual"] = rec.linear_residual;
      it.push_back(std::move(x));
    }
    j["report"] = json{{"termination", to_string(r.termination)},
                       {"final_residual", r.final_residual},
                       {"u_min", r.u_min},
                       {"u_max", r.u_max},
                       {"total_flips", flips_json(r.total_flips)},
                       {"message", r.message},
                       {"iterations", std::move(it)}};
  }
  return j.dump(1) + "\n";
}

ResultBundle read_bundle(const std::string& text) {
  ResultBundle b;
  try {
    const json j = json::parse(text);
    if (j.at("format").get<std::string>() != "dce-result") throw InputError("not a result bundle");
    b.kind = j.at("kind").get<std::string>();
    b.n_vertices = j.at("n_vertices").get<Index>();
    b.faces = j.at("faces").get<std::vector<std::vector<Index>>>();
    b.face_edges = j.at("face_edges").get<std::vector<std::vector<Index>>>();
    for (const auto& e : j.at("edges")) {
      b.edge_vertices.push_back(e.at("v").get<std::array<Index, 2>>());
      b.edge_length.push_back(parse_hex_double(e.at("length").get<std::string>()));
    }
    for (const auto& x : j.at("u").at("hex")) b.u.push_back(parse_hex_double(x.get<std::string>()));
    if (j.contains("quad_diagonals")) {
      for (const auto& q : j.at("quad_diagonals"))
        b.quad_diagonals.emplace_back(q.at("face").get<Index>(), parse_hex_double(q.at("length").get<std::string>()));
    }
    b.flip_summary = flips_from(j.at("flip_summary"));
    if (j.contains("report")) {
      b.has_report = true;
      const json& r = j.at("report");
      b.report.termination = termination_from(r.at("termination").get<std::string>());
      b.report.final_residual = r.at("final_residual").get<double>();
      b.report.u_min = r.at("u_min").get<double>();
      b.report.u_max = r.at("u_max").get<double>();
      b.report.total_flips = flips_from(r.at("total_flips"));
      b.report.message = r.at("message").get<std::string>();
      for (const auto& x : r.at("iterations")) {
        IterationRecord rec;
        rec.step = x.at("step").get<int>();
        rec.max_error = x.at("max_error").get<double>();
        rec.halvings = x.at("halvings").get<int>();
        rec.flips = flips_from(x);
        rec.decrement = x.at("decrement").get<double>();
        rec.step_size = x.at("step_size").get<double>();
        rec.linear_residual = x.at("linear_residual").get<double>();
        b.report.iterations.push_back(rec);
      }
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed result bundle: ") + e.what());
  }
  for (const auto& fe : b.face_edges)
    for (Index e : fe)
      if (e < 0 || e >= static_cast<Index>(b.edge_length.size())) throw InputError("face references a missing edge");
  if (b.faces.size() != b.face_edges.size()) throw InputError("faces and face_edges differ in length");
  return b;
}

ResultBundle read_bundle_file(const std::string& path) { return read_bundle(read_text_file(path)); }

std::string report_csv(const SolverReport& report) {
  std::string out = "step,max_error,halvings,flips_111,flips_par,flips_t,flips_q\n";
  char buf[256];
  for (const IterationRecord& r : report.iterations) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%d,%lld,%lld,%lld,%lld\n", r.step, r.max_error, r.halvings, r.flips.standard,
                  r.flips.parallel, r.flips.triangle_quad, r.flips.quad_quad);
    out += buf;
  }
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
  if (!out) throw InputError("write to '" + path + "' failed");
}

}  // namespace dce
