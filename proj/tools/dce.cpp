#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "dce/pipeline.h"

namespace {

using namespace dce;

struct SolveFlags {
  std::string targets;
  std::string output;
  double tol = 1e-10;
  int max_steps = 50;
  int max_halvings = 40;
  long long flip_budget = 100;
  std::uint64_t seed = 0;  // solving draws no random numbers; accepted for uniform scripting
  bool keep_double_cover = false;
  double gb_tol = 1e-6;
  bool quiet = false;
};

SolverConfig solver_config(const SolveFlags& f) {
  SolverConfig c;
  c.eps_tol = f.tol;
  c.max_newton_steps = f.max_steps;
  c.max_halvings = f.max_halvings;
  c.flip_budget_factor = f.flip_budget;
  return c;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
  } else {
    write_text_file(path, text);
  }
}

// Runs `body` and maps exceptions onto exit codes; errors go to stderr with
// the given prefix.
template <class F>
int guarded(const std::string& prefix, F&& body) {
  try {
    return body();
  } catch (const InputError& e) {
    std::cerr << prefix << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const TopologyError& e) {
    std::cerr << prefix << "invariant breach: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const ContractError& e) {
    std::cerr << prefix << "invariant breach: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const std::exception& e) {
    std::cerr << prefix << "internal error: " << e.what() << "\n";
    return kExitInvariant;
  }
}

int solve_one(const std::string& mesh_path, const SolveFlags& f, const std::string& prefix) {
  return guarded(prefix, [&] {
    Problem problem = load_problem(mesh_path, f.targets, f.gb_tol);
    PipelineOptions opt;
    opt.solver = solver_config(f);
    opt.keep_double_cover = f.keep_double_cover;
    const PipelineResult r = solve_problem(std::move(problem), opt);
    emit(f.output, write_bundle(r.bundle));
    const SolverReport& rep = r.bundle.report;
    if (!f.quiet) {
      std::fprintf(stderr, "%s%s after %d Newton steps, max error %.3e, %lld flips%s%s\n", prefix.c_str(),
                   to_string(rep.termination), rep.newton_steps(), rep.final_residual,
                   static_cast<long long>(rep.total_flips.total()), rep.message.empty() ? "" : ": ",
                   rep.message.c_str());
    }
    return exit_code_for(rep);
  });
}

// Batch file: one instance per line, "<mesh> <targets or -> <output>".
// Blank lines and lines starting with '#' are skipped.
int solve_batch(const std::string& list_path, const SolveFlags& base, int threads) {
  struct Job {
    std::string mesh, targets, output;
    int line;
  };
  std::vector<Job> jobs;
  int code = guarded("", [&] {
    std::istringstream in(read_text_file(list_path));
    std::string line;
    for (int ln = 1; std::getline(in, line); ++ln) {
      std::istringstream ls(line);
      Job j;
      j.line = ln;
      if (!(ls >> j.mesh) || j.mesh[0] == '#') continue;
      if (!(ls >> j.targets >> j.output)) throw InputError(list_path + ":" + std::to_string(ln) + ": expected <mesh> <targets|-> <output>");
      if (j.targets == "-") j.targets.clear();
      jobs.push_back(std::move(j));
    }
    return 0;
  });
  if (code != 0) return code;

  std::vector<int> codes(jobs.size(), 0);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < jobs.size();) {
      SolveFlags f = base;
      f.targets = jobs[i].targets;
      f.output = jobs[i].output;
      codes[i] = solve_one(jobs[i].mesh, f, jobs[i].mesh + ": ");
    }
  };
  const int n = std::max(1, std::min<int>(threads, static_cast<int>(jobs.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  // The batch exit code is the most severe individual one.
  int worst = 0;
  for (int c : codes) worst = std::max(worst, c);
  return worst;
}

// Generator parameter whose vertex count is closest to `size`.
int closest_parameter(int size, int lo, int hi, auto&& vertex_count) {
  int best = lo;
  for (int p = lo; p <= hi; ++p)
    if (std::abs(vertex_count(p) - size) < std::abs(vertex_count(best) - size)) best = p;
  return best;
}

GeneratedProblem generate(const std::string& kind, std::uint64_t seed, int size) {
  if (kind == "sphere-random-angles")
    return sphere_random_angles(seed, closest_parameter(size, 1, 200, [](int f) { return 10 * f * f + 2; }));
  if (kind == "disk-random-boundary")
    return disk_random_boundary(seed, closest_parameter(size, 1, 200, [](int r) { return 3 * r * (r + 1) + 1; }));
  const std::string prefix = "single-cone-genus-";
  if (kind.rfind(prefix, 0) == 0) {
    int genus = 0;
    try {
      std::size_t used = 0;
      genus = std::stoi(kind.substr(prefix.size()), &used);
      if (used != kind.size() - prefix.size()) genus = 0;
    } catch (const std::exception&) {
    }
    if (genus < 1) throw InputError("genus must be a positive integer in '" + kind + "'");
    const int s = closest_parameter(size, 1, 16, [&](int sub) {
      return static_cast<int>(genus_slab(genus, sub).positions.size());
    });
    return single_cone(genus, seed, s);
  }
  throw InputError("unsupported instance kind '" + kind + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete conformal metrics with prescribed angle sums"};
  app.require_subcommand(1);

  SolveFlags sf;
  std::string mesh_path, batch_path;
  int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  auto add_solver_flags = [&](CLI::App* c) {
    c->add_option("--tol", sf.tol, "Max-norm angle error tolerance")->capture_default_str();
    c->add_option("--max-steps", sf.max_steps, "Newton step limit")->capture_default_str();
    c->add_option("--max-halvings", sf.max_halvings, "Step halvings per line search")->capture_default_str();
    c->add_option("--flip-budget", sf.flip_budget, "Flips per Delaunay pass, as a multiple of the edge count")
        ->capture_default_str();
    c->add_option("--gb-tol", sf.gb_tol, "Largest Gauss-Bonnet deviation that is silently corrected")
        ->capture_default_str();
  };

  CLI::App* solve = app.add_subcommand("solve", "Solve one instance, or a batch of instances");
  solve->add_option("mesh", mesh_path, "Mesh file (face-vertex text)");
  solve->add_option("-t,--targets", sf.targets, "Target angle sidecar file");
  solve->add_option("-o,--output", sf.output, "Result bundle path (stdout if omitted)");
  solve->add_option("--batch", batch_path, "File listing instances: <mesh> <targets|-> <output> per line");
  solve->add_option("--threads", threads, "Worker threads in batch mode")->check(CLI::PositiveNumber);
  solve->add_option("--seed", sf.seed, "Accepted for scripting symmetry; solving is deterministic");
  solve->add_flag("--keep-double-cover", sf.keep_double_cover, "Emit the solved double cover instead of restricting");
  solve->add_flag("-q,--quiet", sf.quiet, "No status line");
  add_solver_flags(solve);

  std::string del_mesh, del_output;
  double del_eps = 1e-12;
  long long del_budget = 100;
  CLI::App* del = app.add_subcommand("delaunay", "Intrinsic Delaunay retriangulation of the input metric");
  del->add_option("mesh", del_mesh, "Mesh file")->required();
  del->add_option("-o,--output", del_output, "Result bundle path (stdout if omitted)");
  del->add_option("--flip-budget", del_budget, "Flips allowed, as a multiple of the edge count")->capture_default_str();
  del->add_option("--eps-flip", del_eps, "Negative values within eps of zero count as ties")->capture_default_str();

  std::string gen_kind, gen_output;
  std::uint64_t gen_seed = 0;
  int gen_size = 1000;
  CLI::App* gen = app.add_subcommand("generate", "Write a random test instance (<prefix>.obj, <prefix>.targets)");
  gen->add_option("kind", gen_kind, "sphere-random-angles | disk-random-boundary | single-cone-genus-<g>")->required();
  gen->add_option("--seed", gen_seed, "Random seed")->capture_default_str();
  gen->add_option("--size", gen_size, "Approximate vertex count")->capture_default_str()->check(CLI::PositiveNumber);
  gen->add_option("-o,--output", gen_output, "Output prefix")->required();

  std::string rep_bundle, rep_output;
  CLI::App* rep = app.add_subcommand("report", "Per-iteration CSV trace of a result bundle");
  rep->add_option("bundle", rep_bundle, "Result bundle")->required();
  rep->add_option("-o,--output", rep_output, "CSV path (stdout if omitted)");

  std::string conv_mesh, conv_targets, conv_output;
  double conv_gb_tol = 1e-6;
  CLI::App* conv = app.add_subcommand("convert", "Rewrite a sidecar with curvature lines as explicit angle targets");
  conv->add_option("mesh", conv_mesh, "Mesh file")->required();
  conv->add_option("targets", conv_targets, "Sidecar with 'v' and/or 'k' lines")->required();
  conv->add_option("-o,--output", conv_output, "Output sidecar (stdout if omitted)");
  conv->add_option("--gb-tol", conv_gb_tol, "Largest Gauss-Bonnet deviation that is silently corrected")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInput;
  }

  if (solve->parsed()) {
    if (batch_path.empty() == mesh_path.empty()) {
      std::cerr << "solve: give either a mesh file or --batch\n";
      return kExitInput;
    }
    if (!batch_path.empty()) return solve_batch(batch_path, sf, threads);
    return solve_one(mesh_path, sf, "");
  }
  if (del->parsed()) {
    return guarded("", [&] {
      DelaunayOptions opt;
      opt.eps_flip = del_eps;
      opt.flip_budget_factor = del_budget;
      Problem p;
      const MeshInput input = read_obj_file(del_mesh);
      p.mesh = build_from_face_lists(input.faces, input.n_vertices);
      p.metric = input_metric(p.mesh, input);
      const ResultBundle b = delaunay_bundle(std::move(p), opt);
      emit(del_output, write_bundle(b));
      std::fprintf(stderr, "%lld flips\n", static_cast<long long>(b.flip_summary.total()));
      return 0;
    });
  }
  if (gen->parsed()) {
    return guarded("", [&] {
      const GeneratedProblem g = generate(gen_kind, gen_seed, gen_size);
      std::ostringstream obj, tgt;
      write_obj(obj, g.geometry);
      write_targets(tgt, g.theta_hat);
      write_text_file(gen_output + ".obj", obj.str());
      write_text_file(gen_output + ".targets", tgt.str());
      return 0;
    });
  }
  if (rep->parsed()) {
    return guarded("", [&] {
      const ResultBundle b = read_bundle_file(rep_bundle);
      if (!b.has_report) throw InputError("bundle has no solver report");
      emit(rep_output, report_csv(b.report));
      return 0;
    });
  }
  if (conv->parsed()) {
    return guarded("", [&] {
      const MeshInput input = read_obj_file(conv_mesh);
      const Mesh mesh = build_from_face_lists(input.faces, input.n_vertices);
      std::vector<double> theta = resolve_targets(mesh, read_targets_file(conv_targets));
      enforce_gauss_bonnet(mesh, theta, conv_gb_tol);
      std::ostringstream out;
      write_targets(out, theta);
      emit(conv_output, out.str());
      return 0;
    });
  }
  return kExitInput;
}
