// Command-line surface: parameter sweeps, zero atlases, zero-freeness
// certificates, density searches, and truncated-series approximation reports.
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ising/approx.hpp"
#include "ising/certify.hpp"
#include "ising/dynamics.hpp"
#include "ising/graph.hpp"
#include "ising/util.hpp"
#include "ising/zeros.hpp"

namespace {

using namespace ising;

struct GridSpec {
  double lo = 0.0;
  double hi = 0.0;
  int count = 1;
};

GridSpec parse_grid(const std::string& text) {
  GridSpec g;
  char c1 = 0, c2 = 0;
  std::istringstream ss(text);
  if (!(ss >> g.lo >> c1 >> g.hi >> c2 >> g.count) || c1 != ':' || c2 != ':' || g.count < 1) {
    throw ValidationError("expected grid as lo:hi:n, got \"" + text + "\"");
  }
  if (g.hi < g.lo) throw ValidationError("grid needs lo <= hi");
  return g;
}

std::pair<double, double> parse_arc(const std::string& text) {
  double lo = 0.0, hi = 0.0;
  char c1 = 0;
  std::istringstream ss(text);
  if (!(ss >> lo >> c1 >> hi) || c1 != ':') {
    throw ValidationError("expected arc as lo:hi, got \"" + text + "\"");
  }
  if (hi < lo) throw ValidationError("arc needs lo <= hi");
  return {lo, hi};
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot open output file " + path);
  out << content;
}

// n rows strictly inside (lo, hi)
std::vector<double> midpoints(const GridSpec& g) {
  std::vector<double> xs(g.count);
  for (int i = 0; i < g.count; ++i) xs[i] = g.lo + (g.hi - g.lo) * (i + 0.5) / g.count;
  return xs;
}

std::string curves_csv(int d, const GridSpec& grid) {
  std::ostringstream out;
  out << "b,theta_b,alpha_b,parabolic_residual,alpha_residual\n";
  double bc = critical_b(d);
  bool beyond_alpha_range = false;
  for (double b : midpoints(grid)) {
    bool ferro = b > bc && b < 1.0;
    bool antiferro = b > 1.0 && b < 1.0 / bc;
    if (!ferro && !antiferro) {
      if (b >= 1.0 / bc) beyond_alpha_range = true;
      out << dtos(b) << ",,,,\n";
      continue;
    }
    CriticalData cd = solve_parabolic(d, b);
    double par_res = std::max(cd.fixed_point_residual, cd.raw_root_modulus_error);
    out << dtos(b) << ',' << dtos(cd.theta_b) << ',';
    if (cd.alpha_b) {
      out << dtos(*cd.alpha_b) << ',' << dtos(par_res) << ','
          << dtos(alpha_residual(d, b, *cd.alpha_b)) << '\n';
    } else {
      out << ',' << dtos(par_res) << ",\n";
    }
  }
  out << "# limit_check theta(b_c+1e-6)=" << dtos(solve_parabolic(d, bc + 1e-6).theta_b)
      << " theta(1-1e-6)=" << dtos(solve_parabolic(d, 1.0 - 1e-6).theta_b) << '\n';
  if (beyond_alpha_range) {
    out << "# note: alpha_b is defined only for b < (d+1)/(d-1) = " << dtos(1.0 / bc)
        << "; rows beyond are emitted empty\n";
  }
  return out.str();
}

std::vector<Graph> load_family(const std::string& spec) {
  namespace fs = std::filesystem;
  std::vector<Graph> graphs;
  if (fs::is_directory(spec)) {
    std::vector<std::string> paths;
    for (const auto& entry : fs::directory_iterator(spec)) {
      auto ext = entry.path().extension().string();
      if (ext == ".json" || ext == ".txt") paths.push_back(entry.path().string());
    }
    std::sort(paths.begin(), paths.end());
    for (const auto& p : paths) graphs.push_back(load_graph_file(p));
    if (graphs.empty()) throw IoError("no .json or .txt graphs in directory " + spec);
    return graphs;
  }
  graphs.push_back(load_graph_file(spec));
  return graphs;
}

// "cayley:d=2,kmax=8"
std::optional<std::pair<int, int>> parse_cayley_family(const std::string& spec) {
  if (spec.rfind("cayley:", 0) != 0) return std::nullopt;
  int d = -1, kmax = -1;
  std::istringstream ss(spec.substr(7));
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) throw ValidationError("bad cayley family item \"" + item + "\"");
    std::string key = item.substr(0, eq);
    int value = std::stoi(item.substr(eq + 1));
    if (key == "d") {
      d = value;
    } else if (key == "kmax") {
      kmax = value;
    } else {
      throw ValidationError("unknown cayley family key \"" + key + "\"");
    }
  }
  if (d < 2 || kmax < 1) throw ValidationError("cayley family needs d>=2 and kmax>=1");
  return std::make_pair(d, kmax);
}

Complex xi_from_angle(double vartheta) { return {std::cos(vartheta), std::sin(vartheta)}; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ising partition-function zeros, circle dynamics, and zero-freeness certificates"};
  app.require_subcommand(1);

  int d = 2;
  double b = 0.5;
  std::string b_grid_text;
  double theta_in = 0.0, frac_in = 0.0;
  double r_scale = 1.0;
  double epsilon = 1e-3;
  unsigned long seed = 0;
  int cap = kDefaultEnumerationCap;
  std::string out_path;
  std::string format = "csv";

  auto add_common = [&](CLI::App* cmd, bool needs_b) {
    cmd->add_option("--d", d, "branching parameter (degree bound d+1)");
    if (needs_b) cmd->add_option("--b", b, "edge interaction");
    cmd->add_option("--seed", seed, "seed for randomized runs (outputs are deterministic)");
    cmd->add_option("--cap", cap, "free-vertex enumeration cap");
    cmd->add_option("--out", out_path, "output path (default stdout)");
    cmd->add_option("--format", format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
  };
  auto add_angle = [&](CLI::App* cmd) {
    auto* t = cmd->add_option("--theta", theta_in, "argument of xi in radians");
    auto* f = cmd->add_option("--frac-theta", frac_in,
                              "argument of xi as a fraction of theta_b (b<1) or alpha_b (b>1)");
    t->excludes(f);
  };

  auto* curves = app.add_subcommand("curves", "emit (b, theta_b, alpha_b) curve data as CSV");
  curves->add_option("--b-grid", b_grid_text, "b grid as lo:hi:n")->required();
  add_common(curves, false);

  auto* certify = app.add_subcommand("certify", "zero-freeness certificate for a graph");
  std::string graph_path;
  certify->add_option("graph", graph_path, "graph file (.json or edge list)")->required();
  certify->add_option("--r", r_scale, "field scale r (b>1 rays)");
  add_angle(certify);
  add_common(certify, true);

  auto* atlas = app.add_subcommand("atlas", "zero atlas over a graph family");
  std::string family_spec;
  int bins = 64;
  atlas->add_option("family", family_spec, "graph file, directory, or cayley:d=..,kmax=..")
      ->required();
  atlas->add_option("--bins", bins, "argument histogram bins");
  add_common(atlas, true);

  auto* zeroparam = app.add_subcommand("zeroparam", "search an arc for xi with f^n(xi) = -1");
  std::string arc_text;
  int n_max = 200;
  zeroparam->add_option("--arc", arc_text, "arc as lo:hi (radians)")->required();
  zeroparam->add_option("--nmax", n_max, "iteration budget");
  add_common(zeroparam, true);

  auto* approx = app.add_subcommand("approx", "truncated-series approximation report");
  std::string approx_graph;
  approx->add_option("graph", approx_graph, "graph file")->required();
  approx->add_option("--r", r_scale, "field scale r (b>1 rays)");
  approx->add_option("--epsilon", epsilon, "target relative accuracy");
  add_angle(approx);
  add_common(approx, true);

  CLI11_PARSE(app, argc, argv);
  (void)seed;

  try {
    auto resolve_xi = [&](const CLI::App* cmd) -> Complex {
      if (cmd->count("--frac-theta")) {
        double bound = b < 1.0 ? solve_parabolic(d, b).theta_b : solve_alpha(d, b);
        return xi_from_angle(frac_in * bound);
      }
      return xi_from_angle(theta_in);
    };

    if (curves->parsed()) {
      write_output(out_path, curves_csv(d, parse_grid(b_grid_text)));
      return 0;
    }

    if (certify->parsed()) {
      Graph g = load_graph_file(graph_path);
      ModelParams params;
      params.b = b;
      params.d = d;
      params.scale = r_scale;
      params.xi = resolve_xi(certify);
      Certificate cert = certify_nonvanishing(g, params, cap);
      write_output(out_path, cert.to_json() + "\n");
      if (cert.verdict == Verdict::PASS) return 0;
      if (cert.verdict == Verdict::OUT_OF_DOMAIN) {
        std::cerr << "OUT_OF_DOMAIN: " << cert.reason << "\n";
        return 2;
      }
      std::cerr << "FAIL: " << cert.reason << "\n";
      return 1;
    }

    if (atlas->parsed()) {
      ZeroAtlas result;
      if (auto cay = parse_cayley_family(family_spec)) {
        auto [cd, kmax] = *cay;
        std::vector<XiPolynomial> polys;
        for (int k = 1; k <= kmax; ++k) polys.push_back(xi_polynomial_cayley(k, cd, b));
        result = zero_atlas_polynomials(polys, cd, b, bins);
      } else {
        auto graphs = load_family(family_spec);
        result = zero_atlas(graphs, b, bins, cap);
      }
      std::string base = out_path.empty() ? std::string("atlas") : out_path;
      write_output(base + "_roots.csv", atlas_roots_csv(result));
      write_output(base + "_hist.csv", atlas_histogram_csv(result));
      if (!result.violations.empty()) {
        std::cerr << result.violations.size() << " roots inside the zero-free arc; first at graph "
                  << result.violations.front().first << "\n";
        return 1;
      }
      return 0;
    }

    if (zeroparam->parsed()) {
      auto [lo, hi] = parse_arc(arc_text);
      auto found = find_zero_param_in_arc(CircularInterval{lo, hi}, b, d, n_max);
      std::ostringstream js;
      js << "{\"found\":" << (found ? "true" : "false");
      if (found) {
        js << ",\"xi\":[" << dtos(found->xi.real()) << ',' << dtos(found->xi.imag())
           << "],\"n\":" << found->iterations << ",\"residual\":" << dtos(found->residual);
      }
      js << "}\n";
      write_output(out_path, js.str());
      return 0;
    }

    if (approx->parsed()) {
      Graph g = load_graph_file(approx_graph);
      ModelParams params;
      params.b = b;
      params.d = d;
      params.scale = r_scale;
      params.xi = resolve_xi(approx);
      ApproxResult res = approx_partition(g, params, epsilon, cap);
      write_output(out_path, res.to_json() + "\n");
      return 0;
    }
  } catch (const DomainError& e) {
    std::cerr << "OUT_OF_DOMAIN: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
