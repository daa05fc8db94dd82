// nlh: Betti numbers, Hodge spectra, capacities and verification suites for
// non-local Alexander-Spanier complexes on finite metric measure spaces.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "nlh/capacity.hpp"
#include "nlh/cohomology.hpp"
#include "nlh/covers.hpp"
#include "nlh/format.hpp"
#include "nlh/hodge.hpp"
#include "nlh/kernels.hpp"
#include "nlh/space.hpp"
#include "suites.hpp"

namespace fs = std::filesystem;
using namespace nlh;

namespace {

constexpr int kOk = 0, kUsage = 1, kFailed = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SpaceOpts {
  std::string kind = "circle";
  int n = 32;
  double radius = 1.0;
  double gap = 0.5;
  double hole_center = 0.5;
  double hole_radius = 0.05;
  std::string dist, weights;

  void add(CLI::App* app) {
    app->add_option("--space", kind, "circle | interval | two_components | punctured_interval | sphere | file")
        ->check(CLI::IsMember({"circle", "interval", "two_components", "punctured_interval", "sphere", "file"}));
    app->add_option("--n", n, "number of sample points (per component for two_components)");
    app->add_option("--radius", radius, "circle radius");
    app->add_option("--gap", gap, "gap between the two components");
    app->add_option("--hole-center", hole_center, "punctured_interval hole center");
    app->add_option("--hole-radius", hole_radius, "punctured_interval hole radius");
    app->add_option("--dist", dist, "distance matrix file (implies --space file)");
    app->add_option("--weights", weights, "weights file, one value per point");
  }

  MetricMeasureSpace make() const {
    if (!dist.empty() || kind == "file") {
      if (dist.empty()) throw UsageError("--space file needs --dist");
      std::optional<Eigen::VectorXd> w;
      if (!weights.empty()) w = load_weights(weights);
      return load_distance_matrix(dist, w);
    }
    if (n < 2) throw UsageError("--n must be at least 2");
    if (kind == "circle") return gen_circle(n, radius);
    if (kind == "interval") return gen_interval(n);
    if (kind == "two_components") return gen_two_components(n, gap);
    if (kind == "punctured_interval") return gen_punctured_interval(n, hole_center, hole_radius);
    return gen_sphere(n);
  }
};

struct ComplexOpts {
  std::string system = "rips";
  double eps = 0.5;
  bool inclusive = false;
  std::string kernel = "fractional";
  double alpha = 0.5;
  double d = 0.0;
  double scale = 1.0;
  std::string kernel_table;
  int pmax = 1;
  std::optional<double> tol;
  double gap_factor = 1e3;
  std::size_t dense_limit = 5000;

  void add(CLI::App* app, bool grids) {
    app->add_option("--system", system, "rips | hausdorff | full")->check(CLI::IsMember({"rips", "hausdorff", "full"}));
    if (!grids) {
      app->add_option("--eps", eps, "neighborhood scale");
      app->add_option("--alpha", alpha, "fractional order in (0,2)");
    }
    app->add_flag("--inclusive", inclusive, "rips with <= instead of <");
    app->add_option("--kernel", kernel, "fractional | constant | custom")
        ->check(CLI::IsMember({"fractional", "constant", "custom"}));
    app->add_option("--d", d, "kernel dimension (default: the space's)");
    app->add_option("--kernel-scale", scale, "multiplies the kernel");
    app->add_option("--kernel-table", kernel_table, "i, j, value lines for --kernel custom");
    app->add_option("--pmax", pmax, "highest degree reported");
    app->add_option("--tol", tol, "fixed spectral threshold");
    app->add_option("--gap-factor", gap_factor, "required spectral gap ratio");
    app->add_option("--dense-limit", dense_limit, "largest dimension for the dense eigensolver");
  }

  void validate() const {
    if (!(eps > 0.0)) throw UsageError("--eps must be positive");
    if (!(alpha > 0.0 && alpha < 2.0)) throw UsageError("--alpha must lie in (0,2)");
    if (pmax < 0) throw UsageError("--pmax must be non-negative");
    if (!(scale > 0.0)) throw UsageError("--kernel-scale must be positive");
  }

  NeighborhoodSystem make_system(double e) const {
    if (system == "full") return NeighborhoodSystem::full();
    if (system == "hausdorff") return NeighborhoodSystem::hausdorff(e);
    return NeighborhoodSystem::rips(e, inclusive);
  }

  KernelModel make_kernel(const MetricMeasureSpace& space, double a) const {
    double dim = d > 0 ? d : (space.metadata().regularity_dim > 0 ? space.metadata().regularity_dim : 1.0);
    if (kernel == "constant") return KernelModel::constant(scale);
    if (kernel == "custom") {
      if (kernel_table.empty()) throw UsageError("--kernel custom needs --kernel-table");
      return load_kernel_table(kernel_table, space.size()).scaled(scale);
    }
    return KernelModel::fractional(dim, a, scale);
  }

  TolerancePolicy policy() const {
    TolerancePolicy t;
    t.fixed = tol;
    t.gap_factor = gap_factor;
    t.dense_limit = dense_limit;
    return t;
  }
};

Json space_json(const MetricMeasureSpace& s) {
  Json params = Json::object();
  for (const auto& [k, v] : s.metadata().params) params[k] = v;
  return Json{{"generator", s.metadata().generator}, {"n", s.size()}, {"params", params}};
}

void emit(const std::string& out_dir, const std::string& file, const std::string& text) {
  if (out_dir.empty()) {
    std::cout << text;
    return;
  }
  fs::create_directories(out_dir);
  std::ofstream f(fs::path(out_dir) / file, std::ios::binary);
  f << text;
  if (!f) throw std::runtime_error("cannot write " + (fs::path(out_dir) / file).string());
}

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      double v = std::stod(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw UsageError(std::string("malformed value in ") + what + ": '" + item + "'");
    }
  }
  if (out.empty()) throw UsageError(std::string(what) + " is empty");
  return out;
}

int cmd_betti(const SpaceOpts& so, const ComplexOpts& co, double cover_eps, double cover_eta, int cover_stride,
              const std::string& field_name_opt, const std::string& out) {
  co.validate();
  MetricMeasureSpace space = so.make();
  NeighborhoodSystem system = co.make_system(co.eps);
  KernelModel kernel = co.make_kernel(space, co.alpha);
  WeightedComplex cx = WeightedComplex::build(space, system, kernel, co.pmax);

  std::vector<HodgeReport> hodge;
  for (int p = 0; p <= co.pmax; ++p) hodge.push_back(harmonic_dimension(cx, p, co.policy()));
  ExactField field = field_name_opt == "rational" ? ExactField::rational
                     : field_name_opt == "secondary" ? ExactField::secondary_prime
                                                     : ExactField::primary_prime;
  BettiReport betti = exact_betti(cx, field);
  AgreementReport agree = cross_validate(cx, hodge, betti);

  Json report{{"schema", 1},
              {"command", "betti"},
              {"space", space_json(space)},
              {"system", system.name()},
              {"kernel", kernel.name()},
              {"p_max", co.pmax}};
  Json hs = Json::array();
  for (const auto& h : hodge) hs.push_back(h.to_json());
  std::vector<int> harmonic;
  for (const auto& h : hodge) harmonic.push_back(h.harmonic_dim);
  report["harmonic_dims"] = harmonic;
  report["betti"] = betti.to_json();
  report["hodge"] = hs;
  report["agreement"] = agree.to_json();
  bool ok = agree.all_agree;
  if (cover_eta > 0.0) {
    std::vector<int> centers;
    for (int i = 0; i < space.size(); i += std::max(1, cover_stride)) centers.push_back(i);
    CoverSystem cover(space, system, cover_eps > 0 ? cover_eps : co.eps, cover_eta, centers, std::max(1, co.pmax));
    BettiReport nerve = cech_nerve_betti(cover);
    report["nerve"] = nerve.to_json();
    std::vector<int> head(nerve.betti.begin(),
                          nerve.betti.begin() + static_cast<long>(std::min(nerve.betti.size(), betti.betti.size())));
    head.resize(betti.betti.size(), 0);
    ok = ok && head == betti.betti;
  }
  report["pass"] = ok;
  emit(out, "betti.json", report.dump(2) + "\n");
  if (!ok) std::cerr << agree.describe() << "\n";
  return ok ? kOk : kFailed;
}

int cmd_sweep(const SpaceOpts& so, const ComplexOpts& co, const std::string& eps_list, const std::string& alpha_list,
              const std::string& out) {
  std::vector<double> epss = parse_list(eps_list, "--eps-list");
  std::vector<double> alphas = parse_list(alpha_list, "--alpha-list");
  for (double e : epss)
    if (!(e > 0.0)) throw UsageError("--eps-list values must be positive");
  for (double a : alphas)
    if (!(a > 0.0 && a < 2.0)) throw UsageError("--alpha-list values must lie in (0,2)");
  if (co.pmax < 0) throw UsageError("--pmax must be non-negative");
  MetricMeasureSpace space = so.make();

  std::ostringstream csv;
  csv << "epsilon,alpha";
  for (int p = 0; p <= co.pmax; ++p) csv << ",betti" << p;
  for (int p = 0; p <= co.pmax; ++p) csv << ",harmonic" << p;
  for (int p = 0; p <= co.pmax; ++p) csv << ",gap" << p;
  csv << ",agree\n";
  bool all_ok = true;
  for (double e : epss) {
    NeighborhoodSystem system = co.make_system(e);
    WeightedComplex base = WeightedComplex::build(space, system, co.make_kernel(space, alphas.front()), co.pmax);
    BettiReport betti = exact_betti(base);
    for (std::size_t a = 0; a < alphas.size(); ++a) {
      WeightedComplex cx = a == 0 ? base : base.reweighted(space, co.make_kernel(space, alphas[a]));
      std::vector<HodgeReport> hodge;
      for (int p = 0; p <= co.pmax; ++p) hodge.push_back(harmonic_dimension(cx, p, co.policy()));
      BettiReport b = betti;
      AgreementReport agree = cross_validate(cx, hodge, b);
      all_ok = all_ok && agree.all_agree;
      csv << format_double(e) << ',' << format_double(alphas[a]);
      for (int v : b.betti) csv << ',' << v;
      for (const auto& h : hodge) csv << ',' << h.harmonic_dim;
      for (const auto& h : hodge) csv << ',' << format_double(h.smallest_nonzero());
      csv << ',' << (agree.all_agree ? 1 : 0) << '\n';
    }
  }
  emit(out, "sweep.csv", csv.str());
  return all_ok ? kOk : kFailed;
}

int cmd_removability(const std::string& res_list, const std::string& alpha_list, double eps, double hole, double d,
                     const std::string& out) {
  SweepConfig cfg;
  cfg.resolutions.clear();
  for (double r : parse_list(res_list, "--resolutions")) {
    if (r < 3 || r != std::floor(r)) throw UsageError("--resolutions must be integers >= 3");
    cfg.resolutions.push_back(static_cast<int>(r));
  }
  cfg.alphas = parse_list(alpha_list, "--alphas");
  for (double a : cfg.alphas)
    if (!(a > 0.0 && a < 2.0)) throw UsageError("--alphas values must lie in (0,2)");
  if (!(eps > 0.0)) throw UsageError("--eps must be positive");
  if (!(hole > 0.0 && hole < 1.0)) throw UsageError("--hole must lie in (0,1)");
  cfg.eps = eps;
  cfg.hole = hole;
  cfg.d = d;
  SweepReport rep = removability_sweep(cfg);
  if (out.empty()) {
    std::cout << rep.csv();
  } else {
    emit(out, "removability.csv", rep.csv());
    emit(out, "removability.json", rep.to_json().dump(2) + "\n");
  }
  return kOk;
}

int cmd_verify(const std::string& suite, const SpaceOpts& so, double eps, bool user_space, const std::string& out) {
  suites::SuiteInput in;
  in.eps = eps;
  Json report{{"schema", 1}, {"command", "verify"}, {"suite", suite}};
  try {
    if (user_space) in.space = so.make();
  } catch (const LoadError& e) {
    report["pass"] = false;
    report["error"] = e.what();
    emit(out, "verify.json", report.dump(2) + "\n");
    std::cerr << "verify: " << e.what() << "\n";
    return kFailed;
  }
  std::vector<suites::SuiteResult> results = suites::run_suites(suite, in);
  Json rs = Json::array();
  bool ok = true;
  for (const auto& r : results) {
    rs.push_back(r.to_json());
    ok = ok && r.pass();
    for (const auto& c : r.checks)
      std::cerr << (c.pass ? "[PASS] " : "[FAIL] ") << r.suite << ": " << c.name << " (" << format_double(c.value)
                << ")\n";
  }
  report["suites"] = rs;
  report["pass"] = ok;
  emit(out, "verify.json", report.dump(2) + "\n");
  return ok ? kOk : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Non-local Alexander-Spanier complexes on finite metric measure spaces"};
  app.require_subcommand(1);
  std::string out;
  app.add_option("--out", out, "directory for reports (stdout if omitted)");

  SpaceOpts betti_space, sweep_space, verify_space;
  ComplexOpts betti_cx, sweep_cx;
  double cover_eps = 0.0, cover_eta = 0.0;
  int cover_stride = 4;
  std::string field = "primary";
  CLI::App* betti = app.add_subcommand("betti", "harmonic dimensions and exact Betti numbers");
  betti_space.add(betti);
  betti_cx.add(betti, false);
  betti->add_option("--cover-eps", cover_eps, "ball cover radius (default --eps)");
  betti->add_option("--cover-eta", cover_eta, "ball cover margin; enables the nerve check");
  betti->add_option("--cover-stride", cover_stride, "every k-th point is a ball center");
  betti->add_option("--field", field, "primary | secondary | rational")
      ->check(CLI::IsMember({"primary", "secondary", "rational"}));
  betti->add_option("--out", out, "directory for reports");

  std::string eps_list = "0.2,0.5,1,1.5,2,2.5,3,3.5", alpha_list = "0.5";
  CLI::App* sweep = app.add_subcommand("sweep", "Betti numbers and spectral gaps over an (eps, alpha) grid");
  sweep_space.add(sweep);
  sweep_cx.add(sweep, true);
  sweep->add_option("--eps-list", eps_list, "comma separated");
  sweep->add_option("--alpha-list", alpha_list, "comma separated");
  sweep->add_option("--out", out, "directory for reports");

  std::string res_list = "50,100,200,400,800", alphas = "0.5,1,1.5";
  double rem_eps = 0.25, hole = 0.5, rem_d = 1.0;
  CLI::App* rem = app.add_subcommand("removability", "capacity of a point hole along an interval ladder");
  rem->add_option("--resolutions", res_list, "comma separated point counts");
  rem->add_option("--alphas", alphas, "comma separated");
  rem->add_option("--eps", rem_eps, "rips scale");
  rem->add_option("--hole", hole, "hole position in (0,1)");
  rem->add_option("--d", rem_d, "kernel dimension");
  rem->add_option("--out", out, "directory for reports");

  std::string suite = "all";
  double verify_eps = 0.5;
  CLI::App* verify = app.add_subcommand("verify", "run verification suites");
  verify->add_option("--suite", suite, "identity | hodge | poincare | mv | capacity | all");
  verify_space.add(verify);
  verify->add_option("--eps", verify_eps, "rips scale for a user space");
  verify->add_option("--out", out, "directory for reports");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (betti->parsed()) return cmd_betti(betti_space, betti_cx, cover_eps, cover_eta, cover_stride, field, out);
    if (sweep->parsed()) return cmd_sweep(sweep_space, sweep_cx, eps_list, alpha_list, out);
    if (rem->parsed()) return cmd_removability(res_list, alphas, rem_eps, hole, rem_d, out);
    if (verify->parsed()) {
      bool user = !verify_space.dist.empty();
      if (!(verify_eps > 0.0)) throw UsageError("--eps must be positive");
      if (suite != "all") {
        auto names = suites::suite_names();
        if (std::find(names.begin(), names.end(), suite) == names.end()) throw UsageError("unknown suite " + suite);
      }
      return cmd_verify(suite, verify_space, verify_eps, user, out);
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const LoadError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return kFailed;
  }
  return kUsage;
}
