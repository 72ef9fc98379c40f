// cornerlab command-line driver.
#include "cornerlab/acceptance.hpp"
#include "cornerlab/analysis.hpp"
#include "cornerlab/config.hpp"
#include "cornerlab/errors.hpp"
#include "cornerlab/exact.hpp"
#include "cornerlab/fem.hpp"
#include "cornerlab/mesh.hpp"
#include "cornerlab/norms.hpp"
#include "cornerlab/report.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <numbers>
#include <sstream>
#include <thread>

namespace fs = std::filesystem;
using namespace cornerlab;

namespace {

struct Globals {
  std::string out;
  bool force = false;
  bool degrees = false;
};

// Collects outputs of one command and writes them with its manifest.
class Run {
 public:
  Run(std::string command, fs::path dir, const Globals& g) : dir_(std::move(dir)), force_(g.force) {
    manifest_.command = std::move(command);
    manifest_.tool_version = CORNERLAB_VERSION;
    manifest_.config_hash = "none";
  }
  void set_hash(std::string h) { manifest_.config_hash = std::move(h); }
  void step(const std::string& name, const std::string& status) { manifest_.step(name, status); }
  void file(const std::string& name, const std::string& content) {
    write_file_atomic(dir_ / name, content, force_);
    manifest_.files.push_back(name);
  }
  void finish() {
    std::ostringstream os;
    write_manifest(os, manifest_);
    write_file_atomic(dir_ / (manifest_.command + ".manifest.json"), os.str(), force_);
  }

 private:
  fs::path dir_;
  bool force_;
  RunManifest manifest_;
};

void kv(const std::string& key, double v) { std::cout << key << " = " << fmt_double(v) << '\n'; }

double angle(double v, const Globals& g) { return g.degrees ? v * std::numbers::pi / 180.0 : v; }

CaseConfig config_or_default(const std::string& path, const Globals& g) {
  if (path.empty()) {
    std::istringstream empty;
    return parse_config(empty, g.degrees);
  }
  return load_config(path, g.degrees);
}

fs::path output_dir(const CaseConfig& c, const Globals& g) { return g.out.empty() ? fs::path(c.directory) : fs::path(g.out); }
fs::path output_dir(const Globals& g) { return g.out.empty() ? fs::path("cornerlab-out") : fs::path(g.out); }

FemSolution solve_case(const CaseConfig& c, const CaseProblem& p, double h) {
  CgOptions opt;
  opt.tol = c.cg_tol;
  return solve_problem(p.spec, h, c.mu, opt, c.mesh);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cornerlab: corner singularities of elliptic interface problems"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand
  Globals g;
  app.add_option("--out", g.out, "Output directory (default: the config's [output] directory or cornerlab-out)");
  app.add_flag("--force", g.force, "Overwrite existing output files");
  app.add_flag("--degrees", g.degrees, "Read angles in degrees");
  app.set_version_flag("--version", CORNERLAB_VERSION);

  double gamma = 0.8, theta_plus = 0.75 * std::numbers::pi, theta_minus = -0.25 * std::numbers::pi;
  double a0 = 1.0, c_plus = 0.0, c_minus = 0.0, tol = 1e-13;
  std::vector<double> bracket;
  bool field_csv = false, residuals = false;
  std::string config_path, solution_path, filter, region = "all";
  int levels = 0, jobs = 1, k = 1, radii = 16;
  double alpha = 0.5, tau = 0.0, r_min = 0.0, r_max = 0.0;
  bool unweighted = false;

  auto add_angles = [&](CLI::App* sub) {
    sub->add_option("--theta-plus", theta_plus, "Upper wall angle")->required();
    sub->add_option("--theta-minus", theta_minus, "Lower wall angle")->required();
  };

  auto* exact = app.add_subcommand("exact", "Transmission coefficients (A, a0, C) for an exponent");
  exact->add_option("--gamma", gamma, "Exponent")->required();
  add_angles(exact);
  exact->add_flag("--field-csv", field_csv, "Also write exact_field.csv on a polar grid");

  auto* gam = app.add_subcommand("gamma", "Smallest exponent for a coefficient jump");
  gam->add_option("--a0", a0, "Coefficient on the plus side")->required();
  add_angles(gam);
  gam->add_option("--bracket", bracket, "Search interval LO HI")->expected(2);
  gam->add_option("--tol", tol, "Root tolerance");

  auto* corr = app.add_subcommand("corrector", "Piecewise-linear corrector from tangential derivatives");
  corr->add_option("--c-plus", c_plus, "Tangential derivative along the upper wall")->required();
  corr->add_option("--c-minus", c_minus, "Tangential derivative along the lower wall")->required();
  corr->add_option("--a0", a0, "Coefficient on the plus side")->required();
  add_angles(corr);

  auto* solve = app.add_subcommand("solve", "FEM solve of a case");
  solve->add_option("--config", config_path, "Case file (default: the built-in wedge example)");
  solve->add_flag("--residuals", residuals, "Also write residual_history.csv");

  auto* conv = app.add_subcommand("convergence", "Refinement study against the exact solution");
  conv->add_option("--config", config_path, "Case file");
  conv->add_option("--levels", levels, "Number of levels (default: analysis.levels)");
  conv->add_option("--jobs", jobs, "Levels solved concurrently");

  auto* fit = app.add_subcommand("fit", "Corner exponent fit");
  auto* fit_cfg = fit->add_option("--config", config_path, "Case file to solve and fit");
  auto* fit_sol = fit->add_option("--solution", solution_path, "Solution CSV to fit");
  fit_cfg->excludes(fit_sol);
  fit->add_option("--r-min", r_min, "Smallest radius (required with --solution)");
  fit->add_option("--r-max", r_max, "Largest radius (required with --solution)");
  fit->add_option("--radii", radii, "Number of radii");

  auto* norms = app.add_subcommand("norms", "Weighted Hölder norm of a sampled field");
  norms->add_option("--solution", solution_path, "CSV with x,y,region,value[,gx,gy]")->required();
  norms->add_option("--k", k, "Derivative order (0 or 1)");
  norms->add_option("--alpha", alpha, "Hölder exponent");
  norms->add_option("--tau", tau, "Weight exponent");
  norms->add_flag("--unweighted", unweighted, "Plain Hölder norm (no edge weight)");
  norms->add_option("--region", region, "plus, minus or all")->check(CLI::IsMember({"plus", "minus", "all"}));

  auto* mesh = app.add_subcommand("mesh", "Export the mesh of a case");
  mesh->add_option("--config", config_path, "Case file");

  auto* verify = app.add_subcommand("verify", "Run the acceptance checks");
  verify->add_option("--filter", filter, "Comma-separated tags, numbers or name fragments");
  verify->add_option("--jobs", jobs, "Checks run concurrently");
  verify->add_option("--config", config_path, "Case file (only its [output] section is used)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*exact) {
      const Wedge w = make_wedge(angle(theta_minus, g), angle(theta_plus, g));
      Run run("exact", output_dir(g), g);
      const auto tc = transmission_coeffs(gamma, w);
      kv("gamma", gamma);
      kv("A", tc.A);
      kv("a0", tc.a0);
      kv("C", tc.C);
      run.step("transmission_coeffs", "ok");
      if (field_csv) {
        const auto sol = build_dirichlet_example(gamma, w);
        SampledField f;
        for (int i = 1; i <= 40; ++i) {
          for (int j = 0; j <= 40; ++j) {
            const PolarPoint pp{i / 40.0, w.theta_minus() + w.opening() * j / 40.0};
            f.push_back(from_polar(pp), pp.theta > 0 ? 1 : (pp.theta < 0 ? -1 : 0), eval_separable(sol, pp),
                        grad_separable(sol, pp));
          }
        }
        std::ostringstream os;
        write_field_csv(os, f, "u");
        run.file("exact_field.csv", os.str());
        run.step("field_csv", "ok");
      }
      run.finish();
      return 0;
    }

    if (*gam) {
      const Wedge w = make_wedge(angle(theta_minus, g), angle(theta_plus, g));
      Run run("gamma", output_dir(g), g);
      RootOptions opt;
      opt.tol = tol;
      if (!bracket.empty()) opt.bracket = std::make_pair(bracket[0], bracket[1]);
      const auto roots = exponent_roots(a0, w, opt);
      if (roots.empty()) throw NoSignChangeError("no sign change of F in the bracket");
      kv("gamma", roots.front());
      std::cout << "roots =";
      for (double r : roots) std::cout << ' ' << fmt_double(r);
      std::cout << '\n';
      run.step("singular_exponent", "ok");
      run.finish();
      return 0;
    }

    if (*corr) {
      const Wedge w = make_wedge(angle(theta_minus, g), angle(theta_plus, g));
      Run run("corrector", output_dir(g), g);
      const auto p = corrector_solve(c_plus, c_minus, a0, w);
      kv("a_star", p.a_star);
      kv("b_plus", p.b_plus);
      kv("b_minus", p.b_minus);
      kv("determinant", corrector_determinant(a0, angles_of(w)));
      kv("residual", corrector_residual(p, c_plus, c_minus, a0, angles_of(w)));
      run.step("corrector_solve", "ok");
      run.finish();
      return 0;
    }

    if (*verify) {
      fs::path dir = output_dir(g);
      if (!config_path.empty()) dir = output_dir(load_config(config_path, g.degrees), g);
      Run run("verify", dir, g);
      const auto results = run_acceptance(filter, jobs, &std::cout);
      int passed = 0;
      std::ostringstream csv;
      csv << "criterion,name,status,seconds\n";
      for (const auto& r : results) {
        passed += r.passed;
        run.step("criterion " + std::to_string(r.id), r.passed ? "pass" : "fail");
        csv << r.id << ',' << r.name << ',' << (r.passed ? "pass" : "fail") << ',' << fmt_double(r.seconds) << '\n';
      }
      std::cout << "\nsummary: " << passed << " of " << results.size() << " criteria passed\n";
      run.file("verify.csv", csv.str());
      run.finish();
      return passed == static_cast<int>(results.size()) ? 0 : 1;
    }

    if (*norms) {
      std::ifstream in(solution_path);
      if (!in) throw ConfigError("cannot open " + solution_path);
      SampledField f = read_field_csv(in);
      if (region != "all") f = restrict_region(f, region == "plus" ? 1 : -1);
      NormParams np;
      np.k = k;
      np.alpha = alpha;
      np.tau = tau;
      if (unweighted) np.edge_point.reset();
      PairOptions pairs;
      if (region == "all") pairs.scope = PairScope::SameRegion;
      Run run("norms", output_dir(g), g);
      const NormReport rep = weighted_norm(f, np, pairs);
      write_norm_report(std::cout, rep, np);
      std::ostringstream os;
      write_norm_report_csv(os, rep, np);
      run.file("norm_report.csv", os.str());
      run.step("weighted_norm", "ok");
      run.finish();
      return 0;
    }

    if (*fit && !solution_path.empty()) {
      std::ifstream in(solution_path);
      if (!in) throw ConfigError("cannot open " + solution_path);
      FitOptions opt;
      opt.r_min = r_min;
      opt.r_max = r_max;
      opt.num_radii = radii;
      Run run("fit", output_dir(g), g);
      const ExponentFit ef = fit_corner_exponent(read_field_csv(in), opt);
      kv("beta", ef.beta);
      kv("intercept", ef.intercept);
      kv("r2", ef.r_squared);
      std::ostringstream a, b;
      write_exponent_fit_csv(a, ef);
      write_exponent_fit_summary_csv(b, ef);
      run.file("exponent_fit.csv", a.str());
      run.file("exponent_fit_summary.csv", b.str());
      run.step("fit_corner_exponent", "ok");
      run.finish();
      return 0;
    }

    // Commands driven by a case file.
    const CaseConfig cfg = config_or_default(config_path, g);
    const CaseProblem prob = build_problem(cfg);
    const std::string command = app.get_subcommands().front()->get_name();
    Run run(command, output_dir(cfg, g), g);
    run.set_hash(config_hash(cfg));

    if (*mesh) {
      const Mesh m = cfg.mesh == MeshKind::Graded ? generate_mesh(cfg.domain(), cfg.h, cfg.mu)
                                                  : generate_nonobtuse_mesh(cfg.domain(), cfg.h);
      std::ostringstream os;
      write_mesh(os, m);
      run.file("mesh.txt", os.str());
      std::cout << "vertices = " << m.num_vertices() << "\ntriangles = " << m.num_triangles() << '\n';
      run.step("generate_mesh", "ok");
    } else if (*solve) {
      const FemSolution sol = solve_case(cfg, prob, cfg.h);
      run.step("solve", "ok");
      std::cout << "unknowns = " << sol.num_unknowns() << "\niterations = " << sol.iterations << '\n';
      kv("residual", sol.residual);
      if (prob.exact) {
        const ErrorReport e = error_report(sol, *prob.exact);
        kv("L2", e.l2);
        kv("brokenH1", e.broken_h1);
        kv("Linf", e.linf);
        run.step("error_report", "ok");
      }
      std::ostringstream a, b;
      write_solution_csv(a, sol);
      write_field_csv(b, nodal_field(sol), "u");
      run.file("solution.csv", a.str());
      run.file("solution_nodes.csv", b.str());
      if (residuals) {
        std::ostringstream os;
        os << "iteration,relative_residual\n";
        for (std::size_t i = 0; i < sol.residual_history.size(); ++i) {
          os << i << ',' << fmt_double(sol.residual_history[i]) << '\n';
        }
        run.file("residual_history.csv", os.str());
      }
    } else if (*fit) {
      const FemSolution sol = solve_case(cfg, prob, cfg.h);
      run.step("solve", "ok");
      FitOptions opt;
      opt.num_rays = cfg.fit_rays;
      opt.num_radii = fit->count("--radii") ? radii : cfg.fit_radii;
      opt.r_min = r_min > 0 ? r_min : cfg.fit_r_min;
      opt.r_max = r_max > 0 ? r_max : cfg.fit_r_max;
      const ExponentFit ef = fit_corner_exponent(sol, cfg.domain(), opt);
      kv("beta", ef.beta);
      kv("intercept", ef.intercept);
      kv("r2", ef.r_squared);
      kv("r_min", ef.r_min);
      kv("r_max", ef.r_max);
      if (prob.gamma) kv("gamma", *prob.gamma);
      std::ostringstream a, b;
      write_exponent_fit_csv(a, ef);
      write_exponent_fit_summary_csv(b, ef);
      run.file("exponent_fit.csv", a.str());
      run.file("exponent_fit_summary.csv", b.str());
      run.step("fit_corner_exponent", "ok");
    } else if (*conv) {
      if (!prob.exact) {
        throw ConfigError("convergence needs an exact solution: data.phi = exact with zero h and g, "
                          "or the manufactured preset with a unit coefficient");
      }
      const int n = levels > 0 ? levels : cfg.levels;
      std::vector<double> hs(n);
      std::vector<std::unique_ptr<FemSolution>> sols(n);
      for (int i = 0; i < n; ++i) hs[i] = cfg.h / std::pow(2.0, i);
      std::vector<std::exception_ptr> errors(n);
      auto work = [&](int i) {
        try {
          sols[i] = std::make_unique<FemSolution>(solve_case(cfg, prob, hs[i]));
        } catch (...) {
          errors[i] = std::current_exception();
        }
      };
      for (int start = 0; start < n; start += std::max(jobs, 1)) {
        std::vector<std::thread> pool;
        for (int i = start; i < std::min(n, start + std::max(jobs, 1)); ++i) pool.emplace_back(work, i);
        for (auto& t : pool) t.join();
      }
      for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
      }
      std::ostringstream csv;
      csv << "h,ndof,L2,brokenH1,Linf,flux_jump\n";
      std::vector<PlotSeries> series = {{"L2", {}, {}}, {"broken H1", {}, {}}, {"Linf", {}, {}}, {"flux jump", {}, {}}};
      for (int i = 0; i < n; ++i) {
        const ErrorReport e = error_report(*sols[i], *prob.exact);
        const double jump = interface_flux_jump(*sols[i]).mean;
        csv << fmt_double(hs[i]) << ',' << sols[i]->num_unknowns() << ',' << fmt_double(e.l2) << ','
            << fmt_double(e.broken_h1) << ',' << fmt_double(e.linf) << ',' << fmt_double(jump) << '\n';
        const double vals[] = {e.l2, e.broken_h1, e.linf, jump};
        for (int s = 0; s < 4; ++s) {
          series[s].x.push_back(hs[i]);
          series[s].y.push_back(vals[s]);
        }
        run.step("level " + std::to_string(i), "ok");
      }
      std::cout << csv.str();
      if (cfg.csv) run.file("convergence.csv", csv.str());
      if (cfg.svg) {
        std::ostringstream svg;
        write_loglog_svg(svg, series, "convergence", "h", "error");
        run.file("convergence.svg", svg.str());
      }
    }
    run.finish();
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 2;
  } catch (const GeometryError& e) {
    std::cerr << "geometry error: " << e.what() << '\n';
    return 2;
  } catch (const HypothesisError& e) {
    std::cerr << "hypothesis error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    // Degenerate angles, sign errors, missing roots, solver failure.
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
