#include "helly/errors.hpp"
#include "helly/harness.hpp"

#include "CLI11.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace helly;

namespace {

json read_json(const std::string& path) {
  if (path == "-") return json::parse(std::cin);
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open " + path);
  return json::parse(in);
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw PreconditionError("cannot write " + path);
  out << text;
}

std::string default_y(const std::string& kind) {
  if (kind == "func-helly") return "log_measured_ratio";
  if (kind == "diameter-colorful") return "exact_diameter";
  if (kind == "colorful-func") return "witness_log_integral";
  return "inradius";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Helly-type selection: generators, selectors, oracles and experiments"};
  app.require_subcommand(1);

  GenParams gp;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "Generate a seeded instance");
  gen->add_option("--kind", gp.kind, "diameter-colorful | func-helly | colorful-func")->required();
  gen->add_option("--d", gp.d, "Dimension");
  gen->add_option("--seed", gp.seed, "Seed");
  gen->add_option("--n", gp.n, "Number of functions (func-helly)");
  gen->add_option("--sets", gp.sets, "Sets per class, or maximum class size");
  gen->add_flag("--inject", gp.inject_violation, "Inject a hypothesis violation (diameter-colorful)");
  gen->add_option("--out", gen_out, "Output file (default stdout)");

  std::string in_path, out_path, oracle_mode, oracle_kind;
  double tol = 1e-9;
  auto* diam = app.add_subcommand("diam-select", "Colorful diameter selection");
  auto* func = app.add_subcommand("func-select", "Quantitative functional selection");
  auto* colorful = app.add_subcommand("colorful-func", "Colorful functional selection");
  for (auto* sc : {diam, func, colorful}) {
    sc->add_option("--in", in_path, "Instance JSON ('-' for stdin)")->required();
    sc->add_option("--out", out_path, "Output file (default stdout)");
  }
  func->add_option("--tol", tol, "Integration tolerance");
  func->add_option("--oracle", oracle_mode, "Also run an oracle: exhaustive")->check(CLI::IsMember({"exhaustive"}));

  auto* oracle = app.add_subcommand("oracle", "Exhaustive oracle at desk scale");
  oracle->add_option("--kind", oracle_kind, "subset-ratio | steinitz | rainbow-diameter | quadrature")->required();
  oracle->add_option("--in", in_path, "Instance JSON ('-' for stdin)")->required();
  oracle->add_option("--out", out_path, "Output file (default stdout)");

  ExperimentConfig ec;
  std::string config_path, exp_out = "results";
  auto* exp = app.add_subcommand("experiment", "Run seeded trials and write CSV (and SVG)");
  exp->add_option("--config", config_path, "Config JSON: one object or {\"experiments\": [...]}");
  exp->add_option("--kind", ec.kind, "func-helly | diameter-colorful | colorful-func | steinitz");
  exp->add_option("--d", ec.d, "Dimension");
  exp->add_option("--trials", ec.trials, "Number of trials");
  exp->add_option("--seed", ec.seed, "Base seed");
  exp->add_option("--tol", ec.tol, "Integration tolerance");
  exp->add_option("--n", ec.n, "Family or point-set size");
  exp->add_option("--sets", ec.sets, "Sets per class, or maximum class size");
  exp->add_flag("--inject", ec.inject, "Inject violations on odd trials (diameter-colorful)");
  exp->add_flag("--plot", ec.plot, "Write an SVG scatter");
  exp->add_option("--out", exp_out, "Output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      write_text(gen_out, generate_instance(gp).dump(2) + "\n");
    } else if (*diam) {
      auto r = colorful_diameter_select(diameter_instance(read_json(in_path)));
      write_text(out_path, to_json(r).dump(2) + "\n");
    } else if (*func) {
      const json inst = read_json(in_path);
      SelectOptions opt;
      opt.integration_tol = tol;
      json out = to_json(select_subset(func_instance(inst), opt));
      if (!oracle_mode.empty()) {
        json q = inst;
        q["tol"] = tol;
        out["oracle"] = run_oracle("subset-ratio", q);
      }
      write_text(out_path, out.dump(2) + "\n");
    } else if (*colorful) {
      write_text(out_path, to_json(colorful_select(colorful_instance(read_json(in_path)))).dump(2) + "\n");
    } else if (*oracle) {
      write_text(out_path, run_oracle(oracle_kind, read_json(in_path)).dump(2) + "\n");
    } else if (*exp) {
      std::vector<ExperimentConfig> cfgs;
      if (!config_path.empty()) {
        const json j = read_json(config_path);
        if (j.is_object() && j.contains("experiments")) {
          for (const auto& e : j["experiments"]) cfgs.push_back(experiment_config_from_json(e));
        } else {
          cfgs.push_back(experiment_config_from_json(j));
        }
      } else {
        json j = json::object();
        if (!ec.kind.empty()) {
          j = {{"kind", ec.kind}, {"d", ec.d}, {"trials", ec.trials}, {"seed", ec.seed}, {"tol", ec.tol},
               {"n", ec.n}, {"sets", ec.sets}, {"inject", ec.inject}, {"plot", ec.plot}};
        }
        cfgs.push_back(experiment_config_from_json(j));
      }
      std::filesystem::create_directories(exp_out);
      int failed = 0;
      for (const auto& c : cfgs) {
        const auto r = run_experiment(c);
        const std::string stem = exp_out + "/" + c.kind + "_d" + std::to_string(c.d);
        write_text(stem + ".csv", to_csv(r));
        if (c.plot) {
          const std::string x = c.kind == "func-helly" ? "log_ratio_bound" : "trial";
          write_text(stem + ".svg", scatter_svg(r, x, default_y(c.kind)));
        }
        std::cout << stem << ".csv: " << r.passed << "/" << r.rows.size() << " passed\n";
        failed += static_cast<int>(r.rows.size()) - r.passed;
      }
      return failed == 0 ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
