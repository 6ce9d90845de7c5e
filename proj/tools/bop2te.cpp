#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "bop2te/server.hpp"

using namespace bop2te;

namespace {

enum ExitCode { ok = 0, failure = 1, invalid = 2, not_found = 3, conflict = 4 };

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config", "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ValidationError("config", path + ": " + e.what());
  }
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out);
  if (!f) throw std::runtime_error("cannot write " + out);
  f << text;
}

struct Common {
  std::string config;
  std::string out;
  std::string format = "table";
  std::uint64_t seed = 20240101;
  bool seed_set = false;
};

void add_format(CLI::App* cmd, Common& c) {
  cmd->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"table", "json"}));
  cmd->add_option("--out", c.out, "Write output to this file instead of stdout");
}

ApiServer* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian phase II design with joint efficacy and toxicity monitoring"};
  app.require_subcommand(1);
  std::string store_path;
  app.add_option("--store", store_path, "Design store path (default: $BOP2TE_STORE or ./bop2te.db)");

  Common c;
  bool global = false;
  bool practical = false;
  std::string grid = "literal";
  std::string annotation;

  auto* design = app.add_subcommand("design", "Optimize stopping boundaries and save a design document");
  design->add_option("--config", c.config, "Design spec JSON")->required()->check(CLI::ExistingFile);
  design->add_flag("--global", global, "Search integer boundary vectors directly");
  design->add_flag("--practical-constraint", practical, "Restrict the global search to practical boundaries");
  design->add_option("--grid", grid, "Parameter grid variant")->check(CLI::IsMember({"literal", "compact"}));
  design->add_option("--annotation", annotation, "Free-text note stored with the document");
  add_format(design, c);

  std::string doc_id;
  std::size_t mc = 0;
  std::string phi_grid;
  auto* oc = app.add_subcommand("oc", "Operating characteristics of a stored design or a config");
  auto* oc_doc = oc->add_option("--design", doc_id, "Stored design document id");
  oc->add_option("--config", c.config, "Spec JSON, optionally with fixed boundaries")->excludes(oc_doc);
  oc->add_option("--mc", mc, "Monte Carlo replicates to add beside the exact values");
  oc->add_option("--seed", c.seed, "Monte Carlo seed");
  oc->add_option("--phi-grid", phi_grid, "Comma-separated odds ratios for the sensitivity table");
  add_format(oc, c);

  std::size_t reps = 0;
  auto* sim = app.add_subcommand("simulate-multidose", "Randomized multiple-dose selection trial");
  sim->add_option("--config", c.config, "Multi-dose JSON")->required()->check(CLI::ExistingFile);
  sim->add_option("--mc", reps, "Replicates (overrides the config)");
  auto* sim_seed = sim->add_option("--seed", c.seed, "Simulation seed (overrides the config)");
  std::string json_out;
  sim->add_option("--json-out", json_out, "Also write the machine-readable report here");
  add_format(sim, c);

  InterimData interim;
  auto* decide = app.add_subcommand("decide", "Interim go/no-go decision, appended to the log");
  decide->add_option("design", doc_id, "Design document id")->required();
  decide->add_option("-n,--n", interim.n, "Patients evaluated at this look")->required();
  decide->add_option("-r,--responses", interim.responses, "Cumulative responses")->required();
  decide->add_option("-t,--toxicities", interim.toxicities, "Cumulative toxicities")->required();
  add_format(decide, c);

  auto* protocol = app.add_subcommand("protocol", "Render the protocol text of a design");
  protocol->add_option("design", doc_id, "Design document id")->required();
  protocol->add_option("--out", c.out, "Write output to this file instead of stdout");

  ServerOptions sopt;
  auto* serve = app.add_subcommand("serve", "HTTP JSON API");
  serve->add_option("--host", sopt.host, "Bind address");
  serve->add_option("--port", sopt.port, "Port");
  serve->add_option("--job-workers", sopt.job_workers, "Background optimization workers");

  CLI11_PARSE(app, argc, argv);
  if (store_path.empty()) store_path = default_store_path();

  try {
    const bool json = c.format == "json";
    if (*design) {
      DesignRequest req = design_request_from_json(read_json_file(c.config));
      if (global) req.global = true;
      if (practical) req.practical_constraint = true;
      if (design->count("--grid")) req.grid = grid_variant_from_string(grid);
      if (!annotation.empty()) req.annotation = annotation;
      const OptimizationResult result = run_design(req);
      DesignStore store(store_path);
      const std::string id = store.create(req.spec, req.annotation);
      store.attach_result(id, result);
      if (json) {
        emit(store.load(id).to_json().dump(2) + "\n", c.out);
      } else {
        emit(format_design(req.spec, result) + "Design document: " + id + "\n", c.out);
      }
    } else if (*oc) {
      OcRequest req;
      req.mc_replicates = mc;
      req.seed = c.seed;
      if (!phi_grid.empty()) req.phi_grid = parse_csv_doubles(phi_grid, "phi_grid");
      DesignSpec spec;
      StoppingBoundaries boundaries;
      if (!doc_id.empty()) {
        DesignStore store(store_path);
        const DesignDocument doc = store.load(doc_id);
        if (!doc.result) throw ConflictError("design " + doc_id + " has no stopping boundaries yet");
        spec = doc.spec;
        boundaries = doc.result->boundaries;
      } else if (!c.config.empty()) {
        const Json j = read_json_file(c.config);
        const DesignRequest dreq = design_request_from_json(j);
        spec = dreq.spec;
        if (j.contains("boundaries")) {
          boundaries = boundaries_from_json(j["boundaries"], spec);
        } else {
          boundaries = run_design(dreq).boundaries;
        }
      } else {
        throw ValidationError("design", "give --design <id> or --config <path>");
      }
      const Json report = oc_report(spec, boundaries, req);
      emit(json ? report.dump(2) + "\n" : format_oc_report(report), c.out);
    } else if (*sim) {
      MultiDoseRequest req = multidose_request_from_json(read_json_file(c.config));
      if (sim->count("--mc")) {
        if (reps == 0) throw ValidationError("replicates", "must be a positive integer");
        req.config.replicates = reps;
      }
      if (sim_seed->count()) req.config.seed = c.seed;
      const MultiDoseResult r = run_multidose(req);
      const Json j = to_json(r);
      if (!json_out.empty()) emit(j.dump(2) + "\n", json_out);
      emit(json ? j.dump(2) + "\n" : format_multidose(r), c.out);
    } else if (*decide) {
      DesignStore store(store_path);
      const DecisionLogEntry e = record_decision(store, doc_id, interim);
      emit(json ? e.to_json().dump(2) + "\n" : format_decision(e.record), c.out);
    } else if (*protocol) {
      DesignStore store(store_path);
      emit(render_protocol(store.load(doc_id)), c.out);
    } else if (*serve) {
      DesignStore store(store_path);
      ApiServer server(store, sopt);
      g_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cerr << "listening on " << sopt.host << ":" << sopt.port << " (store " << store_path << ")\n";
      if (!server.listen()) {
        std::cerr << "error: cannot bind " << sopt.host << ":" << sopt.port << "\n";
        return failure;
      }
      g_server = nullptr;
    }
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return invalid;
  } catch (const std::invalid_argument& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return invalid;
  } catch (const std::domain_error& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return invalid;
  } catch (const NotFoundError& e) {
    std::cerr << "not found: " << e.what() << "\n";
    return not_found;
  } catch (const ConflictError& e) {
    std::cerr << "conflict: " << e.what() << "\n";
    return conflict;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return failure;
  }
  return ok;
}
