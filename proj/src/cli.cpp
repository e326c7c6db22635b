#include "fairnav/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "fairnav/io.hpp"
#include "fairnav/planner.hpp"
#include "fairnav/service.hpp"

namespace fairnav {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw ValidationError("cannot write " + path);
}

FairnessSpec spec_argument(const std::string& arg) {
  if (!arg.empty() && arg.front() == '@') return parse_spec(read_file(arg.substr(1)));
  return parse_spec(arg);
}

CityMap city_argument(const std::string& path) { return parse_city(read_file(path)); }

std::string bar(double fraction, int width = 30) {
  const int filled = static_cast<int>(fraction * width + 0.5);
  return std::string(std::clamp(filled, 0, width), '#') + std::string(width - std::clamp(filled, 0, width), '.');
}

void print_front(std::ostream& out, const ParetoFront& front) {
  out << std::setw(4) << "#" << std::setw(14) << "efficiency" << std::setw(14) << "unfairness"
      << std::setw(8) << "moves" << "\n";
  for (std::size_t k = 0; k < front.solutions.size(); ++k) {
    const auto& s = front.solutions[k];
    out << std::setw(4) << k << std::setw(14) << s.efficiency << std::setw(14) << std::fixed
        << std::setprecision(6) << s.unfairness << std::setw(8) << s.path.moves() << "\n";
  }
  out.unsetf(std::ios::floatfield);
}

void print_audit(std::ostream& out, const CityMap& city, const FrontDocument& doc, std::size_t k) {
  const Solution& solution = doc.front.solutions.at(k);
  const int radius = static_cast<int>(params_from_json(doc.params).sensor_radius);
  const std::size_t a = efficiency_attribute(city, doc.spec);
  const Attribute& attribute = city.attributes()[a];
  const PathAudit audit = path_audit(city, solution.path, attribute.name, radius);
  const double unfair = unfairness(city, solution.path, doc.spec, radius);
  const auto& totals = city.category_totals(a);

  std::size_t name_width = 10;
  for (const auto& c : attribute.categories) name_width = std::max(name_width, c.size() + 2);

  out << "solution " << k << " of " << doc.front.solutions.size() << " (" << to_string(doc.spec.kind)
      << ", attribute " << attribute.name << ")\n";
  out << "moves:       " << solution.path.moves() << "\n";
  out << "found total: " << audit.found_total << " of " << city.population(a) << "\n";
  out << "unfairness:  " << std::fixed << std::setprecision(6) << unfair << "\n\n";

  out << std::left << std::setw(static_cast<int>(name_width)) << "category" << std::setw(42) << "path"
      << "city" << "\n";
  for (std::size_t g = 0; g < attribute.categories.size(); ++g) {
    const double p = audit.path_distribution.mass[g];
    const double c = audit.city_distribution.mass[g];
    out << std::setw(static_cast<int>(name_width)) << attribute.categories[g] << std::setprecision(4) << p
        << " " << bar(p) << "     " << c << " " << bar(c) << "\n";
  }
  out << "\nper-group utility (found / city total)\n";
  for (std::size_t g = 0; g < attribute.categories.size(); ++g) {
    out << std::setw(static_cast<int>(name_width)) << attribute.categories[g] << std::setprecision(4)
        << audit.utility[g] << " " << bar(audit.utility[g]) << "  " << audit.found[g] << " / " << totals[g]
        << "\n";
  }
  out << std::right;
  out.unsetf(std::ios::floatfield);
}

struct Options {
  std::string preset;
  std::vector<int> size;
  std::uint64_t seed = 1;
  std::string out_file;
  std::string city_file;
  std::string spec;
  int budget = 40;
  std::vector<std::string> fronts;
  std::size_t solution = 0;
  double weight = 1.0;
  int port = 0;
};

int dispatch(CLI::App& app, const Options& o, std::ostream& out) {
  const std::string command = app.get_subcommands().front()->get_name();

  if (command == "gen-city") {
    const CityMap city = generate_city(synthetic_preset(o.preset, o.size.at(0), o.size.at(1)), o.seed);
    write_file(o.out_file, save_city(city) + "\n");
    out << "wrote " << o.out_file << " (" << city.width() << "x" << city.height() << ", "
        << city.attributes().size() << " attributes)\n";
    return kExitOk;
  }

  if (command == "plan") {
    const CityMap city = city_argument(o.city_file);
    const FairnessSpec spec = spec_argument(o.spec);
    PlannerParams params;
    params.budget = o.budget;
    params.seed = o.seed;
    const ParetoFront front = evolve_pareto(city, spec, params);
    write_file(o.out_file, dump_document(front_document(spec, to_json(params), front)));
    print_front(out, front);
    return kExitOk;
  }

  if (command == "audit") {
    const CityMap city = city_argument(o.city_file);
    const FrontDocument doc = parse_front_document(read_file(o.fronts.at(0)));
    if (o.solution >= doc.front.solutions.size()) {
      throw ValidationError("front has " + std::to_string(doc.front.solutions.size()) +
                            " solutions, no solution " + std::to_string(o.solution));
    }
    print_audit(out, city, doc, o.solution);
    return kExitOk;
  }

  if (command == "oracle") {
    const CityMap city = city_argument(o.city_file);
    FairnessSpec spec;
    if (!o.spec.empty()) {
      spec = spec_argument(o.spec);
    } else if (!city.attributes().empty()) {
      spec.attribute = city.attributes().front().name;
    }
    const ParetoFront front = oracle_pareto(city, spec, o.budget);
    const Json params{{"budget", o.budget}, {"sensor_radius", 0}};
    write_file(o.out_file, dump_document(front_document(spec, params, front)));
    print_front(out, front);
    return kExitOk;
  }

  if (command == "compare") {
    const CityMap city = city_argument(o.city_file);
    const FrontDocument a = parse_front_document(read_file(o.fronts.at(0)));
    const FrontDocument b = parse_front_document(read_file(o.fronts.at(1)));
    for (const auto* doc : {&a, &b}) {
      validate_spec(city, doc->spec);
      for (const auto& s : doc->front.solutions) {
        if (auto defect = path_defect(city, s.path)) throw ValidationError("invalid path: " + *defect);
      }
    }
    if (!(a.spec == b.spec)) out << "warning: the fronts were planned for different specs\n";
    const ReferencePoint ref = default_reference(a.spec);
    const double hv_a = hypervolume(a.front, ref);
    const double hv_b = hypervolume(b.front, ref);
    auto undominated = [](const ParetoFront& x, const ParetoFront& y) {
      std::size_t n = 0;
      for (const auto& s : x.solutions) {
        bool covered = false;
        for (const auto& t : y.solutions) covered = covered || weakly_dominates(t, s);
        n += covered ? 0 : 1;
      }
      return n;
    };
    const double ratio = hv_b > 0.0 ? hv_a / hv_b : (hv_a > 0.0 ? INFINITY : 1.0);
    out << std::setprecision(10);
    out << "reference point: efficiency " << ref.efficiency << ", unfairness " << ref.unfairness << "\n";
    out << "front A: " << a.front.solutions.size() << " solutions, hypervolume " << hv_a << "\n";
    out << "front B: " << b.front.solutions.size() << " solutions, hypervolume " << hv_b << "\n";
    out << "hypervolume ratio A/B: " << std::fixed << std::setprecision(6) << ratio << "\n";
    out.unsetf(std::ios::floatfield);
    out << "A solutions not weakly dominated by B: " << undominated(a.front, b.front) << "\n";
    out << "B solutions not weakly dominated by A: " << undominated(b.front, a.front) << "\n";
    return kExitOk;
  }

  if (command == "surrogate") {
    const CityMap city = city_argument(o.city_file);
    const FairnessSpec spec = spec_argument(o.spec);
    PlannerParams params;
    params.budget = o.budget;
    const Solution s = surrogate_plan(city, spec, params, o.weight);
    const Json params_json{{"budget", params.budget}, {"sensor_radius", params.sensor_radius}};
    write_file(o.out_file, dump_document(solution_document(spec, params_json, o.weight, s)));
    out << "efficiency " << s.efficiency << ", unfairness " << std::fixed << std::setprecision(6)
        << s.unfairness << ", moves " << s.path.moves() << "\n";
    out.unsetf(std::ios::floatfield);
    return kExitOk;
  }

  if (command == "serve") {
    service::ServiceConfig config = service::config_from_env();
    if (o.port > 0) config.port = o.port;
    service::PlanService plans(config);
    service::HttpServer server(plans);
    if (!server.bind("0.0.0.0", config.port)) {
      throw Error("cannot bind port " + std::to_string(config.port));
    }
    out << "fairnav serving on port " << config.port << std::endl;
    server.listen_after_bind();
    return kExitOk;
  }
  return kExitInternal;
}

std::string one_line(std::string text) {
  for (char& c : text) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return text;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fairness-aware navigation planning"};
  app.name("fairnav");
  app.require_subcommand(1);
  Options o;

  auto* gen = app.add_subcommand("gen-city", "Generate a synthetic city file");
  gen->add_option("--preset", o.preset, "biased-age | biased-ethnicity | uniform")->required();
  gen->add_option("--size", o.size, "Grid width and height")->expected(2)->required();
  gen->add_option("--seed", o.seed, "Random seed");
  gen->add_option("--out", o.out_file, "Output city file")->required();

  auto* plan = app.add_subcommand("plan", "Compute an efficiency/unfairness Pareto front");
  plan->add_option("--city", o.city_file)->required();
  plan->add_option("--spec", o.spec, "Fairness spec JSON, inline or @file")->required();
  plan->add_option("--budget", o.budget, "Maximum moves per tour")->required();
  plan->add_option("--seed", o.seed, "Random seed");
  plan->add_option("--out", o.out_file, "Output front file")->required();

  auto* audit = app.add_subcommand("audit", "Audit one solution of a front");
  audit->add_option("--city", o.city_file)->required();
  audit->add_option("--front", o.fronts)->required()->expected(1);
  audit->add_option("--solution", o.solution)->required();

  auto* oracle = app.add_subcommand("oracle", "Exact front by enumeration (small maps only)");
  oracle->add_option("--city", o.city_file)->required();
  oracle->add_option("--budget", o.budget)->required();
  oracle->add_option("--out", o.out_file)->required();
  oracle->add_option("--spec", o.spec, "Fairness spec (default: demographic parity on the first attribute)");

  auto* compare = app.add_subcommand("compare", "Hypervolume ratio and dominance of two fronts");
  compare->add_option("--city", o.city_file)->required();
  compare->add_option("--front", o.fronts, "Two front (or solution) files")->required()->expected(2);

  auto* surrogate = app.add_subcommand("surrogate", "Plan with the cumulative-cost surrogate");
  surrogate->add_option("--city", o.city_file)->required();
  surrogate->add_option("--spec", o.spec)->required();
  surrogate->add_option("--budget", o.budget)->required();
  surrogate->add_option("--weight", o.weight)->required();
  surrogate->add_option("--out", o.out_file)->required();

  auto* serve = app.add_subcommand("serve", "Run the HTTP planning service");
  serve->add_option("--port", o.port);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "fairnav: " << one_line(e.what()) << "\n";
    return kExitValidation;
  }

  try {
    return dispatch(app, o, out);
  } catch (const InfeasibleError& e) {
    err << "fairnav: " << one_line(e.what()) << "\n";
    return kExitInfeasible;
  } catch (const ParseError& e) {
    err << "fairnav: " << one_line(e.what()) << "\n";
    return kExitValidation;
  } catch (const ValidationError& e) {
    err << "fairnav: " << one_line(e.what()) << "\n";
    return kExitValidation;
  } catch (const MismatchError& e) {
    err << "fairnav: " << one_line(e.what()) << "\n";
    return kExitValidation;
  } catch (const UnsupportedSpecError& e) {
    err << "fairnav: " << one_line(e.what()) << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "fairnav: internal error: " << one_line(e.what()) << "\n";
    return kExitInternal;
  }
}

}  // namespace fairnav
