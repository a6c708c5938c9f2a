#include "cli.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"

#include "sqpt/basis.hpp"
#include "sqpt/errors.hpp"
#include "sqpt/json_io.hpp"
#include "sqpt/qchannel.hpp"
#include "sqpt/tomo.hpp"
#include "sqpt/version.hpp"

namespace sqpt::cli {

using nlohmann::json;

namespace {

struct Options {
  std::string channel_path;
  std::string preset;
  std::vector<double> params;
  std::size_t dim = 2;
  bool dim_given = false;
  std::string target;
  bool lambda_indexing = false;
  std::string backend = "exact";
  std::uint64_t shots = 0;
  std::optional<std::uint64_t> seed;
  std::string strategy = "choi-four";
  bool tp_shortcut = false;
  std::size_t local_dim = 0;
  std::string output;
  bool pretty = false;
  std::string chi_path;
  std::string to;
};

struct LoadedChannel {
  QuantumChannel channel;
  json descriptor;
};

class UsageError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

std::uint64_t resolve_seed(const Options& opt) {
  if (opt.seed) return *opt.seed;
  if (const char* env = std::getenv("CHOI_SQPT_SEED")) {
    try {
      std::size_t used = 0;
      const std::string text(env);
      const auto v = std::stoull(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return v;
    } catch (const std::exception&) {
      throw UsageError("CHOI_SQPT_SEED is not an unsigned integer");
    }
  }
  return 0;
}

BackendConfig backend_config(const Options& opt) {
  if (opt.backend == "exact") return BackendConfig::exact();
  if (opt.backend == "sampled") {
    if (opt.shots == 0) throw UsageError("--backend sampled requires --shots >= 1");
    return BackendConfig::sampled(opt.shots, resolve_seed(opt));
  }
  throw UsageError("unknown backend: " + opt.backend);
}

LoadedChannel load_channel_source(const Options& opt) {
  if (!opt.channel_path.empty() && !opt.preset.empty()) {
    throw UsageError("use either --channel or --preset, not both");
  }
  if (!opt.channel_path.empty()) {
    QuantumChannel ch = load_channel(opt.channel_path);
    if (opt.dim_given && ch.dim() != opt.dim) throw UsageError("--dim does not match the channel file");
    json desc{{"source", "file"}, {"path", opt.channel_path}, {"dim", ch.dim()},
              {"kraus_rank", ch.kraus().size()}, {"trace_preserving", ch.is_trace_preserving()}};
    return {std::move(ch), std::move(desc)};
  }
  if (!opt.preset.empty()) {
    QuantumChannel ch = preset_channel(opt.preset, opt.params, opt.dim);
    json desc{{"source", "preset"}, {"name", opt.preset}, {"params", opt.params}, {"dim", ch.dim()},
              {"kraus_rank", ch.kraus().size()}, {"trace_preserving", ch.is_trace_preserving()}};
    return {std::move(ch), std::move(desc)};
  }
  throw UsageError("a channel source is required: --channel <path> or --preset <name>");
}

ElementIndex parse_target(const Options& opt) {
  if (opt.target.empty()) throw UsageError("--target e,f,g,h is required");
  std::vector<std::size_t> idx;
  std::stringstream ss(opt.target);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const long long v = std::stoll(item, &used);
      if (used != item.size() || v < 0) throw std::invalid_argument(item);
      idx.push_back(static_cast<std::size_t>(v));
    } catch (const std::exception&) {
      throw UsageError("--target: '" + item + "' is not a non-negative integer");
    }
  }
  if (idx.size() != 4) throw UsageError("--target needs exactly four comma-separated indices");
  if (opt.lambda_indexing) return element_from_lambda(idx[0], idx[1], idx[2], idx[3]);
  return {idx[0], idx[1], idx[2], idx[3]};
}

SqptStrategy parse_strategy(const std::string& s) {
  if (s == "choi-four") return SqptStrategy::choi_four;
  if (s == "product-hermitian") return SqptStrategy::product_hermitian;
  throw UsageError("unknown strategy: " + s);
}

json backend_json(const BackendConfig& cfg) {
  return json{{"mode", to_string(cfg.mode)}, {"shots", cfg.shots}, {"seed", cfg.master_seed}};
}

json target_json(const ElementIndex& t) {
  return json{{"e", t.e}, {"f", t.f}, {"g", t.g}, {"h", t.h}};
}

json vector_json(const ComplexVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
  return out;
}

std::string format_complex(Complex c) {
  std::ostringstream os;
  os << std::setprecision(12) << c.real() << (c.imag() < 0 ? " - " : " + ") << std::abs(c.imag()) << "i";
  return os.str();
}

void print_matrix(std::ostream& out, const ComplexMatrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      out << std::setw(24) << format_complex(m(i, j));
    }
    out << "\n";
  }
}

json run_element(const Options& opt, std::ostream& pretty_out) {
  const auto loaded = load_channel_source(opt);
  const BackendConfig cfg = backend_config(opt);
  const ElementIndex target = parse_target(opt);
  const MeasurementPlan plan = plan_element(target, loaded.channel.dim(), opt.tp_shortcut);
  const ChiElementEstimate est = reconstruct_element(plan, loaded.channel, cfg);
  if (opt.pretty) {
    pretty_out << "chi[" << target.e << target.f << ";" << target.g << target.h << "] = "
               << format_complex(est.value) << "  +/- " << est.std_error << "\n"
               << "settings: " << plan.weighted_setting_count() << " planned, "
               << est.settings_used << " measured (" << est.backend << ")\n";
  }
  return json{{"channel", loaded.descriptor},
              {"backend", backend_json(cfg)},
              {"results",
               {{"target", target_json(target)},
                {"lambda_target", {{"a", target.f}, {"b", target.h}, {"c", target.e}, {"d", target.g}}},
                {"value", complex_to_json(est.value)},
                {"std_error", est.std_error},
                {"backend", est.backend}}},
              {"settings", {{"plan", plan.weighted_setting_count()}, {"measured", est.settings_used}}}};
}

json run_full(const Options& opt, std::ostream& pretty_out) {
  const auto loaded = load_channel_source(opt);
  const BackendConfig cfg = backend_config(opt);
  FullSqptOptions fo;
  fo.strategy = parse_strategy(opt.strategy);
  fo.tp_shortcut = opt.tp_shortcut;
  fo.local_dim = opt.local_dim;
  const FullSqptResult res = full_sqpt(loaded.channel, cfg, fo);
  const ChiMatrix oracle = chi_oracle(loaded.channel);
  const double max_err = max_abs_diff(res.chi.entries, oracle.entries);

  json errors = json::array();
  for (Eigen::Index i = 0; i < res.std_errors.rows(); ++i) {
    for (Eigen::Index j = 0; j < res.std_errors.cols(); ++j) errors.push_back(res.std_errors(i, j));
  }
  if (opt.pretty) {
    pretty_out << "strategy " << to_string(fo.strategy) << (fo.tp_shortcut ? " (tp shortcut)" : "")
               << ", settings: " << res.measured_settings << " measured, " << res.inferred_settings
               << " inferred\nchi:\n";
    print_matrix(pretty_out, res.chi.entries);
    pretty_out << "max |chi - oracle| = " << max_err << "\n";
  }
  return json{{"channel", loaded.descriptor},
              {"backend", backend_json(cfg)},
              {"results",
               {{"strategy", to_string(fo.strategy)},
                {"tp_shortcut", fo.tp_shortcut},
                {"chi", chi_to_json(res.chi)},
                {"std_errors", std::move(errors)},
                {"max_abs_error_vs_oracle", max_err}}},
              {"settings",
               {{"distinct", res.distinct_settings},
                {"measured", res.measured_settings},
                {"inferred", res.inferred_settings}}}};
}

json run_validate(const Options& opt, std::ostream& pretty_out, int& exit_code) {
  const auto loaded = load_channel_source(opt);
  const ValidationReport report = validate_cptp(loaded.channel);
  const double dim = static_cast<double>(loaded.channel.dim());
  const bool trace_law = std::abs(report.chi_trace - Complex(dim)) <= report.tol;
  const bool ok = report.ok() && trace_law;
  if (!ok) exit_code = kPhysicalityFailure;
  if (opt.pretty) {
    pretty_out << "tp deviation       " << report.tp_deviation << "\n"
               << "min chi eigenvalue " << report.min_chi_eigenvalue << "\n"
               << "Tr chi             " << format_complex(report.chi_trace) << " (D = " << dim << ")\n"
               << (ok ? "PASS" : "FAIL") << "\n";
  }
  return json{{"channel", loaded.descriptor},
              {"results",
               {{"tp_deviation", report.tp_deviation},
                {"min_chi_eigenvalue", report.min_chi_eigenvalue},
                {"chi_trace", complex_to_json(report.chi_trace)},
                {"tolerance", report.tol},
                {"trace_preserving", report.trace_preserving()},
                {"completely_positive", report.completely_positive()},
                {"trace_law", trace_law},
                {"ok", ok}}}};
}

json run_plan(const Options& opt, std::ostream& pretty_out) {
  std::size_t dim = opt.dim;
  json channel = nullptr;
  if (!opt.channel_path.empty() || !opt.preset.empty()) {
    auto loaded = load_channel_source(opt);
    dim = loaded.channel.dim();
    channel = loaded.descriptor;
  }
  const ElementIndex target = parse_target(opt);
  const MeasurementPlan plan = plan_element(target, dim, opt.tp_shortcut);
  const auto weights = plan.setting_weights();
  json settings = json::array();
  for (std::size_t k = 0; k < plan.settings.size(); ++k) {
    const auto& s = plan.settings[k].setting;
    settings.push_back({{"input", vector_json(s.input)},
                        {"projector", vector_json(std::get<ProjectorObservable>(s.observable).phi)},
                        {"weight", complex_to_json(weights[k])},
                        {"inferred", plan.settings[k].inferred}});
  }
  json terms = json::array();
  for (const auto& t : plan.terms) {
    terms.push_back({{"setting", t.setting},
                     {"input_term", t.input_term},
                     {"observable_term", t.observable_term},
                     {"weight", complex_to_json(t.weight)}});
  }
  if (opt.pretty) {
    pretty_out << "target chi[" << target.e << target.f << ";" << target.g << target.h
               << "] = lambda[" << target.f << target.h << ";" << target.e << target.g << "], D = " << dim
               << "\n";
    for (std::size_t k = 0; k < plan.settings.size(); ++k) {
      pretty_out << "  setting " << k << ": weight " << format_complex(weights[k])
                 << (plan.settings[k].inferred ? " (inferred)" : "") << "\n";
    }
    pretty_out << plan.weighted_setting_count() << " settings\n";
  }
  return json{{"channel", channel},
              {"dim", dim},
              {"results", {{"target", target_json(target)}, {"settings", std::move(settings)},
                           {"terms", std::move(terms)}}},
              {"settings",
               {{"plan", plan.weighted_setting_count()}, {"measured", plan.measured_setting_count()}}}};
}

json run_convert(const Options& opt, std::ostream& pretty_out) {
  ChiMatrix input;
  json source;
  if (!opt.chi_path.empty()) {
    try {
      input = load_chi(opt.chi_path);
    } catch (const ParseError& e) {
      throw UsageError(std::string("--chi: ") + e.what());
    }
    source = {{"source", "file"}, {"path", opt.chi_path}};
  } else {
    auto loaded = load_channel_source(opt);
    input = chi_oracle(loaded.channel);
    source = loaded.descriptor;
  }
  const std::size_t n_qubits = qubit_count(input.dim);
  std::string to = opt.to;
  if (to.empty()) to = input.basis == ChiBasis::choi ? "pauli" : "choi";
  ChiMatrix output;
  if (to == "pauli") {
    output = input.basis == ChiBasis::pauli ? input : chi_choi_to_pauli(input, n_qubits);
  } else if (to == "choi") {
    output = input.basis == ChiBasis::choi ? input : chi_pauli_to_choi(input, n_qubits);
  } else {
    throw UsageError("--to must be 'choi' or 'pauli'");
  }
  if (opt.pretty) {
    pretty_out << (input.basis == ChiBasis::choi ? "choi" : "pauli") << " -> " << to << "\n";
    print_matrix(pretty_out, output.entries);
  }
  return json{{"channel", source},
              {"results",
               {{"from", input.basis == ChiBasis::choi ? "choi" : "pauli"},
                {"to", to},
                {"n_qubits", n_qubits},
                {"chi", chi_to_json(output)}}}};
}

void add_channel_flags(CLI::App* cmd, Options& opt) {
  cmd->add_option("--channel", opt.channel_path, "Channel JSON file");
  cmd->add_option("--preset", opt.preset,
                  "identity | bit-flip | phase-flip | depolarizing | amplitude-damping | random-cptp");
  cmd->add_option("--param", opt.params, "Preset parameter (repeatable)");
  cmd->add_option_function<std::size_t>(
      "--dim", [&opt](const std::size_t& d) { opt.dim = d; opt.dim_given = true; },
      "Hilbert space dimension for presets (default 2)");
}

void add_target_flags(CLI::App* cmd, Options& opt) {
  cmd->add_option("--target", opt.target, "Element as e,f,g,h (chi indexing)");
  cmd->add_flag("--lambda", opt.lambda_indexing, "Interpret --target as lambda indices a,b,c,d");
}

void add_backend_flags(CLI::App* cmd, Options& opt) {
  cmd->add_option("--backend", opt.backend, "exact | sampled");
  cmd->add_option("--shots", opt.shots, "Shots per setting (sampled backend)");
  cmd->add_option("--seed", opt.seed, "Master seed (default: $CHOI_SQPT_SEED or 0)");
}

void add_output_flags(CLI::App* cmd, Options& opt) {
  cmd->add_option("--output", opt.output, "Write the JSON report to this path");
  cmd->add_flag("--pretty", opt.pretty, "Human-readable output instead of JSON");
}

int emit(const Options& opt, json report, std::ostream& out, std::ostream& err) {
  const std::string text = report.dump(2) + "\n";
  if (!opt.output.empty()) {
    std::ofstream file(opt.output);
    if (!file) {
      err << "error: cannot write " << opt.output << "\n";
      return kInternalError;
    }
    file << text;
  }
  if (!opt.pretty && opt.output.empty()) out << text;
  return kOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options opt;
  CLI::App app{"Partial standard quantum process tomography in the Choi representation", kToolName};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  auto* element = app.add_subcommand("element", "Reconstruct one chi element");
  auto* full = app.add_subcommand("full", "Reconstruct the full chi matrix");
  auto* validate = app.add_subcommand("validate", "Check complete positivity, trace preservation and Tr chi");
  auto* plan = app.add_subcommand("plan", "Print the measurement plan for one chi element");
  auto* convert = app.add_subcommand("convert", "Convert chi between the Choi and Pauli bases");

  for (auto* cmd : {element, full, validate, plan, convert}) {
    add_channel_flags(cmd, opt);
    add_output_flags(cmd, opt);
  }
  for (auto* cmd : {element, plan}) add_target_flags(cmd, opt);
  for (auto* cmd : {element, full}) add_backend_flags(cmd, opt);
  for (auto* cmd : {element, full, plan}) {
    cmd->add_flag("--tp-shortcut", opt.tp_shortcut, "Infer |D-1> projector outcomes by normalization");
  }
  full->add_option("--strategy", opt.strategy, "choi-four | product-hermitian");
  full->add_option("--local-dim", opt.local_dim, "Local dimension d for product-hermitian (D = d^N)");
  convert->add_option("--chi", opt.chi_path, "Chi JSON file to convert");
  convert->add_option("--to", opt.to, "choi | pauli (default: the other basis)");

  std::vector<const char*> argv{kToolName};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kBadArguments;
  }

  const auto start = std::chrono::steady_clock::now();
  int exit_code = kOk;
  json body;
  std::string command;
  try {
    if (element->parsed()) {
      command = "element";
      body = run_element(opt, out);
    } else if (full->parsed()) {
      command = "full";
      body = run_full(opt, out);
    } else if (validate->parsed()) {
      command = "validate";
      body = run_validate(opt, out, exit_code);
    } else if (plan->parsed()) {
      command = "plan";
      body = run_plan(opt, out);
    } else {
      command = "convert";
      body = run_convert(opt, out);
    }
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kChannelParseFailure;
  } catch (const PhysicalityError& e) {
    err << "error: " << e.what() << "\n";
    return kPhysicalityFailure;
  } catch (const std::invalid_argument& e) {
    // UsageError, ArgumentError and DimensionError
    err << "error: " << e.what() << "\n";
    return kBadArguments;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternalError;
  }
  const double duration =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  json report{{"tool", kToolName}, {"version", kVersion}, {"command", command}, {"argv", args}};
  for (auto& [key, value] : body.items()) report[key] = value;
  report["duration_s"] = duration;
  const int emitted = emit(opt, std::move(report), out, err);
  return emitted != kOk ? emitted : exit_code;
}

} // namespace sqpt::cli
