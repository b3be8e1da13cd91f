#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "qtmlab/selftest.hpp"
#include "qtmlab/universal.hpp"

using json = nlohmann::ordered_json;
using namespace qtmlab;

namespace {

std::string dump2(const json& j) {
  return j.dump(2, ' ', false, nlohmann::json::error_handler_t::replace);
}

void emit(const std::string& text, const std::string& output_path) {
  if (output_path.empty()) {
    std::cout << text;
    if (text.empty() || text.back() != '\n') std::cout << "\n";
    return;
  }
  std::ofstream f(output_path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + output_path);
  f << text;
}

Vec bits_to_vec(const std::string& bits) {
  size_t value = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') throw std::invalid_argument("input must be a bit string");
    value = (value << 1) | (c == '1');
  }
  Vec v = Vec::Zero(size_t(1) << bits.size());
  v(value) = 1.0;
  return v;
}

qubit_string load_input(const std::string& bits, const std::string& state_path) {
  if (!state_path.empty()) {
    std::ifstream f(state_path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot read " + state_path);
    std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    return qubit_string::from_json(text);
  }
  return qubit_string::fixed_length((int)bits.size(), bits_to_vec(bits));
}

rational parse_rational(const std::string& s) { return rational::parse(s); }

int cmd_validate(const std::string& path, double tol, bool exact,
                 const std::string& output_path) {
  machine m;
  try {
    m = load_machine(path);
  } catch (const parse_error& e) {
    emit(dump2(json{{"error", e.what()}, {"line", e.line}}), output_path);
    return 1;
  }
  validation_report rep = validate_machine(m, tol, exact);
  json out{{"machine", m.name}, {"ok", rep.ok}};
  out["violations"] = json::array();
  for (const auto& v : rep.violations) {
    out["violations"].push_back(
        {{"which", v.which}, {"detail", v.detail}, {"magnitude", v.magnitude}});
  }
  emit(dump2(out), output_path);
  return rep.ok ? 0 : 2;
}

int cmd_simulate(const std::string& path, const std::string& bits,
                 const std::string& state_path, int steps, const std::string& output_path) {
  machine m = load_machine(path);
  qubit_string input = load_input(bits, state_path);
  int n = input.max_len;

  config_space space = build_space(m, n, steps);
  step_operator op = build_step_operator(space);
  global_state st = initial_state(space, input);
  std::vector<double> traj(steps + 1);
  traj[0] = st.final_overlap();
  for (int t = 1; t <= steps; ++t) {
    evolve(st, op, 1);
    traj[t] = st.final_overlap();
  }

  json out{{"machine", m.name}, {"n", n}, {"steps", steps}};
  out["overlaps"] = traj;
  auto tau = halting_time(traj, 1e-9);
  out["halting_time"] = tau ? json(*tau) : json(nullptr);
  out["output"] = tau ? json::parse(read_output(st).to_json()) : json(nullptr);
  emit(dump2(out), output_path);
  return 0;
}

int cmd_spectrum(const std::string& path, int n, int t_max, const std::string& mode,
                 const std::string& delta_str, bool with_basis, const std::string& format,
                 const std::string& output_path) {
  machine m = load_machine(path);
  halting_spectrum spec;
  if (mode == "approx") {
    if (delta_str.empty()) throw std::invalid_argument("approx mode needs --delta");
    spec = approx_spectrum(m, n, t_max, parse_rational(delta_str));
  } else if (mode == "exact") {
    spec = exact_spectrum(m, n, t_max);
  } else {
    throw std::invalid_argument("mode must be exact or approx");
  }
  if (format == "csv") {
    std::string csv = "t,dim,epsilon\n";
    for (const auto& e : spec.entries) {
      csv += std::to_string(e.t) + "," + std::to_string(e.space.dim()) + "," +
             (e.epsilon ? e.epsilon->str() : "") + "\n";
    }
    emit(csv, output_path);
  } else {
    emit(spectrum_to_json(spec, with_basis), output_path);
  }
  return 0;
}

int cmd_encode(const std::string& path, const std::string& bits,
               const std::string& state_path, int horizon, const std::string& mode,
               const std::string& container_path, const std::string& output_path) {
  machine m = load_machine(path);
  qubit_string input = load_input(bits, state_path);
  code_mode cm = mode == "approx" ? code_mode::approximate : code_mode::exact;
  encoded_program prog = encode(m, input, horizon, cm);
  std::string container = prog.to_bytes();
  if (!container_path.empty()) {
    std::ofstream f(container_path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + container_path);
    f << container;
  }
  json out{{"machine", m.name},
           {"n", prog.n},
           {"code_word", prog.code_word},
           {"payload_qubits", prog.payload.max_len},
           {"total_qubits", prog.n + 1},
           {"machine_tag_bits", prog.machine_tag_bits()},
           {"container_bytes", container.size()}};
  emit(dump2(out), output_path);
  return 0;
}

int cmd_decode(const std::string& container_path, const std::string& delta_str, int horizon,
               const std::string& mode, const std::string& output_path) {
  std::ifstream f(container_path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read " + container_path);
  std::string bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  encoded_program prog = encoded_program::from_bytes(bytes);
  code_mode cm = mode == "approx" ? code_mode::approximate : code_mode::exact;
  qubit_string out = decode(prog, parse_rational(delta_str), horizon, cm);
  emit(out.to_json(), output_path);
  return 0;
}

int cmd_roundtrip(const std::string& path, const std::string& bits,
                  const std::string& state_path, const std::string& delta_str, int t_max,
                  const std::string& mode, const std::string& format,
                  const std::string& output_path) {
  machine m = load_machine(path);
  qubit_string input = load_input(bits, state_path);
  int n = input.max_len;
  rational delta = parse_rational(delta_str);

  config_space space = build_space(m, n, t_max);
  step_operator op = build_step_operator(space);
  global_state st = initial_state(space, input);
  std::vector<double> traj(t_max + 1);
  traj[0] = st.final_overlap();
  for (int t = 1; t <= t_max; ++t) {
    evolve(st, op, 1);
    traj[t] = st.final_overlap();
  }
  auto tau = halting_time(traj, 1e-8);
  if (!tau) {
    emit(dump2(json{{"error", "input does not halt within the horizon"},
               {"machine", m.name},
               {"t_max", t_max}}),
         output_path);
    return 3;
  }

  code_mode cm = mode == "approx" ? code_mode::approximate : code_mode::exact;
  encoded_program prog = encode(m, input, t_max, cm);
  qubit_string back = decode(prog, delta, t_max, cm);

  global_state st2 = initial_state(space, input);
  evolve(st2, op, *tau);
  qubit_string direct = read_output(st2);
  int k = std::max(back.max_len, direct.max_len);
  double dist = trace_distance(back.widened(k), direct.widened(k));

  if (format == "csv") {
    std::string csv =
        "machine,n,halting_time,code_word_bits,payload_qubits,machine_tag_bits,trace_"
        "distance,within_delta\n";
    csv += m.name + "," + std::to_string(n) + "," + std::to_string(*tau) + "," +
           std::to_string(prog.code_word.size()) + "," +
           std::to_string(prog.payload.max_len) + "," +
           std::to_string(prog.machine_tag_bits()) + "," + std::to_string(dist) + "," +
           (dist < delta.to_double() ? "1" : "0") + "\n";
    emit(csv, output_path);
  } else {
    json out{{"machine", m.name},
             {"n", n},
             {"halting_time", *tau},
             {"code_word", prog.code_word},
             {"payload_qubits", prog.payload.max_len},
             {"total_qubits", n + 1},
             {"machine_tag_bits", prog.machine_tag_bits()},
             {"trace_distance", dist},
             {"within_delta", dist < delta.to_double()}};
    emit(dump2(out), output_path);
  }
  return 0;
}

int cmd_selftest(uint64_t seed, bool sabotage, const std::string& fixtures,
                 const std::string& output_path) {
  selftest_result res =
      fixtures.empty() ? run_selftest(seed, sabotage) : run_selftest(seed, sabotage, fixtures);
  emit(res.report, output_path);
  return res.ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantum Turing machine laboratory"};
  app.require_subcommand(1);

  std::string machine_path, bits, state_path, delta_str, mode = "exact", format = "json";
  std::string output_path, container_path;
  double tol = 1e-10;
  bool exact = false, with_basis = false, sabotage = false;
  int n = 0, steps = 1, t_max = 10, horizon = 10;
  uint64_t seed = 7;
  std::string fixtures;

  auto* validate = app.add_subcommand("validate", "check machine well-formedness");
  validate->add_option("machine", machine_path)->required();
  validate->add_option("--tol", tol);
  validate->add_flag("--exact", exact, "decide in exact arithmetic");
  validate->add_option("--output", output_path);

  auto* simulate = app.add_subcommand("simulate", "evolve an input and read the output");
  simulate->add_option("--machine", machine_path)->required();
  simulate->add_option("--input", bits);
  simulate->add_option("--state", state_path, "qubit-string JSON file instead of --input");
  simulate->add_option("--steps", steps)->required();
  simulate->add_option("--output", output_path);

  auto* spectrum = app.add_subcommand("spectrum", "halting times and space dimensions");
  spectrum->add_option("--machine", machine_path)->required();
  spectrum->add_option("--n", n)->required();
  spectrum->add_option("--tmax", t_max)->required();
  spectrum->add_option("--mode", mode, "exact or approx");
  spectrum->add_option("--delta", delta_str, "rational like 1/5, approx mode");
  spectrum->add_flag("--basis", with_basis, "include basis vectors");
  spectrum->add_option("--format", format, "json or csv");
  spectrum->add_option("--output", output_path);

  auto* encode_cmd = app.add_subcommand("encode", "compress an input against its machine");
  encode_cmd->add_option("--machine", machine_path)->required();
  encode_cmd->add_option("--input", bits);
  encode_cmd->add_option("--state", state_path);
  encode_cmd->add_option("--horizon", horizon)->required();
  encode_cmd->add_option("--mode", mode);
  encode_cmd->add_option("--out", container_path, "write the binary container here");
  encode_cmd->add_option("--output", output_path);

  auto* decode_cmd = app.add_subcommand("decode", "run a container through the pipeline");
  decode_cmd->add_option("--in", container_path)->required();
  decode_cmd->add_option("--delta", delta_str)->required();
  decode_cmd->add_option("--horizon", horizon)->required();
  decode_cmd->add_option("--mode", mode);
  decode_cmd->add_option("--output", output_path);

  auto* roundtrip = app.add_subcommand("roundtrip", "encode, decode and compare");
  roundtrip->add_option("--machine", machine_path)->required();
  roundtrip->add_option("--input", bits);
  roundtrip->add_option("--state", state_path);
  roundtrip->add_option("--delta", delta_str)->required();
  roundtrip->add_option("--tmax", t_max)->required();
  roundtrip->add_option("--mode", mode);
  roundtrip->add_option("--format", format);
  roundtrip->add_option("--output", output_path);

  auto* selftest = app.add_subcommand("selftest", "run the invariant suites");
  selftest->add_option("--seed", seed);
  selftest->add_flag("--sabotage", sabotage, "force one suite to fail");
  selftest->add_option("--fixtures", fixtures, "fixture directory override");
  selftest->add_option("--output", output_path);

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) return cmd_validate(machine_path, tol, exact, output_path);
    if (simulate->parsed())
      return cmd_simulate(machine_path, bits, state_path, steps, output_path);
    if (spectrum->parsed())
      return cmd_spectrum(machine_path, n, t_max, mode, delta_str, with_basis, format,
                          output_path);
    if (encode_cmd->parsed())
      return cmd_encode(machine_path, bits, state_path, horizon, mode, container_path,
                        output_path);
    if (decode_cmd->parsed())
      return cmd_decode(container_path, delta_str, horizon, mode, output_path);
    if (roundtrip->parsed())
      return cmd_roundtrip(machine_path, bits, state_path, delta_str, t_max, mode, format,
                           output_path);
    if (selftest->parsed()) return cmd_selftest(seed, sabotage, fixtures, output_path);
  } catch (const parse_error& e) {
    std::cout << dump2(json{{"error", e.what()}, {"line", e.line}}) << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cout << dump2(json{{"error", e.what()}}) << "\n";
    return 1;
  }
  return 0;
}
