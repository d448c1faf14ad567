#pragma once

#include <CLI11.hpp>

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "tenrank/json_io.hpp"
#include "tenrank/tenrank.hpp"

#ifndef TENRANK_WITNESS_DIR
#define TENRANK_WITNESS_DIR "witnesses"
#endif

namespace tenrank::cli {

using nlohmann::json;

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int failure = 1;
inline constexpr int usage = 2;
inline constexpr int witness_mismatch = 3;
inline constexpr int verdict_no = 4;
inline constexpr int verdict_unknown = 5;
inline constexpr int check_failed = 6;
inline constexpr int demo_failed = 7;
}  // namespace exit_code

struct WitnessMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Context {
  std::ostream& out;
  std::ostream& err;
  bool json_output = false;
  std::uint64_t seed = 0;
};

// --- name and file resolution ----------------------------------------------

struct ParsedName {
  std::string name;
  std::vector<std::size_t> args;
};

/// "NAME" or "NAME(a,b,...)", case-insensitive, '-' treated as '_'.
inline std::optional<ParsedName> parse_name(const std::string& text) {
  static const std::regex re(R"(^([A-Za-z][A-Za-z0-9_\-]*)(?:\((\d+(?:,\d+)*)\))?$)");
  std::smatch m;
  if (!std::regex_match(text, m, re)) return std::nullopt;
  ParsedName out;
  out.name = m[1].str();
  for (auto& ch : out.name) ch = ch == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  if (m[2].matched) {
    std::stringstream ss(m[2].str());
    std::string part;
    while (std::getline(ss, part, ',')) out.args.push_back(std::stoul(part));
  }
  return out;
}

inline std::optional<ExactTensor> builtin_state_by_name(const std::string& text) {
  auto p = parse_name(text);
  if (!p) return std::nullopt;
  auto positive = [&](std::size_t count) {
    if (p->args.size() != count || std::any_of(p->args.begin(), p->args.end(), [](std::size_t x) { return x == 0; }))
      throw InputError("'" + text + "': " + p->name + " takes " + std::to_string(count) + " positive parameter(s)");
  };
  if (p->name == "GHZ") {
    if (p->args.empty()) return ghz_state(2);
    positive(1);
    return ghz_state(p->args[0]);
  }
  if (p->name == "MATMUL") {
    if (p->args.empty()) return matmul_tensor(2, 2, 2);
    positive(3);
    return matmul_tensor(p->args[0], p->args[1], p->args[2]);
  }
  for (const char* plain : {"W", "EPR", "PHI3", "W2", "PRODUCT"})
    if (p->name == plain) {
      positive(0);
      return builtin_state({p->name});
    }
  return std::nullopt;
}

inline std::optional<ExactDecomposition> builtin_decomposition_by_name(const std::string& text) {
  auto p = parse_name(text);
  if (!p) return std::nullopt;
  if (p->name == "GHZ") {
    if (p->args.size() > 1 || (p->args.size() == 1 && p->args[0] == 0))
      throw InputError("'" + text + "': GHZ takes one positive parameter");
    return ghz_decomposition(p->args.empty() ? 2 : p->args[0]);
  }
  if (!p->args.empty()) return std::nullopt;
  if (p->name == "STRASSEN7") return strassen7();
  if (p->name == "STRASSEN7_PHI3") return strassen7_phi3();
  if (p->name == "FIDUCCIA8_W2" || p->name == "FIDUCCIA8") return fiduccia8_w2();
  if (p->name == "W3") return w3_decomposition();
  return std::nullopt;
}

/// Target state that a builtin decomposition reconstructs, as a state name.
inline std::string builtin_decomposition_target(const std::string& text) {
  auto p = parse_name(text);
  if (p->name == "GHZ") return "GHZ(" + std::to_string(p->args.empty() ? 2 : p->args[0]) + ")";
  if (p->name == "STRASSEN7") return "MATMUL(2,2,2)";
  if (p->name == "STRASSEN7_PHI3") return "PHI3";
  if (p->name == "W3") return "W";
  return "W2";
}

inline bool is_file(const std::string& path) {
  std::error_code ec;
  return std::filesystem::is_regular_file(path, ec);
}

/// A state given as a JSON file path or a builtin name.
inline ExactTensor load_state(const std::string& input) {
  if (is_file(input)) return io::tensor_from_json(io::read_json_file(input));
  if (auto t = builtin_state_by_name(input)) return *t;
  throw InputError("'" + input + "' is neither a readable tensor file nor a builtin state name");
}

struct LoadedWitness {
  ExactDecomposition decomposition;
  std::string label;
};

/// A decomposition given as a file path, a file in the witness directory, or a
/// builtin name. Files carrying a "target" state name are re-verified here.
inline LoadedWitness load_witness(const std::string& input) {
  std::string path;
  if (is_file(input)) path = input;
  else if (const std::string in_dir = std::string(TENRANK_WITNESS_DIR) + "/" + input; is_file(in_dir)) path = in_dir;
  if (path.empty()) {
    if (auto d = builtin_decomposition_by_name(input)) return {std::move(*d), input};
    throw InputError("'" + input + "' is neither a readable decomposition file nor a builtin decomposition name");
  }
  const json j = io::read_json_file(path);
  ExactDecomposition d = io::decomposition_from_json(j);
  if (j.contains("target")) {
    const std::string target_name = j.at("target").get<std::string>();
    auto target = builtin_state_by_name(target_name);
    if (!target) throw InputError(path + ": unknown target state '" + target_name + "'");
    if (!(target->dims() == d.dims()) || !verify_decomposition(*target, d))
      throw WitnessMismatch(path + " does not reconstruct its declared target " + target_name);
  }
  return {std::move(d), path};
}

inline std::string dims_text(const Dims& d) {
  return "[" + std::to_string(d.a) + "," + std::to_string(d.b) + "," + std::to_string(d.c) + "]";
}

inline std::string scalar_text(const Scalar& s) {
  if (s.is_real()) return s.real().get_str();
  return s.real().get_str() + (s.imag() < 0 ? "" : "+") + s.imag().get_str() + "i";
}

inline std::string fixed(double x, int digits = 3) {
  std::ostringstream os;
  os << std::scientific << std::setprecision(digits) << x;
  return os.str();
}

// --- state -----------------------------------------------------------------

struct StateArgs {
  std::string input;
  std::size_t power = 1;
  std::string out;
};

inline int cmd_state(Context& ctx, const StateArgs& a) {
  ExactTensor t = load_state(a.input);
  if (a.power == 0) throw InputError("--n must be positive");
  if (a.power > 1) t = tensor_power(t, a.power);
  const json tj = io::tensor_to_json(t);
  if (a.out == "-") {
    ctx.out << tj.dump() << '\n';
    return exit_code::ok;
  }
  if (!a.out.empty()) io::write_json_file(a.out, tj);
  if (ctx.json_output) {
    ctx.out << json{{"dims", io::dims_to_json(t.dims())},
                    {"nonzeros", t.nonzero_count()},
                    {"out", a.out.empty() ? json(nullptr) : json(a.out)}}
                   .dump()
            << '\n';
  } else {
    ctx.out << "dims " << dims_text(t.dims()) << " nonzeros " << t.nonzero_count() << '\n';
    if (!a.out.empty()) ctx.out << "wrote " << a.out << '\n';
  }
  return exit_code::ok;
}

// --- rank ------------------------------------------------------------------

struct RankArgs {
  std::string input;
  std::string witness;
  std::size_t als_rank = 0;
  std::size_t restarts = 20;
};

inline int cmd_rank(Context& ctx, const RankArgs& a) {
  const ExactTensor t = load_state(a.input);
  std::optional<LoadedWitness> witness;
  if (!a.witness.empty()) witness = load_witness(a.witness);

  const auto fr = flattening_ranks(t);
  const auto fact = RankFacts::defaults().lookup(t);
  const std::size_t lower = rank_lower_bound(t);

  std::optional<std::size_t> upper;
  auto offer = [&upper](std::size_t r) { upper = upper ? std::min(*upper, r) : r; };
  for (const auto& d : builtin_witnesses_for(t)) offer(d.size());
  offer(slice_witness(t).size());

  json report{{"dims", io::dims_to_json(t.dims())}, {"flattening_ranks", {fr[0], fr[1], fr[2]}}};
  report["registered"] = fact ? json{{"name", fact->name}, {"rank", fact->rank}, {"note", fact->note}} : json(nullptr);

  bool mismatch = false;
  std::string witness_line;
  if (witness) {
    const auto& d = witness->decomposition;
    bool match = false;
    std::optional<Index3> first;
    if (d.dims() == t.dims()) {
      auto res = verify_decomposition(t, d);
      match = res.match;
      first = res.first_mismatch;
    }
    mismatch = !match;
    json wj{{"source", witness->label}, {"terms", d.size()}, {"match", match}};
    if (first) wj["first_mismatch"] = {(*first)[0], (*first)[1], (*first)[2]};
    if (!(d.dims() == t.dims())) wj["dims_mismatch"] = io::dims_to_json(d.dims());
    report["witness"] = wj;
    if (match) offer(d.size());
    witness_line = "witness " + witness->label + ": " + std::to_string(d.size()) + " terms, " +
                   (match ? std::string("exact match")
                          : !(d.dims() == t.dims()) ? "dims " + dims_text(d.dims()) + " do not match"
                                                     : "MISMATCH at (" + std::to_string((*first)[0]) + "," +
                                                           std::to_string((*first)[1]) + "," +
                                                           std::to_string((*first)[2]) + ")");
  }

  std::string als_line;
  if (a.als_rank > 0) {
    AlsConfig cfg;
    cfg.seed = ctx.seed;
    cfg.restarts = a.restarts;
    const AlsResult res = als_search(to_float(t), a.als_rank, cfg);
    json aj{{"rank", a.als_rank},           {"found", res.found},
            {"residual", res.residual},     {"border_flag", res.border_flag},
            {"restart", res.restart},       {"sweeps", res.sweeps},
            {"max_column_norm", res.max_column_norm}, {"cancellation_ratio", res.cancellation_ratio}};
    if (res.found) {
      if (auto exact = rationalize(res.decomposition, t)) {
        aj["rationalized"] = true;
        offer(exact->size());
      } else {
        aj["rationalized"] = false;
      }
    }
    report["als"] = aj;
    als_line = "als r=" + std::to_string(a.als_rank) + ": " + (res.found ? "Found" : "NotFound") +
               ", residual=" + fixed(res.residual) + ", border_flag=" + (res.border_flag ? "true" : "false") +
               ", max_column_norm=" + fixed(res.max_column_norm) + ", restart=" + std::to_string(res.restart) +
               ", sweeps=" + std::to_string(res.sweeps);
  }

  report["lower"] = lower;
  report["upper"] = upper ? json(*upper) : json(nullptr);
  const bool exact = upper && *upper == lower;
  report["rank"] = exact ? json(lower) : json(nullptr);

  if (ctx.json_output) {
    ctx.out << report.dump() << '\n';
  } else {
    ctx.out << "dims " << dims_text(t.dims()) << '\n';
    ctx.out << "flattening ranks A=" << fr[0] << " B=" << fr[1] << " C=" << fr[2] << '\n';
    if (fact) ctx.out << "registered rank " << fact->rank << " (" << fact->name << ": " << fact->note << ")\n";
    if (!witness_line.empty()) ctx.out << witness_line << '\n';
    if (!als_line.empty()) ctx.out << als_line << '\n';
    ctx.out << "upper=" << (upper ? std::to_string(*upper) : "?") << " lower=" << lower;
    if (exact) ctx.out << " rank=" << lower;
    ctx.out << '\n';
  }
  return mismatch ? exit_code::witness_mismatch : exit_code::ok;
}

// --- verify ----------------------------------------------------------------

struct VerifyArgs {
  std::string input;
  std::string witness;
  std::string builtin;
  std::string out;
  std::size_t power = 1;
  std::size_t probes = kDefaultProbeCount;
};

inline int cmd_verify(Context& ctx, const VerifyArgs& a) {
  if (!a.builtin.empty()) {
    auto d = builtin_decomposition_by_name(a.builtin);
    if (!d) throw InputError("unknown builtin decomposition '" + a.builtin + "'");
    const std::string target_name = builtin_decomposition_target(a.builtin);
    if (!verify_decomposition(*builtin_state_by_name(target_name), *d))
      throw WitnessMismatch("builtin " + a.builtin + " does not reconstruct " + target_name);
    json j = io::decomposition_to_json(*d);
    j["target"] = target_name;
    if (a.out.empty() || a.out == "-") ctx.out << j.dump(1) << '\n';
    else {
      io::write_json_file(a.out, j);
      ctx.out << (ctx.json_output ? json{{"builtin", a.builtin}, {"terms", d->size()}, {"target", target_name},
                                         {"out", a.out}}.dump()
                                  : "wrote " + a.out + " (" + std::to_string(d->size()) + " terms, target " +
                                        target_name + ")")
              << '\n';
    }
    return exit_code::ok;
  }
  if (a.input.empty() || a.witness.empty()) throw InputError("verify needs TARGET and WITNESS, or --builtin NAME");
  if (a.power == 0) throw InputError("--power must be positive");
  const ExactTensor t = load_state(a.input);
  const LoadedWitness w = load_witness(a.witness);

  bool match = false, randomized = false;
  std::size_t terms = 0;
  std::optional<Index3> first;
  if (a.power == 1) {
    if (!(t.dims() == w.decomposition.dims()))
      throw WitnessMismatch("witness dims " + dims_text(w.decomposition.dims()) + " do not match target dims " +
                            dims_text(t.dims()));
    auto res = verify_decomposition(t, w.decomposition);
    match = res.match;
    first = res.first_mismatch;
    terms = w.decomposition.size();
  } else {
    const TensorPower tp(t, a.power);
    const PowerDecomposition pd(w.decomposition, a.power, term_cap_from_env());
    if (!(tp.dims() == pd.dims())) throw WitnessMismatch("witness dims do not match target dims");
    auto res = verify_decomposition(tp, pd, a.probes, ctx.seed);
    match = res.match;
    randomized = res.randomized;
    terms = res.terms;
  }
  if (ctx.json_output) {
    json j{{"match", match}, {"terms", terms}, {"power", a.power}, {"randomized", randomized}};
    if (randomized) j["probes"] = a.probes;
    if (first) j["first_mismatch"] = {(*first)[0], (*first)[1], (*first)[2]};
    ctx.out << j.dump() << '\n';
  } else {
    ctx.out << terms << " terms, " << (match ? "exact match" : "MISMATCH");
    if (randomized) ctx.out << " (randomized contraction, " << a.probes << " probes)";
    if (first) ctx.out << " at (" << (*first)[0] << "," << (*first)[1] << "," << (*first)[2] << ")";
    ctx.out << '\n';
  }
  return match ? exit_code::ok : exit_code::witness_mismatch;
}

// --- convert ---------------------------------------------------------------

struct ConvertArgs {
  std::string input;
  std::size_t ghz = 0;
  std::string witness;
  bool simulate = false;
  bool search = true;
  std::string out = "protocol.json";
};

inline int cmd_convert(Context& ctx, const ConvertArgs& a) {
  if (a.ghz == 0) throw InputError("--ghz must be positive");
  const ExactTensor t = load_state(a.input);
  std::optional<ExactDecomposition> witness;
  if (!a.witness.empty()) {
    auto w = load_witness(a.witness);
    if (!(w.decomposition.dims() == t.dims()) || !verify_decomposition(t, w.decomposition))
      throw WitnessMismatch("witness " + w.label + " does not reconstruct the target");
    witness = std::move(w.decomposition);
  }
  DecideOptions opts;
  opts.search = a.search;
  opts.als.seed = ctx.seed;
  const ConvertVerdict v = decide_ghz_conversion(t, a.ghz, witness, RankFacts::defaults(), opts);
  json report = io::verdict_to_json(v);

  std::string sim_text;
  if (a.simulate && v.kind == VerdictKind::Yes) {
    const SloccProtocol p = build_protocol(*v.witness, a.ghz);
    io::write_json_file(a.out, io::protocol_to_json(p));
    const SimulationResult sim = simulate_ghz(p);
    const FloatTensor target = to_float(t);
    const double dev = relative_deviation(sim.outcome, target);
    const double fid = fidelity(sim.outcome, target);
    report["simulation"] = {{"protocol", a.out},       {"fidelity", fid},
                            {"relative_deviation", dev}, {"probability", sim.probability}};
    std::ostringstream os;
    os << std::setprecision(17) << "protocol written to " << a.out << "\nfidelity=" << fid
       << " relative_deviation=" << fixed(dev) << " probability=" << sim.probability << '\n';
    sim_text = os.str();
  }
  ctx.out << report.dump() << '\n' << (ctx.json_output ? "" : sim_text);
  switch (v.kind) {
    case VerdictKind::Yes: return exit_code::ok;
    case VerdictKind::No: return exit_code::verdict_no;
    case VerdictKind::Unknown: return exit_code::verdict_unknown;
  }
  return exit_code::failure;
}

// --- classify --------------------------------------------------------------

inline int cmd_classify(Context& ctx, const std::string& input) {
  const ExactTensor t = load_state(input);
  const ThreeQubitClass cls = classify_three_qubit(t);
  const Scalar det = hyperdeterminant(t);
  const auto fr = flattening_ranks(t);
  const PencilResult pencil = rank_leq2_test_2x2x2(t);
  if (ctx.json_output) {
    ctx.out << json{{"class", to_string(cls)},
                    {"hyperdeterminant", io::scalar_to_json(det)},
                    {"flattening_ranks", {fr[0], fr[1], fr[2]}},
                    {"pencil", to_string(pencil.verdict)}}
                   .dump()
            << '\n';
  } else {
    ctx.out << "class " << to_string(cls) << '\n'
            << "hyperdeterminant " << scalar_text(det) << '\n'
            << "flattening ranks A=" << fr[0] << " B=" << fr[1] << " C=" << fr[2] << '\n'
            << "pencil " << to_string(pencil.verdict) << '\n';
  }
  return exit_code::ok;
}

// --- matmul ----------------------------------------------------------------

struct MatmulArgs {
  std::size_t n = 1;
  std::size_t cutoff = 1;
  bool bench = false;
  bool check = false;
  bool use_float = false;
  std::size_t reps = 1;
};

template <typename T>
bool close_to(const Matrix<T>& x, const Matrix<T>& y) {
  if constexpr (std::is_same_v<T, Scalar>) {
    return x == y;
  } else {
    double scale = 1.0;
    for (const auto& v : y.data()) scale = std::max(scale, std::abs(v));
    for (std::size_t i = 0; i < x.data().size(); ++i)
      if (std::abs(x.data()[i] - y.data()[i]) > 1e-9 * scale) return false;
    return true;
  }
}

template <typename T>
int run_matmul(Context& ctx, const MatmulArgs& a, const Matrix<T>& x, const Matrix<T>& y) {
  bool all_match = true;
  MulCount last;
  for (std::size_t rep = 0; rep < a.reps; ++rep) {
    const auto start = std::chrono::steady_clock::now();
    auto [z, count] = strassen_multiply(x, y, a.cutoff);
    const auto wall =
        std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - start).count();
    last = count;
    if (a.bench)
      ctx.out << json{{"n", a.n}, {"cutoff", a.cutoff}, {"nonscalar_mults", count.nonscalar_mults},
                      {"additions", count.additions}, {"wall_ns", wall}}
                     .dump()
              << '\n';
    if (a.check && rep == 0) all_match = close_to(z, naive_multiply(x, y).first);
  }
  const std::size_t size = x.rows();
  if (!a.bench) {
    if (ctx.json_output) {
      json j{{"n", a.n}, {"size", size}, {"cutoff", a.cutoff}, {"nonscalar_mults", last.nonscalar_mults},
             {"additions", last.additions}};
      if (a.check) j["check"] = all_match;
      ctx.out << j.dump() << '\n';
    } else {
      ctx.out << "n=" << a.n << " size=" << size << " cutoff=" << a.cutoff << " nonscalar_mults=" << last.nonscalar_mults
              << " additions=" << last.additions << '\n';
      if (a.check) ctx.out << (all_match ? "exact match vs naive" : "MISMATCH vs naive") << '\n';
    }
  } else if (a.check) {
    ctx.err << (all_match ? "exact match vs naive" : "MISMATCH vs naive") << '\n';
  }
  return all_match ? exit_code::ok : exit_code::check_failed;
}

inline int cmd_matmul(Context& ctx, const MatmulArgs& a) {
  if (a.check && a.n > 10) throw InputError("--check supports --n up to 10");
  if (a.n > 20) throw InputError("--n must be at most 20");
  if (a.cutoff == 0) throw InputError("--cutoff must be positive");
  if (a.reps == 0) throw InputError("--reps must be positive");
  const std::size_t size = std::size_t{1} << a.n;
  RationalSampler rng(ctx.seed);
  const auto x = random_matrix(size, size, rng), y = random_matrix(size, size, rng);
  if (a.use_float) return run_matmul(ctx, a, to_float(x), to_float(y));
  return run_matmul(ctx, a, x, y);
}

// --- demo ------------------------------------------------------------------

class ClaimLog {
 public:
  explicit ClaimLog(Context& ctx) : ctx_(ctx) {}

  bool check(const std::string& claim, bool pass, const std::string& detail = {}) {
    all_pass_ = all_pass_ && pass;
    claims_.push_back({{"claim", claim}, {"pass", pass}, {"detail", detail}});
    if (!ctx_.json_output)
      ctx_.out << claim << (detail.empty() ? "" : " (" + detail + ")") << ": " << (pass ? "PASS" : "FAIL") << '\n';
    return pass;
  }

  int finish(const std::string& demo, const std::string& summary) {
    if (ctx_.json_output)
      ctx_.out << json{{"demo", demo}, {"claims", claims_}, {"summary", summary}, {"pass", all_pass_}}.dump() << '\n';
    else
      ctx_.out << summary << ": " << (all_pass_ ? "PASS" : "FAIL") << '\n';
    return all_pass_ ? exit_code::ok : exit_code::demo_failed;
  }

 private:
  Context& ctx_;
  json claims_ = json::array();
  bool all_pass_ = true;
};

inline bool simulate_and_check(ClaimLog& log, const std::string& label, const ExactTensor& target,
                               const ExactDecomposition& d, std::size_t levels) {
  const SloccProtocol p = build_protocol(d, levels);
  const SimulationResult sim = simulate_ghz(p);
  const double dev = relative_deviation(sim.outcome, to_float(target));
  std::ostringstream detail;
  detail << "deviation " << fixed(dev) << ", probability " << std::setprecision(6) << sim.probability;
  return log.check(label, dev <= 1e-10 && sim.probability > 0.0, detail.str());
}

/// n-th power of the Strassen-derived PHI3 witness, checked against PHI3^(x)n.
inline bool check_phi3_power(ClaimLog& log, std::size_t n, std::uint64_t seed) {
  const PowerDecomposition pd(strassen7_phi3(), n, term_cap_from_env());
  const std::size_t levels_log2 = static_cast<std::size_t>(std::ceil(n * std::log2(7.0)));
  const std::size_t levels = std::size_t{1} << levels_log2;
  log.check(std::to_string(pd.size()) + " <= " + std::to_string(levels) + " = 2^" + std::to_string(levels_log2),
            pd.size() <= levels);
  const auto res = verify_decomposition(TensorPower(phi3_state(), n), pd, kDefaultProbeCount, seed);
  return log.check("PHI3^" + std::to_string(n) + " witness with " + std::to_string(res.terms) + " terms verifies",
                   res.match, res.randomized ? "randomized contraction, 20 probes" : "dense reconstruction");
}

/// Three EPR pairs shared pairwise: A holds (x,y), B holds (x,z), C holds (y,z).
inline ExactTensor epr_triangle() {
  const ExactTensor e = epr_state();
  ExactTensor out(Dims{4, 4, 4});
  for (std::size_t x = 0; x < 2; ++x)
    for (std::size_t x2 = 0; x2 < 2; ++x2)
      for (std::size_t y = 0; y < 2; ++y)
        for (std::size_t y2 = 0; y2 < 2; ++y2)
          for (std::size_t z = 0; z < 2; ++z)
            for (std::size_t z2 = 0; z2 < 2; ++z2)
              out(2 * x + y, 2 * x2 + z, 2 * y2 + z2) = e(x, x2, 0) * e(y, y2, 0) * e(z, z2, 0);
  return out;
}

inline int cmd_demo(Context& ctx, const std::string& name) {
  ClaimLog log(ctx);
  if (name == "nonadditivity") {
    log.check("3-term witness reconstructs W (rk(W) <= 3)", verify_decomposition(w_state(), w3_decomposition()).match);
    log.check("W is in the W class", classify_three_qubit(w_state()) == ThreeQubitClass::W);
    log.check("pencil test certifies rk(W) >= 3", rank_leq2_test_2x2x2(w_state()).verdict == PencilVerdict::RankGeq3);
    log.check("8-term witness reconstructs W(x)W", verify_decomposition(w2_state(), fiduccia8_w2()).match &&
                                                       fiduccia8_w2().size() == 8);
    const std::size_t squared = decomposition_power(w3_decomposition(), 2).size();
    log.check("8 < 3^2 = " + std::to_string(squared), fiduccia8_w2().size() < squared);
    const auto b = schmidt_measure_bounds(w2_state(), fiduccia8_w2());
    std::ostringstream detail;
    detail << "upper " << *b.upper << " < " << std::setprecision(6) << 2.0 * std::log2(3.0);
    log.check("Schmidt measure of W(x)W is below twice that of W", *b.upper < 2.0 * std::log2(3.0), detail.str());
    return log.finish(name, "rk(W)=3, rk(W(x)W)<=8<9");
  }
  if (name == "ghz3-to-w2") {
    log.check("GHZ^(x)3 equals GHZ(8)", tensor_power(ghz_state(2), 3) == ghz_state(8));
    log.check("8-term witness reconstructs W(x)W", verify_decomposition(w2_state(), fiduccia8_w2()).match);
    simulate_and_check(log, "GHZ(8) -> W(x)W protocol simulated", w2_state(), fiduccia8_w2(), 8);
    return log.finish(name, "GHZ^(x)3 SLOCC-converts to W^(x)2");
  }
  if (name == "ghz-to-phi3") {
    const auto w1 = strassen7_phi3();
    log.check("n=1: 7-term witness reconstructs PHI3", verify_decomposition(phi3_state(), w1).match);
    log.check("n=1: 7 <= 8", w1.size() <= 8);
    simulate_and_check(log, "n=1: GHZ(8) -> PHI3 simulated", phi3_state(), w1, 8);
    const auto w2 = decomposition_power(w1, 2).materialize();
    const auto phi2 = tensor_power(phi3_state(), 2);
    log.check("n=2: 49-term witness reconstructs PHI3^(x)2", verify_decomposition(phi2, w2).match);
    log.check("n=2: 49 <= 64", w2.size() <= 64);
    simulate_and_check(log, "n=2: GHZ(64) -> PHI3^(x)2 simulated", phi2, w2, 64);
    check_phi3_power(log, 6, ctx.seed);
    return log.finish(name, "n=1: 7<=8 simulated; n=2: 49<=64 simulated; n=6: 117649<=131072 witness-verified");
  }
  if (name == "epr-rate") {
    log.check("PHI3 is a triangle of 3 EPR pairs", epr_triangle() == phi3_state());
    check_phi3_power(log, 6, ctx.seed);
    const std::size_t ghz_copies = 17, phi3_copies = 6, epr_per_phi3 = 3;
    log.check("GHZ^(x)17 = GHZ(131072) covers rank 7^6 = 117649",
              decomposition_power(strassen7_phi3(), phi3_copies, term_cap_from_env()).size() <= (std::size_t{1} << ghz_copies));
    const std::size_t epr = phi3_copies * epr_per_phi3;
    log.check("6 copies of PHI3 hold " + std::to_string(epr) + " EPR pairs, more than the " +
                  std::to_string(ghz_copies) + " GHZ states consumed",
              epr == 18 && epr > ghz_copies);
    return log.finish(name, "17 GHZ states -> 6 PHI3 -> 18 EPR pairs");
  }
  throw InputError("unknown demo '" + name + "' (nonadditivity, ghz3-to-w2, ghz-to-phi3, epr-rate)");
}

// --- entry point -------------------------------------------------------------

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact tensor rank, SLOCC conversion and fast matrix multiplication tools", "tenrank"};
  app.require_subcommand(1);
  Context ctx{out, err};
  app.add_flag("--json", ctx.json_output, "Machine-readable JSON on stdout");
  app.add_option("--seed", ctx.seed, "Seed for randomized operations")->capture_default_str();

  StateArgs state;
  auto* s = app.add_subcommand("state", "Build a state and report dims / nonzeros");
  s->add_option("state", state.input, "Builtin name (GHZ, GHZ(N), W, EPR, PHI3, W2, PRODUCT, MATMUL(m,n,p)) or file")
      ->required();
  s->add_option("--n", state.power, "Tensor power")->capture_default_str();
  s->add_option("--out", state.out, "Write tensor JSON here ('-' for stdout)");

  RankArgs rank;
  auto* r = app.add_subcommand("rank", "Rank bounds: flattenings, registered ranks, witness, ALS");
  r->add_option("state", rank.input, "Builtin name or tensor file")->required();
  r->add_option("--witness", rank.witness, "Decomposition file or builtin decomposition name");
  r->add_option("--als", rank.als_rank, "Run ALS search at this rank");
  r->add_option("--restarts", rank.restarts, "ALS restarts")->capture_default_str();

  VerifyArgs verify;
  auto* v = app.add_subcommand("verify", "Verify a decomposition, or export a builtin one");
  v->add_option("state", verify.input, "Builtin name or tensor file");
  v->add_option("witness", verify.witness, "Decomposition file or builtin decomposition name");
  v->add_option("--builtin", verify.builtin, "Export builtin decomposition (STRASSEN7, STRASSEN7_PHI3, FIDUCCIA8_W2, W3, GHZ(N))");
  v->add_option("--out", verify.out, "Output file for --builtin");
  v->add_option("--power", verify.power, "Check the n-th power of the witness against the n-th power of the state")
      ->capture_default_str();
  v->add_option("--probes", verify.probes, "Probe count for randomized verification")->capture_default_str();

  ConvertArgs convert;
  bool no_search = false;
  auto* c = app.add_subcommand("convert", "Decide GHZ(N) -> target SLOCC convertibility");
  c->add_option("state", convert.input, "Builtin name or tensor file")->required();
  c->add_option("--ghz", convert.ghz, "GHZ level count N")->required();
  c->add_option("--witness", convert.witness, "Decomposition file or builtin decomposition name");
  c->add_flag("--simulate", convert.simulate, "Build and simulate the protocol on a Yes verdict");
  c->add_option("--out", convert.out, "Protocol output file")->capture_default_str();
  c->add_flag("--no-search", no_search, "Skip the numeric witness search");

  std::string classify_input;
  auto* k = app.add_subcommand("classify", "Three-qubit SLOCC class");
  k->add_option("state", classify_input, "Builtin name or 2x2x2 tensor file")->required();

  MatmulArgs matmul;
  auto* m = app.add_subcommand("matmul", "Recursive Strassen multiplication of random 2^n x 2^n matrices");
  m->add_option("--n", matmul.n, "log2 of the matrix size")->capture_default_str();
  m->add_option("--cutoff", matmul.cutoff, "Blocks of at most this size use the schoolbook product")
      ->capture_default_str();
  m->add_flag("--bench", matmul.bench, "Emit one JSON line per run");
  m->add_flag("--check", matmul.check, "Compare against the schoolbook product");
  m->add_flag("--float", matmul.use_float, "Use floating point instead of exact rationals");
  m->add_option("--reps", matmul.reps, "Repetitions")->capture_default_str();

  std::string demo;
  auto* d = app.add_subcommand("demo", "End-to-end demos");
  d->add_option("name", demo, "nonadditivity | ghz3-to-w2 | ghz-to-phi3 | epr-rate")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? exit_code::ok : exit_code::usage;
  }
  convert.search = !no_search;

  try {
    if (*s) return cmd_state(ctx, state);
    if (*r) return cmd_rank(ctx, rank);
    if (*v) return cmd_verify(ctx, verify);
    if (*c) return cmd_convert(ctx, convert);
    if (*k) return cmd_classify(ctx, classify_input);
    if (*m) return cmd_matmul(ctx, matmul);
    if (*d) return cmd_demo(ctx, demo);
  } catch (const WitnessMismatch& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::witness_mismatch;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::usage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::failure;
  }
  return exit_code::usage;
}

}  // namespace tenrank::cli
