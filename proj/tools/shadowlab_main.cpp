// shadowlab command-line tool: channel verification, shadow estimation,
// summary-table and sweep reproduction, acceptance suites.

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <map>
#include <sstream>

#include "shadowlab/acceptance.hpp"
#include "shadowlab/io.hpp"
#include "shadowlab/protocols.hpp"
#include "shadowlab/shadows.hpp"
#include "shadowlab/variance.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using namespace shadowlab;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("SHADOWLAB_SEED")) return std::strtoull(env, nullptr, 10);
  return 1;
}

QuantumState make_state(const std::string& family, int dim, std::uint64_t seed) {
  RandomStream rng(seed, 0xabcdef);
  if (family == "random-pure") return QuantumState::pure(random_pure_state(dim, rng));
  if (family == "random-mixed") {
    CMatrix g(dim, dim);
    for (int j = 0; j < dim; ++j)
      for (int i = 0; i < dim; ++i) g(i, j) = Complex(rng.gaussian(), rng.gaussian());
    CMatrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    return QuantumState::mixed(rho);
  }
  if (family == "maximally-mixed") return QuantumState::maximally_mixed(dim);
  if (family == "zero") {
    CVector v = CVector::Zero(dim);
    v(0) = 1;
    return QuantumState::pure(v);
  }
  if (family == "ghz") {
    CVector v = CVector::Zero(dim);
    v(0) = 1 / std::sqrt(2.0);
    v(dim - 1) = 1 / std::sqrt(2.0);
    return QuantumState::pure(v);
  }
  throw std::invalid_argument("unknown state family: " + family);
}

Observable make_observable(const std::string& name, const Protocol& protocol) {
  const int n = protocol.params.n;
  if (name == "zsym") {
    if (protocol.schur) return observable_zsym(*protocol.schur);
    return observable_zsym(schur_basis(n));
  }
  if (name == "zpow") {  // Z^{⊗n}
    return observable_pauli(std::string(static_cast<std::size_t>(n), 'Z'));
  }
  if (name == "ghz-projector") return observable_ghz(n);
  if (name == "sym-projector") {
    if (protocol.schur) return observable_isotypic_projector(*protocol.schur, n);
    return observable_isotypic_projector(schur_basis(n), n);
  }
  if (name.rfind("pauli:", 0) == 0) return observable_pauli(name.substr(6));
  if (name.rfind("majorana:", 0) == 0) {
    std::vector<int> idx;
    std::stringstream ss(name.substr(9));
    std::string tok;
    while (std::getline(ss, tok, ',')) idx.push_back(std::stoi(tok));
    return observable_majorana(idx, n);
  }
  throw std::invalid_argument("unknown observable: " + name);
}

int cmd_channel(const std::string& protocol, const ProtocolParams& params,
                const std::string& lambda, bool exact, long long mc, std::uint64_t seed,
                const std::string& out) {
  std::ostringstream report;
  bool all_pass = true;
  if (protocol == "sn-gt") {
    const Partition gt =
        lambda.empty() ? Partition(std::vector<int>{3, 1, 1}) : Partition::parse(lambda);
    const Protocol p = make_protocol("sn-gt", params, gt);
    const SuperOperator m = measurement_channel_exact(p.ensemble, p.basis);
    const auto clusters = channel_spectrum(m, 1e-8);
    report << "protocol sn-gt lambda " << gt.str() << " NON-CENTRAL\n";
    report << "the channel is not a scalar on its degenerate isotypics; clusters:\n";
    for (const EigenCluster& c : clusters)
      report << "  value " << format_double(c.value) << "  multiplicity " << c.multiplicity
             << "\n";
    auto has = [&](double v, int mult) {
      for (const EigenCluster& c : clusters)
        if (std::abs(c.value - v) < 1e-9 && c.multiplicity == mult) return true;
      return false;
    };
    all_pass = has(11.0 / 90.0, 5) && has(43.0 / 120.0, 5);
    report << "block values 11/90 x5 and 43/120 x5: " << (all_pass ? "PASS" : "FAIL") << "\n";
  } else {
    const Protocol p = make_protocol(protocol, params);
    report << "protocol " << protocol << "\n";
    if (exact) {
      const SuperOperator m = measurement_channel_exact(p.ensemble, p.basis);
      const BlockRestriction r = block_diagonal_restriction(m, p.basis);
      Eigen::SelfAdjointEigenSolver<CMatrix> eig(0.5 * (r.matrix + r.matrix.adjoint()));
      const auto clusters = cluster_eigenvalues(eig.eigenvalues(), 1e-8);
      report << "block-diagonal spectrum (a " << r.complement_dim
             << "-dimensional complement is annihilated during inversion):\n";
      std::map<std::string, std::pair<double, long long>> predicted;
      for (const IsotypicComponent& c : p.spec->components) {
        auto& slot = predicted[c.a.str()];
        slot.first = c.a.value();
        slot.second += c.multiplicity * c.d_lambda;
      }
      for (const EigenCluster& c : clusters) {
        bool ok = false;
        for (const auto& [label, pred] : predicted)
          if (std::abs(pred.first - c.value) < 1e-8 && pred.second == c.multiplicity) ok = true;
        all_pass &= ok;
        report << "  value " << format_double(c.value) << "  multiplicity " << c.multiplicity
               << "  " << (ok ? "PASS" : "FAIL") << "\n";
      }
    } else {
      const auto means =
          channel_component_means_mc(p.ensemble, p.basis, *p.spec, mc, RandomStream(seed));
      report << "Monte-Carlo component eigenvalues (" << mc << " samples):\n";
      for (const ComponentMean& c : means) {
        const double a = p.spec->component(c.label).a.value();
        const double tol = std::max(5 * c.stderr_est, 1e-6);
        const bool ok = std::abs(c.mean - a) <= tol;
        all_pass &= ok;
        report << "  " << c.label << "  predicted " << format_double(a) << "  measured "
               << format_double(c.mean) << " +- " << format_double(c.stderr_est) << "  "
               << (ok ? "PASS" : "FAIL") << "\n";
      }
    }
  }
  report << (all_pass ? "PASS" : "FAIL") << "\n";
  std::cout << report.str();
  if (!out.empty()) write_text_file(out, report.str());
  return all_pass ? 0 : 1;
}

int cmd_estimate(const std::map<std::string, std::string>& cfg) {
  const std::string protocol = cfg.at("protocol");
  ProtocolParams params;
  if (cfg.count("n")) params.n = std::stoi(cfg.at("n"));
  if (cfg.count("d")) params.d = std::stoi(cfg.at("d"));
  if (cfg.count("spin")) params.spin = std::stod(cfg.at("spin"));
  const Protocol p = make_protocol(protocol, params);
  const std::uint64_t seed = cfg.count("seed") ? std::stoull(cfg.at("seed")) : default_seed();
  const std::uint64_t state_seed = cfg.count("state_seed") ? std::stoull(cfg.at("state_seed")) : 3;
  const QuantumState state = make_state(cfg.count("state") ? cfg.at("state") : "random-pure",
                                        static_cast<int>(p.basis.dim), state_seed);
  const Observable obs = make_observable(cfg.at("observable"), p);
  const long long n = std::stoll(cfg.at("snapshots"));
  const int k = cfg.count("groups") ? std::stoi(cfg.at("groups")) : 1;

  std::vector<Snapshot> record;
  const ShadowEstimate est = estimate(p, state, obs, n, k, RandomStream(seed), &record);

  nlohmann::json result{{"protocol", protocol},
                        {"observable", obs.name},
                        {"N", est.n},
                        {"K", est.k_groups},
                        {"mean", est.mean},
                        {"median_of_means", est.median_of_means},
                        {"single_shot_variance", est.single_shot_variance},
                        {"partially_visible", est.partially_visible},
                        {"seed", seed}};
  std::cout << result.dump(2) << "\n";
  if (cfg.count("out")) {
    const std::string prefix = cfg.at("out");
    write_text_file(prefix + ".snapshots.jsonl", snapshots_to_jsonl(protocol, seed, record));
    write_text_file(prefix + ".result.json", result.dump(2) + "\n");
  }
  return 0;
}

int cmd_table(const std::string& out) {
  const std::string csv = table_csv(default_table());
  std::cout << csv;
  if (!out.empty()) write_text_file(out, csv);
  return 0;
}

int cmd_sweep(const std::map<std::string, std::string>& cfg, const std::string& out,
              const std::string& svg) {
  const int n_lo = cfg.count("n_min") ? std::stoi(cfg.at("n_min")) : 2;
  const int n_hi = cfg.count("n_max") ? std::stoi(cfg.at("n_max")) : 6;
  const long long snaps = cfg.count("snapshots") ? std::stoll(cfg.at("snapshots")) : 10000;
  const std::uint64_t seed = cfg.count("seed") ? std::stoull(cfg.at("seed")) : default_seed();
  if (n_hi > 10) throw std::invalid_argument("sweep: n capped at 10");
  if (snaps > 2000000) throw std::invalid_argument("sweep: snapshot cap exceeded");

  auto split_list = [](const std::string& text) {
    std::vector<std::string> items;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ';')) items.push_back(tok);
    return items;
  };
  const std::vector<std::string> protocols =
      split_list(cfg.count("protocols") ? cfg.at("protocols") : "su2-tensor");
  const std::vector<std::string> observables =
      split_list(cfg.count("observables") ? cfg.at("observables") : "zsym");

  std::vector<SweepRow> rows;
  for (const std::string& protocol : protocols) {
    for (int n = n_lo; n <= n_hi; ++n) {
      const Protocol p = make_protocol(protocol, {.n = n, .d = 0, .spin = 0});
      const QuantumState state =
          make_state(cfg.count("state") ? cfg.at("state") : "random-pure",
                     static_cast<int>(p.basis.dim), seed + static_cast<std::uint64_t>(n));
      std::vector<Observable> obs;
      for (const std::string& name : observables) obs.push_back(make_observable(name, p));
      const auto t0 = std::chrono::steady_clock::now();
      const auto ests = estimate_batch(p, state, obs, snaps, 1,
                                       RandomStream(seed, static_cast<std::uint64_t>(n)));
      const double dt =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      for (std::size_t k = 0; k < obs.size(); ++k) {
        SweepRow row;
        row.protocol = protocol;
        row.observable = observables[k];
        row.n = n;
        row.n_snapshots = snaps;
        row.mean = ests[k].mean;
        row.empirical_variance = ests[k].single_shot_variance;
        row.bound_l2 = bound_l2(*p.spec, obs[k]);
        row.bound_inf = bound_inf(*p.spec, obs[k]);
        if (protocol == "su2-tensor" && observables[k] == "zsym" && n % 2 == 0)
          row.exact = exact_variance_zsym(*p.schur, state);
        row.runtime_seconds = dt / static_cast<double>(obs.size());
        rows.push_back(std::move(row));
      }
    }
  }
  const std::string csv = sweep_csv(rows);
  std::cout << csv;
  if (!out.empty()) write_text_file(out, csv);
  if (!svg.empty()) write_text_file(svg, sweep_svg(rows, "single-shot variance vs n"));
  return 0;
}

int cmd_verify(const std::string& suite, const std::string& self_path) {
  std::vector<int> ids;
  if (suite == "all") {
    ids = acceptance_ids();
  } else {
    ids = suite_criteria(suite);
    if (ids.empty()) {
      std::cerr << "unknown suite '" << suite << "'; available:";
      for (const std::string& s : suite_names()) std::cerr << " " << s;
      std::cerr << " all\n";
      return 2;
    }
  }
  bool all_pass = true;
  for (int id : ids) {
    const CriterionResult r = acceptance_criterion(id, self_path);
    for (const std::string& line : r.lines) std::cout << "  " << line << "\n";
    std::cout << "criterion " << r.id << " (" << r.name << "): " << (r.pass ? "PASS" : "FAIL")
              << "\n";
    all_pass &= r.pass;
  }
  return all_pass ? 0 : 1;
}

int cmd_spec_export(const std::string& protocol, const ProtocolParams& params,
                    const std::string& out) {
  const ChannelSpec spec = analytic_channel_spec(protocol, params);
  const std::string text = spec.to_json().dump(2) + "\n";
  std::cout << text;
  if (!out.empty()) write_text_file(out, text);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"group-representation classical-shadows toolkit"};
  app.require_subcommand(1);

  std::string protocol, lambda, out, svg, config_path, suite;
  ProtocolParams params;
  long long mc = 0;
  bool exact = false;
  std::uint64_t seed = default_seed();
  int threads = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--protocol", protocol, "protocol id");
    sub->add_option("--n", params.n, "qubit / mode / symbol count");
    sub->add_option("--d", params.d, "Hilbert dimension");
    sub->add_option("--spin", params.spin, "spin J for su2-spin");
    sub->add_option("--lambda", lambda, "partition, e.g. 3,1,1");
    sub->add_option("--seed", seed, "random seed (default: SHADOWLAB_SEED or 1)");
    sub->add_option("--out", out, "output file");
    sub->add_option("--threads", threads, "worker threads (0 = library default)");
  };

  CLI::App* channel = app.add_subcommand("channel", "channel spectrum verification");
  add_common(channel);
  channel->add_flag("--exact", exact, "exact enumeration");
  channel->add_option("--mc", mc, "Monte Carlo with N samples");

  CLI::App* est = app.add_subcommand("estimate", "run a shadow-estimation experiment");
  est->add_option("--config", config_path, "flat key=value config file")->required();

  CLI::App* table = app.add_subcommand("table", "published summary-table reproduction");
  table->add_option("--out", out, "output CSV file");

  CLI::App* sweep = app.add_subcommand("sweep", "variance sweep over n");
  sweep->add_option("--config", config_path, "flat key=value config file")->required();
  sweep->add_option("--out", out, "output CSV file");
  sweep->add_option("--svg", svg, "also emit an SVG plot");
  sweep->add_option("--threads", threads, "worker threads");

  CLI::App* verify = app.add_subcommand("verify", "run an acceptance suite");
  verify->add_option("suite", suite, "suite name or 'all'")->required();

  CLI::App* spec = app.add_subcommand("spec", "channel-spec tools");
  CLI::App* spec_export = spec->add_subcommand("export", "emit the machine-readable spec JSON");
  add_common(spec_export);

  CLI11_PARSE(app, argc, argv);

#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#endif

  try {
    if (channel->parsed()) {
      if (!exact && mc <= 0) throw std::invalid_argument("channel: pass --exact or --mc N");
      return cmd_channel(protocol, params, lambda, exact, mc, seed, out);
    }
    if (est->parsed()) return cmd_estimate(parse_flat_config(read_text_file(config_path)));
    if (table->parsed()) return cmd_table(out);
    if (sweep->parsed()) return cmd_sweep(parse_flat_config(read_text_file(config_path)), out, svg);
    if (verify->parsed()) return cmd_verify(suite, argv[0]);
    if (spec->parsed() && spec_export->parsed()) return cmd_spec_export(protocol, params, out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
