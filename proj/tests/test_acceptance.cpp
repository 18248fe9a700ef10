// Acceptance suite: one test case per criterion, each printing a single
// pass/fail line. Every tolerance is pinned in code.
#include <doctest.h>
#include <unistd.h>

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <vector>

#include "genedesign/acquisition.hpp"
#include "genedesign/codon_table.hpp"
#include "genedesign/csv.hpp"
#include "genedesign/errors.hpp"
#include "genedesign/features.hpp"
#include "genedesign/gp.hpp"
#include "genedesign/loop.hpp"
#include "genedesign/model_io.hpp"
#include "genedesign/protocol.hpp"
#include "genedesign/rng.hpp"
#include "genedesign/sequence.hpp"
#include "genedesign/synthetic.hpp"
#include "genedesign/variants.hpp"
#include "oracle_gp.hpp"
#include "test_util.hpp"

using namespace genedesign;

namespace {

class Criterion {
 public:
  Criterion(int number, std::string label)
      : number_(number), label_(std::move(label)),
        start_(std::chrono::steady_clock::now()) {}

  void report(bool pass) const {
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
            .count();
    std::printf("[%s] criterion %d: %s (%.1fs)\n", pass ? "PASS" : "FAIL",
                number_, label_.c_str(), secs);
    std::fflush(stdout);
    CHECK_MESSAGE(pass, "criterion ", number_, " failed: ", label_);
  }

 private:
  int number_;
  std::string label_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace

TEST_CASE("criterion 1: GP oracle equivalence") {
  Criterion criterion(1, "predict and log-marginal match the dense oracle within 1e-8");
  Rng rng(101);
  bool pass = true;
  for (int trial = 0; trial < 100 && pass; ++trial) {
    const auto inst = test_util::random_instance(rng, 6, 4);
    const double value = log_marginal_likelihood_value(inst.params, inst.data);
    const double expected =
        gp_oracle::log_marginal(inst.params, inst.data.features, inst.data.rates);
    if (std::abs(value - expected) > 1e-8) pass = false;

    const FittedModel model(inst.params, inst.data,
                            Standardizer::identity(inst.data.dimension()));
    for (int q = 0; q < 2 && pass; ++q) {
      Eigen::VectorXd x_star(inst.data.dimension());
      for (Eigen::Index d = 0; d < x_star.size(); ++d)
        x_star[d] = rng.uniform(-2.0, 2.0);
      const PosteriorPrediction pred = model.predict_one(x_star);
      const gp_oracle::Posterior want =
          gp_oracle::predict(inst.params, inst.data.features, inst.data.rates, x_star);
      if ((pred.mean - want.mean).lpNorm<Eigen::Infinity>() > 1e-8) pass = false;
      if ((pred.cov - want.cov).lpNorm<Eigen::Infinity>() > 1e-8) pass = false;
    }
  }
  criterion.report(pass);
}

TEST_CASE("criterion 2: marginal-likelihood gradient correctness") {
  Criterion criterion(2, "analytic gradients match central differences, rel err < 1e-5");
  Rng rng(202);
  const double h = 1e-5;
  bool pass = true;
  for (int trial = 0; trial < 100 && pass; ++trial) {
    const auto inst = test_util::random_instance(rng, 5, 3);
    ParameterizationOptions opts;
    if (trial % 4 == 1) opts.tie_kappa = false;
    if (trial % 4 == 2) opts.fit_mean = true;
    if (trial % 4 == 3) {
      opts.fit_kernel_variances = true;
      opts.fit_mean = true;
    }
    const ParameterPacking packing(inst.data.dimension(), opts);
    const Eigen::VectorXd theta = packing.pack(inst.params);
    const LogMarginalResult res = log_marginal_likelihood(inst.params, inst.data, opts);
    for (Eigen::Index i = 0; i < theta.size() && pass; ++i) {
      Eigen::VectorXd tp = theta, tm = theta;
      tp[i] += h;
      tm[i] -= h;
      const double fp =
          log_marginal_likelihood_value(packing.unpack(tp, inst.params), inst.data);
      const double fm =
          log_marginal_likelihood_value(packing.unpack(tm, inst.params), inst.data);
      const double fd = (fp - fm) / (2.0 * h);
      const double rel = std::abs(fd - res.gradient[i]) /
                         std::max({1.0, std::abs(fd), std::abs(res.gradient[i])});
      if (rel >= 1e-5) pass = false;
    }
  }
  criterion.report(pass);
}

TEST_CASE("criterion 3: kernel validity under random parameters") {
  Criterion criterion(3, "covariance + noise factorizes with jitter <= 1e-6, 1000 draws");
  Rng rng(303);
  bool pass = true;
  for (int trial = 0; trial < 1000 && pass; ++trial) {
    const Eigen::Index n =
        2 + static_cast<Eigen::Index>(rng.uniform_index(19));  // up to 20
    const Eigen::Index p = 1 + static_cast<Eigen::Index>(rng.uniform_index(5));
    const Dataset data = test_util::random_dataset(rng, n, p);
    const ModelHyperparameters params = test_util::wide_params(rng, p);

    const Eigen::MatrixXd K = build_covariance(data.features, data.features, params);
    bool factorized = false;
    for (double jitter = 1e-9; jitter <= 1e-6 * (1 + 1e-12); jitter *= 10.0) {
      Eigen::MatrixXd Kn = K;
      for (int l = 0; l < 2; ++l)
        Kn.diagonal().segment(l * n, n).array() += params.noise[l] + jitter;
      if (Eigen::LLT<Eigen::MatrixXd>(Kn).info() == Eigen::Success) {
        factorized = true;
        break;
      }
    }
    if (!factorized) pass = false;
  }
  criterion.report(pass);
}

TEST_CASE("criterion 4: expected-improvement correctness") {
  Criterion criterion(4, "EI matches closed forms and 1e6-sample Monte Carlo");
  bool pass = true;

  if (expected_improvement({3.0, 0.0}, 3.0) != 0.0) pass = false;
  const double at_zero = expected_improvement({3.0, 1.0}, 3.0);
  if (std::abs(at_zero - 0.39894) > 1e-5) pass = false;

  Rng rng(404);
  for (int trial = 0; trial < 20 && pass; ++trial) {
    const double mean = rng.uniform(-2.0, 2.0);
    const double sigma = rng.uniform(0.05, 2.0);
    const double incumbent = rng.uniform(-2.0, 2.0);
    const int n = 1000000;
    double sum = 0.0, sum_sq = 0.0;
    for (int i = 0; i < n; ++i) {
      const double gain = std::max(rng.normal(mean, sigma) - incumbent, 0.0);
      sum += gain;
      sum_sq += gain * gain;
    }
    const double mc = sum / n;
    const double se = std::sqrt((sum_sq / n - mc * mc) / n);
    const double analytic = expected_improvement({mean, sigma * sigma}, incumbent);
    // 1e-12 floor: when the improvement event is rarer than 1/n the sample
    // (and its standard error) is exactly zero while the analytic value is
    // a subnormal-scale positive number.
    if (std::abs(analytic - mc) > 3.0 * se + 1e-12) pass = false;
  }
  criterion.report(pass);
}

TEST_CASE("criterion 5: sequence and feature properties") {
  Criterion criterion(5, "1000 random ORFs: variant invariants and feature sums");
  const CodonTable& table = standard_codon_table();
  bool pass = true;

  const auto orfs = sample_gene_pool(1000, 100, 505);  // 300-base ORFs
  for (const auto& gene : orfs) {
    if (!pass) break;
    if (gene.length() != 300) pass = false;
    const Eigen::VectorXd x = extract_features(gene);
    if (x.size() != 69) pass = false;
    if (std::abs(x.head(64).sum() - 1.0) > 1e-12) pass = false;
    if (std::abs(x[65] + x[66] - 1.0) > 1e-12) pass = false;

    const std::string protein = translate(gene, table);
    const auto original = to_codons(gene);
    for (const auto& v : synonymous_variants(gene, 2, table, 7)) {
      if (translate(v, table) != protein) pass = false;
      const auto codons = to_codons(v);
      for (std::size_t c = 0; c < codons.size(); ++c)
        if (table.amino_acid(codons[c]) != table.amino_acid(original[c]))
          pass = false;
    }
  }
  criterion.report(pass);
}

namespace {

SyntheticCell::Config acceptance_cell_config(std::uint64_t seed, double noise_std) {
  SyntheticCell::Config config;
  config.seed = seed;
  config.noise_std = noise_std;
  return config;  // library defaults, calibrated for positive rates
}

}  // namespace

TEST_CASE("criterion 6: protocol replication at desk scale") {
  Criterion criterion(
      6, "top-ranked recombinant beats the original in >= 8/10 difficult genes");

  const auto genes = sample_gene_pool(260, 100, 606, 0.8);
  const Standardizer space = Standardizer::fit(extract_features(genes));
  SyntheticCell cell(space, acceptance_cell_config(616, 0.0));  // noise-free
  const Dataset data = measure_pool(genes, cell);

  ProtocolConfig pc;
  pc.n_train = 200;
  pc.threshold = 1.5;
  pc.k_difficult = 10;
  pc.n_variants = 1000;
  pc.seed = 626;
  pc.fit.max_iters = 1000;
  pc.fit.n_restarts = 10;
  pc.fit.seed = 636;
  const ProtocolReport report = reproduce_protocol(data, genes, pc, &cell);

  int improved = 0;
  for (const auto& row : report.difficult) {
    const double variant_truth =
        0.5 * (row.true_variant_rates->alpha + row.true_variant_rates->beta);
    if (variant_truth > row.averaged_rate) ++improved;
  }
  std::printf("    (criterion 6 detail: %d/10 difficult genes improved)\n", improved);
  criterion.report(report.difficult.size() == 10 && improved >= 8);
}

TEST_CASE("criterion 7: loop efficacy against random search") {
  Criterion criterion(
      7, "BO beats matched-budget random search in >= 12/20 paired seeds");

  int wins = 0;
  std::vector<double> bo_finals, rs_finals;
  for (int s = 0; s < 20; ++s) {
    const auto genes = sample_gene_pool(150, 100, 1000 + s, 0.0);
    const Standardizer space = Standardizer::fit(extract_features(genes));
    const std::vector<GeneSequence> initial(genes.begin(), genes.begin() + 30);
    std::vector<Candidate> pool;
    for (const auto& g : genes) pool.push_back({g.id(), extract_features(g)});

    LoopConfig lc;
    lc.iterations = 20;
    lc.n_variants = 1000;
    lc.seed = 42 + s;
    lc.fit.max_iters = 300;
    lc.fit.n_restarts = 2;
    lc.fit.seed = 7;

    SyntheticCell cell_bo(space, acceptance_cell_config(500 + s, 0.02));
    Dataset data = measure_pool(initial, cell_bo);
    // Recode the strongest measured gene, the natural protein of interest.
    int best = 0;
    for (int i = 1; i < 30; ++i)
      if (data.rates.row(i).mean() > data.rates.row(best).mean()) best = i;
    const std::vector<GeneSequence> seeds{genes[static_cast<std::size_t>(best)]};

    const LoopHistory bo = run_loop(data, pool, seeds, cell_bo, lc);

    SyntheticCell cell_rs(space, acceptance_cell_config(500 + s, 0.02));
    const Dataset data_rs = measure_pool(initial, cell_rs);
    const LoopHistory rs = random_search_loop(data_rs, seeds, cell_rs, lc);

    if (bo.final_incumbent > rs.final_incumbent) ++wins;
    bo_finals.push_back(bo.final_incumbent);
    rs_finals.push_back(rs.final_incumbent);
  }
  std::sort(bo_finals.begin(), bo_finals.end());
  std::sort(rs_finals.begin(), rs_finals.end());
  const double bo_median = 0.5 * (bo_finals[9] + bo_finals[10]);
  const double rs_median = 0.5 * (rs_finals[9] + rs_finals[10]);
  std::printf("    (criterion 7 detail: %d/20 wins, median %.4f vs %.4f)\n", wins,
              bo_median, rs_median);
  criterion.report(wins >= 12 && bo_median > rs_median);
}

namespace {

int run_cli(const std::filesystem::path& dir, const std::string& args) {
  const std::string cmd = std::string(GENEDESIGN_CLI_PATH) + " " + args + " > " +
                          (dir / "stdout.txt").string() + " 2> " +
                          (dir / "stderr.txt").string();
  return WEXITSTATUS(std::system(cmd.c_str()));
}

}  // namespace

TEST_CASE("criterion 8: determinism and persistence") {
  Criterion criterion(8, "reruns are byte-identical; reloaded models predict identically");
  namespace fs = std::filesystem;
  const fs::path dir =
      fs::temp_directory_path() / ("genedesign_accept_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  bool pass = true;

  {
    std::ofstream cfg(dir / "cfg.json");
    cfg << R"({
      "paths": {"out_dir": ")" << (dir / "run1").string() << R"("},
      "fit": {"max_iters": 60, "n_restarts": 2, "seed": 3},
      "loop": {"iterations": 3, "n_variants": 100, "seed": 5},
      "oracle": {"kind": "synthetic", "seed": 11, "noise_std": 0.05},
      "synthetic_data": {"n_initial": 12, "n_pool": 24, "n_seed_genes": 2,
                          "gene_codons": 30, "seed": 13}
    })";
  }
  if (run_cli(dir, "loop --config " + (dir / "cfg.json").string()) != 0) pass = false;
  if (run_cli(dir, "loop --config " + (dir / "run1/manifest.json").string() +
                       " --out-dir " + (dir / "run2").string()) != 0)
    pass = false;
  if (pass) {
    const std::string h1 = read_text_file((dir / "run1/history.csv").string());
    const std::string h2 = read_text_file((dir / "run2/history.csv").string());
    if (h1 != h2 || h1.empty()) pass = false;
  }

  // Model persistence: reload and compare predictions at quoted precision.
  Rng rng(808);
  const Dataset data = test_util::random_dataset(rng, 12, 4);
  FitConfig fc;
  fc.max_iters = 80;
  fc.n_restarts = 2;
  fc.seed = 19;
  const FittedModel model = fit(data, fc);
  save_model((dir / "model.json").string(), model);
  const FittedModel reloaded = load_model((dir / "model.json").string());
  save_model((dir / "model2.json").string(), reloaded);
  if (read_text_file((dir / "model.json").string()) !=
      read_text_file((dir / "model2.json").string()))
    pass = false;
  for (int q = 0; q < 5 && pass; ++q) {
    Eigen::VectorXd x(4);
    for (int d = 0; d < 4; ++d) x[d] = rng.uniform(-2.0, 2.0);
    const PosteriorPrediction a = model.predict_one(x);
    const PosteriorPrediction b = reloaded.predict_one(x);
    if (a.mean != b.mean || a.cov != b.cov) pass = false;
  }

  fs::remove_all(dir);
  criterion.report(pass);
}
