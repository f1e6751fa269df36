#include "mmvd/simgen.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "mmvd/rng.hpp"

namespace mmvd {

namespace {

enum class Noise { Normal, Exponential, Poisson };

// Smallest k with P(Poisson(mean) <= k) >= u.
double poisson_quantile(double mean, double u) {
  double p = std::exp(-mean);
  double cdf = p;
  long k = 0;
  while (u > cdf && k < 1000) {
    ++k;
    p *= mean / static_cast<double>(k);
    cdf += p;
  }
  return static_cast<double>(k);
}

// One latent draw per curve; the noise path is its deterministic image at
// each t, with the marginal law prescribed at that t. The paths are smooth
// in t (step functions for Poisson) rather than white across the grid.
struct NoisePath {
  Noise family;
  ExpParam exp_param;
  double z;  // standard normal latent
  double u;  // uniform(0,1) latent

  NoisePath(Noise f, ExpParam ep, std::mt19937_64& eng)
      : family(f), exp_param(ep) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    z = gauss(eng);
    u = unif(eng);
  }

  double at(double t) const {
    if (t <= 0.0) return 0.0;  // every family degenerates at t = 0
    switch (family) {
      case Noise::Normal:
        return std::sqrt(t) * z;
      case Noise::Exponential: {
        const double mean = exp_param == ExpParam::Mean ? t : 1.0 / t;
        return -mean * std::log1p(-u);
      }
      case Noise::Poisson:
        return poisson_quantile(t, u);
    }
    return 0.0;
  }
};

struct GroupDef {
  double (*mean)(double);
  Noise noise;
  double shift;  // constant-in-mean offset multiplying t (Model 3 group 2)
};

// Mean functions for the three designs.
double mean_m1(double t) { return t * (1.0 - t); }
double mean_m2_g1(double t) { return t * std::pow(1.0 - t, 5); }
double mean_m2_g2(double t) { return t * t * std::pow(1.0 - t, 4); }
double mean_m2_g3(double t) { return t * t * t * std::pow(1.0 - t, 3); }
double mean_m3(double t) { return t * std::pow(1.0 - t, 3); }

std::array<GroupDef, 3> model_groups(ModelId model) {
  switch (model) {
    case ModelId::Model1:
      return {{{mean_m1, Noise::Normal, 0.0},
               {mean_m1, Noise::Normal, 0.0},
               {mean_m1, Noise::Normal, 0.0}}};
    case ModelId::Model2:
      return {{{mean_m2_g1, Noise::Normal, 0.0},
               {mean_m2_g2, Noise::Normal, 0.0},
               {mean_m2_g3, Noise::Exponential, 0.0}}};
    case ModelId::Model3:
      return {{{mean_m3, Noise::Normal, 0.0},
               {mean_m3, Noise::Poisson, -1.0},
               {mean_m3, Noise::Normal, 0.0}}};
  }
  throw std::invalid_argument("unknown model id");
}

}  // namespace

std::vector<FunctionalSample> generate(const ModelSpec& spec) {
  const auto groups = model_groups(spec.model);
  const auto& pts = spec.grid.points();
  const auto d = static_cast<Eigen::Index>(pts.size());

  std::vector<FunctionalSample> out;
  out.reserve(3);
  for (int g = 0; g < 3; ++g) {
    const int nj = spec.group_sizes[static_cast<std::size_t>(g)];
    if (nj < 2) throw std::invalid_argument("group sizes must be >= 2");
    auto eng = make_engine(spec.seed, static_cast<std::uint64_t>(g));
    const auto& def = groups[static_cast<std::size_t>(g)];
    Eigen::MatrixXd curves(nj, d);
    for (int i = 0; i < nj; ++i) {
      const NoisePath noise(def.noise, spec.exp_param, eng);
      for (Eigen::Index l = 0; l < d; ++l) {
        const double t = pts[static_cast<std::size_t>(l)];
        curves(i, l) = def.mean(t) + def.shift * t + noise.at(t);
      }
    }
    out.emplace_back(spec.grid, std::move(curves));
  }
  return out;
}

MonteCarloReport monte_carlo(const ModelSpec& spec, int replications,
                             const PermutationPlan& plan, double alpha,
                             double kernel_gamma) {
  if (replications < 1)
    throw std::invalid_argument("replications must be >= 1");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("alpha must be in (0,1)");

  const auto start = std::chrono::steady_clock::now();
  const KernelSpec kernel{KernelFamily::Gaussian, kernel_gamma};

  int reject_mmvd = 0;
  int reject_gmmd = 0;
  for (int rep = 0; rep < replications; ++rep) {
    ModelSpec rep_spec = spec;
    rep_spec.seed = mix_seed(spec.seed, static_cast<std::uint64_t>(rep));
    const auto samples = generate(rep_spec);
    const auto gram = build_gram(samples, kernel);
    const auto weights = GroupWeights::proportional(gram.sizes());
    const auto p = detail::permutation_pvalues_both(
        gram, weights, plan.n_permutations,
        mix_seed(rep_spec.seed, 0x7065726dULL), plan.threads);
    if (p.mmvd <= alpha) ++reject_mmvd;
    if (p.gmmd <= alpha) ++reject_gmmd;
  }

  MonteCarloReport report;
  report.model = spec;
  report.replications = replications;
  report.alpha = alpha;
  report.rejection_rate =
      static_cast<double>(reject_mmvd) / static_cast<double>(replications);
  report.rejection_rate_gmmd =
      static_cast<double>(reject_gmmd) / static_cast<double>(replications);
  report.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return report;
}

}  // namespace mmvd
