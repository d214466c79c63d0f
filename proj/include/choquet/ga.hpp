#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "choquet/data.hpp"
#include "choquet/measures.hpp"
#include "choquet/random.hpp"

namespace choquet {

/// Genes are kept in [kGeneEpsilon, 1 - kGeneEpsilon] so every chromosome is
/// a valid density vector.
inline constexpr double kGeneEpsilon = 1e-6;

inline double clamp_gene(double gene) {
  return gene < kGeneEpsilon ? kGeneEpsilon
                             : (gene > 1.0 - kGeneEpsilon ? 1.0 - kGeneEpsilon : gene);
}

struct GaConfig {
  std::size_t population_size = 30;
  std::size_t max_generations = 1000;
  double eer_stop_threshold = 0.04;
  double mutation_bound = 0.5;  // y: half-width of the [0, 1] gene domain
  std::uint64_t rng_seed = 42;
  std::size_t offspring_per_generation = 0;  // 0 means population_size
  std::size_t elitism_count = 1;
  std::size_t threads = 1;  // fitness evaluation workers

  std::size_t offspring_count() const {
    return offspring_per_generation == 0 ? population_size : offspring_per_generation;
  }

  /// Throws InvalidArgument describing the first bad field.
  void validate() const;
};

/// Fitness of one density vector. Chromosomes are ranked by EER; equal EERs
/// are ranked by the lowest total error rate over the threshold sweep.
struct Evaluation {
  double eer = 0.0;
  double min_error_rate = 0.0;

  friend auto operator<=>(const Evaluation&, const Evaluation&) = default;
};

struct Chromosome {
  std::vector<double> genes;
  std::optional<double> fitness;         // cached EER
  std::optional<double> min_error_rate;  // cached tie-breaker

  Evaluation evaluation() const { return {*fitness, *min_error_rate}; }
};

struct Population {
  std::vector<Chromosome> members;
  std::size_t generation = 0;
};

/// Seeds first (in order), then uniform random genes in [eps, 1 - eps].
/// Throws InvalidArgument if there are more seeds than population slots or a
/// seed has the wrong length.
Population init_population(const GaConfig& cfg, std::size_t criteria,
                           std::span<const DensityVector> seeds = {});

/// EER (and best total error rate) of the Choquet-fused clients vs
/// impostors under the lambda-measure whose densities are `genes`.
Evaluation evaluate_densities(std::span<const double> genes, const LabeledScoreSet& data);

inline double evaluate_eer(std::span<const double> genes, const LabeledScoreSet& data) {
  return evaluate_densities(genes, data).eer;
}

/// EER from evaluate_densities, cached on the chromosome.
double fitness(Chromosome& chromosome, const LabeledScoreSet& data);

/// Two distinct member indices, each member equally likely.
std::pair<std::size_t, std::size_t> select_parents(const Population& population,
                                                   Rng& rng);

/// 0.5(a+b), 1.5a-0.5b and 0.5a+1.5b, clamped gene-wise.
std::array<std::vector<double>, 3> linear_crossover(std::span<const double> first,
                                                    std::span<const double> second);

/// clamp(gene +/- y (1-s)^(itt/g_m)). `s` in [0, 1].
double mutate_gene(double gene, double s, bool increase, std::size_t itt,
                   std::size_t max_generations, double bound);

/// Non-uniform mutation of every gene with an independent s and sign.
std::vector<double> nonuniform_mutation(std::span<const double> genes,
                                        std::size_t itt, const GaConfig& cfg,
                                        Rng& rng);

enum class StopReason { kThreshold, kMaxGenerations };

std::string_view to_string(StopReason reason);

struct GenerationRecord {
  std::size_t generation = 0;
  double best_eer = 0.0;
  std::vector<double> best_genes;
};

struct EvolveResult {
  Chromosome best;
  std::vector<GenerationRecord> history;  // generation 0 is the initial population
  StopReason stop_reason = StopReason::kMaxGenerations;
  std::size_t generations = 0;
};

/// Generational loop: uniform parent selection, linear crossover,
/// non-uniform mutation, then the best N of parents plus offspring survive
/// (ranked by Evaluation, so EER first).
/// Stops once the best EER is at or below cfg.eer_stop_threshold or after
/// cfg.max_generations generations. Deterministic for a given rng_seed,
/// whatever cfg.threads is.
EvolveResult evolve(const LabeledScoreSet& data, const GaConfig& cfg,
                    std::span<const DensityVector> seeds = {});

/// `generation,best_eer,g1,...,gn` rows.
void write_history_csv(const std::vector<GenerationRecord>& history, std::ostream& out);

}  // namespace choquet
