#include "choquet/ga.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <ostream>
#include <thread>

#include "choquet/aggregate.hpp"
#include "choquet/errors.hpp"
#include "choquet/metrics.hpp"

namespace choquet {

namespace {

// Sub-stream identifiers for derive_seed.
constexpr std::uint64_t kInitStream = 0;
constexpr std::uint64_t kBreedStream = 1;

std::string shortest(double value) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, result.ptr);
}

void evaluate_all(std::vector<Chromosome>& members, const LabeledScoreSet& data,
                  std::size_t threads) {
  std::vector<Chromosome*> pending;
  for (auto& c : members) {
    if (!c.fitness || !c.min_error_rate) pending.push_back(&c);
  }
  const std::size_t workers = std::min(threads, pending.size());
  if (workers <= 1) {
    for (auto* c : pending) fitness(*c, data);
    return;
  }
  // Each worker owns a disjoint stride of the pending list.
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t k = w; k < pending.size(); k += workers) fitness(*pending[k], data);
    });
  }
}

bool by_fitness(const Chromosome& a, const Chromosome& b) {
  return a.evaluation() < b.evaluation();
}

const Chromosome& best_of(const std::vector<Chromosome>& members) {
  return *std::min_element(members.begin(), members.end(), by_fitness);
}

}  // namespace

void GaConfig::validate() const {
  if (population_size < 2) throw InvalidArgument("population size must be at least 2");
  if (max_generations < 1) throw InvalidArgument("max generations must be at least 1");
  if (!(eer_stop_threshold >= 0.0 && eer_stop_threshold <= 1.0)) {
    throw InvalidArgument("EER stop threshold must lie in [0, 1]");
  }
  if (!(mutation_bound > 0.0) || !std::isfinite(mutation_bound)) {
    throw InvalidArgument("mutation bound must be positive");
  }
  if (elitism_count > population_size) {
    throw InvalidArgument("elitism count exceeds the population size");
  }
  if (threads < 1) throw InvalidArgument("need at least one worker thread");
}

Population init_population(const GaConfig& cfg, std::size_t criteria,
                           std::span<const DensityVector> seeds) {
  cfg.validate();
  if (criteria < 2) throw InvalidArgument("need at least two criteria");
  if (seeds.size() > cfg.population_size) {
    throw InvalidArgument("more seeds than population slots");
  }
  Population population;
  population.members.reserve(cfg.population_size);
  for (const auto& seed : seeds) {
    if (seed.size() != criteria) {
      throw InvalidArgument("seed length does not match the number of criteria");
    }
    Chromosome c;
    for (double d : seed.values()) c.genes.push_back(clamp_gene(d));
    population.members.push_back(std::move(c));
  }
  Rng rng(derive_seed(cfg.rng_seed, kInitStream, 0));
  while (population.members.size() < cfg.population_size) {
    Chromosome c;
    c.genes.reserve(criteria);
    for (std::size_t i = 0; i < criteria; ++i) {
      c.genes.push_back(kGeneEpsilon + (1.0 - 2.0 * kGeneEpsilon) * uniform01(rng));
    }
    population.members.push_back(std::move(c));
  }
  return population;
}

Evaluation evaluate_densities(std::span<const double> genes,
                              const LabeledScoreSet& data) {
  const LambdaMeasure measure(DensityVector({genes.begin(), genes.end()}));
  std::vector<double> clients;
  std::vector<double> impostors;
  clients.reserve(data.clients().size());
  impostors.reserve(data.impostors().size());
  for (const auto& r : data.clients()) clients.push_back(choquet_fuse(r.scores, measure));
  for (const auto& r : data.impostors()) {
    impostors.push_back(choquet_fuse(r.scores, measure));
  }
  const auto report = EvalReport::evaluate(clients, impostors);
  return {report.eer(), report.min_error().error_rate};
}

double fitness(Chromosome& chromosome, const LabeledScoreSet& data) {
  if (!chromosome.fitness || !chromosome.min_error_rate) {
    const auto e = evaluate_densities(chromosome.genes, data);
    chromosome.fitness = e.eer;
    chromosome.min_error_rate = e.min_error_rate;
  }
  return *chromosome.fitness;
}

std::pair<std::size_t, std::size_t> select_parents(const Population& population,
                                                   Rng& rng) {
  const std::size_t n = population.members.size();
  if (n < 2) throw InvalidArgument("parent selection needs at least two members");
  const std::size_t first = uniform_index(rng, n);
  std::size_t second = uniform_index(rng, n - 1);
  if (second >= first) ++second;
  return {first, second};
}

std::array<std::vector<double>, 3> linear_crossover(std::span<const double> first,
                                                    std::span<const double> second) {
  if (first.size() != second.size()) {
    throw InvalidArgument("crossover parents differ in length");
  }
  std::array<std::vector<double>, 3> children;
  for (auto& child : children) child.reserve(first.size());
  for (std::size_t i = 0; i < first.size(); ++i) {
    const double a = first[i];
    const double b = second[i];
    children[0].push_back(clamp_gene(0.5 * (a + b)));
    children[1].push_back(clamp_gene(1.5 * a - 0.5 * b));
    children[2].push_back(clamp_gene(0.5 * a + 1.5 * b));
  }
  return children;
}

double mutate_gene(double gene, double s, bool increase, std::size_t itt,
                   std::size_t max_generations, double bound) {
  const double exponent =
      static_cast<double>(itt) / static_cast<double>(max_generations);
  const double step = bound * std::pow(1.0 - s, exponent);
  return clamp_gene(increase ? gene + step : gene - step);
}

std::vector<double> nonuniform_mutation(std::span<const double> genes,
                                        std::size_t itt, const GaConfig& cfg,
                                        Rng& rng) {
  if (itt > cfg.max_generations) {
    throw InvalidArgument("mutation iteration exceeds the generation budget");
  }
  std::vector<double> out;
  out.reserve(genes.size());
  for (double gene : genes) {
    const double s = uniform01(rng);
    const bool increase = coin_flip(rng);
    out.push_back(mutate_gene(gene, s, increase, itt, cfg.max_generations,
                              cfg.mutation_bound));
  }
  return out;
}

std::string_view to_string(StopReason reason) {
  return reason == StopReason::kThreshold ? "threshold" : "max_generations";
}

EvolveResult evolve(const LabeledScoreSet& data, const GaConfig& cfg,
                    std::span<const DensityVector> seeds) {
  cfg.validate();
  const std::size_t n = cfg.population_size;
  const std::size_t offspring = cfg.offspring_count();
  const std::size_t events = (offspring + 2) / 3;

  Population population = init_population(cfg, data.modality_count(), seeds);
  evaluate_all(population.members, data, cfg.threads);

  EvolveResult result;
  auto record = [&] {
    const auto& best = best_of(population.members);
    // Survivor selection keeps the best, so this never gets worse.
    result.best = best;
    result.history.push_back({population.generation, *best.fitness, best.genes});
  };
  record();

  while (*result.best.fitness > cfg.eer_stop_threshold &&
         population.generation < cfg.max_generations) {
    const std::size_t itt = population.generation + 1;

    std::vector<Chromosome> children;
    children.reserve(events * 3);
    for (std::size_t e = 0; e < events; ++e) {
      Rng rng(derive_seed(cfg.rng_seed, kBreedStream, itt * events + e));
      const auto [i, j] = select_parents(population, rng);
      for (auto& child : linear_crossover(population.members[i].genes,
                                          population.members[j].genes)) {
        children.push_back({nonuniform_mutation(child, itt, cfg, rng), std::nullopt, std::nullopt});
      }
    }
    children.resize(offspring);
    evaluate_all(children, data, cfg.threads);

    // (mu + lambda) survivors: the elitism_count best parents are kept
    // unconditionally, the remaining slots go to the best of everyone else.
    // Stable sorts keep incumbents ahead of equally fit children.
    auto& pool = population.members;
    std::stable_sort(pool.begin(), pool.end(), by_fitness);
    pool.insert(pool.end(), std::make_move_iterator(children.begin()),
                std::make_move_iterator(children.end()));
    const auto elites = static_cast<std::ptrdiff_t>(cfg.elitism_count);
    std::stable_sort(pool.begin() + elites, pool.end(), by_fitness);
    pool.resize(n);
    std::stable_sort(pool.begin(), pool.end(), by_fitness);
    population.generation = itt;
    record();
  }

  result.generations = population.generation;
  result.stop_reason = *result.best.fitness <= cfg.eer_stop_threshold
                           ? StopReason::kThreshold
                           : StopReason::kMaxGenerations;
  return result;
}

void write_history_csv(const std::vector<GenerationRecord>& history, std::ostream& out) {
  out << "generation,best_eer";
  const std::size_t genes = history.empty() ? 0 : history.front().best_genes.size();
  for (std::size_t g = 0; g < genes; ++g) out << ",g" << (g + 1);
  out << '\n';
  for (const auto& row : history) {
    out << row.generation << ',' << shortest(row.best_eer);
    for (double g : row.best_genes) out << ',' << shortest(g);
    out << '\n';
  }
}

}  // namespace choquet
