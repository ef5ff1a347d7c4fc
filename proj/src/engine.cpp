#include "hlri/engine.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <sstream>
#include <thread>

#include "hlri/errors.hpp"
#include "hlri/normal.hpp"

namespace hlri {

PenaltyParams PenaltyOverrides::resolve(double g0, double beta_max) const {
  PenaltyParams p = default_penalty(g0, beta_max);
  if (C) p.C = *C;
  if (lambda) p.lambda = *lambda;
  if (K) p.K = *K;
  if (q) p.q = *q;
  if (eta) p.eta = *eta;
  return p;
}

void RunConfig::validate(std::size_t dimension) const {
  if (!(beta_min >= 0.0)) throw ConfigError("beta_min: must be nonnegative");
  if (!(beta_max > beta_min)) throw ConfigError("beta_min/beta_max: beta_min must be smaller than beta_max");
  if (bits_per_var < kMinBitsPerVar || bits_per_var > kMaxBitsPerVar) {
    throw ConfigError("bits_per_var: must lie in [3, 16]");
  }
  if (workers < 1) throw ConfigError("workers: must be at least 1");
  evolution.validate(dimension);
  repair.validate();
  zoom.validate();
  if (max_generations < zoom.delta_t) throw ConfigError("max_generations: must be at least zoom.delta_t");
  if (penalty.C && !(*penalty.C > beta_max)) throw ConfigError("penalty.C: must exceed beta_max");
  auto positive = [](const std::optional<double>& v, const char* field) {
    if (v && !(*v > 0.0)) throw ConfigError(std::string("penalty.") + field + ": must be positive");
  };
  positive(penalty.lambda, "lambda");
  positive(penalty.K, "K");
  positive(penalty.q, "q");
  positive(penalty.eta, "eta");
}

double probability_of_failure(double beta) { return normal_cdf(-beta); }

namespace {

class Search {
 public:
  Search(const BenchmarkProblem& problem, const RunConfig& config, RunObserver* observer)
      : problem_(problem),
        config_(config),
        observer_(observer),
        rng_(config.seed),
        g0_(origin_value(problem)),
        evaluations_(1),
        penalty_(config.penalty.resolve(g0_, config.beta_max)),
        repair_config_(config.repair),
        context_{problem, g0_, config.beta_max} {
    repair_config_.eta = penalty_.eta;
    if (!(g0_ > penalty_.eta)) {
      std::ostringstream msg;
      msg << "origin on or beyond failure surface (G(0) = " << g0_ << ", eta = " << penalty_.eta << ")";
      throw DegenerateProblem(msg.str());
    }
    penalty_.validate(config.beta_max);
    region_ = initial_region(config.beta_min, config.beta_max, problem.dimension());
    region_history_.push_back(region_);
    threshold_ = config.evolution.similarity_threshold(problem.dimension());
    population_.elite_size = config.evolution.n_E;
  }

  RunReport execute() {
    const int bpv = config_.bits_per_var;
    for (std::size_t i = 0; i < config_.evolution.n_P; ++i) {
      population_.members.push_back(random_genotype(region_, bpv, rng_));
    }
    repair_pending(population_.members);
    rank(population_);
    int t = 1;
    record(t, 1);

    while (!stage1_complete(population_.elite(), region_, penalty_.eta) && t < config_.max_generations) {
      ++t;
      evolve();
      record(t, 1);
    }

    if (stage1_complete(population_.elite(), region_, penalty_.eta)) {
      stages_.t1 = t;
      const int t1 = t;
      bool keep_zooming = true;
      zoom(t);
      while (keep_zooming) {
        const int t_ref = t;
        do {
          ++t;
          evolve();
          record(t, 2);
        } while (t - t_ref <= config_.zoom.t_Z && t < config_.max_generations);
        ++t;  // generation consumed by the region update
        keep_zooming = diversity_ok(population_, config_.zoom) && t < config_.max_generations;
        if (keep_zooming) zoom(t);
        record(t, 2);
      }
      stages_.t_diversity_end = t;
      while (t < config_.max_generations) {
        ++t;
        evolve();
        record(t, 3);
        if (t - t1 > config_.zoom.delta_t) break;
      }
    }
    stages_.t_final = t;
    return report(t);
  }

 private:
  void repair_pending(std::vector<MixedGenotype>& members) {
    std::vector<std::size_t> pending;
    for (std::size_t i = 0; i < members.size(); ++i) {
      if (!members[i].repaired()) pending.push_back(i);
    }
    if (pending.empty()) return;

    const auto work = [&](std::size_t begin, std::size_t end) {
      for (std::size_t j = begin; j < end; ++j) repair(members[pending[j]], context_, repair_config_);
    };
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(config_.workers), pending.size());
    if (workers <= 1) {
      work(0, pending.size());
    } else {
      std::vector<std::exception_ptr> errors(workers);
      std::vector<std::thread> threads;
      const std::size_t chunk = (pending.size() + workers - 1) / workers;
      for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(pending.size(), begin + chunk);
        threads.emplace_back([&, w, begin, end] {
          try {
            work(begin, end);
          } catch (...) {
            errors[w] = std::current_exception();
          }
        });
      }
      for (auto& th : threads) th.join();
      for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
      }
    }

    // Bookkeeping in index order keeps results independent of the worker count.
    for (std::size_t idx : pending) {
      auto& g = members[idx];
      g.fitness = fitness(g.beta, g.repair->final_g, penalty_);
      evaluations_ += g.repair->evaluations;
      if (observer_) observer_->on_repair(g);
      if (high_content(g, region_, penalty_.eta) && (!incumbent_ || g.fitness > incumbent_->fitness)) {
        incumbent_ = g;
      }
      if (!best_any_ || g.fitness > best_any_->fitness) best_any_ = g;
    }
  }

  void evolve() {
    const auto& evo = config_.evolution;
    const int bpv = config_.bits_per_var;
    const auto pairs = select_parents(population_, evo.n_B, rng_);
    std::vector<MixedGenotype> offspring;
    offspring.reserve(pairs.size());
    for (const auto& [e, o] : pairs) {
      offspring.push_back(
          uniform_crossover(population_.members[e], population_.members[o], evo.r_uc, region_, bpv, rng_));
    }
    repair_pending(offspring);

    std::vector<MixedGenotype> extended = std::move(population_.members);
    extended.insert(extended.end(), std::make_move_iterator(offspring.begin()),
                    std::make_move_iterator(offspring.end()));
    rank(extended);
    similarity_control(extended, threshold_, region_, bpv, rng_);
    repair_pending(extended);

    std::vector<MixedGenotype> next = replacement(std::move(extended), evo.n_P);
    implicit_mutation(next, evo.n_bot, region_, bpv, rng_);
    repair_pending(next);
    rank(next);
    population_.members = std::move(next);
  }

  void zoom(int t) {
    std::vector<MixedGenotype> content;
    for (const auto& g : population_.elite()) {
      if (high_content(g, region_, penalty_.eta)) content.push_back(g);
    }
    if (!content.empty()) {
      const SearchRegion before = region_;
      region_ = reduce(content, region_, config_.zoom, t);
      region_history_.push_back(region_);
      if (problem_.known_mpp) {
        if (!zoom_losses_) zoom_losses_ = 0;
        if (!region_.covers_direction(*problem_.known_mpp)) ++*zoom_losses_;
      }
      if (observer_) observer_->on_reduction(before, region_);
    }
    clamp_events_ += recode_population(population_, region_, config_.bits_per_var, rng_);
    repair_pending(population_.members);
    rank(population_);
  }

  void record(int t, int stage) {
    GenerationRecord r;
    r.t = t;
    r.stage = stage;
    r.best_fitness = population_.best().fitness;
    if (incumbent_) r.best_beta = incumbent_->beta;
    r.region_diameter = region_.diameter();
    r.distinct_fraction = distinct_fraction(population_.members);
    r.evaluations = evaluations_;
    history_.push_back(r);
    if (observer_) observer_->on_generation(r, population_);
  }

  void polish(MixedGenotype& best) {
    RepairConfig tight = repair_config_;
    tight.eta = 1e-6 * repair_config_.eta;
    tight.k_max = 4 * repair_config_.k_max;
    const RepairOutcome refined = repair_direction(best.direction, best.beta, context_, tight);
    evaluations_ += refined.evaluations;
    if (std::abs(refined.final_g) < std::abs(best.repair->final_g)) {
      best.beta = refined.final_beta;
      best.repair = refined;
      best.fitness = fitness(best.beta, refined.final_g, penalty_);
    }
  }

  RunReport report(int t) {
    if (!incumbent_) {
      std::ostringstream msg;
      msg << "surface not found: no genotype of high failure content within " << t << " generations";
      throw SurfaceNotFound(msg.str(), best_any_.value_or(MixedGenotype{}), evaluations_, t);
    }
    if (config_.polish) polish(*incumbent_);
    RunReport rep;
    rep.problem = problem_.name();
    rep.seed = config_.seed;
    rep.best = *incumbent_;
    rep.best.repair->trace.clear();
    rep.mpp_standard.resize(problem_.dimension());
    for (std::size_t i = 0; i < rep.mpp_standard.size(); ++i) {
      rep.mpp_standard[i] = incumbent_->beta * incumbent_->direction[i];
    }
    double norm = 0.0;
    for (double v : rep.mpp_standard) norm += v * v;
    rep.beta_hl = std::sqrt(norm);
    rep.mpp_physical = problem_.space.from_standard(rep.mpp_standard);
    rep.p_f = probability_of_failure(rep.beta_hl);
    rep.g0 = g0_;
    rep.penalty = penalty_;
    rep.stages = stages_;
    rep.generations = t;
    rep.evaluations = evaluations_;
    rep.clamp_events = clamp_events_;
    rep.zoom_loss_events = zoom_losses_;
    rep.history = std::move(history_);
    rep.region_history = std::move(region_history_);
    return rep;
  }

  const BenchmarkProblem& problem_;
  const RunConfig& config_;
  RunObserver* observer_;
  Rng rng_;
  double g0_;
  long evaluations_;
  PenaltyParams penalty_;
  RepairConfig repair_config_;
  RepairContext context_;
  SearchRegion region_;
  int threshold_ = 0;
  Population population_;
  std::optional<MixedGenotype> incumbent_;
  std::optional<MixedGenotype> best_any_;
  StageBoundaries stages_;
  std::size_t clamp_events_ = 0;
  std::optional<int> zoom_losses_;
  std::vector<GenerationRecord> history_;
  std::vector<SearchRegion> region_history_;
};

}  // namespace

RunReport run(const BenchmarkProblem& problem, const RunConfig& config, RunObserver* observer) {
  config.validate(problem.dimension());
  Search search(problem, config, observer);
  return search.execute();
}

}  // namespace hlri
