#include "neuroevo/de_ops.hpp"

#include "engine_support.hpp"
#include "neuroevo/error.hpp"
#include "neuroevo/limited_evaluation.hpp"

#include <algorithm>
#include <cmath>

namespace neuroevo {

std::size_t Population::best_index() const {
    std::size_t best = 0;
    for (std::size_t i = 1; i < fitness_.size(); ++i) {
        if (fitness_[i] > fitness_[best]) best = i;
    }
    return best;
}

Population init_population(const DEParams& params, std::size_t dim, Rng& rng) {
    if (dim == 0) throw Error(ErrorCategory::InvalidArgument, "population dimension must be positive");
    Population pop(params.NP, dim);
    const double below_high = std::nextafter(params.init_high, params.init_low);
    for (std::size_t i = 0; i < params.NP; ++i) {
        for (double& gene : pop.member(i)) gene = std::min(rng.uniform(params.init_low, params.init_high), below_high);
    }
    return pop;
}

Mutant mutate_rand1(const Population& pop, std::size_t target_index, double F, Rng& rng) {
    const std::size_t np = pop.size();
    if (np < 4) {
        throw Error(ErrorCategory::InvalidArgument,
                    "rand/1 mutation needs at least 4 members, population has " + std::to_string(np));
    }
    if (target_index >= np) {
        throw Error(ErrorCategory::InvalidArgument, "target index " + std::to_string(target_index) + " out of range");
    }
    Mutant mutant;
    auto& [r1, r2, r3] = mutant.donors;
    do r1 = rng.index(np); while (r1 == target_index);
    do r2 = rng.index(np); while (r2 == target_index || r2 == r1);
    do r3 = rng.index(np); while (r3 == target_index || r3 == r1 || r3 == r2);

    const auto base = pop.member(r1);
    const auto plus = pop.member(r2);
    const auto minus = pop.member(r3);
    mutant.genes.resize(pop.dim());
    for (std::size_t j = 0; j < pop.dim(); ++j) mutant.genes[j] = base[j] + F * (plus[j] - minus[j]);
    return mutant;
}

std::vector<double> crossover_binomial(std::span<const double> target, std::span<const double> mutant, double CR,
                                       Rng& rng) {
    if (target.size() != mutant.size()) throw_dimension_mismatch("mutant", target.size(), mutant.size());
    if (target.empty()) throw Error(ErrorCategory::InvalidArgument, "crossover of empty vectors");
    const std::size_t forced = rng.index(target.size());
    std::vector<double> trial(target.begin(), target.end());
    for (std::size_t j = 0; j < trial.size(); ++j) {
        if (rng.uniform() < CR || j == forced) trial[j] = mutant[j];
    }
    return trial;
}

namespace {

double max_fitness(const Population& pop) { return pop.fitness()[pop.best_index()]; }

void validate_best(detail::RunContext& ctx, const Population& pop, std::size_t generation, std::size_t epoch,
                   std::size_t batch) {
    const auto best = pop.member(pop.best_index());
    const double validation = ctx.validate(best);
    ctx.offer(best, validation);
    ctx.record_generation(generation, epoch, batch, max_fitness(pop), validation);
}

}  // namespace

RunReport evolve_de(const NetworkLayout& layout, const DataSplits& splits, const EngineOptions& options, Rng& rng) {
    detail::check_splits(layout, splits);
    options.de.validate();
    const std::size_t np = options.de.NP;
    detail::check_budget(options.fe_budget, np, "DE");

    detail::RunContext ctx("DE", layout, splits, options);
    FitnessLedger* ledger = ctx.ledger();
    const auto& train = splits.train;

    Population pop = init_population(options.de, genotype_len(layout), rng);
    ctx.executor().for_each(np, [&](std::size_t i) { pop.fitness()[i] = accuracy(pop.member(i), layout, train); });
    ctx.charge(np);
    if (ledger) ledger->initial_fitness = {pop.fitness()};
    validate_best(ctx, pop, 0, 0, 0);

    std::size_t generation = 0;
    while (const std::size_t count = ctx.affordable(1, np)) {
        ++generation;
        const auto offspring = detail::breed(pop, count, options.de, rng);
        std::vector<double> trial_fitness(count);
        ctx.executor().for_each(count,
                                [&](std::size_t j) { trial_fitness[j] = accuracy(offspring[j].trial, layout, train); });
        ctx.charge(count);

        Population next = pop;
        for (std::size_t j = 0; j < count; ++j) {
            const bool keep = select(pop.fitness()[j], trial_fitness[j]);
            if (keep) {
                std::ranges::copy(offspring[j].trial, next.member(j).begin());
                next.fitness()[j] = trial_fitness[j];
            }
            if (ledger) {
                ledger->steps.push_back({generation, 0, 0, 0, j, offspring[j].donors, pop.fitness()[j],
                                         trial_fitness[j], pop.fitness()[j], trial_fitness[j], keep});
            }
        }
        pop = std::move(next);
        if (ledger) ledger->commits.push_back({generation, 0, pop.fitness()});
        validate_best(ctx, pop, generation, 0, 0);
    }
    return ctx.finish();
}

RunReport evolve_lede(const NetworkLayout& layout, const DataSplits& splits, const EngineOptions& options, Rng& rng) {
    detail::check_splits(layout, splits);
    options.de.validate();
    detail::check_batching(options, splits.train.size());
    const std::size_t np = options.de.NP;
    detail::check_budget(options.fe_budget, np, "LEDE");

    detail::RunContext ctx("LEDE", layout, splits, options);
    FitnessLedger* ledger = ctx.ledger();
    const double decay = options.decay;

    Population pop = init_population(options.de, genotype_len(layout), rng);
    std::size_t epoch = 1;
    BatchSchedule schedule = partition_batches(splits.train.size(), options.batch_size, rng);
    auto gather_batches = [&] {
        std::vector<EvalSet> sets;
        for (const auto& batch : schedule.batches) sets.push_back(splits.train.gather(batch.instance_indices));
        return sets;
    };
    std::vector<EvalSet> batches = gather_batches();

    ctx.executor().for_each(np, [&](std::size_t i) { pop.fitness()[i] = accuracy(pop.member(i), layout, batches[0]); });
    ctx.charge(np);
    if (ledger) ledger->initial_fitness = {pop.fitness()};
    validate_best(ctx, pop, 0, epoch, 0);

    std::size_t generation = 0;
    bool exhausted = false;
    while (!exhausted) {
        for (std::size_t b = 0; b < batches.size(); ++b) {
            const std::size_t count = ctx.affordable(2, np);
            if (count == 0) {
                exhausted = true;
                break;
            }
            ++generation;
            const auto offspring = detail::breed(pop, count, options.de, rng);
            // slot j: target j, slot count + j: trial j
            std::vector<double> raw(2 * count);
            ctx.executor().for_each(2 * count, [&](std::size_t s) {
                raw[s] = s < count ? accuracy(pop.member(s), layout, batches[b])
                                   : accuracy(offspring[s - count].trial, layout, batches[b]);
            });
            ctx.charge(2 * count);

            const auto& fitness = pop.fitness();
            Population next = pop;
            for (std::size_t j = 0; j < count; ++j) {
                const auto [r1, r2, r3] = offspring[j].donors;
                const double target = inherit_asexual(fitness[j], decay, raw[j]);
                const double donors = mutant_fitness(fitness[r1], fitness[r2], fitness[r3]);
                const double trial = inherit_sexual(fitness[j], donors, decay, raw[count + j]);
                const bool keep = select(target, trial);
                if (keep) std::ranges::copy(offspring[j].trial, next.member(j).begin());
                next.fitness()[j] = keep ? trial : target;
                if (ledger) {
                    ledger->steps.push_back({generation, epoch, b, 0, j, offspring[j].donors, raw[j], raw[count + j],
                                             target, trial, keep});
                }
            }
            pop = std::move(next);
            if (ledger) ledger->commits.push_back({generation, 0, pop.fitness()});
            validate_best(ctx, pop, generation, epoch, b);
        }
        if (exhausted || ctx.affordable(2, np) == 0) break;
        ++epoch;
        if (options.reshuffle_per_epoch) {
            schedule = partition_batches(splits.train.size(), options.batch_size, rng);
            batches = gather_batches();
        }
    }
    return ctx.finish();
}

}  // namespace neuroevo
