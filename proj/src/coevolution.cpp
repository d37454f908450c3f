#include "neuroevo/coevolution.hpp"

#include "engine_support.hpp"
#include "neuroevo/error.hpp"
#include "neuroevo/limited_evaluation.hpp"

#include <algorithm>

namespace neuroevo {

Decomposition decompose(const NetworkLayout& layout) {
    layout.validate();
    Decomposition decomp;
    for (std::size_t neuron = 0; neuron < layout.post_synaptic_count(); ++neuron) {
        decomp.blocks.push_back({layout.block_offset(neuron), layout.block_length(neuron)});
    }
    return decomp;
}

void splice_into(std::span<double> global, const Decomposition& decomp, std::size_t block_index,
                 std::span<const double> member) {
    if (block_index >= decomp.subpop_count()) {
        throw Error(ErrorCategory::InvalidArgument, "block index " + std::to_string(block_index) + " out of range");
    }
    const auto& block = decomp.blocks[block_index];
    if (member.size() != block.length) throw_dimension_mismatch("block", block.length, member.size());
    if (block.offset + block.length > global.size()) {
        throw_dimension_mismatch("global solution", block.offset + block.length, global.size());
    }
    std::ranges::copy(member, global.begin() + static_cast<std::ptrdiff_t>(block.offset));
}

Genotype splice(std::span<const double> global, const Decomposition& decomp, std::size_t block_index,
                std::span<const double> member) {
    Genotype spliced(global.begin(), global.end());
    splice_into(spliced, decomp, block_index, member);
    return spliced;
}

SubpopulationSet init_subpopulations(const Decomposition& decomp, const DEParams& params, Rng& rng) {
    SubpopulationSet set;
    std::size_t total = 0;
    for (const auto& block : decomp.blocks) {
        set.subpops.push_back(init_population(params, block.length, rng));
        total += block.length;
    }
    set.global_solution.assign(total, 0.0);
    for (std::size_t i = 0; i < decomp.subpop_count(); ++i) {
        splice_into(set.global_solution, decomp, i, set.subpops[i].member(0));
    }
    return set;
}

namespace {

Genotype assemble(const SubpopulationSet& set, std::span<const std::size_t> members) {
    Genotype global;
    global.reserve(set.global_solution.size());
    for (std::size_t i = 0; i < set.subpops.size(); ++i) {
        const auto member = set.subpops[i].member(members[i]);
        global.insert(global.end(), member.begin(), member.end());
    }
    return global;
}

FitnessTable sample_fitness(const SubpopulationSet& set, const NetworkLayout& layout, std::size_t trial,
                            const EvalSet& first_batch, Rng& rng, FitnessLedger* ledger,
                            const detail::Executor& executor) {
    if (trial == 0) throw Error(ErrorCategory::InvalidArgument, "trial must be at least 1");
    if (first_batch.empty()) throw Error(ErrorCategory::InvalidArgument, "sampling batch is empty");
    if (set.subpops.empty()) throw Error(ErrorCategory::InvalidArgument, "no subpopulations to sample");
    const std::size_t sp = set.subpops.size();
    const std::size_t np = set.subpops.front().size();
    const std::size_t samples = trial * np;

    std::vector<std::vector<std::size_t>> picks(samples, std::vector<std::size_t>(sp));
    for (auto& pick : picks) {
        for (std::size_t i = 0; i < sp; ++i) pick[i] = rng.index(set.subpops[i].size());
    }
    std::vector<double> scores(samples);
    executor.for_each(samples, [&](std::size_t c) { scores[c] = accuracy(assemble(set, picks[c]), layout, first_batch); });

    FitnessTable table;
    for (const auto& pop : set.subpops) {
        table.values.emplace_back(pop.size(), 0.0);
        table.counts.emplace_back(pop.size(), 0);
    }
    for (std::size_t c = 0; c < samples; ++c) {
        for (std::size_t i = 0; i < sp; ++i) {
            table.values[i][picks[c][i]] += scores[c];
            ++table.counts[i][picks[c][i]];
        }
        if (ledger) ledger->init_samples.push_back({picks[c], scores[c]});
    }
    for (std::size_t i = 0; i < sp; ++i) {
        for (std::size_t j = 0; j < table.values[i].size(); ++j) {
            if (table.counts[i][j] > 0) table.values[i][j] /= static_cast<double>(table.counts[i][j]);
        }
    }
    if (ledger) ledger->initial_fitness = table.values;
    return table;
}

double max_over(const std::vector<Population>& subpops) {
    double best = subpops.front().fitness()[subpops.front().best_index()];
    for (const auto& pop : subpops) best = std::max(best, pop.fitness()[pop.best_index()]);
    return best;
}

struct CoevolutionState {
    Decomposition decomp;
    SubpopulationSet set;
};

// Sampling, best-of-each assembly and initial validation shared by both
// co-evolutionary engines.
CoevolutionState initialize(detail::RunContext& ctx, const EvalSet& sampling_set, std::size_t epoch, Rng& rng) {
    const auto& options = ctx.options();
    CoevolutionState state{decompose(ctx.layout()), {}};
    state.set = init_subpopulations(state.decomp, options.de, rng);
    const FitnessTable table =
        sample_fitness(state.set, ctx.layout(), options.trial, sampling_set, rng, ctx.ledger(), ctx.executor());
    ctx.charge(options.trial * options.de.NP);
    for (std::size_t i = 0; i < state.set.subpops.size(); ++i) state.set.subpops[i].fitness() = table.values[i];
    state.set.global_solution = best_of_each(state.set, table);

    const double validation = ctx.validate(state.set.global_solution);
    ctx.offer(state.set.global_solution, validation);
    ctx.record_generation(0, epoch, 0, max_over(state.set.subpops), validation);
    return state;
}

// Copies the subpopulation's best member into the global solution and both
// cached evaluators, then validates the updated global solution.
double promote_best(detail::RunContext& ctx, CoevolutionState& state, std::size_t i,
                    SubstitutionEvaluator& training, SubstitutionEvaluator& validation) {
    const auto& pop = state.set.subpops[i];
    const auto best = pop.member(pop.best_index());
    splice_into(state.set.global_solution, state.decomp, i, best);
    training.commit(i, best);
    validation.commit(i, best);
    ctx.count_validation();
    const double score = validation.base_accuracy();
    ctx.offer(state.set.global_solution, score);
    return score;
}

}  // namespace

FitnessTable init_fitness_sampling(const SubpopulationSet& set, const NetworkLayout& layout, std::size_t trial,
                                   const EvalSet& first_batch, Rng& rng, FitnessLedger* ledger) {
    const Decomposition decomp = decompose(layout);
    if (set.subpops.size() != decomp.subpop_count()) {
        throw_dimension_mismatch("subpopulation count", decomp.subpop_count(), set.subpops.size());
    }
    for (std::size_t i = 0; i < set.subpops.size(); ++i) {
        if (set.subpops[i].dim() != decomp.blocks[i].length) {
            throw_dimension_mismatch("subpopulation " + std::to_string(i) + " dimension", decomp.blocks[i].length,
                                     set.subpops[i].dim());
        }
    }
    return sample_fitness(set, layout, trial, first_batch, rng, ledger, detail::Executor(1));
}

Genotype best_of_each(const SubpopulationSet& set, const FitnessTable& fitness) {
    if (fitness.values.size() != set.subpops.size()) {
        throw_dimension_mismatch("fitness table rows", set.subpops.size(), fitness.values.size());
    }
    std::vector<std::size_t> chosen(set.subpops.size());
    for (std::size_t i = 0; i < set.subpops.size(); ++i) {
        const auto& row = fitness.values[i];
        if (row.size() != set.subpops[i].size()) throw_dimension_mismatch("fitness row", set.subpops[i].size(), row.size());
        chosen[i] = static_cast<std::size_t>(std::distance(row.begin(), std::ranges::max_element(row)));
    }
    return assemble(set, chosen);
}

RunReport evolve_ccde(const NetworkLayout& layout, const DataSplits& splits, const EngineOptions& options, Rng& rng) {
    detail::check_splits(layout, splits);
    options.de.validate();
    if (options.trial == 0) throw Error(ErrorCategory::InvalidArgument, "trial must be at least 1");
    const std::size_t np = options.de.NP;
    detail::check_budget(options.fe_budget, options.trial * np, "CCDE");

    detail::RunContext ctx("CCDE", layout, splits, options);
    FitnessLedger* ledger = ctx.ledger();
    CoevolutionState state = initialize(ctx, splits.train, 0, rng);
    auto& subpops = state.set.subpops;

    SubstitutionEvaluator training(layout, splits.train, state.set.global_solution);
    SubstitutionEvaluator validation(layout, splits.valid, state.set.global_solution);

    std::size_t generation = 0;
    bool exhausted = false;
    while (!exhausted) {
        const std::size_t next_generation = generation + 1;
        double last_validation = 0.0;
        bool progressed = false;
        for (std::size_t i = 0; i < subpops.size(); ++i) {
            const std::size_t count = ctx.affordable(1, np);
            if (count == 0) {
                exhausted = true;
                break;
            }
            Population& pop = subpops[i];
            const auto offspring = detail::breed(pop, count, options.de, rng);
            std::vector<double> trial_fitness(count);
            ctx.executor().for_each(
                count, [&](std::size_t j) { trial_fitness[j] = training.accuracy_with(i, offspring[j].trial); });
            ctx.charge(count);

            Population next = pop;
            for (std::size_t j = 0; j < count; ++j) {
                const bool keep = select(pop.fitness()[j], trial_fitness[j]);
                if (keep) {
                    std::ranges::copy(offspring[j].trial, next.member(j).begin());
                    next.fitness()[j] = trial_fitness[j];
                }
                if (ledger) {
                    ledger->steps.push_back({next_generation, 0, 0, i, j, offspring[j].donors, pop.fitness()[j],
                                             trial_fitness[j], pop.fitness()[j], trial_fitness[j], keep});
                }
            }
            pop = std::move(next);
            if (ledger) ledger->commits.push_back({next_generation, i, pop.fitness()});

            last_validation = promote_best(ctx, state, i, training, validation);
            ctx.record_subpop_update(next_generation, 0, 0, i, pop.fitness()[pop.best_index()], last_validation);
            progressed = true;
        }
        if (!progressed) break;
        generation = next_generation;
        ctx.record_generation(generation, 0, 0, max_over(subpops), last_validation);
    }
    return ctx.finish();
}

RunReport evolve_leccde(const NetworkLayout& layout, const DataSplits& splits, const EngineOptions& options,
                        Rng& rng) {
    detail::check_splits(layout, splits);
    options.de.validate();
    detail::check_batching(options, splits.train.size());
    if (options.trial == 0) throw Error(ErrorCategory::InvalidArgument, "trial must be at least 1");
    const std::size_t np = options.de.NP;
    detail::check_budget(options.fe_budget, options.trial * np, "LECCDE");

    detail::RunContext ctx("LECCDE", layout, splits, options);
    FitnessLedger* ledger = ctx.ledger();
    const double decay = options.decay;

    std::size_t epoch = 1;
    BatchSchedule schedule = partition_batches(splits.train.size(), options.batch_size, rng);
    auto gather_batches = [&] {
        std::vector<EvalSet> sets;
        for (const auto& batch : schedule.batches) sets.push_back(splits.train.gather(batch.instance_indices));
        return sets;
    };
    std::vector<EvalSet> batches = gather_batches();

    // Subpopulations are drawn after the first schedule; sampling uses batch 1.
    CoevolutionState state = initialize(ctx, batches[0], epoch, rng);
    auto& subpops = state.set.subpops;
    SubstitutionEvaluator validation(layout, splits.valid, state.set.global_solution);

    std::size_t generation = 0;
    bool exhausted = false;
    while (!exhausted) {
        for (std::size_t b = 0; b < batches.size() && !exhausted; ++b) {
            SubstitutionEvaluator training(layout, batches[b], state.set.global_solution);
            const std::size_t next_generation = generation + 1;
            double last_validation = 0.0;
            bool progressed = false;
            for (std::size_t i = 0; i < subpops.size(); ++i) {
                const std::size_t count = ctx.affordable(2, np);
                if (count == 0) {
                    exhausted = true;
                    break;
                }
                Population& pop = subpops[i];
                const auto offspring = detail::breed(pop, count, options.de, rng);
                // slot j: target j, slot count + j: trial j
                std::vector<double> raw(2 * count);
                ctx.executor().for_each(2 * count, [&](std::size_t s) {
                    raw[s] = s < count ? training.accuracy_with(i, pop.member(s))
                                       : training.accuracy_with(i, offspring[s - count].trial);
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
                        ledger->steps.push_back({next_generation, epoch, b, i, j, offspring[j].donors, raw[j],
                                                 raw[count + j], target, trial, keep});
                    }
                }
                pop = std::move(next);
                if (ledger) ledger->commits.push_back({next_generation, i, pop.fitness()});

                last_validation = promote_best(ctx, state, i, training, validation);
                ctx.record_subpop_update(next_generation, epoch, b, i, pop.fitness()[pop.best_index()],
                                         last_validation);
                progressed = true;
            }
            if (!progressed) break;
            generation = next_generation;
            ctx.record_generation(generation, epoch, b, max_over(subpops), last_validation);
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
