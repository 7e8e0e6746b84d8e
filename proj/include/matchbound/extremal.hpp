#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <unordered_set>
#include <vector>

#include "matchbound/digraph.hpp"
#include "matchbound/market.hpp"
#include "matchbound/rng.hpp"
#include "matchbound/solvers.hpp"

namespace matchbound {

/// How preference content left unconstrained by the extension rules is
/// filled in. RandomSeeded places added agents anywhere below the protected
/// partner; AgreementAtTop places them below every participant of the base's
/// normal form.
enum class FillPolicy { RandomSeeded, AgreementAtTop };

/// Recipe for extending a base market around one of its stable matchings.
/// The construction guarantees `base_stable` stays stable in the extension,
/// so the extension's stable size equals the base's.
struct ExtensionPlan {
    Market base;
    Matching base_stable;
    int new_workers = 0;
    int new_firms = 0;
    std::uint64_t seed = 0;
    FillPolicy policy = FillPolicy::RandomSeeded;
    /// Chance that an unconstrained original/added pair is made acceptable
    /// on top of the one partner each added agent always receives. Zero
    /// keeps instances minimal.
    double extra_acceptability = 0.0;
};

namespace detail {

inline std::string fresh_label(const std::string& prefix, int& counter,
                               std::unordered_set<std::string>& used) {
    std::string candidate;
    do {
        candidate = prefix + std::to_string(++counter);
    } while (!used.insert(candidate).second);
    return candidate;
}

// Appends added agents to `base`. Added worker i finds old firms
// `added_worker_firms[i]` acceptable (and vice versa for firms); no
// added/added pair exists. Each added entry is spliced into the old agent's
// list at a seeded slot no earlier than that agent's floor, so everything
// the floor protects stays preferred. Added agents' own lists are seeded
// shuffles of their partner sets.
inline Market extend_market(const Market& base, const std::vector<int>& worker_floors,
                            const std::vector<int>& firm_floors,
                            const std::vector<std::vector<int>>& added_worker_firms,
                            const std::vector<std::vector<int>>& added_firm_workers,
                            std::mt19937_64& rng) {
    const int base_workers = base.worker_count();
    const int base_firms = base.firm_count();

    MarketData data;
    std::unordered_set<std::string> used;
    for (int w = 0; w < base_workers; ++w) {
        data.worker_labels.push_back(base.worker_label(w));
        used.insert(base.worker_label(w));
    }
    for (int f = 0; f < base_firms; ++f) {
        data.firm_labels.push_back(base.firm_label(f));
        used.insert(base.firm_label(f));
    }
    int worker_counter = base_workers;
    for (std::size_t i = 0; i < added_worker_firms.size(); ++i) {
        data.worker_labels.push_back(fresh_label("w", worker_counter, used));
    }
    int firm_counter = base_firms;
    for (std::size_t j = 0; j < added_firm_workers.size(); ++j) {
        data.firm_labels.push_back(fresh_label("f", firm_counter, used));
    }

    auto splice = [&](std::vector<int> list, std::size_t floor, const std::vector<int>& incoming) {
        for (int added : incoming) {
            const std::size_t slot =
                floor + static_cast<std::size_t>(bounded(rng, list.size() - floor + 1));
            list.insert(list.begin() + slot, added);
        }
        return list;
    };

    for (int w = 0; w < base_workers; ++w) {
        std::vector<int> incoming;
        for (std::size_t j = 0; j < added_firm_workers.size(); ++j) {
            for (int ww : added_firm_workers[j]) {
                if (ww == w) incoming.push_back(base_firms + static_cast<int>(j));
            }
        }
        data.worker_prefs.push_back(splice(base.worker_prefs(w), worker_floors[w], incoming));
    }
    for (std::size_t i = 0; i < added_worker_firms.size(); ++i) {
        std::vector<int> list = added_worker_firms[i];
        shuffle_in_place(list, rng);
        data.worker_prefs.push_back(std::move(list));
    }

    for (int f = 0; f < base_firms; ++f) {
        std::vector<int> incoming;
        for (std::size_t i = 0; i < added_worker_firms.size(); ++i) {
            for (int ff : added_worker_firms[i]) {
                if (ff == f) incoming.push_back(base_workers + static_cast<int>(i));
            }
        }
        data.firm_prefs.push_back(splice(base.firm_prefs(f), firm_floors[f], incoming));
    }
    for (std::size_t j = 0; j < added_firm_workers.size(); ++j) {
        std::vector<int> list = added_firm_workers[j];
        shuffle_in_place(list, rng);
        data.firm_prefs.push_back(std::move(list));
    }

    return Market::from_data(std::move(data), Mutuality::Require);
}

inline void validate_plan_common(const ExtensionPlan& plan) {
    if (plan.base.empty()) {
        throw MarketError("plan base must not be empty");
    }
    if (plan.new_workers < 0 || plan.new_firms < 0) {
        throw MarketError("added agent counts must be non-negative");
    }
    if (plan.extra_acceptability < 0.0 || plan.extra_acceptability > 1.0) {
        throw MarketError("extra_acceptability must lie in [0, 1]");
    }
    if (!is_stable(plan.base, plan.base_stable)) {
        throw MarketError("plan base_stable is not a stable matching of the base");
    }
}

// Acceptability sets for the added agents of one side: each candidate
// independently with the plan's extra probability, topped up to at least one
// partner.
inline std::vector<std::vector<int>> sample_partner_sets(int count,
                                                         const std::vector<int>& candidates,
                                                         double extra, std::mt19937_64& rng) {
    std::vector<std::vector<int>> sets;
    for (int i = 0; i < count; ++i) {
        std::vector<int> partners;
        for (int candidate : candidates) {
            if (chance(rng, extra)) partners.push_back(candidate);
        }
        if (partners.empty()) {
            partners.push_back(candidates[bounded(rng, candidates.size())]);
        }
        sets.push_back(std::move(partners));
    }
    return sets;
}

}  // namespace detail

/// Extends the plan's base market with the planned number of added workers
/// and firms. The base must be balanced and `base_stable` must cover all of
/// it. Each added agent receives at least one original partner, no
/// added/added pair is acceptable, and every original agent ranks its added
/// partners below its `base_stable` partner. `base_stable` therefore remains
/// stable in the output, whose stable size equals the base's.
inline Market generate_gn(const ExtensionPlan& plan) {
    detail::validate_plan_common(plan);
    if (plan.base.worker_count() != plan.base.firm_count()) {
        throw MarketError("plan base must have equally many workers and firms");
    }
    if (plan.base_stable.size() != plan.base.worker_count()) {
        throw MarketError("plan base_stable must cover every agent of the base");
    }
    if (plan.new_workers == 0 && plan.new_firms == 0) return plan.base;

    std::mt19937_64 rng(splitmix64(plan.seed));
    const Market& base = plan.base;

    std::vector<int> all_workers(base.worker_count());
    std::vector<int> all_firms(base.firm_count());
    for (int w = 0; w < base.worker_count(); ++w) all_workers[w] = w;
    for (int f = 0; f < base.firm_count(); ++f) all_firms[f] = f;

    const auto added_worker_firms =
        detail::sample_partner_sets(plan.new_workers, all_firms, plan.extra_acceptability, rng);
    const auto added_firm_workers =
        detail::sample_partner_sets(plan.new_firms, all_workers, plan.extra_acceptability, rng);

    std::vector<int> worker_floors(base.worker_count());
    std::vector<int> firm_floors(base.firm_count());
    for (int w = 0; w < base.worker_count(); ++w) {
        worker_floors[w] = plan.policy == FillPolicy::AgreementAtTop
                               ? static_cast<int>(base.worker_prefs(w).size())
                               : base.worker_rank(w, *plan.base_stable.firm_for(w)) + 1;
    }
    for (int f = 0; f < base.firm_count(); ++f) {
        firm_floors[f] = plan.policy == FillPolicy::AgreementAtTop
                             ? static_cast<int>(base.firm_prefs(f).size())
                             : base.firm_rank(f, *plan.base_stable.worker_for(f)) + 1;
    }

    return detail::extend_market(base, worker_floors, firm_floors, added_worker_firms,
                                 added_firm_workers, rng);
}

/// Agreement-at-top extension: added agents are acceptable only to the
/// participants of the base's normal form (the matched sets W*, F* of
/// `base_stable`), and those participants rank every added partner below all
/// of their normal-form partners. This preserves the base's stable matchings
/// exactly, not just their size, so a market may be extended repeatedly. The
/// base need not be balanced or its own normal form; `base_stable` must be
/// stable.
inline Market generate_agreement_at_top(const ExtensionPlan& plan) {
    if (plan.policy != FillPolicy::AgreementAtTop) {
        throw MarketError("plan policy must be AgreementAtTop");
    }
    detail::validate_plan_common(plan);
    if (plan.base_stable.size() == 0) {
        throw MarketError("plan base_stable must not be empty");
    }
    if (plan.new_workers == 0 && plan.new_firms == 0) return plan.base;

    std::mt19937_64 rng(splitmix64(plan.seed));
    const Market& base = plan.base;

    std::vector<int> core_workers;
    std::vector<int> core_firms;
    for (int w = 0; w < base.worker_count(); ++w) {
        if (plan.base_stable.firm_for(w)) core_workers.push_back(w);
    }
    for (int f = 0; f < base.firm_count(); ++f) {
        if (plan.base_stable.worker_for(f)) core_firms.push_back(f);
    }

    const auto added_worker_firms =
        detail::sample_partner_sets(plan.new_workers, core_firms, plan.extra_acceptability, rng);
    const auto added_firm_workers =
        detail::sample_partner_sets(plan.new_firms, core_workers, plan.extra_acceptability, rng);

    // Floors sit right below the last normal-form partner in each core
    // agent's list; non-core agents receive no added partners.
    std::vector<int> worker_floors(base.worker_count(), 0);
    for (int w : core_workers) {
        int floor = 0;
        for (int f : core_firms) {
            floor = std::max(floor, base.worker_rank(w, f) + 1);
        }
        worker_floors[w] = floor;
    }
    std::vector<int> firm_floors(base.firm_count(), 0);
    for (int f : core_firms) {
        int floor = 0;
        for (int w : core_workers) {
            floor = std::max(floor, base.firm_rank(f, w) + 1);
        }
        firm_floors[f] = floor;
    }

    return detail::extend_market(base, worker_floors, firm_floors, added_worker_firms,
                                 added_firm_workers, rng);
}

struct GnValidation {
    std::vector<std::string> violations;

    bool ok() const { return violations.empty(); }
};

/// Structural check of the extension conditions on the matching digraph,
/// for the partition of `m` into base agents (covered by `base_stable`) and
/// added agents (`added_workers` / `added_firms`):
///   (a) no acceptable pair joins an added worker and an added firm;
///   (b) every vertex (w', f) with added w' has an arc into f's matched
///       vertex (w, f);
///   (c) symmetrically, every vertex (w, f') with added f' has an arc into
///       (w, f).
/// Returns every violation found.
inline GnValidation validate_gn_structure(const Market& m, const Matching& base_stable,
                                          const std::vector<int>& added_workers,
                                          const std::vector<int>& added_firms) {
    std::vector<bool> worker_added(m.worker_count(), false);
    std::vector<bool> firm_added(m.firm_count(), false);
    for (int w : added_workers) {
        if (w < 0 || w >= m.worker_count()) throw MarketError("added worker index out of range");
        worker_added[w] = true;
    }
    for (int f : added_firms) {
        if (f < 0 || f >= m.firm_count()) throw MarketError("added firm index out of range");
        firm_added[f] = true;
    }
    for (int w = 0; w < m.worker_count(); ++w) {
        if (worker_added[w] == bool(base_stable.firm_for(w))) {
            throw MarketError("worker '" + m.worker_label(w) +
                              "' must be either matched in base_stable or listed as added");
        }
    }
    for (int f = 0; f < m.firm_count(); ++f) {
        if (firm_added[f] == bool(base_stable.worker_for(f))) {
            throw MarketError("firm '" + m.firm_label(f) +
                              "' must be either matched in base_stable or listed as added");
        }
    }
    if (!is_individually_rational(m, base_stable)) {
        throw MarketError("base_stable contains a pair that is not acceptable");
    }

    const MatchingDigraph d = build_digraph(m);
    auto has_arc = [&](int from, int to) {
        const auto& out = d.out_neighbors(from);
        return std::find(out.begin(), out.end(), to) != out.end();
    };

    GnValidation result;
    for (int w : added_workers) {
        for (int f : added_firms) {
            if (m.acceptable(w, f)) {
                result.violations.push_back("acceptable pair (" + m.worker_label(w) + "," +
                                            m.firm_label(f) + ") joins two added agents");
            }
        }
    }
    for (const Pair& p : base_stable.pairs()) {
        const int matched_vertex = *d.vertex_index(p);
        for (int w : added_workers) {
            const auto v = d.vertex_index({w, p.firm});
            if (v && !has_arc(*v, matched_vertex)) {
                result.violations.push_back(
                    "firm '" + m.firm_label(p.firm) + "' prefers added worker '" +
                    m.worker_label(w) + "' over its matched partner '" + m.worker_label(p.worker) +
                    "'");
            }
        }
        for (int f : added_firms) {
            const auto v = d.vertex_index({p.worker, f});
            if (v && !has_arc(*v, matched_vertex)) {
                result.violations.push_back(
                    "worker '" + m.worker_label(p.worker) + "' prefers added firm '" +
                    m.firm_label(f) + "' over its matched partner '" + m.firm_label(p.firm) + "'");
            }
        }
    }
    return result;
}

/// Membership in the class of markets with a stable matching of size `n`.
/// All stable matchings of a market share one size, so a single
/// deferred-acceptance run decides.
inline bool is_member_gn(const Market& m, int n) {
    return deferred_acceptance(m, SolveSide::WorkerProposing).size() == n;
}

/// Balanced market in which w_i and f_i are mutually top-ranked and all
/// pairs are acceptable; its unique stable matching is the identity. Ranks
/// beyond the top are a seeded shuffle.
inline Market identity_market(int size, std::uint64_t seed = 0) {
    if (size < 1) throw MarketError("identity market needs at least one pair");
    std::mt19937_64 rng(splitmix64(seed));
    MarketData data;
    for (int i = 0; i < size; ++i) {
        data.worker_labels.push_back("w" + std::to_string(i + 1));
        data.firm_labels.push_back("f" + std::to_string(i + 1));
    }
    auto build_prefs = [&](int self) {
        std::vector<int> rest;
        for (int k = 0; k < size; ++k) {
            if (k != self) rest.push_back(k);
        }
        shuffle_in_place(rest, rng);
        std::vector<int> prefs{self};
        prefs.insert(prefs.end(), rest.begin(), rest.end());
        return prefs;
    };
    for (int i = 0; i < size; ++i) data.worker_prefs.push_back(build_prefs(i));
    for (int i = 0; i < size; ++i) data.firm_prefs.push_back(build_prefs(i));
    return Market::from_data(std::move(data), Mutuality::Require);
}

/// A market with maximum matching size exactly `n` whose stable matchings
/// have size ceil(n/2), the extremal witness that the half-size bound is
/// tight. Built from an identity base of size ceil(n/2) plus floor(n/2)
/// added workers and firms, wired so the cross pairs (w_i, f'_i) and
/// (w'_i, f_i) form the large matching. For odd `n` the last identity pair
/// carries the extra slot.
inline Market generate_fn(int n, std::uint64_t seed = 0,
                          FillPolicy policy = FillPolicy::RandomSeeded) {
    if (n < 2) throw MarketError("generate_fn requires n >= 2");
    const int base_size = (n + 1) / 2;
    const int added = n / 2;

    const Market base = identity_market(base_size, splitmix64(seed));

    std::mt19937_64 rng(splitmix64(splitmix64(seed + 1)));
    std::vector<std::vector<int>> added_worker_firms;
    std::vector<std::vector<int>> added_firm_workers;
    for (int i = 0; i < added; ++i) {
        added_worker_firms.push_back({i});
        added_firm_workers.push_back({i});
    }
    std::vector<int> worker_floors(base_size);
    std::vector<int> firm_floors(base_size);
    for (int i = 0; i < base_size; ++i) {
        // The protected partner is the identity one, ranked first.
        worker_floors[i] = policy == FillPolicy::AgreementAtTop ? base_size : 1;
        firm_floors[i] = policy == FillPolicy::AgreementAtTop ? base_size : 1;
    }
    return detail::extend_market(base, worker_floors, firm_floors, added_worker_firms,
                                 added_firm_workers, rng);
}

/// Membership per the tightness characterization: a matching of size `n`
/// exists and the stable size is exactly ceil(n/2).
inline bool is_member_fn(const Market& m, int n) {
    return maximum_matching(m).size() >= n &&
           deferred_acceptance(m, SolveSide::WorkerProposing).size() == (n + 1) / 2;
}

}  // namespace matchbound
