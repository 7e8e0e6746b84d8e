#pragma once

#include <algorithm>
#include <cassert>
#include <vector>

#include "matchbound/market.hpp"

namespace matchbound {

enum class SolveSide { WorkerProposing, FirmProposing };

/// Scheduling of proposals inside deferred acceptance. The outcome is
/// schedule-independent; two variants exist so tests can assert that.
enum class ProposalOrder { RoundRobin, DepthFirst };

/// Guard for the exhaustive routines, in acceptable pairs.
inline constexpr int kDefaultEnumerationCap = 24;

namespace detail {

// One side of the market seen as proposers; receivers hold their best offer.
struct DeferredAcceptanceState {
    const Market& m;
    SolveSide side;

    int proposer_count() const {
        return side == SolveSide::WorkerProposing ? m.worker_count() : m.firm_count();
    }
    const std::vector<int>& prefs(int proposer) const {
        return side == SolveSide::WorkerProposing ? m.worker_prefs(proposer)
                                                  : m.firm_prefs(proposer);
    }
    // Lower is better from the receiver's point of view.
    int receiver_rank(int receiver, int proposer) const {
        return side == SolveSide::WorkerProposing ? m.firm_rank(receiver, proposer)
                                                  : m.worker_rank(receiver, proposer);
    }
    int receiver_count() const {
        return side == SolveSide::WorkerProposing ? m.firm_count() : m.worker_count();
    }
};

}  // namespace detail

/// Gale–Shapley deferred acceptance. Returns the proposing-side-optimal
/// stable matching: every proposer weakly prefers their partner here to
/// their partner in any other stable matching.
inline Matching deferred_acceptance(const Market& m, SolveSide side,
                                    ProposalOrder order = ProposalOrder::RoundRobin) {
    const detail::DeferredAcceptanceState st{m, side};
    std::vector<std::size_t> next_choice(st.proposer_count(), 0);
    std::vector<int> held_by(st.receiver_count(), -1);     // receiver -> proposer
    std::vector<int> engaged_to(st.proposer_count(), -1);  // proposer -> receiver

    auto propose = [&](int proposer) {
        // Walk the proposer's list until someone holds the offer.
        while (engaged_to[proposer] < 0 && next_choice[proposer] < st.prefs(proposer).size()) {
            const int receiver = st.prefs(proposer)[next_choice[proposer]++];
            const int rival = held_by[receiver];
            // Strict preferences: a rank tie between distinct proposers is
            // unreachable.
            assert(rival < 0 ||
                   st.receiver_rank(receiver, rival) != st.receiver_rank(receiver, proposer));
            if (rival >= 0 &&
                st.receiver_rank(receiver, rival) < st.receiver_rank(receiver, proposer)) {
                continue;  // receiver keeps the rival
            }
            held_by[receiver] = proposer;
            engaged_to[proposer] = receiver;
            if (rival >= 0) {
                engaged_to[rival] = -1;
                return rival;  // displaced, must re-propose
            }
            return -1;
        }
        return -1;
    };

    if (order == ProposalOrder::RoundRobin) {
        // Rounds over proposers in index order; a displaced proposer waits
        // for the next round.
        bool progress = true;
        while (progress) {
            progress = false;
            for (int p = 0; p < st.proposer_count(); ++p) {
                if (engaged_to[p] < 0 && next_choice[p] < st.prefs(p).size()) {
                    propose(p);
                    progress = true;
                }
            }
        }
    } else {
        // McVitie–Wilson style: a displaced proposer re-proposes immediately.
        for (int p = 0; p < st.proposer_count(); ++p) {
            int current = p;
            while (current >= 0) current = propose(current);
        }
    }

    std::vector<Pair> pairs;
    for (int p = 0; p < st.proposer_count(); ++p) {
        if (engaged_to[p] < 0) continue;
        pairs.push_back(side == SolveSide::WorkerProposing ? Pair{p, engaged_to[p]}
                                                           : Pair{engaged_to[p], p});
    }
    return Matching::from_pairs(m, std::move(pairs));
}

/// Every stable matching of `m`, each exactly once, in canonical order
/// (lexicographic by sorted pair list). Exhaustive search over all matchings
/// by assigning workers in index order; guarded by `cap` acceptable pairs.
inline std::vector<Matching> enumerate_stable(const Market& m, int cap = kDefaultEnumerationCap) {
    if (static_cast<int>(m.acceptable_pairs().size()) > cap) {
        throw MarketError("market has " + std::to_string(m.acceptable_pairs().size()) +
                          " acceptable pairs, above the enumeration cap of " + std::to_string(cap));
    }
    std::vector<Matching> stable;
    std::vector<Pair> current;
    std::vector<bool> firm_used(m.firm_count(), false);

    auto recurse = [&](auto&& self, int w) -> void {
        if (w == m.worker_count()) {
            Matching mu = Matching::from_pairs(m, current);
            if (is_stable(m, mu)) stable.push_back(std::move(mu));
            return;
        }
        self(self, w + 1);  // w stays unmatched
        for (int f : m.worker_prefs(w)) {
            if (firm_used[f]) continue;
            firm_used[f] = true;
            current.push_back({w, f});
            self(self, w + 1);
            current.pop_back();
            firm_used[f] = false;
        }
    };
    recurse(recurse, 0);

    std::sort(stable.begin(), stable.end(),
              [](const Matching& a, const Matching& b) { return a.pairs() < b.pairs(); });
    return stable;
}

/// Maximum-cardinality matching of the acceptability graph via repeated
/// augmenting-path search (Kuhn's algorithm). Individually rational by
/// construction; deterministic for a given market.
inline Matching maximum_matching(const Market& m) {
    std::vector<int> firm_match(m.firm_count(), -1);
    std::vector<int> worker_match(m.worker_count(), -1);
    std::vector<bool> visited(m.firm_count(), false);

    auto augment = [&](auto&& self, int w) -> bool {
        for (int f : m.worker_prefs(w)) {
            if (visited[f]) continue;
            visited[f] = true;
            if (firm_match[f] < 0 || self(self, firm_match[f])) {
                firm_match[f] = w;
                worker_match[w] = f;
                return true;
            }
        }
        return false;
    };
    for (int w = 0; w < m.worker_count(); ++w) {
        std::fill(visited.begin(), visited.end(), false);
        augment(augment, w);
    }

    std::vector<Pair> pairs;
    for (int w = 0; w < m.worker_count(); ++w) {
        if (worker_match[w] >= 0) pairs.push_back({w, worker_match[w]});
    }
    return Matching::from_pairs(m, std::move(pairs));
}

/// Scans `order` once, adding every pair whose endpoints are still free.
/// `order` must be a permutation of the acceptable pairs. The result is
/// maximal by construction.
inline Matching greedy_maximal(const Market& m, const std::vector<Pair>& order) {
    std::vector<Pair> sorted_order = order;
    std::sort(sorted_order.begin(), sorted_order.end());
    if (sorted_order != m.acceptable_pairs()) {
        throw MarketError("order is not a permutation of the acceptable pairs");
    }
    std::vector<bool> worker_used(m.worker_count(), false);
    std::vector<bool> firm_used(m.firm_count(), false);
    std::vector<Pair> pairs;
    for (const Pair& p : order) {
        if (worker_used[p.worker] || firm_used[p.firm]) continue;
        worker_used[p.worker] = true;
        firm_used[p.firm] = true;
        pairs.push_back(p);
    }
    return Matching::from_pairs(m, std::move(pairs));
}

}  // namespace matchbound
