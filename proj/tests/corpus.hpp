#pragma once

// Shared fixture loading and corpus assembly for the test suite.

#include <filesystem>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "matchbound/analysis.hpp"
#include "matchbound/extremal.hpp"
#include "matchbound/io.hpp"
#include "matchbound/market.hpp"

namespace corpus {

inline std::filesystem::path fixtures_dir() {
    return std::filesystem::path(MATCHBOUND_FIXTURES_DIR);
}

inline matchbound::Market load_fixture(const std::string& name) {
    return matchbound::load_market(fixtures_dir() / name);
}

inline const matchbound::Market& market_P() {
    static const matchbound::Market m = load_fixture("P.market");
    return m;
}

inline const matchbound::Market& market_R() {
    static const matchbound::Market m = load_fixture("R.market");
    return m;
}

inline const matchbound::Market& market_Rprime() {
    static const matchbound::Market m = load_fixture("Rprime.market");
    return m;
}

// Pairs given 1-based in (worker, firm) display convention.
inline matchbound::Matching make_matching(const matchbound::Market& m,
                                          std::vector<std::pair<int, int>> one_based) {
    std::vector<matchbound::Pair> pairs;
    for (const auto& [w, f] : one_based) pairs.push_back({w - 1, f - 1});
    return matchbound::Matching::from_pairs(m, std::move(pairs));
}

inline matchbound::Market single_pair_market() {
    matchbound::MarketData data;
    data.worker_labels = {"w1"};
    data.firm_labels = {"f1"};
    data.worker_prefs = {{0}};
    data.firm_prefs = {{0}};
    return matchbound::Market::from_data(std::move(data));
}

// Two workers competing for one firm; w2 is unmatched in every stable
// matching.
inline matchbound::Market contested_firm_market() {
    matchbound::MarketData data;
    data.worker_labels = {"w1", "w2"};
    data.firm_labels = {"f1"};
    data.worker_prefs = {{0}, {0}};
    data.firm_prefs = {{0, 1}};
    return matchbound::Market::from_data(std::move(data));
}

// Markets small enough for exhaustive enumeration (at most 20 acceptable
// pairs), exercising fixtures, generators, and random instances.
inline std::vector<matchbound::Market> enumerable_markets() {
    std::vector<matchbound::Market> markets{
        market_P(),
        market_R(),
        market_Rprime(),
        single_pair_market(),
        contested_firm_market(),
        matchbound::identity_market(3, 5),
        matchbound::identity_market(4, 11),
        matchbound::generate_fn(4, 3),
        matchbound::generate_fn(5, 3),
        matchbound::generate_fn(6, 9, matchbound::FillPolicy::AgreementAtTop),
    };
    std::mt19937_64 rng(matchbound::splitmix64(2024));
    while (markets.size() < 24) {
        const int workers = 2 + static_cast<int>(matchbound::bounded(rng, 4));
        const int firms = 2 + static_cast<int>(matchbound::bounded(rng, 4));
        matchbound::Market m = matchbound::random_market(rng, workers, firms, 0.55);
        if (!m.acceptable_pairs().empty() && m.acceptable_pairs().size() <= 20) {
            markets.push_back(std::move(m));
        }
    }
    return markets;
}

// Every market on a workers x firms grid: every acceptability pattern with
// no isolated agent, every strict preference order for every agent. 131,817
// markets up to 3x3.
inline void for_each_market(int workers, int firms,
                            const std::function<void(const matchbound::Market&)>& fn) {
    const int cells = workers * firms;
    matchbound::MarketData data;
    for (int w = 0; w < workers; ++w) data.worker_labels.push_back("w" + std::to_string(w + 1));
    for (int f = 0; f < firms; ++f) data.firm_labels.push_back("f" + std::to_string(f + 1));

    for (int mask = 1; mask < (1 << cells); ++mask) {
        data.worker_prefs.assign(workers, {});
        data.firm_prefs.assign(firms, {});
        bool valid = true;
        for (int w = 0; w < workers; ++w) {
            for (int f = 0; f < firms; ++f) {
                if (mask & (1 << (w * firms + f))) {
                    data.worker_prefs[w].push_back(f);
                    data.firm_prefs[f].push_back(w);
                }
            }
            if (data.worker_prefs[w].empty()) valid = false;
        }
        for (int f = 0; f < firms && valid; ++f) {
            if (data.firm_prefs[f].empty()) valid = false;
        }
        if (!valid) continue;

        // Odometer over per-agent permutations, workers then firms.
        auto recurse = [&](auto&& self, int agent) -> void {
            const int total = workers + firms;
            if (agent == total) {
                fn(matchbound::Market::from_data(data, matchbound::Mutuality::Require));
                return;
            }
            std::vector<int>& prefs =
                agent < workers ? data.worker_prefs[agent] : data.firm_prefs[agent - workers];
            const std::vector<int> original = prefs;
            std::sort(prefs.begin(), prefs.end());
            do {
                self(self, agent + 1);
            } while (std::next_permutation(prefs.begin(), prefs.end()));
            prefs = original;
        };
        recurse(recurse, 0);
    }
}

}  // namespace corpus
