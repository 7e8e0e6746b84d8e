#pragma once

#include <algorithm>
#include <cassert>
#include <cctype>
#include <compare>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

namespace matchbound {

enum class Side { Worker, Firm };

inline const char* side_name(Side side) {
    return side == Side::Worker ? "worker" : "firm";
}

// Identifies an agent within one market. Display labels live in the Market,
// keyed by (side, index).
struct AgentId {
    Side side;
    int index;

    friend bool operator==(const AgentId&, const AgentId&) = default;
};

// An acceptable worker/firm pair, by agent indices. Doubles as a matched pair
// and as a vertex of the matching digraph.
struct Pair {
    int worker;
    int firm;

    friend bool operator==(const Pair&, const Pair&) = default;
    friend auto operator<=>(const Pair&, const Pair&) = default;
};

class MarketError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// How to treat a preference entry whose counterpart does not list the agent
// back: drop it (recording a diagnostic) or reject the market.
enum class Mutuality { Prune, Require };

// Raw market description. Preference lists hold opposite-side agent indices,
// most preferred first; agents absent from a list are unacceptable.
struct MarketData {
    std::vector<std::string> worker_labels;
    std::vector<std::string> firm_labels;
    std::vector<std::vector<int>> worker_prefs;
    std::vector<std::vector<int>> firm_prefs;
};

/// A two-sided market with strict preferences over acceptable partners.
///
/// Immutable once constructed. Construction validates every invariant:
/// labels unique, preference lists duplicate-free and in range, acceptability
/// mutual (pruned or rejected per `Mutuality`), and every agent left with at
/// least one acceptable partner. Rank tables are precomputed so preference
/// comparisons are O(1).
class Market {
public:
    Market() = default;

    static Market from_data(MarketData data, Mutuality mode = Mutuality::Prune,
                            std::vector<std::string>* diagnostics = nullptr) {
        Market m;
        m.worker_labels_ = std::move(data.worker_labels);
        m.firm_labels_ = std::move(data.firm_labels);
        m.worker_prefs_ = std::move(data.worker_prefs);
        m.firm_prefs_ = std::move(data.firm_prefs);
        m.validate_shape();
        m.enforce_mutuality(mode, diagnostics);
        m.require_nonempty_lists();
        m.build_indexes();
        return m;
    }

    int worker_count() const { return static_cast<int>(worker_labels_.size()); }
    int firm_count() const { return static_cast<int>(firm_labels_.size()); }
    bool empty() const { return worker_count() == 0 && firm_count() == 0; }

    const std::string& worker_label(int w) const { return worker_labels_.at(w); }
    const std::string& firm_label(int f) const { return firm_labels_.at(f); }
    const std::string& label(AgentId id) const {
        return id.side == Side::Worker ? worker_label(id.index) : firm_label(id.index);
    }

    /// Firm indices acceptable to worker `w`, most preferred first.
    const std::vector<int>& worker_prefs(int w) const { return worker_prefs_.at(w); }
    /// Worker indices acceptable to firm `f`, most preferred first.
    const std::vector<int>& firm_prefs(int f) const { return firm_prefs_.at(f); }

    /// Position of firm `f` in worker `w`'s list (0 = best), or -1 if
    /// unacceptable.
    int worker_rank(int w, int f) const {
        return worker_rank_.at(w).at(f);
    }
    int firm_rank(int f, int w) const {
        return firm_rank_.at(f).at(w);
    }

    bool acceptable(int w, int f) const {
        return worker_rank(w, f) >= 0;
    }

    /// Strict comparison; both firms must be acceptable to `w`.
    bool worker_prefers(int w, int f_preferred, int f_other) const {
        const int a = worker_rank(w, f_preferred);
        const int b = worker_rank(w, f_other);
        assert(a >= 0 && b >= 0);
        assert(a != b || f_preferred == f_other);  // strict preferences, ties unreachable
        return a < b;
    }

    bool firm_prefers(int f, int w_preferred, int w_other) const {
        const int a = firm_rank(f, w_preferred);
        const int b = firm_rank(f, w_other);
        assert(a >= 0 && b >= 0);
        assert(a != b || w_preferred == w_other);
        return a < b;
    }

    /// All mutually acceptable pairs, sorted by (worker, firm). These are the
    /// vertices of the matching digraph.
    const std::vector<Pair>& acceptable_pairs() const { return pairs_; }

    friend bool operator==(const Market& a, const Market& b) {
        return a.worker_labels_ == b.worker_labels_ && a.firm_labels_ == b.firm_labels_ &&
               a.worker_prefs_ == b.worker_prefs_ && a.firm_prefs_ == b.firm_prefs_;
    }

private:
    static void check_label(const std::string& label) {
        if (label.empty()) throw MarketError("empty agent label");
        for (char c : label) {
            if (c == '#' || c == ':' || std::isspace(static_cast<unsigned char>(c))) {
                throw MarketError("label '" + label +
                                  "' contains whitespace, '#', or ':' and cannot be serialized");
            }
        }
    }

    void validate_shape() const {
        if (worker_prefs_.size() != worker_labels_.size() ||
            firm_prefs_.size() != firm_labels_.size()) {
            throw MarketError("preference list count does not match agent count");
        }
        std::unordered_set<std::string> seen;
        for (const auto& label : worker_labels_) {
            check_label(label);
            if (!seen.insert(label).second) throw MarketError("duplicate agent label '" + label + "'");
        }
        for (const auto& label : firm_labels_) {
            check_label(label);
            if (!seen.insert(label).second) throw MarketError("duplicate agent label '" + label + "'");
        }
        auto check_lists = [](const std::vector<std::vector<int>>& lists, int opposite_count,
                              const std::vector<std::string>& owners) {
            for (std::size_t i = 0; i < lists.size(); ++i) {
                std::unordered_set<int> entries;
                for (int idx : lists[i]) {
                    if (idx < 0 || idx >= opposite_count) {
                        throw MarketError("preference entry out of range for '" + owners[i] + "'");
                    }
                    if (!entries.insert(idx).second) {
                        throw MarketError("duplicate preference entry for '" + owners[i] + "'");
                    }
                }
            }
        };
        check_lists(worker_prefs_, firm_count(), worker_labels_);
        check_lists(firm_prefs_, worker_count(), firm_labels_);
    }

    void enforce_mutuality(Mutuality mode, std::vector<std::string>* diagnostics) {
        auto listed = [](const std::vector<int>& list, int idx) {
            return std::find(list.begin(), list.end(), idx) != list.end();
        };
        auto prune = [&](std::vector<std::vector<int>>& lists,
                         const std::vector<std::vector<int>>& opposite,
                         const std::vector<std::string>& owners,
                         const std::vector<std::string>& partners) {
            for (std::size_t i = 0; i < lists.size(); ++i) {
                std::vector<int> kept;
                kept.reserve(lists[i].size());
                for (int idx : lists[i]) {
                    if (listed(opposite[idx], static_cast<int>(i))) {
                        kept.push_back(idx);
                        continue;
                    }
                    const std::string message = "pruned '" + partners[idx] + "' from preferences of '" +
                                                owners[i] + "': '" + partners[idx] + "' does not list '" +
                                                owners[i] + "'";
                    if (mode == Mutuality::Require) throw MarketError(message);
                    if (diagnostics) diagnostics->push_back(message);
                }
                lists[i] = std::move(kept);
            }
        };
        prune(worker_prefs_, firm_prefs_, worker_labels_, firm_labels_);
        prune(firm_prefs_, worker_prefs_, firm_labels_, worker_labels_);
    }

    void require_nonempty_lists() const {
        for (int w = 0; w < worker_count(); ++w) {
            if (worker_prefs_[w].empty()) {
                throw MarketError("agent '" + worker_labels_[w] +
                                  "' has no acceptable partner after pruning");
            }
        }
        for (int f = 0; f < firm_count(); ++f) {
            if (firm_prefs_[f].empty()) {
                throw MarketError("agent '" + firm_labels_[f] +
                                  "' has no acceptable partner after pruning");
            }
        }
    }

    void build_indexes() {
        worker_rank_.assign(worker_count(), std::vector<int>(firm_count(), -1));
        firm_rank_.assign(firm_count(), std::vector<int>(worker_count(), -1));
        for (int w = 0; w < worker_count(); ++w) {
            for (std::size_t r = 0; r < worker_prefs_[w].size(); ++r) {
                worker_rank_[w][worker_prefs_[w][r]] = static_cast<int>(r);
            }
        }
        for (int f = 0; f < firm_count(); ++f) {
            for (std::size_t r = 0; r < firm_prefs_[f].size(); ++r) {
                firm_rank_[f][firm_prefs_[f][r]] = static_cast<int>(r);
            }
        }
        pairs_.clear();
        for (int w = 0; w < worker_count(); ++w) {
            for (int f = 0; f < firm_count(); ++f) {
                if (worker_rank_[w][f] >= 0) {
                    // mutuality already enforced
                    assert(firm_rank_[f][w] >= 0);
                    pairs_.push_back({w, f});
                }
            }
        }
    }

    std::vector<std::string> worker_labels_;
    std::vector<std::string> firm_labels_;
    std::vector<std::vector<int>> worker_prefs_;
    std::vector<std::vector<int>> firm_prefs_;
    std::vector<std::vector<int>> worker_rank_;
    std::vector<std::vector<int>> firm_rank_;
    std::vector<Pair> pairs_;
};

/// A partial one-to-one assignment between the two sides of a market.
/// Unmatched agents are simply absent. Immutable once constructed.
class Matching {
public:
    Matching() = default;

    static Matching from_pairs(const Market& market, std::vector<Pair> pairs) {
        Matching mu;
        mu.worker_to_firm_.assign(market.worker_count(), -1);
        mu.firm_to_worker_.assign(market.firm_count(), -1);
        for (const Pair& p : pairs) {
            if (p.worker < 0 || p.worker >= market.worker_count() || p.firm < 0 ||
                p.firm >= market.firm_count()) {
                throw MarketError("matched pair references an agent outside the market");
            }
            if (mu.worker_to_firm_[p.worker] != -1) {
                throw MarketError("worker '" + market.worker_label(p.worker) +
                                  "' appears in more than one pair");
            }
            if (mu.firm_to_worker_[p.firm] != -1) {
                throw MarketError("firm '" + market.firm_label(p.firm) +
                                  "' appears in more than one pair");
            }
            mu.worker_to_firm_[p.worker] = p.firm;
            mu.firm_to_worker_[p.firm] = p.worker;
        }
        std::sort(pairs.begin(), pairs.end());
        mu.pairs_ = std::move(pairs);
        return mu;
    }

    const std::vector<Pair>& pairs() const { return pairs_; }
    int size() const { return static_cast<int>(pairs_.size()); }

    std::optional<int> firm_for(int worker) const {
        const int f = worker_to_firm_.at(worker);
        return f >= 0 ? std::optional<int>(f) : std::nullopt;
    }
    std::optional<int> worker_for(int firm) const {
        const int w = firm_to_worker_.at(firm);
        return w >= 0 ? std::optional<int>(w) : std::nullopt;
    }

    bool contains(const Pair& p) const {
        return p.worker >= 0 && p.worker < worker_count() && worker_to_firm_[p.worker] == p.firm;
    }

    // Dimensions of the market this matching was built against.
    int worker_count() const { return static_cast<int>(worker_to_firm_.size()); }
    int firm_count() const { return static_cast<int>(firm_to_worker_.size()); }

    friend bool operator==(const Matching& a, const Matching& b) {
        return a.worker_to_firm_ == b.worker_to_firm_ && a.firm_to_worker_ == b.firm_to_worker_;
    }

private:
    std::vector<int> worker_to_firm_;
    std::vector<int> firm_to_worker_;
    std::vector<Pair> pairs_;
};

namespace detail {
inline void require_same_market(const Market& m, const Matching& mu) {
    if (mu.worker_count() != m.worker_count() || mu.firm_count() != m.firm_count()) {
        throw MarketError("matching was built for a different market");
    }
}
}  // namespace detail

/// True iff every matched pair is an acceptable pair of `m`.
inline bool is_individually_rational(const Market& m, const Matching& mu) {
    detail::require_same_market(m, mu);
    for (const Pair& p : mu.pairs()) {
        if (!m.acceptable(p.worker, p.firm)) return false;
    }
    return true;
}

/// Every acceptable pair outside `mu` that both members prefer to their
/// current assignment (or lack of one), sorted by (worker, firm).
inline std::vector<Pair> blocking_pairs(const Market& m, const Matching& mu) {
    detail::require_same_market(m, mu);
    std::vector<Pair> blocking;
    for (const Pair& p : m.acceptable_pairs()) {
        if (mu.contains(p)) continue;
        const auto current_firm = mu.firm_for(p.worker);
        const auto current_worker = mu.worker_for(p.firm);
        // An unacceptable current partner ranks below every acceptable one.
        const bool worker_gains =
            !current_firm || m.worker_rank(p.worker, *current_firm) < 0 ||
            m.worker_rank(p.worker, p.firm) < m.worker_rank(p.worker, *current_firm);
        const bool firm_gains =
            !current_worker || m.firm_rank(p.firm, *current_worker) < 0 ||
            m.firm_rank(p.firm, p.worker) < m.firm_rank(p.firm, *current_worker);
        if (worker_gains && firm_gains) blocking.push_back(p);
    }
    return blocking;
}

/// Individually rational with no blocking pair.
inline bool is_stable(const Market& m, const Matching& mu) {
    return is_individually_rational(m, mu) && blocking_pairs(m, mu).empty();
}

/// True iff no acceptable pair can be added to `mu` without a conflict,
/// i.e. no acceptable pair has both endpoints unmatched.
inline bool is_maximal(const Market& m, const Matching& mu) {
    detail::require_same_market(m, mu);
    for (const Pair& p : m.acceptable_pairs()) {
        if (!mu.firm_for(p.worker) && !mu.worker_for(p.firm)) return false;
    }
    return true;
}

}  // namespace matchbound
