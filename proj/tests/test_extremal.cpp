#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "matchbound/analysis.hpp"
#include "matchbound/extremal.hpp"
#include "matchbound/normal_form.hpp"

#include "corpus.hpp"
#include "oracle.hpp"

using namespace matchbound;

namespace {

// Partition induced by the normal form: added agents are those unmatched in
// the worker-optimal (equivalently, any) stable matching.
struct Partition {
    Matching base_stable;
    std::vector<int> added_workers;
    std::vector<int> added_firms;
};

Partition normal_form_partition(const Market& m) {
    Partition part{deferred_acceptance(m, SolveSide::WorkerProposing), {}, {}};
    for (int w = 0; w < m.worker_count(); ++w) {
        if (!part.base_stable.firm_for(w)) part.added_workers.push_back(w);
    }
    for (int f = 0; f < m.firm_count(); ++f) {
        if (!part.base_stable.worker_for(f)) part.added_firms.push_back(f);
    }
    return part;
}

ExtensionPlan plan_for(const Market& base, const Matching& mu, int new_workers, int new_firms,
                       std::uint64_t seed, FillPolicy policy = FillPolicy::RandomSeeded,
                       double extra = 0.0) {
    ExtensionPlan plan;
    plan.base = base;
    plan.base_stable = mu;
    plan.new_workers = new_workers;
    plan.new_firms = new_firms;
    plan.seed = seed;
    plan.policy = policy;
    plan.extra_acceptability = extra;
    return plan;
}

std::set<std::vector<Pair>> stable_pair_sets(const Market& m, int cap = kDefaultEnumerationCap) {
    std::set<std::vector<Pair>> out;
    for (const Matching& mu : enumerate_stable(m, cap)) out.insert(mu.pairs());
    return out;
}

}  // namespace

TEST_CASE("identity market is forced to its identity matching") {
    for (int size : {1, 2, 3, 4}) {
        const Market m = identity_market(size, 41 + size);
        REQUIRE(m.acceptable_pairs().size() == static_cast<std::size_t>(size * size));
        const auto stable = enumerate_stable(m);
        REQUIRE(stable.size() == 1);
        for (int i = 0; i < size; ++i) {
            CHECK(stable[0].firm_for(i) == i);
            CHECK(m.worker_prefs(i)[0] == i);
            CHECK(m.firm_prefs(i)[0] == i);
        }
    }
    REQUIRE_THROWS_AS(identity_market(0), MarketError);
}

TEST_CASE("generate_gn with no added agents returns the base") {
    const Market& P = corpus::market_P();
    const Matching mu = corpus::make_matching(P, {{1, 2}, {2, 1}});
    CHECK(generate_gn(plan_for(P, mu, 0, 0, 3)) == P);
}

TEST_CASE("generate_gn keeps the stable size of the base") {
    const Market& P = corpus::market_P();
    const Matching mu = corpus::make_matching(P, {{1, 2}, {2, 1}});

    SECTION("P plus two workers and two firms, the R-shaped plan") {
        for (std::uint64_t seed = 0; seed < 16; ++seed) {
            const Market extended = generate_gn(plan_for(P, mu, 2, 2, seed));
            CHECK(is_member_gn(extended, 2));
            for (const Matching& stable : enumerate_stable(extended)) {
                CHECK(stable.size() == 2);
            }
            const auto part = normal_form_partition(extended);
            CHECK(validate_gn_structure(extended, part.base_stable, part.added_workers,
                                        part.added_firms)
                      .ok());
        }
    }
    SECTION("identity base of size 3, two added per side, seed 7") {
        const Market base = identity_market(3, 7);
        std::vector<Pair> id{{0, 0}, {1, 1}, {2, 2}};
        const Market extended = generate_gn(plan_for(base, Matching::from_pairs(base, id), 2, 2, 7));
        CHECK(deferred_acceptance(extended, SolveSide::WorkerProposing).size() == 3);
        for (const Matching& stable : enumerate_stable(extended)) CHECK(stable.size() == 3);
    }
    SECTION("arbitrary bases: normal-form cores of random markets") {
        std::mt19937_64 rng(splitmix64(321));
        int tried = 0;
        while (tried < 40) {
            const Market raw = random_market(rng, 2 + static_cast<int>(bounded(rng, 5)),
                                             2 + static_cast<int>(bounded(rng, 5)), 0.6);
            if (raw.acceptable_pairs().empty()) continue;
            const Market base = normal_form(raw).core;
            if (base.worker_count() == 0) continue;
            ++tried;
            const Matching base_stable = deferred_acceptance(base, SolveSide::WorkerProposing);
            REQUIRE(base_stable.size() == base.worker_count());

            const Market extended =
                generate_gn(plan_for(base, base_stable, 1 + tried % 3, 1 + tried % 2,
                                     static_cast<std::uint64_t>(tried), FillPolicy::RandomSeeded,
                                     0.3));
            CHECK(deferred_acceptance(extended, SolveSide::WorkerProposing).size() ==
                  base.worker_count());
            const auto part = normal_form_partition(extended);
            CHECK(validate_gn_structure(extended, part.base_stable, part.added_workers,
                                        part.added_firms)
                      .ok());

            // Agreement-at-top on the same base preserves the stable set
            // exactly, checked by enumeration where tractable.
            const Market topped = generate_agreement_at_top(
                plan_for(base, base_stable, 1 + tried % 2, 1 + tried % 3,
                         static_cast<std::uint64_t>(tried), FillPolicy::AgreementAtTop, 0.3));
            if (topped.acceptable_pairs().size() <= kDefaultEnumerationCap) {
                std::set<std::vector<Pair>> base_sets = stable_pair_sets(base);
                CHECK(stable_pair_sets(topped) == base_sets);
            } else {
                CHECK(deferred_acceptance(topped, SolveSide::WorkerProposing).size() ==
                      base.worker_count());
            }
        }
    }
    SECTION("denser unconstrained acceptability, many seeds") {
        for (std::uint64_t seed = 0; seed < 12; ++seed) {
            const Market base = identity_market(2 + seed % 3, seed);
            std::vector<Pair> id;
            for (int i = 0; i < base.worker_count(); ++i) id.push_back({i, i});
            const Market extended = generate_gn(plan_for(
                base, Matching::from_pairs(base, id), 1 + seed % 4, 1 + (seed / 2) % 3, seed,
                FillPolicy::RandomSeeded, 0.6));
            CHECK(deferred_acceptance(extended, SolveSide::WorkerProposing).size() ==
                  base.worker_count());
            const auto part = normal_form_partition(extended);
            CHECK(validate_gn_structure(extended, part.base_stable, part.added_workers,
                                        part.added_firms)
                      .ok());
        }
    }
}

TEST_CASE("generate_gn output serializes with the added labels fresh") {
    const Market& P = corpus::market_P();
    const Matching mu = corpus::make_matching(P, {{1, 2}, {2, 1}});
    const Market extended = generate_gn(plan_for(P, mu, 2, 1, 5));
    CHECK(extended.worker_label(2) == "w3");
    CHECK(extended.worker_label(3) == "w4");
    CHECK(extended.firm_label(2) == "f3");
    CHECK(parse_market(serialize_market(extended)) == extended);
}

TEST_CASE("generate_gn rejects invalid plans") {
    const Market& P = corpus::market_P();
    SECTION("base_stable does not cover the base") {
        REQUIRE_THROWS_AS(generate_gn(plan_for(P, corpus::make_matching(P, {{1, 2}}), 1, 1, 0)),
                          MarketError);
    }
    SECTION("base_stable is not stable") {
        const Market base = identity_market(2, 0);
        const Matching swapped = corpus::make_matching(base, {{1, 2}, {2, 1}});
        REQUIRE_THROWS_AS(generate_gn(plan_for(base, swapped, 1, 1, 0)), MarketError);
    }
    SECTION("unbalanced base") {
        const Market lopsided = corpus::contested_firm_market();
        const Matching mu = corpus::make_matching(lopsided, {{1, 1}});
        REQUIRE_THROWS_AS(generate_gn(plan_for(lopsided, mu, 1, 1, 0)), MarketError);
    }
    SECTION("empty base") {
        REQUIRE_THROWS_AS(generate_gn(plan_for(Market{}, Matching{}, 1, 1, 0)), MarketError);
    }
}

TEST_CASE("validate_gn_structure accepts R under its documented partition") {
    const Market& R = corpus::market_R();
    const auto result = validate_gn_structure(R, corpus::make_matching(R, {{1, 2}, {2, 1}}),
                                              {2, 3}, {2, 3});
    CHECK(result.ok());
}

TEST_CASE("validate_gn_structure reports each violated condition") {
    SECTION("an acceptable pair joining two added agents") {
        MarketData data;
        data.worker_labels = {"w1", "w2"};
        data.firm_labels = {"f1", "f2"};
        data.worker_prefs = {{0}, {1}};
        data.firm_prefs = {{0}, {1}};
        const Market m = Market::from_data(std::move(data));
        const auto result =
            validate_gn_structure(m, corpus::make_matching(m, {{1, 1}}), {1}, {1});
        REQUIRE(result.violations.size() == 1);
        CHECK(result.violations[0] == "acceptable pair (w2,f2) joins two added agents");
    }
    SECTION("a firm preferring an added worker over its partner") {
        MarketData data;
        data.worker_labels = {"w1", "w2"};
        data.firm_labels = {"f1"};
        data.worker_prefs = {{0}, {0}};
        data.firm_prefs = {{1, 0}};  // prefers the added w2
        const Market m = Market::from_data(std::move(data));
        const auto result = validate_gn_structure(m, corpus::make_matching(m, {{1, 1}}), {1}, {});
        REQUIRE(result.violations.size() == 1);
        CHECK(result.violations[0] ==
              "firm 'f1' prefers added worker 'w2' over its matched partner 'w1'");
    }
    SECTION("a worker preferring an added firm over its partner") {
        MarketData data;
        data.worker_labels = {"w1"};
        data.firm_labels = {"f1", "f2"};
        data.worker_prefs = {{1, 0}};  // prefers the added f2
        data.firm_prefs = {{0}, {0}};
        const Market m = Market::from_data(std::move(data));
        const auto result = validate_gn_structure(m, corpus::make_matching(m, {{1, 1}}), {}, {1});
        REQUIRE(result.violations.size() == 1);
        CHECK(result.violations[0] ==
              "worker 'w1' prefers added firm 'f2' over its matched partner 'f1'");
    }
    SECTION("malformed partitions are errors, not violations") {
        const Market& R = corpus::market_R();
        const Matching mu = corpus::make_matching(R, {{1, 2}, {2, 1}});
        REQUIRE_THROWS_AS(validate_gn_structure(R, mu, {9}, {2, 3}), MarketError);
        REQUIRE_THROWS_AS(validate_gn_structure(R, mu, {0, 2, 3}, {2, 3}), MarketError);
        REQUIRE_THROWS_AS(validate_gn_structure(R, mu, {2}, {2, 3}), MarketError);
    }
}

TEST_CASE("every market decomposes along its normal form") {
    // The converse characterization at desk scale: any market with a stable
    // matching passes the structural validation for the partition induced by
    // its normal form.
    auto check = [](const Market& m) {
        const auto part = normal_form_partition(m);
        CHECK(validate_gn_structure(m, part.base_stable, part.added_workers, part.added_firms)
                  .ok());
    };
    SECTION("corpus") {
        for (const Market& m : corpus::enumerable_markets()) check(m);
    }
    SECTION("exhaustive over all markets up to 3x3") {
        for (int workers = 1; workers <= 3; ++workers) {
            for (int firms = 1; firms <= 3; ++firms) {
                corpus::for_each_market(workers, firms, check);
            }
        }
    }
}

TEST_CASE("is_member_gn checks the stable size") {
    CHECK(is_member_gn(corpus::market_R(), 2));
    CHECK_FALSE(is_member_gn(corpus::market_R(), 3));
    CHECK(is_member_gn(corpus::market_P(), 2));
}

TEST_CASE("generate_fn attains the half-size bound exactly") {
    for (int n = 2; n <= 10; ++n) {
        for (const FillPolicy policy : {FillPolicy::RandomSeeded, FillPolicy::AgreementAtTop}) {
            const Market m = generate_fn(n, 100 + n, policy);
            CAPTURE(n, policy == FillPolicy::AgreementAtTop);
            CHECK(deferred_acceptance(m, SolveSide::WorkerProposing).size() == (n + 1) / 2);
            CHECK(maximum_matching(m).size() == n);
            CHECK(is_member_fn(m, n));
            if (n <= 8) {
                // Brute force both sizes.
                CHECK(oracle::maximum_size(m) == n);
                for (const auto& pairs : oracle::stable_matchings(m)) {
                    CHECK(pairs.size() == static_cast<std::size_t>((n + 1) / 2));
                }
            }
        }
    }
    REQUIRE_THROWS_AS(generate_fn(1), MarketError);
}

TEST_CASE("generate_fn shapes for small n") {
    SECTION("n = 2: one identity pair plus one added agent per side") {
        const Market m = generate_fn(2, 1);
        CHECK(m.worker_count() == 2);
        CHECK(m.firm_count() == 2);
        CHECK(m.acceptable_pairs() == std::vector<Pair>{{0, 0}, {0, 1}, {1, 0}});
        const auto stable = enumerate_stable(m);
        REQUIRE(stable.size() == 1);
        CHECK(stable[0].pairs() == std::vector<Pair>{{0, 0}});
        CHECK(maximum_matching(m).size() == 2);
    }
    SECTION("n = 4 mirrors fixture R's shape") {
        const Market m = generate_fn(4, 1);
        CHECK(m.worker_count() == 4);
        CHECK(m.firm_count() == 4);
        CHECK(deferred_acceptance(m, SolveSide::WorkerProposing).size() == 2);
        CHECK(maximum_matching(m).size() == 4);
    }
    SECTION("n = 5: odd case carries one identity pair") {
        const Market m = generate_fn(5, 1);
        CHECK(m.worker_count() == 5);
        CHECK(m.firm_count() == 5);
        CHECK(deferred_acceptance(m, SolveSide::WorkerProposing).size() == 3);
        CHECK(maximum_matching(m).size() == 5);
        // The large matching promised by the construction.
        const Matching witness = corpus::make_matching(m, {{1, 4}, {2, 5}, {4, 1}, {5, 2}, {3, 3}});
        CHECK(is_individually_rational(m, witness));
    }
}

TEST_CASE("is_member_fn examples") {
    CHECK(is_member_fn(corpus::market_R(), 4));
    CHECK_FALSE(is_member_fn(corpus::market_P(), 2));  // stable size 2, not ceil(2/2)
    CHECK(is_member_fn(generate_fn(6, 77), 6));
}

TEST_CASE("agreement at top preserves the stable set") {
    const Market& P = corpus::market_P();
    const Matching mu = corpus::make_matching(P, {{1, 2}, {2, 1}});

    SECTION("P extended the way R' was built") {
        for (std::uint64_t seed = 0; seed < 12; ++seed) {
            const Market extended = generate_agreement_at_top(
                plan_for(P, mu, 2, 2, seed, FillPolicy::AgreementAtTop, 0.5));
            // Base agents keep indices 0..1, so restriction is the identity.
            CHECK(stable_pair_sets(extended) == stable_pair_sets(P));
        }
    }
    SECTION("zero added agents returns the base") {
        CHECK(generate_agreement_at_top(plan_for(P, mu, 0, 0, 1, FillPolicy::AgreementAtTop)) == P);
    }
    SECTION("repeated extension: R' grows again without changing the stable set") {
        const Market& Rprime = corpus::market_Rprime();
        const Matching r_stable = deferred_acceptance(Rprime, SolveSide::WorkerProposing);
        for (std::uint64_t seed = 0; seed < 8; ++seed) {
            const Market grown = generate_agreement_at_top(
                plan_for(Rprime, r_stable, 2, 1, seed, FillPolicy::AgreementAtTop, 0.4));
            CHECK(stable_pair_sets(grown) == stable_pair_sets(Rprime));
            CHECK(maximum_matching(grown).size() >= maximum_matching(Rprime).size());
        }
    }
    SECTION("wrong policy is rejected") {
        REQUIRE_THROWS_AS(generate_agreement_at_top(plan_for(P, mu, 1, 1, 0)), MarketError);
    }
    SECTION("unstable base matching is rejected") {
        const Market base = identity_market(2, 0);
        const Matching swapped = corpus::make_matching(base, {{1, 2}, {2, 1}});
        REQUIRE_THROWS_AS(
            generate_agreement_at_top(plan_for(base, swapped, 1, 1, 0, FillPolicy::AgreementAtTop)),
            MarketError);
    }
}

TEST_CASE("half-size bound holds on every generated instance") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        for (int n = 2; n <= 8; ++n) {
            const Market m = generate_fn(n, seed);
            const int stable = deferred_acceptance(m, SolveSide::WorkerProposing).size();
            const int maximum = maximum_matching(m).size();
            REQUIRE(2 * stable >= maximum);
            CHECK(stable == (maximum + 1) / 2);  // tight by construction
        }
    }
}
