// Copyright 2026 The qbound authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "qbound/io.hpp"
#include "test_util.hpp"

using namespace qbound;

namespace {

// Cut value by direct edge enumeration.
double cut_value(int n, const std::vector<std::tuple<int, int, double>>& edges,
                 std::uint64_t mask) {
    (void)n;
    double total = 0.0;
    for (const auto& [i, j, w] : edges) {
        const int si = (mask >> (i - 1)) & 1;
        const int sj = (mask >> (j - 1)) & 1;
        if (si != sj) total += w;
    }
    return total;
}

double brute_max_cut(int n, const std::vector<std::tuple<int, int, double>>& edges) {
    double best = 0.0;
    for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask)
        best = std::max(best, cut_value(n, edges, mask));
    return best;
}

}  // namespace

TEST_CASE("parse_triplet: grammar basics") {
    const QuboProblem p = parse_triplet("2 3 \n 1 1 1 \n 2 2 -1 \n 1 2 2");
    CHECK(p.size() == 2);
    CHECK(p.linear()(0) == doctest::Approx(1.0));
    CHECK(p.linear()(1) == doctest::Approx(-1.0));
    CHECK(p.quadratic()(0, 1) == doctest::Approx(1.0));
    CHECK(p.quadratic()(1, 0) == doctest::Approx(1.0));
    CHECK(p.quadratic()(0, 0) == doctest::Approx(0.0));
    CHECK(p.offset() == 0.0);

    const QuboProblem zero = parse_triplet("1 0");
    CHECK(zero.size() == 1);
    CHECK(zero.linear()(0) == 0.0);

    // comments and blank lines anywhere
    const QuboProblem commented =
        parse_triplet("# instance\n\n2 1  # header\n1 2 4 # edge\n\n# done\n");
    CHECK(commented.quadratic()(0, 1) == doctest::Approx(2.0));
}

TEST_CASE("parse_triplet: malformed inputs carry line numbers") {
    CHECK_THROWS_WITH_AS(parse_triplet("2 1 \n 1 3 1"), doctest::Contains("line 2"), ParseError);
    CHECK_THROWS_AS(parse_triplet("2 2 \n 1 2 1 \n 1 2 5"), ParseError);   // duplicate
    CHECK_THROWS_AS(parse_triplet("2 1 \n 2 1 5"), ParseError);            // i > j
    CHECK_THROWS_AS(parse_triplet("2 1 \n 1 2"), ParseError);              // short record
    CHECK_THROWS_AS(parse_triplet("2 1 \n 1 2 x"), ParseError);            // bad number
    CHECK_THROWS_AS(parse_triplet("2 2 \n 1 2 1"), ParseError);            // missing record
    CHECK_THROWS_AS(parse_triplet("2 0 \n 1 2 1"), ParseError);            // extra record
    CHECK_THROWS_AS(parse_triplet("0 0"), ParseError);                     // empty problem
    CHECK_THROWS_AS(parse_triplet("# nothing"), ParseError);               // no header
}

TEST_CASE("parse_maxcut: cut objective encoding") {
    SUBCASE("unit triangle") {
        const QuboProblem p = parse_maxcut("3 3\n1 2 1\n1 3 1\n2 3 1\n");
        CHECK(p.linear().isApproxToConstant(2.0, 1e-15));
        CHECK(p.quadratic()(0, 1) == doctest::Approx(-1.0));
        CHECK(p.quadratic()(0, 0) == doctest::Approx(0.0));

        Assignment one_zero_zero{std::vector<std::uint8_t>{1, 0, 0}};
        Assignment all_ones{std::vector<std::uint8_t>{1, 1, 1}};
        CHECK(evaluate_qubo(p, one_zero_zero) == doctest::Approx(2.0));
        CHECK(evaluate_qubo(p, all_ones) == doctest::Approx(0.0));
        CHECK(brute_force_max(p).value == doctest::Approx(2.0));
    }
    SUBCASE("empty edge set") {
        const QuboProblem p = parse_maxcut("4 0\n");
        CHECK(p.size() == 4);
        CHECK(p.quadratic().isZero());
        CHECK(p.linear().isZero());
    }
    SUBCASE("single weighted edge") {
        const QuboProblem p = parse_maxcut("2 1\n1 2 5\n");
        Assignment cut{std::vector<std::uint8_t>{1, 0}};
        Assignment not_cut{std::vector<std::uint8_t>{1, 1}};
        CHECK(evaluate_qubo(p, cut) == doctest::Approx(5.0));
        CHECK(evaluate_qubo(p, not_cut) == doctest::Approx(0.0));
    }
    SUBCASE("rejects self-loops and duplicate edges") {
        CHECK_THROWS_AS(parse_maxcut("2 1\n1 1 2\n"), ParseError);
        CHECK_THROWS_AS(parse_maxcut("2 2\n1 2 1\n2 1 3\n"), ParseError);
    }
}

TEST_CASE("maxcut conversion preserves the brute-force optimum") {
    for (std::uint64_t seed = 1; seed <= 12; ++seed) {
        test::Rng rng(seed * 23);
        const int n = static_cast<int>(rng.uniform_int(2, 10));
        std::vector<std::tuple<int, int, double>> edges;
        std::string text;
        for (int i = 1; i <= n; ++i) {
            for (int j = i + 1; j <= n; ++j) {
                if (rng.u01() < 0.6) {
                    const double w = rng.uniform(-2.0, 3.0);
                    edges.emplace_back(i, j, w);
                }
            }
        }
        text = std::to_string(n) + " " + std::to_string(edges.size()) + "\n";
        for (const auto& [i, j, w] : edges) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%d %d %.17g\n", i, j, w);
            text += buf;
        }
        const QuboProblem p = parse_maxcut(text);
        CHECK(brute_force_max(p).value ==
              doctest::Approx(brute_max_cut(n, edges)).epsilon(1e-9));
    }
}

TEST_CASE("serialize_triplet round-trips exactly") {
    for (std::uint64_t seed = 1; seed <= 15; ++seed) {
        test::Rng rng(seed);
        const int n = static_cast<int>(rng.uniform_int(1, 12));
        const QuboProblem raw = test::random_qubo(n, 0.5, seed % 2 == 0, seed * 47);

        // Parsed problems carry Q's diagonal in the linear term; serializing
        // an arbitrary problem folds it there, preserving binary values.
        const QuboProblem p = parse_triplet(serialize_triplet(raw));
        for (int t = 0; t < 16; ++t) {
            Assignment x;
            for (int i = 0; i < n; ++i)
                x.bits.push_back(static_cast<std::uint8_t>(rng.u01() < 0.5));
            CHECK(evaluate_qubo(p, x) == doctest::Approx(evaluate_qubo(raw, x)).epsilon(1e-12));
        }

        // On the format's image the round trip is exact.
        const std::string text = serialize_triplet(p);
        const QuboProblem q = parse_triplet(text);
        CHECK(p == q);
        CHECK(serialize_triplet(q) == text);
    }

    Eigen::MatrixXd qm(1, 1);
    qm << 0;
    Eigen::VectorXd cv(1);
    cv << 0;
    CHECK_THROWS_AS(serialize_triplet(QuboProblem(qm, cv, 3.0)), InputError);
}

TEST_CASE("result JSON schema keeps all keys present") {
    BnbResult res;
    res.status = BnbStatus::Optimal;
    res.incumbent_value = 2.0;
    res.incumbent_x = Assignment{std::vector<std::uint8_t>{1, 1}};
    res.global_bound = 2.0;
    res.rel_gap_percent = 0.0;
    res.nodes = 3;
    res.wall_time_s = 0.01;

    const auto j = solve_result_json(res, 7, {{"subcommand", "solve"}});
    for (const char* key : {"status", "best_value", "best_x", "bound", "rel_gap_percent", "nodes",
                            "wall_time_s", "seed", "params"})
        CHECK(j.contains(key));
    CHECK(j["status"] == "Optimal");
    CHECK(j["best_x"] == nlohmann::ordered_json::array({1, 1}));
    CHECK(j["seed"] == 7);

    // bound runs share the schema, nulls where not applicable
    DescentResult dr;
    dr.u_hat = Eigen::VectorXd::Constant(1, 2.0);
    dr.bound = 0.25;
    dr.outer_iters = 0;
    dr.termination = Termination::IterLimit;
    const auto jb = bound_result_json(dr, 0.25, 7, {}, 0.001);
    for (const char* key : {"status", "best_value", "best_x", "bound", "rel_gap_percent", "nodes",
                            "wall_time_s", "seed", "params"})
        CHECK(jb.contains(key));
    CHECK(jb["status"].is_null());
    CHECK(jb["nodes"].is_null());
    CHECK(jb["bound"] == 0.25);
    CHECK(jb["termination"] == "IterLimit");
    CHECK(jb["u_hat"] == nlohmann::ordered_json::array({2.0}));
}
