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

#include "qbound/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>
#include <vector>

namespace qbound {

namespace {

using json = nlohmann::ordered_json;

struct Record {
    int line = 0;
    std::vector<std::string> tokens;
};

// Strips comments, splits on whitespace, keeps 1-based line numbers.
std::vector<Record> tokenize(std::string_view text) {
    std::vector<Record> records;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = text.find('\n', pos);
        std::string_view line =
            text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        ++line_no;
        if (const std::size_t hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        Record rec{line_no, {}};
        std::istringstream in{std::string(line)};
        std::string tok;
        while (in >> tok) rec.tokens.push_back(tok);
        if (!rec.tokens.empty()) records.push_back(std::move(rec));
        if (eol == std::string_view::npos) break;
        pos = eol + 1;
    }
    return records;
}

long parse_int(const Record& rec, const std::string& tok, const char* what) {
    char* end = nullptr;
    const long v = std::strtol(tok.c_str(), &end, 10);
    if (end == tok.c_str() || *end != '\0')
        throw ParseError(rec.line, std::string("expected integer ") + what + ", got '" + tok + "'");
    return v;
}

double parse_real(const Record& rec, const std::string& tok, const char* what) {
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0' || !std::isfinite(v))
        throw ParseError(rec.line, std::string("expected number ") + what + ", got '" + tok + "'");
    return v;
}

struct Header {
    long n = 0;
    long m = 0;
};

Header parse_header(const std::vector<Record>& records) {
    if (records.empty()) throw ParseError(1, "empty instance");
    const Record& rec = records.front();
    if (rec.tokens.size() != 2) throw ParseError(rec.line, "header must be 'n m'");
    Header h;
    h.n = parse_int(rec, rec.tokens[0], "n");
    h.m = parse_int(rec, rec.tokens[1], "m");
    if (h.n < 1) throw ParseError(rec.line, "need at least one variable");
    if (h.m < 0) throw ParseError(rec.line, "negative record count");
    return h;
}

void check_record_count(const std::vector<Record>& records, long m) {
    const long have = static_cast<long>(records.size()) - 1;
    if (have < m)
        throw ParseError(records.back().line,
                         "expected " + std::to_string(m) + " records, found " + std::to_string(have));
    if (have > m)
        throw ParseError(records[static_cast<std::size_t>(m) + 1].line,
                         "unexpected data after " + std::to_string(m) + " records");
}

// Shortest decimal form that reparses to exactly the same double.
std::string format_number(double v) {
    char buf[40];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

}  // namespace

QuboProblem parse_triplet(std::string_view text) {
    const auto records = tokenize(text);
    const Header h = parse_header(records);
    check_record_count(records, h.m);

    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(h.n, h.n);
    Eigen::VectorXd c = Eigen::VectorXd::Zero(h.n);
    std::set<std::pair<long, long>> seen;

    for (long r = 0; r < h.m; ++r) {
        const Record& rec = records[static_cast<std::size_t>(r) + 1];
        if (rec.tokens.size() != 3) throw ParseError(rec.line, "record must be 'i j v'");
        const long i = parse_int(rec, rec.tokens[0], "i");
        const long j = parse_int(rec, rec.tokens[1], "j");
        const double v = parse_real(rec, rec.tokens[2], "v");
        if (i < 1 || j < 1 || i > h.n || j > h.n) throw ParseError(rec.line, "index out of range");
        if (i > j) throw ParseError(rec.line, "indices must satisfy i <= j");
        if (!seen.insert({i, j}).second) throw ParseError(rec.line, "duplicate entry");
        if (i == j) {
            c(i - 1) += v;
        } else {
            q(i - 1, j - 1) += 0.5 * v;
            q(j - 1, i - 1) += 0.5 * v;
        }
    }
    return QuboProblem(std::move(q), std::move(c), 0.0);
}

QuboProblem parse_maxcut(std::string_view text) {
    const auto records = tokenize(text);
    const Header h = parse_header(records);
    check_record_count(records, h.m);

    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(h.n, h.n);
    Eigen::VectorXd c = Eigen::VectorXd::Zero(h.n);
    std::set<std::pair<long, long>> seen;

    for (long r = 0; r < h.m; ++r) {
        const Record& rec = records[static_cast<std::size_t>(r) + 1];
        if (rec.tokens.size() != 3) throw ParseError(rec.line, "record must be 'i j w'");
        const long i = parse_int(rec, rec.tokens[0], "i");
        const long j = parse_int(rec, rec.tokens[1], "j");
        const double w = parse_real(rec, rec.tokens[2], "w");
        if (i < 1 || j < 1 || i > h.n || j > h.n) throw ParseError(rec.line, "index out of range");
        if (i == j) throw ParseError(rec.line, "self-loop");
        const auto key = std::minmax(i, j);
        if (!seen.insert(key).second) throw ParseError(rec.line, "duplicate edge");
        c(i - 1) += w;
        c(j - 1) += w;
        q(i - 1, j - 1) -= w;
        q(j - 1, i - 1) -= w;
    }
    return QuboProblem(std::move(q), std::move(c), 0.0);
}

std::string serialize_triplet(const QuboProblem& p) {
    if (p.offset() != 0.0)
        throw InputError("serialize_triplet: format has no offset field; offset must be zero");
    const Eigen::Index n = p.size();

    std::vector<std::string> entries;
    for (Eigen::Index i = 0; i < n; ++i) {
        // Q's diagonal folds into the linear term (x^2 = x on binaries);
        // the format keeps one diagonal record per variable.
        const double diag = p.linear()(i) + p.quadratic()(i, i);
        if (diag == 0.0) continue;
        entries.push_back(std::to_string(i + 1) + " " + std::to_string(i + 1) + " " +
                          format_number(diag));
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            if (p.quadratic()(i, j) == 0.0) continue;
            entries.push_back(std::to_string(i + 1) + " " + std::to_string(j + 1) + " " +
                              format_number(2.0 * p.quadratic()(i, j)));
        }
    }

    std::string out = std::to_string(n) + " " + std::to_string(entries.size()) + "\n";
    for (const auto& e : entries) out += e + "\n";
    return out;
}

QuboProblem load_instance(const std::string& path, InstanceFormat format) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read instance file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    return format == InstanceFormat::Triplet ? parse_triplet(text) : parse_maxcut(text);
}

namespace {

json base_result(std::uint64_t seed, json params) {
    json out;
    out["status"] = nullptr;
    out["best_value"] = nullptr;
    out["best_x"] = nullptr;
    out["bound"] = nullptr;
    out["rel_gap_percent"] = nullptr;
    out["nodes"] = nullptr;
    out["wall_time_s"] = nullptr;
    out["seed"] = seed;
    out["params"] = std::move(params);
    return out;
}

json assignment_json(const Assignment& x) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < x.size(); ++i) arr.push_back(static_cast<int>(x[i]));
    return arr;
}

}  // namespace

json solve_result_json(const BnbResult& res, std::uint64_t seed, json params) {
    json out = base_result(seed, std::move(params));
    out["status"] = to_string(res.status);
    if (res.incumbent_value) out["best_value"] = *res.incumbent_value;
    if (res.incumbent_x) out["best_x"] = assignment_json(*res.incumbent_x);
    out["bound"] = res.global_bound;
    out["rel_gap_percent"] = res.rel_gap_percent;
    out["nodes"] = res.nodes;
    out["wall_time_s"] = res.wall_time_s;
    out["total_descent_iterations"] = res.total_descent_iterations;
    return out;
}

json bound_result_json(const DescentResult& res, double bound_with_offset, std::uint64_t seed,
                       json params, double wall_time_s) {
    json out = base_result(seed, std::move(params));
    out["bound"] = bound_with_offset;
    out["wall_time_s"] = wall_time_s;
    json u = json::array();
    for (Eigen::Index i = 0; i < res.u_hat.size(); ++i) u.push_back(res.u_hat(i));
    out["u_hat"] = std::move(u);
    out["iterations"] = res.outer_iters;
    out["termination"] = to_string(res.termination);
    return out;
}

json brute_result_json(const BruteForceResult& res, std::uint64_t seed, json params,
                       double wall_time_s) {
    json out = base_result(seed, std::move(params));
    out["status"] = "Optimal";
    out["best_value"] = res.value;
    out["best_x"] = assignment_json(res.x);
    out["wall_time_s"] = wall_time_s;
    return out;
}

json convert_result_json(const std::string& output_path, std::uint64_t seed, json params,
                         double wall_time_s) {
    json out = base_result(seed, std::move(params));
    out["status"] = "Converted";
    out["wall_time_s"] = wall_time_s;
    out["output"] = output_path;
    return out;
}

json progress_json(const BnbProgress& p) {
    json out;
    out["nodes"] = p.nodes;
    if (p.incumbent)
        out["incumbent"] = *p.incumbent;
    else
        out["incumbent"] = nullptr;
    out["bound"] = p.bound;
    out["gap_percent"] = p.gap_percent;
    out["time_s"] = p.time_s;
    return out;
}

}  // namespace qbound
