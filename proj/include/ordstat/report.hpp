#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "ordstat/errors.hpp"

namespace ordstat {

enum class Verdict { Pass, Fail, NotApplicable };

/// Pass means no violation beyond three standard errors: empirical <= bound + 3 stderr.
inline bool within_three_sigma(double empirical, double stderr, double bound) {
    return empirical <= bound + 3.0 * stderr;
}

struct ReportRow {
    std::string suite;
    std::string family;
    std::uint64_t n = 0;
    std::uint64_t k = 0;
    double param = std::numeric_limits<double>::quiet_NaN();
    double empirical = 0.0;
    double stderr = 0.0;
    double bound = 0.0;
    Verdict verdict = Verdict::Pass;

    [[nodiscard]] double margin() const { return bound - empirical; }
};

/// Build a judged row; the verdict follows the three-sigma rule.
inline ReportRow judged_row(std::string suite, std::string family, std::uint64_t n, std::uint64_t k, double param,
                            double empirical, double stderr, double bound) {
    ReportRow row{std::move(suite), std::move(family), n, k, param, empirical, stderr, bound, Verdict::Pass};
    row.verdict = within_three_sigma(empirical, stderr, bound) ? Verdict::Pass : Verdict::Fail;
    return row;
}

/// Build an informational row excluded from pass/fail accounting.
inline ReportRow informational_row(std::string suite, std::string family, std::uint64_t n, std::uint64_t k,
                                   double param, double empirical, double stderr, double bound) {
    return {std::move(suite), std::move(family), n, k, param, empirical, stderr, bound, Verdict::NotApplicable};
}

struct BoundReport {
    std::vector<ReportRow> rows;

    [[nodiscard]] std::size_t failures() const {
        std::size_t f = 0;
        for (const auto& r : rows) f += r.verdict == Verdict::Fail ? 1 : 0;
        return f;
    }
    [[nodiscard]] bool all_pass() const { return failures() == 0; }

    void append(const BoundReport& other) { rows.insert(rows.end(), other.rows.begin(), other.rows.end()); }
};

inline constexpr const char* kCsvHeader = "suite,family,n,k,param,empirical,stderr,bound,margin,pass";

/// 17 significant digits, so values round-trip exactly.
inline std::string format_real(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string_view verdict_text(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "1";
        case Verdict::Fail: return "0";
        case Verdict::NotApplicable: return "NA";
    }
    return "NA";
}

inline void write_csv(const BoundReport& report, std::ostream& out) {
    out << kCsvHeader << '\n';
    for (const auto& r : report.rows) {
        out << r.suite << ',' << r.family << ',' << r.n << ',' << r.k << ',' << format_real(r.param) << ','
            << format_real(r.empirical) << ',' << format_real(r.stderr) << ',' << format_real(r.bound) << ','
            << format_real(r.margin()) << ',' << verdict_text(r.verdict) << '\n';
    }
}

inline std::string to_csv(const BoundReport& report) {
    std::ostringstream os;
    write_csv(report, os);
    return os.str();
}

/// Write the CSV report; the parent directory must already exist.
inline void write_report(const BoundReport& report, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    write_csv(report, out);
    out.flush();
    if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace ordstat
