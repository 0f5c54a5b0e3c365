#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "steinspc/charts.hpp"
#include "steinspc/phase1.hpp"
#include "steinspc/simrl.hpp"

namespace steinspc::cli {

inline constexpr char const* kSchema = "stein-spc/v1";

/*!
 * Reads one nonnegative integer per line.
 *
 * Blank lines and lines starting with '#' are skipped; a single
 * non-numeric first line is taken as a header. Anything else that is not a
 * nonnegative integer raises InputError naming `source` and the line.
 */
std::vector<count_t> read_counts(std::istream& in, std::string const& source);
std::vector<count_t> read_counts_file(std::string const& path);

/// One finite real per line, same comment/header rules.
std::vector<double> read_weight_table_file(std::string const& path);

/// Shortest round-trip decimal form.
std::string format_double(double value);

/// Everything needed to rebuild a chart, plus how it was designed.
struct DesignRecord
{
    ChartKind kind = ChartKind::Ewma;
    std::string weight = "one";
    std::vector<double> weight_table;
    double lambda = 0.1;
    double mu0 = 0;
    double limit = 0;
    count_t threshold = 0;
    std::optional<count_t> truncation_m;
    double tail_tol = 1e-10;

    std::optional<double> target_arl;
    std::optional<double> achieved_arl;
    std::optional<double> se;
    std::optional<std::uint64_t> reps;
    std::optional<std::uint64_t> seed;

    ChartSpec to_spec() const;
};

nlohmann::json to_json(DesignRecord const& record);
/// Throws InputError on missing or malformed fields.
DesignRecord design_from_json(nlohmann::json const& j);
DesignRecord read_design_file(std::string const& path);

nlohmann::json to_json(RunLengthStats const& stats);
nlohmann::json to_json(Phase1Report const& report);

/// Columns t,x,stat,lcl,ucl,alarm.
void write_trajectory_csv(std::ostream& out,
                          ChartSpec const& spec,
                          std::vector<count_t> const& series,
                          MonitorResult const& result);

/// Static chart: points, center line, limits, alarm marks and a dotted
/// line at the first alarm.
std::string render_svg(ChartSpec const& spec,
                       std::vector<count_t> const& series,
                       MonitorResult const& result);

}  // namespace steinspc::cli
